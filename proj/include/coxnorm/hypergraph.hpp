#pragma once

// Small uniform hypergraphs and the combinatorial searches the rest of the
// library leans on: isomorphism with optional pinned vertices, involutory
// automorphisms, and cut involutions (involutions whose fixed set separates
// the clique expansion into two swapped halves).
//
// All searches are exhaustive backtracking, capped at 20 vertices.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coxnorm/errors.hpp"

namespace coxnorm {

struct Hypergraph {
    int n = 0;
    std::vector<std::vector<int>> edges;  // sorted tuples, uniform arity

    int arity() const { return edges.empty() ? 2 : (int)edges[0].size(); }

    // Edges keep their first-occurrence order; each tuple is stored sorted.
    static Hypergraph from_edges(int n, std::vector<std::vector<int>> edges) {
        Hypergraph h;
        h.n = n;
        std::set<std::vector<int>> seen;
        for (auto& e : edges) {
            std::sort(e.begin(), e.end());
            if (std::adjacent_find(e.begin(), e.end()) != e.end())
                throw ParseError("repeated vertex in an edge");
            for (int v : e)
                if (v < 0 || v >= n) throw ParseError("vertex out of range");
            if (!edges.empty() && e.size() != edges[0].size())
                throw ParseError("edges of unequal arity");
            if (seen.insert(e).second) h.edges.push_back(e);
        }
        return h;
    }

    int edge_index(std::vector<int> e) const {
        std::sort(e.begin(), e.end());
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (edges[i] == e) return static_cast<int>(i);
        return -1;
    }

    std::vector<int> degrees() const {
        std::vector<int> d(n, 0);
        for (const auto& e : edges)
            for (int v : e) ++d[v];
        return d;
    }

    // adjacency of the clique expansion, as bit masks (needs n <= 64)
    std::vector<std::uint64_t> clique_adjacency() const {
        if (n > 64) throw SearchCapExceeded("clique expansion needs n <= 64");
        std::vector<std::uint64_t> adj(n, 0);
        for (const auto& e : edges)
            for (std::size_t i = 0; i < e.size(); ++i)
                for (std::size_t j = i + 1; j < e.size(); ++j) {
                    adj[e[i]] |= 1ULL << e[j];
                    adj[e[j]] |= 1ULL << e[i];
                }
        return adj;
    }

    bool clique_connected() const {
        if (n == 0) return true;
        auto adj = clique_adjacency();
        std::uint64_t seen = 1, frontier = 1;
        while (frontier) {
            std::uint64_t next = 0;
            for (int v = 0; v < n; ++v)
                if (frontier >> v & 1) next |= adj[v];
            frontier = next & ~seen;
            seen |= next;
        }
        return seen == (n == 64 ? ~0ULL : (1ULL << n) - 1);
    }
};

// Induced subgraph on the given vertices; keeps only edges fully inside.
// The i-th listed vertex becomes vertex i.
inline Hypergraph induced_subgraph(const Hypergraph& h,
                                   const std::vector<int>& verts) {
    std::vector<int> local(h.n, -1);
    for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = (int)i;
    std::vector<std::vector<int>> edges;
    for (const auto& e : h.edges) {
        std::vector<int> img;
        for (int v : e) {
            if (local[v] < 0) break;
            img.push_back(local[v]);
        }
        if (img.size() == e.size()) edges.push_back(std::move(img));
    }
    return Hypergraph::from_edges((int)verts.size(), std::move(edges));
}

inline bool is_automorphism(const Hypergraph& h, const std::vector<int>& perm) {
    if ((int)perm.size() != h.n) return false;
    std::set<std::vector<int>> edge_set(h.edges.begin(), h.edges.end());
    for (const auto& e : h.edges) {
        std::vector<int> img;
        for (int v : e) img.push_back(perm[v]);
        std::sort(img.begin(), img.end());
        if (!edge_set.count(img)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace detail {

struct IsoSearch {
    const Hypergraph& a;
    const Hypergraph& b;
    std::vector<std::uint64_t> adj_a, adj_b;
    std::vector<int> deg_a, deg_b;
    std::set<std::vector<int>> edges_b;
    std::vector<int> map_ab, map_ba;

    IsoSearch(const Hypergraph& a_, const Hypergraph& b_)
        : a(a_), b(b_), adj_a(a_.clique_adjacency()),
          adj_b(b_.clique_adjacency()), deg_a(a_.degrees()),
          deg_b(b_.degrees()), edges_b(b_.edges.begin(), b_.edges.end()),
          map_ab(a_.n, -1), map_ba(b_.n, -1) {}

    bool compatible(int v, int u) const {
        if (deg_a[v] != deg_b[u]) return false;
        for (int w = 0; w < a.n; ++w) {
            if (map_ab[w] < 0) continue;
            bool eva = adj_a[v] >> w & 1;
            bool evb = adj_b[u] >> map_ab[w] & 1;
            if (eva != evb) return false;
        }
        return true;
    }

    bool edges_ok_through(int v) const {
        // every edge of `a` whose vertices are all assigned and which
        // involves v must land on an edge of `b`
        for (const auto& e : a.edges) {
            bool has_v = false, full = true;
            for (int w : e) {
                has_v |= w == v;
                full &= map_ab[w] >= 0;
            }
            if (!has_v || !full) continue;
            std::vector<int> img;
            for (int w : e) img.push_back(map_ab[w]);
            std::sort(img.begin(), img.end());
            if (!edges_b.count(img)) return false;
        }
        return true;
    }

    bool run(int v) {
        while (v < a.n && map_ab[v] >= 0) ++v;
        if (v == a.n) return true;
        for (int u = 0; u < b.n; ++u) {
            if (map_ba[u] >= 0 || !compatible(v, u)) continue;
            map_ab[v] = u;
            map_ba[u] = v;
            if (edges_ok_through(v) && run(v + 1)) return true;
            map_ab[v] = -1;
            map_ba[u] = -1;
        }
        return false;
    }
};

}  // namespace detail

// Witness map a->b, or nothing.  `pinned` prescribes images of some
// vertices of `a`.
inline std::optional<std::vector<int>> hypergraph_isomorphic(
    const Hypergraph& a, const Hypergraph& b,
    const std::vector<std::pair<int, int>>& pinned = {}) {
    if (a.n > 20 || b.n > 20)
        throw SearchCapExceeded("isomorphism search is capped at 20 vertices");
    if (a.n != b.n || a.edges.size() != b.edges.size()) return std::nullopt;
    if (!a.edges.empty() && !b.edges.empty() && a.arity() != b.arity())
        return std::nullopt;
    detail::IsoSearch s(a, b);
    for (auto [v, u] : pinned) {
        if (s.map_ab[v] == u) continue;
        if (s.map_ab[v] >= 0 || s.map_ba[u] >= 0 || !s.compatible(v, u))
            return std::nullopt;
        s.map_ab[v] = u;
        s.map_ba[u] = v;
        if (!s.edges_ok_through(v)) return std::nullopt;
    }
    if (!s.run(0)) return std::nullopt;
    return s.map_ab;
}

// ---------------------------------------------------------------------------
// Cut involutions

struct CutInvolution {
    std::vector<int> perm;
    std::vector<int> fixed;        // sorted fixed vertices
    std::vector<int> left, right;  // canonical orientation
    bool cut = false;     // fixed set separates the clique expansion and the
                          // halves swap
    bool stable = false;  // no edge lies entirely inside the fixed set
    int source_root = -1; // positive root index when reflection-induced
    // every valid (L,R) orientation; [0] is the canonical one
    std::vector<std::pair<std::vector<int>, std::vector<int>>> orientations;
};

// Fills fixed/left/right/cut/stable/orientations from perm.  left/right stay
// empty when the involution is not a cut involution.
inline void analyze_involution(const Hypergraph& h, CutInvolution& ci) {
    const std::vector<int>& perm = ci.perm;
    ci.fixed.clear();
    for (int v = 0; v < h.n; ++v)
        if (perm[v] == v) ci.fixed.push_back(v);

    ci.stable = true;
    for (const auto& e : h.edges) {
        bool all_fixed = true;
        for (int v : e) all_fixed &= perm[v] == v;
        if (all_fixed) {
            ci.stable = false;
            break;
        }
    }

    // components of the clique expansion with the fixed set removed
    auto adj = h.clique_adjacency();
    std::vector<int> comp(h.n, -1);
    int ncomp = 0;
    for (int v = 0; v < h.n; ++v) {
        if (comp[v] >= 0 || perm[v] == v) continue;
        std::vector<int> queue = {v};
        comp[v] = ncomp;
        for (std::size_t qh = 0; qh < queue.size(); ++qh)
            for (int u = 0; u < h.n; ++u)
                if ((adj[queue[qh]] >> u & 1) && perm[u] != u && comp[u] < 0) {
                    comp[u] = ncomp;
                    queue.push_back(u);
                }
        ++ncomp;
    }

    ci.cut = false;
    ci.left.clear();
    ci.right.clear();
    ci.orientations.clear();
    if (ncomp < 2) return;

    // the involution must pair up components
    std::vector<int> image(ncomp, -1);
    for (int v = 0; v < h.n; ++v)
        if (comp[v] >= 0) image[comp[v]] = comp[perm[v]];
    std::vector<std::pair<int, int>> pairs;
    std::vector<char> used(ncomp, 0);
    for (int c = 0; c < ncomp; ++c) {
        if (used[c]) continue;
        if (image[c] == c) return;  // a swapped-in-place component: no split
        used[c] = used[image[c]] = 1;
        pairs.emplace_back(c, image[c]);
    }
    ci.cut = true;

    std::vector<std::vector<int>> comp_verts(ncomp);
    for (int v = 0; v < h.n; ++v)
        if (comp[v] >= 0) comp_verts[comp[v]].push_back(v);

    std::size_t npairs = pairs.size();
    for (std::size_t bits = 0; bits < (1ULL << npairs); ++bits) {
        std::vector<int> left, right;
        for (std::size_t i = 0; i < npairs; ++i) {
            int lc = bits >> i & 1 ? pairs[i].second : pairs[i].first;
            int rc = bits >> i & 1 ? pairs[i].first : pairs[i].second;
            left.insert(left.end(), comp_verts[lc].begin(),
                        comp_verts[lc].end());
            right.insert(right.end(), comp_verts[rc].begin(),
                         comp_verts[rc].end());
        }
        std::sort(left.begin(), left.end());
        std::sort(right.begin(), right.end());
        ci.orientations.emplace_back(std::move(left), std::move(right));
    }
    ci.left = ci.orientations[0].first;
    ci.right = ci.orientations[0].second;
}

namespace detail {

struct InvolutionSearch {
    const Hypergraph& h;
    std::vector<std::uint64_t> adj;
    std::vector<int> deg;
    std::set<std::vector<int>> edge_set;
    std::vector<int> perm;
    std::vector<CutInvolution> found;

    explicit InvolutionSearch(const Hypergraph& h_)
        : h(h_), adj(h_.clique_adjacency()), deg(h_.degrees()),
          edge_set(h_.edges.begin(), h_.edges.end()), perm(h_.n, -1) {}

    bool consistent(int v, int u) const {
        if (deg[v] != deg[u]) return false;
        for (int w = 0; w < h.n; ++w) {
            if (perm[w] < 0) continue;
            if ((adj[v] >> w & 1) != (adj[u] >> perm[w] & 1)) return false;
        }
        return true;
    }

    void run(int v) {
        while (v < h.n && perm[v] >= 0) ++v;
        if (v == h.n) {
            CutInvolution ci;
            ci.perm = perm;
            if (!is_automorphism(h, perm)) return;
            analyze_involution(h, ci);
            if (ci.cut) found.push_back(std::move(ci));
            return;
        }
        // pair v with itself or a later unassigned vertex; pairing with an
        // earlier vertex would already have happened
        for (int u = v; u < h.n; ++u) {
            if (perm[u] >= 0) continue;
            if (!consistent(v, u) || (u != v && !consistent(u, v))) continue;
            perm[v] = u;
            perm[u] = v;
            run(v + 1);
            perm[v] = -1;
            if (u != v) perm[u] = -1;
        }
    }
};

}  // namespace detail

// Every involutory automorphism whose fixed set cuts the clique expansion,
// with all valid (left,right) orientations attached.
inline std::vector<CutInvolution> enumerate_cut_involutions(
    const Hypergraph& h) {
    if (h.n > 20)
        throw SearchCapExceeded("involution search is capped at 20 vertices");
    detail::InvolutionSearch s(h);
    s.run(0);
    return s.found;
}

// ---------------------------------------------------------------------------
// Edge orbits

// Orbit partition of the edges under the given automorphisms; transitive
// when one orbit covers everything.
inline std::pair<bool, std::vector<int>> edge_orbits(
    const Hypergraph& h, const std::vector<std::vector<int>>& perms) {
    std::vector<int> orbit(h.edges.size(), -1);
    int norb = 0;
    for (std::size_t start = 0; start < h.edges.size(); ++start) {
        if (orbit[start] >= 0) continue;
        std::vector<int> queue = {(int)start};
        orbit[start] = norb;
        for (std::size_t qh = 0; qh < queue.size(); ++qh)
            for (const auto& p : perms) {
                std::vector<int> img;
                for (int v : h.edges[queue[qh]]) img.push_back(p[v]);
                int e = h.edge_index(img);
                if (e < 0)
                    throw Error("edge mapped outside the edge set");
                if (orbit[e] < 0) {
                    orbit[e] = norb;
                    queue.push_back(e);
                }
            }
        ++norb;
    }
    return {norb <= 1, orbit};
}

inline bool is_edge_transitive_under(const Hypergraph& h,
                                     const std::vector<CutInvolution>& invs) {
    std::vector<std::vector<int>> perms;
    for (const auto& ci : invs) perms.push_back(ci.perm);
    return edge_orbits(h, perms).first;
}

}  // namespace coxnorm
