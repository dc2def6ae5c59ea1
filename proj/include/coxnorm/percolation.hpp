#pragma once

// Folding calculus on group elements and edge sets.
//
// A reflection t folds the group onto the half nearer the identity:
// t+w = tw when l(tw) < l(w), else w (and t- mirrors this).  Folding an
// element set K gives K+(t) = {w : t+w in K}, the set whose membership on the
// far side of the mirror is copied from the near side.  The same operation
// exists one level down on the edges of a reflection hypergraph, where the
// induced cut involution copies edge membership from one half onto the
// other; pushing an element-level replay through edge_of_element commutes
// with the edge-level replay (this is checked by the tests, not assumed).
//
// A certificate records a fold schedule that grows the fundamental edge to
// the whole edge set.  The canonical schedule folds with every simple
// reflection once per length level, which provably suffices; the breadth
// first search below looks for shorter schedules on tiny groups.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "coxnorm/coxeter.hpp"
#include "coxnorm/errors.hpp"
#include "coxnorm/hypergraph.hpp"
#include "coxnorm/refgraph.hpp"
#include "coxnorm/report.hpp"

namespace coxnorm {

enum class FoldSign : std::int8_t { plus = +1, minus = -1 };

inline char fold_sign_char(FoldSign s) {
    return s == FoldSign::plus ? '+' : '-';
}

struct FoldStep {
    std::int32_t reflection = 0;  // element id; must name a reflection
    FoldSign sign = FoldSign::plus;

    bool operator==(const FoldStep&) const = default;
};

struct PercolationCertificate {
    std::string group_spec;
    std::vector<std::vector<int>> subsets;  // generator index lists, sorted
    std::int32_t initial_edge = 0;
    std::vector<FoldStep> steps;
    // every reflection used induces an involution whose fixed set is
    // edge-free on the target hypergraph
    bool stable = false;
};

using ElementSet = std::vector<std::int32_t>;  // sorted unique element ids

// K+(t) / K-(t): membership on the half of the mirror away from the sign is
// replaced by the membership of the mirror image.
inline ElementSet fold_word_set(const CoxeterGroup& g, const ElementSet& K,
                                std::int32_t t, FoldSign sign) {
    if (t < 0 || t >= (std::int32_t)g.order() || !g.is_reflection(t))
        throw NotAReflection("fold_word_set needs a reflection");
    std::vector<char> in(g.order(), 0);
    for (std::int32_t w : K) {
        if (w < 0 || w >= (std::int32_t)g.order())
            throw GroupMismatch("element id out of range for this group");
        in[w] = 1;
    }
    ElementSet out;
    for (std::int32_t w = 0; w < (std::int32_t)g.order(); ++w) {
        std::int32_t tw = g.mult(t, w);
        // det(t) = -1 makes equal lengths impossible
        if (g.length(tw) == g.length(w))
            throw NumericalAmbiguity("reflection preserved a length");
        bool down = g.length(tw) < g.length(w);
        std::int32_t img =
            (sign == FoldSign::plus ? down : !down) ? tw : w;
        if (in[img]) out.push_back(w);
    }
    return out;
}

// Edge images under the two folding maps of one oriented cut involution.
struct EdgeFolds {
    std::vector<std::int32_t> plus, minus;

    const std::vector<std::int32_t>& table(FoldSign s) const {
        return s == FoldSign::plus ? plus : minus;
    }
};

inline EdgeFolds edge_folding_maps(const Hypergraph& h,
                                   const CutInvolution& ci) {
    std::vector<char> on_left(h.n, 0), on_right(h.n, 0);
    for (int v : ci.left) on_left[v] = 1;
    for (int v : ci.right) on_right[v] = 1;
    EdgeFolds f;
    for (const auto& e : h.edges) {
        std::vector<int> plus_img, minus_img;
        for (int v : e) {
            plus_img.push_back(on_right[v] ? ci.perm[v] : v);
            minus_img.push_back(on_left[v] ? ci.perm[v] : v);
        }
        int p = h.edge_index(plus_img);
        int m = h.edge_index(minus_img);
        if (p < 0 || m < 0)
            throw CertificateInvalid(
                "cut involution does not map edges to edges");
        f.plus.push_back(p);
        f.minus.push_back(m);
    }
    return f;
}

// J+(phi) = {e : phi+(e) in J}, and the minus analogue.
inline std::vector<std::int32_t> fold_edge_set(
    const Hypergraph& h, const std::vector<std::int32_t>& J,
    const EdgeFolds& f, FoldSign sign) {
    std::vector<char> in(h.edges.size(), 0);
    for (std::int32_t e : J) in.at(e) = 1;
    const auto& tab = f.table(sign);
    std::vector<std::int32_t> out;
    for (std::int32_t e = 0; e < (std::int32_t)h.edges.size(); ++e)
        if (in[tab[e]]) out.push_back(e);
    return out;
}

// Canonical schedule: one fold with every simple reflection per length
// level, all with sign +.  Replay is guaranteed to end at the full edge set.
inline PercolationCertificate build_percolating_certificate(
    const ReflectionHypergraph& rg) {
    const CoxeterGroup& g = rg.group();
    PercolationCertificate cert;
    cert.group_spec = g.spec_string();
    cert.subsets = rg.subsets();
    cert.initial_edge = rg.fundamental_edge();
    for (int level = 0; level < g.max_length(); ++level)
        for (int j = 0; j < g.rank(); ++j)
            cert.steps.push_back({g.simple_id(j), FoldSign::plus});
    cert.stable = true;
    for (int j = 0; j < g.rank(); ++j)
        cert.stable =
            cert.stable && rg.induced_involution(g.simple(j)).stable;
    return cert;
}

inline void require_matching_group(const ReflectionHypergraph& rg,
                                   const PercolationCertificate& cert) {
    auto norm = [](std::vector<std::vector<int>> ss) {
        for (auto& s : ss) std::sort(s.begin(), s.end());
        return ss;
    };
    if (cert.group_spec != rg.group().spec_string() ||
        norm(cert.subsets) != norm(rg.subsets()))
        throw GroupMismatch("certificate was built for " + cert.group_spec +
                            ", not " + rg.group().spec_string());
}

namespace detail {

// Involutions and fold tables for the distinct reflections of a certificate,
// resolved lazily so replay only pays for what it touches.
struct FoldCache {
    const ReflectionHypergraph* rg;
    std::map<std::int32_t, std::pair<CutInvolution, EdgeFolds>> by_reflection;

    const std::pair<CutInvolution, EdgeFolds>& get(std::int32_t t) {
        auto it = by_reflection.find(t);
        if (it != by_reflection.end()) return it->second;
        CutInvolution ci = rg->induced_involution(rg->group().element(t));
        EdgeFolds f = edge_folding_maps(rg->graph(), ci);
        return by_reflection.emplace(t, std::make_pair(std::move(ci),
                                                       std::move(f)))
            .first->second;
    }
};

}  // namespace detail

// Edge-set trace J_0..J_N of the certificate replay.
inline std::vector<std::vector<std::int32_t>> project_certificate_to_edges(
    const ReflectionHypergraph& rg, const PercolationCertificate& cert) {
    require_matching_group(rg, cert);
    const Hypergraph& h = rg.graph();
    if (cert.initial_edge < 0 ||
        cert.initial_edge >= (std::int32_t)h.edges.size())
        throw CertificateInvalid("initial edge out of range");
    detail::FoldCache cache{&rg, {}};
    std::vector<std::vector<std::int32_t>> trace;
    trace.push_back({cert.initial_edge});
    for (const FoldStep& st : cert.steps) {
        if (st.reflection < 0 ||
            st.reflection >= (std::int32_t)rg.group().order() ||
            !rg.group().is_reflection(st.reflection))
            throw NotAReflection("certificate step is not a reflection");
        const auto& [ci, folds] = cache.get(st.reflection);
        trace.push_back(fold_edge_set(h, trace.back(), folds, st.sign));
    }
    return trace;
}

// Checks that the replay percolates, that the edges form a single orbit
// under the involutions the certificate actually uses, and that the stable
// claim is honest.  Structural failures are counted into lhs (rhs = 0);
// tampered steps are reported by index instead of thrown.
inline CheckReport verify_percolation(const ReflectionHypergraph& rg,
                                      const PercolationCertificate& cert) {
    require_matching_group(rg, cert);
    const Hypergraph& h = rg.graph();
    const CoxeterGroup& g = rg.group();
    CheckReport rep;
    rep.name = "percolation";
    rep.tol = 0.0;
    rep.seed = 0;
    rep.meta["group"] = cert.group_spec;
    rep.meta["steps"] = std::to_string(cert.steps.size());

    int violations = 0;
    int first_bad_step = -1;
    if (cert.initial_edge < 0 ||
        cert.initial_edge >= (std::int32_t)h.edges.size()) {
        ++violations;
        rep.meta["violation"] = "initial edge out of range";
        rep.lhs = violations;
        return rep;
    }
    detail::FoldCache cache{&rg, {}};
    std::vector<std::int32_t> J = {cert.initial_edge};
    std::vector<std::int32_t> used;  // distinct reflections, in first use order
    for (std::size_t i = 0; i < cert.steps.size(); ++i) {
        const FoldStep& st = cert.steps[i];
        if (st.reflection < 0 || st.reflection >= (std::int32_t)g.order() ||
            !g.is_reflection(st.reflection)) {
            first_bad_step = (int)i;
            break;
        }
        if (std::find(used.begin(), used.end(), st.reflection) == used.end())
            used.push_back(st.reflection);
        J = fold_edge_set(h, J, cache.get(st.reflection).second, st.sign);
    }
    if (first_bad_step >= 0) {
        ++violations;
        rep.meta["first_violating_step"] = std::to_string(first_bad_step);
    }

    std::size_t missing = h.edges.size() - J.size();
    rep.meta["reached"] = missing == 0 && first_bad_step < 0 ? "true" : "false";
    if (first_bad_step < 0 && missing > 0) {
        violations += (int)missing;
        rep.meta["missing_edges"] = std::to_string(missing);
    }

    std::vector<std::vector<int>> perms;
    bool all_stable = true;
    for (std::int32_t t : used) {
        const CutInvolution& ci = cache.get(t).first;
        perms.push_back(ci.perm);
        all_stable = all_stable && ci.stable;
    }
    auto [transitive, orbits] = edge_orbits(h, perms);
    rep.meta["edge_transitive"] = transitive ? "true" : "false";
    if (!transitive) ++violations;
    if (cert.stable && !all_stable) {
        ++violations;
        rep.meta["violation"] = "stable claim not honest";
    }

    rep.lhs = violations;
    rep.rhs = 0.0;
    if (violations == 0)
        rep.meta["annotation"] = cert.stable ? "norming" : "weakly norming";
    return rep;
}

// Complete binary tree of edge colorings: children of a node arise by
// copying colors across one oriented cut involution, left child from the
// left half outward, right child from the right half.
struct CSTree {
    int depth = 0;
    std::vector<CutInvolution> involutions;  // involutions[i] splits level i
    std::vector<std::vector<int>> nodes;     // heap order, nodes[0] = root

    std::size_t leaf_begin() const { return ((std::size_t)1 << depth) - 1; }

    std::vector<std::vector<int>> leaves() const {
        return {nodes.begin() + leaf_begin(), nodes.end()};
    }
};

inline CSTree build_cs_tree(const Hypergraph& h,
                            const std::vector<CutInvolution>& seq,
                            const std::vector<int>& root, int depth = -1) {
    if (depth < 0) depth = (int)seq.size();
    if (depth != (int)seq.size())
        throw DepthCap("depth must equal the involution count");
    if (depth > 12) throw DepthCap("tree depth capped at 12");
    if (root.size() != h.edges.size())
        throw CertificateInvalid("root coloring must cover every edge");
    CSTree t;
    t.depth = depth;
    t.involutions = seq;
    t.nodes.resize(((std::size_t)2 << depth) - 1);
    t.nodes[0] = root;
    for (int level = 0; level < depth; ++level) {
        EdgeFolds f = edge_folding_maps(h, seq[level]);
        std::size_t lo = ((std::size_t)1 << level) - 1;
        std::size_t hi = ((std::size_t)2 << level) - 1;
        for (std::size_t i = lo; i < hi; ++i) {
            std::vector<int> plus(h.edges.size()), minus(h.edges.size());
            for (std::size_t e = 0; e < h.edges.size(); ++e) {
                plus[e] = t.nodes[i][f.plus[e]];
                minus[e] = t.nodes[i][f.minus[e]];
            }
            t.nodes[2 * i + 1] = std::move(plus);
            t.nodes[2 * i + 2] = std::move(minus);
        }
    }
    return t;
}

struct LeafResult {
    std::vector<int> coloring;
    std::string branch;  // one sign per step, in step order
};

// Walks the single branch whose signs match the certificate.  Because the
// replay ends at the full edge set, the composed folding map sends every
// edge to the initial edge, so the leaf coloring is constant.
inline LeafResult certificate_to_monochromatic_leaf(
    const ReflectionHypergraph& rg, const PercolationCertificate& cert,
    const std::vector<int>& root) {
    if (!verify_percolation(rg, cert).pass())
        throw CertificateInvalid("certificate does not percolate");
    const Hypergraph& h = rg.graph();
    if (root.size() != h.edges.size())
        throw CertificateInvalid("root coloring must cover every edge");
    detail::FoldCache cache{&rg, {}};
    LeafResult res;
    for (const FoldStep& st : cert.steps)
        res.branch.push_back(fold_sign_char(st.sign));
    for (std::int32_t e = 0; e < (std::int32_t)h.edges.size(); ++e) {
        std::int32_t x = e;
        for (std::size_t i = cert.steps.size(); i-- > 0;)
            x = cache.get(cert.steps[i].reflection)
                    .second.table(cert.steps[i].sign)[x];
        res.coloring.push_back(root[x]);
    }
    for (int c : res.coloring)
        if (c != root[cert.initial_edge])
            throw CertificateInvalid("leaf coloring is not monochromatic");
    return res;
}

// Breadth-first search over edge subsets for a shortest fold schedule, using
// every reflection with both signs.  Exploration aid for tiny groups; the
// canonical schedule remains the only construction with a guarantee.
inline PercolationCertificate search_shorter_certificate(
    const ReflectionHypergraph& rg, std::size_t state_cap = 1u << 20) {
    const CoxeterGroup& g = rg.group();
    if (g.order() > 48)
        throw SearchCapExceeded("shortest-schedule search needs order <= 48");
    const Hypergraph& h = rg.graph();
    int m = (int)h.edges.size();
    std::vector<std::int32_t> refls = g.reflection_ids();
    std::vector<EdgeFolds> folds;
    std::vector<char> stable_flags;
    for (std::int32_t t : refls) {
        CutInvolution ci = rg.induced_involution(g.element(t));
        stable_flags.push_back(ci.stable);
        folds.push_back(edge_folding_maps(h, ci));
    }
    std::uint64_t start = 1ull << rg.fundamental_edge();
    std::uint64_t goal = m == 64 ? ~0ull : (1ull << m) - 1;
    // parent state and the (reflection index, sign) move that found each state
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, int>> seen;
    seen.emplace(start, std::make_pair(start, -1));
    std::queue<std::uint64_t> queue;
    queue.push(start);
    while (!queue.empty() && seen.find(goal) == seen.end()) {
        std::uint64_t J = queue.front();
        queue.pop();
        for (std::size_t r = 0; r < refls.size(); ++r)
            for (FoldSign sign : {FoldSign::plus, FoldSign::minus}) {
                const auto& tab = folds[r].table(sign);
                std::uint64_t next = 0;
                for (int e = 0; e < m; ++e)
                    if (J >> tab[e] & 1) next |= 1ull << e;
                int move = (int)r * 2 + (sign == FoldSign::minus);
                if (seen.emplace(next, std::make_pair(J, move)).second) {
                    if (seen.size() > state_cap)
                        throw SearchCapExceeded(
                            "schedule search state cap exceeded");
                    queue.push(next);
                }
            }
    }
    if (seen.find(goal) == seen.end())
        throw SearchCapExceeded("schedule search exhausted without a result");

    PercolationCertificate cert;
    cert.group_spec = g.spec_string();
    cert.subsets = rg.subsets();
    cert.initial_edge = rg.fundamental_edge();
    std::vector<FoldStep> rev;
    std::vector<char> used(refls.size(), 0);
    for (std::uint64_t at = goal; at != start;) {
        auto [prev, move] = seen.at(at);
        rev.push_back({refls[move / 2],
                       move % 2 ? FoldSign::minus : FoldSign::plus});
        used[move / 2] = 1;
        at = prev;
    }
    cert.steps.assign(rev.rbegin(), rev.rend());
    cert.stable = true;
    for (std::size_t r = 0; r < refls.size(); ++r)
        if (used[r]) cert.stable = cert.stable && stable_flags[r];
    return cert;
}

}  // namespace coxnorm
