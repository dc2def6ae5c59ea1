#pragma once

// k-partite hypergraphs carved out of a finite reflection group: part i is
// the set of cosets of the parabolic subgroup generated by a subset S_i of
// the simple reflections, and each group element w contributes the edge
// (w<S_1>, ..., w<S_k>).  Distinct elements give the same edge exactly when
// they share a coset of <S_1 n ... n S_k>.
//
// Geometrically each vertex is a cone (a face of a chamber) and each
// reflection acts on the vertex set; the reflecting hyperplane either
// contains a cone or leaves it strictly on one side, which orients the
// non-fixed vertices into a left and a right half.  That classification is
// done with exact integer arithmetic here: the cone of w<S_i> sits inside
// the hyperplane of the reflection along root a iff the reflection along
// w^{-1}(a) lies in <S_i>, and otherwise the side is the sign of w^{-1}(a).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "coxnorm/coxeter.hpp"
#include "coxnorm/errors.hpp"
#include "coxnorm/hypergraph.hpp"

namespace coxnorm {

class ReflectionHypergraph {
  public:
    static ReflectionHypergraph build(
        std::shared_ptr<const CoxeterGroup> group,
        std::vector<std::vector<int>> subsets) {
        if (subsets.empty())
            throw ParseError("at least one generator subset is required");
        ReflectionHypergraph h;
        h.group_ = std::move(group);
        const CoxeterGroup& g = *h.group_;
        h.k_ = static_cast<int>(subsets.size());
        std::uint64_t inter = ~0ULL;
        for (auto& s : subsets) {
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            std::uint64_t m = g.mask_of(s);
            h.masks_.push_back(m);
            inter &= m;
        }
        h.subsets_ = std::move(subsets);
        h.intersection_mask_ = inter & ((g.rank() == 64 ? ~0ULL : (1ULL << g.rank()) - 1));

        h.part_offset_.assign(h.k_ + 1, 0);
        for (int i = 0; i < h.k_; ++i) {
            const auto& par = g.parabolic(h.masks_[i]);
            h.part_offset_[i + 1] =
                h.part_offset_[i] + static_cast<int>(par.coset_rep.size());
        }

        // edges in order of their least covering element
        std::size_t n = g.order();
        h.edge_of_element_.assign(n, -1);
        std::map<std::vector<int>, int> lookup;
        Hypergraph comb;
        comb.n = h.part_offset_[h.k_];
        for (std::int32_t w = 0; w < static_cast<std::int32_t>(n); ++w) {
            std::vector<int> tuple(h.k_);
            for (int i = 0; i < h.k_; ++i)
                tuple[i] = h.part_offset_[i] +
                           g.parabolic(h.masks_[i]).coset_index[w];
            auto [it, fresh] =
                lookup.emplace(tuple, static_cast<int>(comb.edges.size()));
            if (fresh) {
                comb.edges.push_back(tuple);
                h.edge_rep_.push_back(w);
            }
            h.edge_of_element_[w] = it->second;
        }
        h.comb_ = std::move(comb);

        h.check_structure();
        return h;
    }

    const CoxeterGroup& group() const { return *group_; }
    std::shared_ptr<const CoxeterGroup> group_ptr() const { return group_; }
    int k() const { return k_; }
    const std::vector<std::vector<int>>& subsets() const { return subsets_; }
    std::uint64_t subset_mask(int i) const { return masks_[i]; }

    // simple generators shared by every part
    std::vector<int> common_generators() const {
        std::vector<int> out;
        for (int j = 0; j < group_->rank(); ++j)
            if (intersection_mask_ >> j & 1) out.push_back(j);
        return out;
    }

    int vertex_count() const { return part_offset_[k_]; }
    int edge_count() const { return static_cast<int>(comb_.edges.size()); }
    int part_of(int v) const {
        int i = 0;
        while (part_offset_[i + 1] <= v) ++i;
        return i;
    }
    int part_size(int i) const {
        return part_offset_[i + 1] - part_offset_[i];
    }
    int vertex_id(int part, int coset) const {
        return part_offset_[part] + coset;
    }
    int coset_of(int v) const { return v - part_offset_[part_of(v)]; }

    // minimal-length representative of the coset behind a vertex
    std::int32_t vertex_rep(int v) const {
        int i = part_of(v);
        return group_->parabolic(masks_[i]).coset_rep[coset_of(v)];
    }

    const Hypergraph& graph() const { return comb_; }
    const std::vector<int>& edge(int e) const { return comb_.edges[e]; }
    int edge_of_element(std::int32_t w) const { return edge_of_element_[w]; }
    std::int32_t edge_rep(std::int32_t e) const { return edge_rep_[e]; }
    int fundamental_edge() const { return edge_of_element_[0]; }

    // --- reflections acting on the vertex set --------------------------

    CutInvolution induced_involution(Element t) const {
        if (t.group != group_.get())
            throw GroupMismatch("reflection from another group");
        int r = group_->root_of_reflection(t.id);
        if (r < 0) throw NotAReflection("element is not a reflection");
        return induced_involution_by_root(r);
    }

    CutInvolution induced_involution_by_root(int r) const {
        const CoxeterGroup& g = *group_;
        std::int32_t t = g.reflection_of_root(r);
        CutInvolution ci;
        ci.source_root = r;
        ci.perm.resize(vertex_count());
        std::vector<int> left, right, fixed;
        for (int v = 0; v < vertex_count(); ++v) {
            int i = part_of(v);
            const auto& par = g.parabolic(masks_[i]);
            std::int32_t w = par.coset_rep[coset_of(v)];
            ci.perm[v] = vertex_id(i, par.coset_index[g.mult(t, w)]);

            // w^{-1}(root of t) = +-(q+1); the cone of w<S_i> lies inside
            // the mirror iff the reflection along q generates into <S_i>
            int signed_q = g.coapply(w, r);
            int q = std::abs(signed_q) - 1;
            if (par.member_flag[g.reflection_of_root(q)]) {
                fixed.push_back(v);
                if (ci.perm[v] != v)
                    throw Error("mirror vertex moved by its own reflection");
            } else if (signed_q > 0) {
                left.push_back(v);
                if (ci.perm[v] == v)
                    throw Error("strictly-sided vertex is fixed");
            } else {
                right.push_back(v);
            }
        }

        analyze_involution(comb_, ci);
        if (ci.fixed != fixed)
            throw Error("geometric and combinatorial fixed sets disagree");
        if (ci.cut) {
            // put the geometric orientation first
            auto want = std::make_pair(left, right);
            auto flip = std::make_pair(right, left);
            bool found = false;
            for (auto& o : ci.orientations)
                if (o == want || o == flip) {
                    std::swap(o, ci.orientations.front());
                    found = true;
                    break;
                }
            if (!found)
                throw Error("geometric halves are not a valid orientation");
        }
        ci.left = std::move(left);
        ci.right = std::move(right);
        return ci;
    }

    // one involution per positive root, mirrors-acting-trivially included
    std::vector<CutInvolution> reflection_involutions() const {
        std::vector<CutInvolution> out;
        for (int r = 0; r < group_->positive_root_count(); ++r)
            out.push_back(induced_involution_by_root(r));
        return out;
    }

  private:
    void check_structure() const {
        const CoxeterGroup& g = *group_;
        std::size_t core = g.parabolic(intersection_mask_).members.size();
        if (comb_.edges.size() * core != g.order())
            throw Error("edge count disagrees with the core subgroup index");
        for (int i = 0; i < k_; ++i) {
            std::size_t sub = g.parabolic(masks_[i]).members.size();
            if (static_cast<std::size_t>(part_size(i)) * sub != g.order())
                throw Error("part size disagrees with the subgroup index");
        }
        // uniform fibers and per-part vertex degrees
        std::vector<int> fiber(comb_.edges.size(), 0);
        for (int e : edge_of_element_) ++fiber[e];
        for (int f : fiber)
            if (static_cast<std::size_t>(f) != core)
                throw Error("non-uniform edge fibers");
        std::vector<int> deg(vertex_count(), 0);
        for (const auto& e : comb_.edges)
            for (int v : e) ++deg[v];
        for (int i = 0; i < k_; ++i)
            for (int v = part_offset_[i] + 1; v < part_offset_[i + 1]; ++v)
                if (deg[v] != deg[part_offset_[i]])
                    throw Error("non-uniform degrees inside a part");
    }

    std::shared_ptr<const CoxeterGroup> group_;
    std::vector<std::vector<int>> subsets_;
    std::vector<std::uint64_t> masks_;
    std::uint64_t intersection_mask_ = 0;
    int k_ = 0;
    std::vector<int> part_offset_;
    Hypergraph comb_;
    std::vector<int> edge_of_element_;
    std::vector<std::int32_t> edge_rep_;
};

// ---------------------------------------------------------------------------
// Presets

namespace detail {

inline std::pair<std::string, std::vector<int>> parse_preset_name(
    const std::string& text) {
    std::string name = text;
    std::vector<int> args;
    std::size_t mark = text.find_first_of(":(");
    if (mark != std::string::npos) {
        name = text.substr(0, mark);
        std::string rest = text.substr(mark + 1);
        if (!rest.empty() && rest.back() == ')') rest.pop_back();
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            std::size_t comma = rest.find(',', pos);
            std::string tok = rest.substr(pos, comma == std::string::npos
                                                   ? std::string::npos
                                                   : comma - pos);
            args.push_back(CoxeterSpec::parse_int(
                tok, ParseError("bad preset argument '" + tok + "'")));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return {name, args};
}

inline std::string a1_power(int k) {
    std::string s = "A1";
    for (int i = 1; i < k; ++i) s += "xA1";
    return s;
}

}  // namespace detail

// Named constructions.  Parametric presets take arguments after a colon:
// "gowers_octahedron:3", "m_k:3", "simplex_incidence:3,0,1".
inline ReflectionHypergraph preset(const std::string& text,
                                   long long order_cap = 1'000'000) {
    auto [name, args] = detail::parse_preset_name(text);
    auto build = [&](const std::string& spec,
                     std::vector<std::vector<int>> subsets) {
        CoxeterSpec s = CoxeterSpec::parse(spec);
        s.order_cap = order_cap;
        return ReflectionHypergraph::build(CoxeterGroup::build(s),
                                           std::move(subsets));
    };
    auto want_args = [&](std::size_t n) {
        if (args.size() != n)
            throw UnknownPreset("preset '" + name + "' needs " +
                                std::to_string(n) + " argument(s)");
    };

    if (name == "c6") {
        want_args(0);
        return build("I2:3", {{0}, {1}});
    }
    if (name == "subdivided_k4") {
        want_args(0);
        return build("A3", {{1, 2}, {0, 2}});
    }
    if (name == "q3_hypercube") {
        want_args(0);
        return build("D3", {{1, 2}, {0, 2}});
    }
    if (name == "k1_4") {
        want_args(0);
        return build("A3", {{1, 2}, {0, 1, 2}});
    }
    if (name == "octahedron_subdivision") {
        want_args(0);
        return build("D3", {{0, 1}, {2}});
    }
    if (name == "k22_replacement_octahedron") {
        want_args(0);
        return build("B3", {{0, 1}, {2}});
    }
    if (name == "gowers_octahedron") {
        want_args(1);
        int k = args[0];
        if (k < 1) throw UnknownPreset("gowers_octahedron needs k >= 1");
        std::vector<std::vector<int>> subsets(k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (j != i) subsets[i].push_back(j);
        return build(detail::a1_power(k), std::move(subsets));
    }
    if (name == "m_k") {
        want_args(1);
        int k = args[0];
        if (k < 1) throw UnknownPreset("m_k needs k >= 1");
        std::vector<std::vector<int>> subsets(k);
        for (int i = 0; i < k; ++i) subsets[i] = {i};
        return build(detail::a1_power(k), std::move(subsets));
    }
    if (name == "simplex_incidence") {
        want_args(3);
        int n = args[0], kk = args[1], rr = args[2];
        if (n < 2 || kk < 0 || kk >= rr || rr > n - 1)
            throw UnknownPreset(
                "simplex_incidence needs n >= 2 and 0 <= k < r <= n-1");
        std::vector<std::vector<int>> subsets(2);
        for (int j = 0; j < n; ++j) {
            if (j != kk) subsets[0].push_back(j);
            if (j != rr) subsets[1].push_back(j);
        }
        return build("A" + std::to_string(n), std::move(subsets));
    }
    if (name == "tetra_flag_3graph") {
        want_args(0);
        std::vector<std::vector<int>> subsets(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (j != i) subsets[i].push_back(j);
        return build("A3", std::move(subsets));
    }
    throw UnknownPreset("no preset named '" + name + "'");
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "c6",
        "subdivided_k4",
        "q3_hypercube",
        "k1_4",
        "octahedron_subdivision",
        "k22_replacement_octahedron",
        "gowers_octahedron:k",
        "m_k:k",
        "simplex_incidence:n,k,r",
        "tetra_flag_3graph",
    };
    return names;
}

// ---------------------------------------------------------------------------
// Tensor product of k-partite hypergraphs (partwise vertex pairs, edgewise
// edge pairs).  The product of two reflection hypergraphs is the reflection
// hypergraph of the product group with concatenated subsets; tests pin that
// down.
inline Hypergraph tensor_product(const ReflectionHypergraph& a,
                                 const ReflectionHypergraph& b) {
    if (a.k() != b.k())
        throw ParseError("tensor product needs matching part counts");
    int k = a.k();
    std::vector<int> offset(k + 1, 0);
    for (int i = 0; i < k; ++i)
        offset[i + 1] = offset[i] + a.part_size(i) * b.part_size(i);
    auto vid = [&](int part, int va, int vb) {
        return offset[part] + a.coset_of(va) * b.part_size(part) +
               b.coset_of(vb);
    };
    Hypergraph h;
    h.n = offset[k];
    for (const auto& ea : a.graph().edges)
        for (const auto& eb : b.graph().edges) {
            std::vector<int> e(k);
            for (int i = 0; i < k; ++i) e[i] = vid(i, ea[i], eb[i]);
            h.edges.push_back(std::move(e));
        }
    return h;
}

}  // namespace coxnorm
