#pragma once

// Finite real reflection groups, enumerated exactly.
//
// A group is built from a product of irreducible components (families
// A/B/D/I2/H3/F4) or from an explicit list of unit simple roots.  Floating
// point touches the construction exactly once: the simple-root geometry is
// realized numerically, the full root set is closed up under the simple
// reflections with a matching tolerance, and each generator is converted to
// a *signed permutation* of the positive roots.  Everything after that pass
// (multiplication, lengths, cosets, chamber data) is exact integer work.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "coxnorm/errors.hpp"

namespace coxnorm {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dist2(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Group specification

struct CoxeterComponent {
    char family;     // 'A', 'B', 'D', 'I', 'H', 'F'
    int rank;        // total rank of the component
    int dihedral_m;  // bond order, I2 only

    long double order() const {
        switch (family) {
            case 'A': {
                long double o = 1;
                for (int i = 2; i <= rank + 1; ++i) o *= i;
                return o;
            }
            case 'B': {
                long double o = 1;
                for (int i = 2; i <= rank; ++i) o *= i;
                return o * std::pow(2.0L, rank);
            }
            case 'D': {
                long double o = 1;
                for (int i = 2; i <= rank; ++i) o *= i;
                return o * std::pow(2.0L, rank - 1);
            }
            case 'I':
                return 2.0L * dihedral_m;
            case 'H':
                return 120;
            case 'F':
                return 1152;
        }
        return 0;
    }
};

struct CoxeterSpec {
    std::vector<CoxeterComponent> components;
    long long order_cap = 1'000'000;

    int total_rank() const {
        int r = 0;
        for (auto& c : components) r += c.rank;
        return r;
    }

    long double predicted_order() const {
        long double o = 1;
        for (auto& c : components) o *= c.order();
        return o;
    }

    // Grammar: components joined by 'x'.  "A3", "B4", "D5", "I2:7", "H3",
    // "F4".  The I2 bond order comes after a colon; every other family fixes
    // its own data from the rank.
    static CoxeterSpec parse(const std::string& text) {
        CoxeterSpec spec;
        std::size_t pos = 0;
        if (text.empty()) throw ParseError("empty group spec");
        while (pos < text.size()) {
            std::size_t end = text.find('x', pos);
            std::string tok = text.substr(
                pos, end == std::string::npos ? std::string::npos : end - pos);
            spec.components.push_back(parse_component(tok));
            pos = end == std::string::npos ? text.size() : end + 1;
            if (pos == text.size() && end != std::string::npos)
                throw ParseError("trailing 'x' in group spec '" + text + "'");
        }
        return spec;
    }

    static CoxeterComponent parse_component(const std::string& tok) {
        auto bad = [&]() -> ParseError {
            return ParseError("unrecognized component '" + tok + "'");
        };
        if (tok.size() < 2) throw bad();
        char fam = tok[0];
        if (fam == 'I') {
            // I2:m
            if (tok.size() < 4 || tok[1] != '2' || tok[2] != ':') throw bad();
            int m = parse_int(tok.substr(3), bad());
            if (m < 2) throw ParseError("I2 bond order must be at least 2");
            return {'I', 2, m};
        }
        int rank = parse_int(tok.substr(1), bad());
        switch (fam) {
            case 'A':
                if (rank < 1) throw bad();
                return {'A', rank, 0};
            case 'B':
                if (rank < 2) throw bad();
                return {'B', rank, 0};
            case 'D':
                if (rank < 2) throw bad();
                return {'D', rank, 0};
            case 'H':
                if (rank != 3) throw ParseError("H supports rank 3 only");
                return {'H', 3, 0};
            case 'F':
                if (rank != 4) throw ParseError("F supports rank 4 only");
                return {'F', 4, 0};
            default:
                throw bad();
        }
    }

    static int parse_int(const std::string& s, const ParseError& err) {
        if (s.empty()) throw err;
        int v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw err;
            v = v * 10 + (c - '0');
            if (v > 1'000'000) throw err;
        }
        return v;
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < components.size(); ++i) {
            if (i) out += 'x';
            const auto& c = components[i];
            if (c.family == 'I')
                out += "I2:" + std::to_string(c.dihedral_m);
            else
                out += c.family + std::to_string(c.rank);
        }
        return out;
    }

    // Coxeter matrix of the full product, components laid side by side.
    std::vector<std::vector<int>> coxeter_matrix() const {
        int n = total_rank();
        std::vector<std::vector<int>> m(n, std::vector<int>(n, 2));
        for (int i = 0; i < n; ++i) m[i][i] = 1;
        int base = 0;
        auto bond = [&](int i, int j, int v) {
            m[base + i][base + j] = v;
            m[base + j][base + i] = v;
        };
        for (const auto& c : components) {
            switch (c.family) {
                case 'A':
                    for (int i = 0; i + 1 < c.rank; ++i) bond(i, i + 1, 3);
                    break;
                case 'B':
                    // bond order 4 sits on the first pair
                    bond(0, 1, 4);
                    for (int i = 1; i + 1 < c.rank; ++i) bond(i, i + 1, 3);
                    break;
                case 'D':
                    // fork first: generators 0 and 1 are the prongs, both
                    // tied to 2, then a plain chain
                    if (c.rank >= 3) {
                        bond(0, 2, 3);
                        bond(1, 2, 3);
                        for (int i = 2; i + 1 < c.rank; ++i) bond(i, i + 1, 3);
                    }
                    break;
                case 'I':
                    bond(0, 1, c.dihedral_m);
                    break;
                case 'H':
                    bond(0, 1, 5);
                    bond(1, 2, 3);
                    break;
                case 'F':
                    bond(0, 1, 3);
                    bond(1, 2, 4);
                    bond(2, 3, 3);
                    break;
            }
            base += c.rank;
        }
        return m;
    }
};

// ---------------------------------------------------------------------------
// Signed permutations of the positive roots

using SignedPerm = std::vector<std::int16_t>;  // entry r: +-(image index + 1)

struct SignedPermHash {
    std::size_t operator()(const SignedPerm& p) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::int16_t v : p) {
            h ^= static_cast<std::uint16_t>(v);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

class CoxeterGroup;

struct Element {
    const CoxeterGroup* group = nullptr;
    std::int32_t id = 0;
    bool operator==(const Element& o) const = default;
};

struct ParabolicCoset {
    std::vector<int> generators;   // the subset I defining the subgroup
    std::int32_t rep;              // unique minimal-length member
    std::vector<std::int32_t> members;  // ascending element ids
};

struct Chamber {
    Element w;
    std::vector<std::int8_t> signs;  // one per positive root, +1 or -1
};

class CoxeterGroup {
  public:
    static constexpr double kMatchEps = 1e-9;

    static std::shared_ptr<const CoxeterGroup> build(const CoxeterSpec& spec) {
        long double predicted = spec.predicted_order();
        if (predicted > static_cast<long double>(spec.order_cap))
            throw OrderCapExceeded(spec.to_string() + " has order " +
                                   std::to_string((double)predicted) +
                                   " > cap " + std::to_string(spec.order_cap));
        auto g = std::shared_ptr<CoxeterGroup>(new CoxeterGroup());
        g->spec_ = spec;
        g->spec_string_ = spec.to_string();
        g->init_roots(simple_roots_from_matrix(spec.coxeter_matrix()));
        g->enumerate(spec.order_cap);
        if (g->order() != static_cast<std::size_t>(predicted + 0.5L))
            throw NumericalAmbiguity(
                "enumerated order disagrees with the classification for " +
                g->spec_string_);
        return g;
    }

    // Generic entry point: explicit unit simple roots, any finite group.
    static std::shared_ptr<const CoxeterGroup> build_custom(
        const std::vector<Vec>& simple_roots, long long order_cap,
        const std::string& label = "custom") {
        auto g = std::shared_ptr<CoxeterGroup>(new CoxeterGroup());
        g->spec_.order_cap = order_cap;
        g->spec_string_ = label;
        g->init_roots(simple_roots);
        g->enumerate(order_cap);
        return g;
    }

    // --- basic data ---------------------------------------------------

    const std::string& spec_string() const { return spec_string_; }
    const CoxeterSpec& spec() const { return spec_; }
    int rank() const { return rank_; }
    int dim() const { return dim_; }
    std::size_t order() const { return perms_.size(); }
    int positive_root_count() const { return static_cast<int>(roots_.size()); }
    const std::vector<Vec>& positive_roots() const { return roots_; }
    const Vec& root(int r) const { return roots_[r]; }
    // simple roots occupy indices 0..rank-1 of the positive roots
    const Vec& simple_root(int j) const { return roots_[j]; }

    Element element(std::int32_t id) const { return {this, id}; }
    Element identity() const { return {this, 0}; }
    Element simple(int j) const { return {this, simple_ids_[j]}; }

    std::int32_t simple_id(int j) const { return simple_ids_[j]; }

    int length(std::int32_t id) const { return lengths_[id]; }
    int max_length() const { return lengths_.back(); }
    const std::vector<std::uint8_t>& word(std::int32_t id) const {
        return words_[id];
    }
    const SignedPerm& signed_perm(std::int32_t id) const { return perms_[id]; }

    // image of positive root r under element id, +-(index+1)
    int apply(std::int32_t id, int r) const { return perms_[id][r]; }

    std::int32_t mult(std::int32_t a, std::int32_t b) const {
        // right multiplication by generators goes through the cached table
        return lookup(compose(perms_[a], perms_[b]));
    }

    std::int32_t mult_gen(std::int32_t a, int j) const {
        return cayley_right_[static_cast<std::size_t>(a) * rank_ + j];
    }

    std::int32_t inv(std::int32_t a) const {
        return lookup(invert(perms_[a]));
    }

    std::int32_t element_from_word(const std::vector<int>& w) const {
        std::int32_t id = 0;
        for (int j : w) {
            if (j < 0 || j >= rank_)
                throw ParseError("word letter out of range");
            id = mult_gen(id, j);
        }
        return id;
    }

    // --- element handles ----------------------------------------------

    Element multiply(Element a, Element b) const {
        if (a.group != this || b.group != this)
            throw MixedGroups("elements belong to different groups");
        return {this, mult(a.id, b.id)};
    }

    Element inverse(Element a) const {
        if (a.group != this) throw MixedGroups("element from another group");
        return {this, inv(a.id)};
    }

    // --- reflections ----------------------------------------------------

    const std::vector<std::int32_t>& reflection_ids() const {
        return reflection_ids_;
    }
    std::int32_t reflection_of_root(int r) const { return refl_of_root_[r]; }
    // -1 when the element is not a reflection
    int root_of_reflection(std::int32_t id) const {
        auto it = root_of_refl_.find(id);
        return it == root_of_refl_.end() ? -1 : it->second;
    }
    bool is_reflection(std::int32_t id) const {
        return root_of_refl_.count(id) > 0;
    }

    // --- chamber geometry ------------------------------------------------
    //
    // The chamber of w is w(C0).  Its sign vector lists, per positive root
    // a, the sign of <x, a> for x inside the chamber; that sign equals the
    // sign of w^{-1}(a).

    std::vector<std::int8_t> chamber_signs(std::int32_t id) const {
        const SignedPerm& p = perms_[id];
        std::vector<std::int8_t> signs(p.size());
        for (std::size_t q = 0; q < p.size(); ++q) {
            int img = p[q];
            signs[std::abs(img) - 1] = img > 0 ? 1 : -1;
        }
        return signs;
    }

    Chamber chamber_of(Element w) const {
        if (w.group != this) throw MixedGroups("element from another group");
        return {w, chamber_signs(w.id)};
    }

    // sign of w^{-1}(root r): +-(q+1) where the underlying root is q
    int coapply(std::int32_t id, int r) const {
        const SignedPerm& p = perms_[id];
        for (std::size_t q = 0; q < p.size(); ++q)
            if (std::abs(p[q]) == r + 1)
                return p[q] > 0 ? static_cast<int>(q) + 1
                                : -(static_cast<int>(q) + 1);
        return 0;  // unreachable
    }

    // --- parabolic subgroups and cosets -----------------------------------

    struct Parabolic {
        std::uint64_t mask = 0;
        std::vector<std::int32_t> members;      // ascending
        std::vector<char> member_flag;          // indexed by element id
        std::vector<std::int32_t> coset_index;  // element id -> coset
        std::vector<std::int32_t> coset_rep;    // coset -> min element id
    };

    std::uint64_t mask_of(const std::vector<int>& I) const {
        std::uint64_t m = 0;
        for (int j : I) {
            if (j < 0 || j >= rank_)
                throw ParseError("generator index out of range");
            m |= 1ULL << j;
        }
        return m;
    }

    const Parabolic& parabolic(std::uint64_t mask) const {
        auto it = parabolic_cache_.find(mask);
        if (it != parabolic_cache_.end()) return *it->second;
        auto data = std::make_unique<Parabolic>();
        data->mask = mask;
        build_parabolic(*data);
        const Parabolic& ref = *data;
        parabolic_cache_.emplace(mask, std::move(data));
        return ref;
    }

    std::vector<ParabolicCoset> parabolic_cosets(
        const std::vector<int>& I) const {
        const Parabolic& p = parabolic(mask_of(I));
        std::vector<int> gens(I);
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        std::vector<ParabolicCoset> out(p.coset_rep.size());
        for (std::size_t c = 0; c < out.size(); ++c) {
            out[c].generators = gens;
            out[c].rep = p.coset_rep[c];
        }
        for (std::int32_t w = 0; w < static_cast<std::int32_t>(order()); ++w)
            out[p.coset_index[w]].members.push_back(w);
        return out;
    }

  private:
    CoxeterGroup() = default;

    CoxeterSpec spec_;
    std::string spec_string_;
    int rank_ = 0;
    int dim_ = 0;

    std::vector<Vec> roots_;  // positive roots; simple ones first
    std::vector<std::vector<double>> gram_chol_;  // Cholesky of simple Gram

    std::vector<SignedPerm> perms_;
    std::vector<std::vector<std::uint8_t>> words_;
    std::vector<std::int32_t> lengths_;
    std::vector<std::int32_t> simple_ids_;
    std::vector<std::int32_t> cayley_right_;
    std::unordered_map<SignedPerm, std::int32_t, SignedPermHash> index_;

    std::vector<std::int32_t> reflection_ids_;
    std::vector<std::int32_t> refl_of_root_;
    std::unordered_map<std::int32_t, int> root_of_refl_;

    mutable std::unordered_map<std::uint64_t, std::unique_ptr<Parabolic>>
        parabolic_cache_;

    // Realize unit simple roots from the Coxeter matrix: the Gram matrix
    // G_ij = -cos(pi/m_ij) is positive definite exactly for finite groups,
    // and the rows of its Cholesky factor are the roots.
    static std::vector<Vec> simple_roots_from_matrix(
        const std::vector<std::vector<int>>& m) {
        int n = static_cast<int>(m.size());
        std::vector<Vec> g(n, Vec(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                g[i][j] = i == j ? 1.0 : -std::cos(M_PI / m[i][j]);
        std::vector<Vec> l(n, Vec(n, 0.0));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                double s = g[i][j];
                for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
                if (i == j) {
                    if (s <= 1e-12)
                        throw Error(
                            "Coxeter matrix is not of finite type");
                    l[i][i] = std::sqrt(s);
                } else {
                    l[i][j] = s / l[j][j];
                }
            }
        }
        return l;
    }

    void init_roots(const std::vector<Vec>& simples) {
        rank_ = static_cast<int>(simples.size());
        if (rank_ == 0 || rank_ > 63) throw ParseError("rank out of range");
        dim_ = static_cast<int>(simples[0].size());
        for (const Vec& a : simples) {
            if (static_cast<int>(a.size()) != dim_)
                throw ParseError("simple roots of unequal dimension");
            if (std::abs(dot(a, a) - 1.0) > 1e-6)
                throw ParseError("simple roots must be unit vectors");
        }
        roots_ = simples;

        // Cholesky of the simple-root Gram matrix; used to express any root
        // in simple-root coordinates (positivity test).
        std::vector<Vec> g(rank_, Vec(rank_));
        for (int i = 0; i < rank_; ++i)
            for (int j = 0; j < rank_; ++j)
                g[i][j] = dot(simples[i], simples[j]);
        gram_chol_.assign(rank_, Vec(rank_, 0.0));
        for (int i = 0; i < rank_; ++i) {
            for (int j = 0; j <= i; ++j) {
                double s = g[i][j];
                for (int k = 0; k < j; ++k)
                    s -= gram_chol_[i][k] * gram_chol_[j][k];
                if (i == j) {
                    if (s <= 1e-12)
                        throw ParseError("simple roots are not independent");
                    gram_chol_[i][i] = std::sqrt(s);
                } else {
                    gram_chol_[i][j] = s / gram_chol_[j][j];
                }
            }
        }

        // Close the root set under the simple reflections.  Only positive
        // representatives are stored; a generated root that matches the
        // negative of a stored one is already known.
        for (std::size_t head = 0; head < roots_.size(); ++head) {
            for (int j = 0; j < rank_; ++j) {
                Vec img = reflect(roots_[head], roots_[j]);
                if (find_signed(img) != 0) continue;
                roots_.push_back(positive_form(img));
                if (roots_.size() > 4096)
                    throw OrderCapExceeded("root closure did not stabilize");
            }
        }

        // Separation audit: distinct roots must be far apart relative to
        // the matching tolerance, or signed-permutation extraction is
        // ill-posed.
        double close = 10 * kMatchEps;
        for (std::size_t a = 0; a < roots_.size(); ++a)
            for (std::size_t b = a + 1; b < roots_.size(); ++b) {
                double d2p = dist2(roots_[a], roots_[b]);
                Vec neg = roots_[b];
                for (double& x : neg) x = -x;
                double d2n = dist2(roots_[a], neg);
                if (d2p < close * close || d2n < close * close)
                    throw NumericalAmbiguity(
                        "two roots are closer than 10x the match tolerance");
            }
    }

    static Vec reflect(const Vec& x, const Vec& alpha) {
        double c = 2.0 * dot(x, alpha);
        Vec out(x);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * alpha[i];
        return out;
    }

    // +-(index+1) of the stored positive root matching v, or 0
    int find_signed(const Vec& v) const {
        for (std::size_t r = 0; r < roots_.size(); ++r) {
            if (dist2(v, roots_[r]) < kMatchEps * kMatchEps)
                return static_cast<int>(r) + 1;
        }
        Vec neg(v);
        for (double& x : neg) x = -x;
        for (std::size_t r = 0; r < roots_.size(); ++r) {
            if (dist2(neg, roots_[r]) < kMatchEps * kMatchEps)
                return -(static_cast<int>(r) + 1);
        }
        return 0;
    }

    // Simple-root coordinates via the prefactored Gram matrix.
    Vec coords(const Vec& v) const {
        Vec d(rank_);
        for (int i = 0; i < rank_; ++i) d[i] = dot(roots_[i], v);
        // solve L y = d, then L^T c = y
        Vec y(rank_), c(rank_);
        for (int i = 0; i < rank_; ++i) {
            double s = d[i];
            for (int k = 0; k < i; ++k) s -= gram_chol_[i][k] * y[k];
            y[i] = s / gram_chol_[i][i];
        }
        for (int i = rank_ - 1; i >= 0; --i) {
            double s = y[i];
            for (int k = i + 1; k < rank_; ++k) s -= gram_chol_[k][i] * c[k];
            c[i] = s / gram_chol_[i][i];
        }
        return c;
    }

    Vec positive_form(const Vec& v) const {
        Vec c = coords(v);
        bool nonneg = true, nonpos = true;
        for (double x : c) {
            if (x < -1e-6) nonneg = false;
            if (x > 1e-6) nonpos = false;
        }
        if (nonneg == nonpos)
            throw NumericalAmbiguity("root with mixed-sign coordinates");
        if (nonneg) return v;
        Vec neg(v);
        for (double& x : neg) x = -x;
        return neg;
    }

    SignedPerm perm_of_isometry(
        const std::function<Vec(const Vec&)>& f) const {
        SignedPerm p(roots_.size());
        for (std::size_t r = 0; r < roots_.size(); ++r) {
            int m = find_signed(f(roots_[r]));
            if (m == 0)
                throw NumericalAmbiguity("image of a root matches no root");
            p[r] = static_cast<std::int16_t>(m);
        }
        return p;
    }

    static SignedPerm compose(const SignedPerm& a, const SignedPerm& b) {
        // (a o b)(x) = a(b(x))
        SignedPerm p(b.size());
        for (std::size_t r = 0; r < b.size(); ++r) {
            int t = b[r];
            int u = a[std::abs(t) - 1];
            p[r] = static_cast<std::int16_t>(t > 0 ? u : -u);
        }
        return p;
    }

    static SignedPerm invert(const SignedPerm& a) {
        SignedPerm p(a.size());
        for (std::size_t r = 0; r < a.size(); ++r) {
            int t = a[r];
            int img = std::abs(t) - 1;
            p[img] = static_cast<std::int16_t>(
                t > 0 ? static_cast<int>(r) + 1 : -(static_cast<int>(r) + 1));
        }
        return p;
    }

    std::int32_t lookup(const SignedPerm& p) const {
        auto it = index_.find(p);
        if (it == index_.end())
            throw Error("internal: product escaped the enumerated group");
        return it->second;
    }

    void enumerate(long long order_cap) {
        int np = positive_root_count();

        // generator signed permutations, numerically once
        std::vector<SignedPerm> gen(rank_);
        for (int j = 0; j < rank_; ++j) {
            gen[j] = perm_of_isometry(
                [&](const Vec& v) { return reflect(v, roots_[j]); });
        }

        SignedPerm id(np);
        for (int r = 0; r < np; ++r) id[r] = static_cast<std::int16_t>(r + 1);
        perms_.push_back(id);
        words_.push_back({});
        lengths_.push_back(0);
        index_.emplace(perms_[0], 0);

        // breadth-first by length; within a level, parents in id order and
        // letters ascending, so each element's stored word is the
        // lexicographically least reduced word.
        std::size_t head = 0;
        cayley_right_.clear();
        while (head < perms_.size()) {
            std::size_t level_end = perms_.size();
            for (; head < level_end; ++head) {
                cayley_right_.resize((head + 1) * rank_);
                for (int j = 0; j < rank_; ++j) {
                    SignedPerm p = compose(perms_[head], gen[j]);
                    auto it = index_.find(p);
                    std::int32_t next;
                    if (it != index_.end()) {
                        next = it->second;
                    } else {
                        next = static_cast<std::int32_t>(perms_.size());
                        if (perms_.size() >=
                            static_cast<std::size_t>(order_cap))
                            throw OrderCapExceeded(
                                "enumeration exceeded the order cap");
                        perms_.push_back(std::move(p));
                        std::vector<std::uint8_t> w = words_[head];
                        w.push_back(static_cast<std::uint8_t>(j));
                        words_.push_back(std::move(w));
                        lengths_.push_back(lengths_[head] + 1);
                        index_.emplace(perms_[next], next);
                    }
                    cayley_right_[head * rank_ + j] = next;
                }
            }
        }

        simple_ids_.resize(rank_);
        for (int j = 0; j < rank_; ++j) simple_ids_[j] = lookup(gen[j]);

        // reflection <-> positive root tables
        refl_of_root_.resize(np);
        for (int r = 0; r < np; ++r) {
            SignedPerm p = perm_of_isometry(
                [&](const Vec& v) { return reflect(v, roots_[r]); });
            std::int32_t t = lookup(p);
            refl_of_root_[r] = t;
            root_of_refl_.emplace(t, r);
        }
        reflection_ids_ = refl_of_root_;
        std::sort(reflection_ids_.begin(), reflection_ids_.end());
    }

    void build_parabolic(Parabolic& p) const {
        std::vector<int> gens;
        for (int j = 0; j < rank_; ++j)
            if (p.mask >> j & 1) gens.push_back(j);

        std::size_t n = order();
        p.member_flag.assign(n, 0);
        p.coset_index.assign(n, -1);

        // members: closure of the generators from the identity
        std::vector<std::int32_t> queue = {0};
        p.member_flag[0] = 1;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (int j : gens) {
                std::int32_t u = mult_gen(queue[h], j);
                if (!p.member_flag[u]) {
                    p.member_flag[u] = 1;
                    queue.push_back(u);
                }
            }
        p.members = queue;
        std::sort(p.members.begin(), p.members.end());

        // left cosets w<I>: scanning ids ascending makes the first member
        // hit in each coset its unique minimal-length representative
        for (std::int32_t w = 0; w < static_cast<std::int32_t>(n); ++w) {
            if (p.coset_index[w] >= 0) continue;
            std::int32_t c = static_cast<std::int32_t>(p.coset_rep.size());
            p.coset_rep.push_back(w);
            // orbit of w under right multiplication by the subgroup
            std::vector<std::int32_t> orbit = {w};
            p.coset_index[w] = c;
            for (std::size_t h = 0; h < orbit.size(); ++h)
                for (int j : gens) {
                    std::int32_t u = mult_gen(orbit[h], j);
                    if (p.coset_index[u] < 0) {
                        p.coset_index[u] = c;
                        orbit.push_back(u);
                    }
                }
        }
    }
};

// Convenience free functions working on element handles.
inline Element multiply(Element a, Element b) {
    if (!a.group) throw MixedGroups("null group");
    return a.group->multiply(a, b);
}
inline Element inverse(Element a) {
    if (!a.group) throw MixedGroups("null group");
    return a.group->inverse(a);
}
inline int length(Element a) { return a.group->length(a.id); }

}  // namespace coxnorm
