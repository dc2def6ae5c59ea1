#pragma once

// Step kernels (piecewise-constant functions on the uniform n-grid of
// [0,1]^k) and the numerics built on them: homomorphism densities, graph
// and hypergraph norms, cut norms, and the inequality checks the suites
// replay.  Brute-force enumeration is the ground truth; the
// variable-elimination fast path for 2-graphs is validated against it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coxnorm/errors.hpp"
#include "coxnorm/hypergraph.hpp"
#include "coxnorm/refgraph.hpp"
#include "coxnorm/report.hpp"
#include "coxnorm/rng.hpp"

namespace coxnorm {

// ---------------------------------------------------------------------------
// Step kernels

namespace detail {
inline bool finite_entry(double v) { return std::isfinite(v); }
inline bool finite_entry(std::complex<double> v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}
inline double abs_entry(double v) { return std::abs(v); }
inline double abs_entry(std::complex<double> v) { return std::abs(v); }
}  // namespace detail

template <typename T>
struct StepKernelT {
    int arity = 2;
    int n = 1;              // cells per axis
    std::vector<T> values;  // row-major, first coordinate most significant
    double bound = 0.0;     // max |entry|
    bool symmetric = false;

    static StepKernelT build(int arity, int n, std::vector<T> values,
                             bool symmetric = false) {
        if (arity < 1) throw ParseError("kernel arity must be at least 1");
        if (n < 1) throw ParseError("kernel resolution must be at least 1");
        double want = std::pow(double(n), arity);
        if (double(values.size()) != want)
            throw ParseError("kernel needs " + std::to_string((long long)want) +
                             " values, got " + std::to_string(values.size()));
        StepKernelT k;
        k.arity = arity;
        k.n = n;
        k.values = std::move(values);
        for (const T& v : k.values) {
            if (!detail::finite_entry(v)) throw ParseError("non-finite entry");
            k.bound = std::max(k.bound, detail::abs_entry(v));
        }
        if (symmetric) {
            if (arity != 2)
                throw ParseError("symmetric flag applies to arity 2 only");
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < i; ++j)
                    if (k.values[(std::size_t)i * n + j] !=
                        k.values[(std::size_t)j * n + i])
                        throw ParseError("kernel is not symmetric");
            k.symmetric = true;
        }
        return k;
    }

    // cell lookup; x must hold `arity` coordinates in [0, n)
    const T& at(const int* x) const {
        std::size_t idx = 0;
        for (int i = 0; i < arity; ++i) idx = idx * n + x[i];
        return values[idx];
    }
    const T& at2(int i, int j) const { return values[(std::size_t)i * n + j]; }
};

using StepKernel = StepKernelT<double>;
using ComplexKernel = StepKernelT<std::complex<double>>;

template <typename T>
inline StepKernel abs_kernel(const StepKernelT<T>& f) {
    std::vector<double> v(f.values.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = detail::abs_entry(f.values[i]);
    return StepKernel::build(f.arity, f.n, std::move(v),
                             f.symmetric && f.arity == 2);
}

inline ComplexKernel conj_kernel(const ComplexKernel& f) {
    std::vector<std::complex<double>> v(f.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::conj(f.values[i]);
    return ComplexKernel::build(f.arity, f.n, std::move(v));
}

inline ComplexKernel complexify(const StepKernel& f) {
    std::vector<std::complex<double>> v(f.values.begin(), f.values.end());
    return ComplexKernel::build(f.arity, f.n, std::move(v));
}

template <typename T>
inline StepKernelT<T> constant_kernel(int arity, int n, T value) {
    std::size_t cells = (std::size_t)std::llround(std::pow(double(n), arity));
    return StepKernelT<T>::build(arity, n, std::vector<T>(cells, value),
                                 arity == 2);
}

template <typename T>
inline StepKernelT<T> add_kernels(const StepKernelT<T>& a,
                                  const StepKernelT<T>& b) {
    if (a.arity != b.arity || a.n != b.n)
        throw ParseError("kernel shapes disagree");
    std::vector<T> v(a.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] + b.values[i];
    return StepKernelT<T>::build(a.arity, a.n, std::move(v),
                                 a.symmetric && b.symmetric);
}

template <typename T>
inline StepKernelT<T> scale_kernel(const StepKernelT<T>& a, T c) {
    std::vector<T> v(a.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * a.values[i];
    return StepKernelT<T>::build(a.arity, a.n, std::move(v), a.symmetric);
}

// product kernel on the product grid: cell z_i = x_i * b.n + y_i,
// value = a(x) * b(y).  Densities multiply across it.
template <typename T>
inline StepKernelT<T> tensor_kernel(const StepKernelT<T>& a,
                                    const StepKernelT<T>& b) {
    if (a.arity != b.arity) throw ParseError("kernel arities disagree");
    int k = a.arity, n = a.n * b.n;
    std::size_t cells = (std::size_t)std::llround(std::pow(double(n), k));
    std::vector<T> v(cells);
    std::vector<int> xa(k), xb(k);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        std::size_t rest = idx;
        for (int i = k - 1; i >= 0; --i) {
            int z = int(rest % n);
            rest /= n;
            xa[i] = z / b.n;
            xb[i] = z % b.n;
        }
        v[idx] = a.at(xa.data()) * b.at(xb.data());
    }
    return StepKernelT<T>::build(k, n, std::move(v),
                                 a.symmetric && b.symmetric);
}

inline StepKernel random_symmetric_kernel(int n, Rng& rng, double lo,
                                          double hi) {
    std::vector<double> v((std::size_t)n * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            v[(std::size_t)i * n + j] = v[(std::size_t)j * n + i] =
                rng.unif(lo, hi);
    return StepKernel::build(2, n, std::move(v), true);
}

inline StepKernel random_kernel(int arity, int n, Rng& rng, double lo,
                                double hi) {
    std::size_t cells = (std::size_t)std::llround(std::pow(double(n), arity));
    std::vector<double> v(cells);
    for (auto& x : v) x = rng.unif(lo, hi);
    return StepKernel::build(arity, n, std::move(v));
}

inline ComplexKernel random_complex_kernel(int arity, int n, Rng& rng,
                                           double radius) {
    std::size_t cells = (std::size_t)std::llround(std::pow(double(n), arity));
    std::vector<std::complex<double>> v(cells);
    for (auto& x : v)
        x = {rng.unif(-radius, radius), rng.unif(-radius, radius)};
    return ComplexKernel::build(arity, n, std::move(v));
}

// ---------------------------------------------------------------------------
// Colored families

template <typename T>
struct ColoredFamilyT {
    std::vector<StepKernelT<T>> kernels;  // f_1..f_m
    std::vector<int> coloring;            // per edge of H, values in [0, m)
};

using ColoredFamily = ColoredFamilyT<double>;

template <typename T>
inline ColoredFamilyT<T> monochromatic_family(const Hypergraph& h,
                                              StepKernelT<T> f) {
    ColoredFamilyT<T> fam;
    fam.kernels.push_back(std::move(f));
    fam.coloring.assign(h.edges.size(), 0);
    return fam;
}

namespace detail {

template <typename T>
inline void validate_family(const Hypergraph& h, const ColoredFamilyT<T>& fam) {
    if (fam.coloring.size() != h.edges.size())
        throw ParseError("coloring must assign every edge");
    if (h.edges.empty()) return;
    if (fam.kernels.empty()) throw ParseError("family has no kernels");
    for (const auto& f : fam.kernels)
        if (f.arity != fam.kernels[0].arity || f.n != fam.kernels[0].n)
            throw ParseError("kernel shapes disagree");
    if (fam.kernels[0].arity != h.arity())
        throw ParseError("kernel arity does not match the edge arity");
    for (int c : fam.coloring)
        if (c < 0 || c >= (int)fam.kernels.size())
            throw ParseError("edge color out of range");
}

// Assignment order that completes edges early, so partial products prune
// the enumeration: greedily append the vertex finishing the most edges.
struct DensityPlan {
    std::vector<int> order;              // order[d] = vertex placed at depth d
    std::vector<std::vector<int>> done;  // done[d] = edges completed there
};

inline DensityPlan density_plan(const Hypergraph& h) {
    DensityPlan plan;
    plan.done.resize(h.n);
    std::vector<char> placed(h.n, 0);
    std::vector<int> deg = h.degrees();
    std::vector<int> missing(h.edges.size());
    for (std::size_t e = 0; e < h.edges.size(); ++e)
        missing[e] = (int)h.edges[e].size();
    for (int d = 0; d < h.n; ++d) {
        int best = -1, best_fin = -1, best_deg = -1;
        for (int v = 0; v < h.n; ++v) {
            if (placed[v]) continue;
            int fin = 0;
            for (std::size_t e = 0; e < h.edges.size(); ++e)
                if (missing[e] == 1 &&
                    std::binary_search(h.edges[e].begin(), h.edges[e].end(), v))
                    ++fin;
            if (best < 0 || fin > best_fin ||
                (fin == best_fin && deg[v] > best_deg)) {
                best = v;
                best_fin = fin;
                best_deg = deg[v];
            }
        }
        placed[best] = 1;
        plan.order.push_back(best);
        for (std::size_t e = 0; e < h.edges.size(); ++e)
            if (std::binary_search(h.edges[e].begin(), h.edges[e].end(), best) &&
                --missing[e] == 0)
                plan.done[d].push_back((int)e);
    }
    return plan;
}

inline void density_work_cap(int n, int nverts) {
    if (std::pow(double(std::max(n, 1)), nverts) > 1e8)
        throw WorkCapExceeded("density enumeration needs n^|V| <= 1e8");
}

}  // namespace detail

// Exact sum over all n^|V| cell assignments divided by n^|V|.  Each edge
// keeps a running row-major cell index, bumped by the stride of whichever
// coordinate the current depth assigns, so finished edges are single loads.
template <typename T>
inline T colored_density_brute(const Hypergraph& h,
                               const ColoredFamilyT<T>& fam) {
    detail::validate_family(h, fam);
    if (h.n == 0) return T(1);
    int n = fam.kernels.empty() ? 1 : fam.kernels[0].n;
    detail::density_work_cap(n, h.n);
    auto plan = detail::density_plan(h);

    std::vector<int> depth_of(h.n);
    for (int d = 0; d < h.n; ++d) depth_of[plan.order[d]] = d;
    struct Touch {
        int edge;
        std::size_t stride;
    };
    std::vector<std::vector<Touch>> touches(h.n);
    int m = (int)h.edges.size();
    std::vector<const T*> cell(m);
    for (int e = 0; e < m; ++e) {
        cell[e] = fam.kernels[fam.coloring[e]].values.data();
        const auto& verts = h.edges[e];
        std::size_t stride = 1;
        for (int i = (int)verts.size() - 1; i >= 0; --i) {
            touches[depth_of[verts[i]]].push_back({e, stride});
            stride *= (std::size_t)n;
        }
    }

    std::vector<std::size_t> idx(m, 0);
    T total = T(0);
    auto rec = [&](auto&& self, int d, T partial) -> void {
        const auto& ts = touches[d];
        const auto& done = plan.done[d];
        bool leaf = d + 1 == h.n;
        for (int c = 0; c < n; ++c) {
            T p = partial;
            for (int e : done) p *= cell[e][idx[e]];
            if (leaf)
                total += p;
            else
                self(self, d + 1, p);
            for (const Touch& t : ts) idx[t.edge] += t.stride;
        }
        for (const Touch& t : ts) idx[t.edge] -= (std::size_t)n * t.stride;
    };
    rec(rec, 0, T(1));
    return total / T(std::pow(double(n), h.n));
}

template <typename T>
inline T density_brute(const Hypergraph& h, const StepKernelT<T>& f) {
    return colored_density_brute(h, monochromatic_family(h, f));
}

// ---------------------------------------------------------------------------
// Variable elimination (2-graphs only); the performance path behind norms

namespace detail {

struct Factor {
    std::vector<int> vars;      // sorted vertex ids
    std::vector<double> data;   // row-major in vars order
};

inline std::size_t factor_cells(int n, std::size_t nvars) {
    double c = std::pow(double(n), double(nvars));
    if (c > 1e8) throw WorkCapExceeded("elimination factor exceeds 1e8 cells");
    return (std::size_t)std::llround(c);
}

inline Factor factor_multiply(const Factor& a, const Factor& b, int n) {
    Factor out;
    std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                   std::back_inserter(out.vars));
    out.data.assign(factor_cells(n, out.vars.size()), 1.0);
    auto pos_of = [&](const std::vector<int>& vars) {
        std::vector<int> pos;
        for (int v : vars)
            pos.push_back(int(std::lower_bound(out.vars.begin(), out.vars.end(),
                                               v) -
                              out.vars.begin()));
        return pos;
    };
    std::vector<int> pa = pos_of(a.vars), pb = pos_of(b.vars);
    std::vector<int> coord(out.vars.size(), 0);
    for (std::size_t idx = 0; idx < out.data.size(); ++idx) {
        std::size_t rest = idx;
        for (int i = int(out.vars.size()) - 1; i >= 0; --i) {
            coord[i] = int(rest % n);
            rest /= n;
        }
        std::size_t ia = 0, ib = 0;
        for (int p : pa) ia = ia * n + coord[p];
        for (int p : pb) ib = ib * n + coord[p];
        out.data[idx] = a.data[ia] * b.data[ib];
    }
    return out;
}

inline Factor factor_marginalize(const Factor& f, int v, int n) {
    Factor out;
    int axis = -1;
    for (std::size_t i = 0; i < f.vars.size(); ++i) {
        if (f.vars[i] == v)
            axis = int(i);
        else
            out.vars.push_back(f.vars[i]);
    }
    if (axis < 0) throw Error("marginalized variable missing from factor");
    out.data.assign(factor_cells(n, out.vars.size()), 0.0);
    std::vector<int> coord(f.vars.size(), 0);
    for (std::size_t idx = 0; idx < f.data.size(); ++idx) {
        std::size_t rest = idx;
        for (int i = int(f.vars.size()) - 1; i >= 0; --i) {
            coord[i] = int(rest % n);
            rest /= n;
        }
        std::size_t io = 0;
        for (std::size_t i = 0; i < f.vars.size(); ++i)
            if (int(i) != axis) io = io * n + coord[i];
        out.data[io] += f.data[idx];
    }
    return out;
}

}  // namespace detail

// Contraction along a greedy smallest-scope elimination order; equals
// colored_density_brute on the same input.
inline double colored_density_fast(const Hypergraph& h,
                                   const ColoredFamily& fam) {
    detail::validate_family(h, fam);
    if (h.n == 0) return 1.0;
    if (!h.edges.empty() && h.arity() != 2)
        throw ParseError("variable elimination handles 2-graphs only");
    int n = fam.kernels.empty() ? 1 : fam.kernels[0].n;

    std::vector<detail::Factor> factors;
    for (std::size_t e = 0; e < h.edges.size(); ++e)
        factors.push_back({h.edges[e], fam.kernels[fam.coloring[e]].values});

    std::vector<char> alive(h.n, 1);
    double result = 1.0;
    for (int step = 0; step < h.n; ++step) {
        // candidate scope of each vertex = union of its factors' variables
        int best = -1;
        std::size_t best_scope = 0;
        std::vector<int> best_touch;
        for (int v = 0; v < h.n; ++v) {
            if (!alive[v]) continue;
            std::set<int> scope;
            std::vector<int> touch;
            for (std::size_t i = 0; i < factors.size(); ++i)
                if (std::binary_search(factors[i].vars.begin(),
                                       factors[i].vars.end(), v)) {
                    touch.push_back(int(i));
                    scope.insert(factors[i].vars.begin(),
                                 factors[i].vars.end());
                }
            if (best < 0 || scope.size() < best_scope) {
                best = v;
                best_scope = scope.size();
                best_touch = std::move(touch);
            }
        }
        if (best < 0) break;  // unreachable: one vertex dies per step
        alive[best] = 0;
        if (best_touch.empty()) {
            result *= n;  // isolated vertex integrates to one cell count
            continue;
        }
        detail::Factor joined = std::move(factors[best_touch[0]]);
        for (std::size_t i = 1; i < best_touch.size(); ++i)
            joined = detail::factor_multiply(joined, factors[best_touch[i]], n);
        for (auto it = best_touch.rbegin(); it != best_touch.rend(); ++it)
            factors.erase(factors.begin() + *it);
        detail::Factor reduced = detail::factor_marginalize(joined, best, n);
        if (reduced.vars.empty())
            result *= reduced.data[0];
        else
            factors.push_back(std::move(reduced));
    }
    return result / std::pow(double(n), h.n);
}

inline double density_fast(const Hypergraph& h, const StepKernel& f) {
    return colored_density_fast(h, monochromatic_family(h, f));
}

// fast for 2-graphs, brute otherwise
inline double colored_density(const Hypergraph& h, const ColoredFamily& fam) {
    if (h.edges.empty() || h.arity() == 2)
        return colored_density_fast(h, fam);
    return colored_density_brute(h, fam);
}

inline double density(const Hypergraph& h, const StepKernel& f) {
    return colored_density(h, monochromatic_family(h, f));
}

// ---------------------------------------------------------------------------
// Norms

namespace detail {
inline int edge_count_or_throw(const Hypergraph& h) {
    if (h.edges.empty()) throw ParseError("norm of an edgeless graph");
    return (int)h.edges.size();
}
}  // namespace detail

inline double graph_norm(const Hypergraph& h, const StepKernel& f) {
    int m = detail::edge_count_or_throw(h);
    return std::pow(std::abs(density(h, f)), 1.0 / m);
}

inline double abs_graph_norm(const Hypergraph& h, const StepKernel& f) {
    int m = detail::edge_count_or_throw(h);
    return std::pow(density(h, abs_kernel(f)), 1.0 / m);
}

// mean of |f|: the single-edge norm the Sidorenko bound compares against
template <typename T>
inline double edge_norm(const StepKernelT<T>& f) {
    double s = 0.0;
    for (const T& v : f.values) s += detail::abs_entry(v);
    return s / double(f.values.size());
}

// Norm for complex kernels on a mirror-free reflection (hyper)graph: the
// integrand conjugates the factor of every edge whose chamber has odd
// length, via the edge <-> group element bijection.  The integral is
// provably real; a residue above 1e-9 means the structure is broken.
inline double complex_graph_norm(const ReflectionHypergraph& rg,
                                 const ComplexKernel& f) {
    if (!rg.common_generators().empty())
        throw NotStableFamily(
            "complex norm needs an empty intersection of the generator sets");
    const Hypergraph& h = rg.graph();
    const CoxeterGroup& g = rg.group();
    std::vector<int> hits(h.edges.size(), 0);
    ColoredFamilyT<std::complex<double>> fam;
    fam.kernels = {f, conj_kernel(f)};
    fam.coloring.assign(h.edges.size(), 0);
    for (std::int32_t w = 0; w < static_cast<std::int32_t>(g.order()); ++w) {
        std::int32_t e = rg.edge_of_element(w);
        ++hits[e];
        fam.coloring[e] = g.length(w) % 2;
    }
    for (int c : hits)
        if (c != 1) throw Error("edge/element correspondence is not 1:1");
    std::complex<double> t = colored_density_brute(h, fam);
    if (std::abs(t.imag()) >= 1e-9)
        throw ImaginaryResidue("imaginary residue " +
                               std::to_string(t.imag()));
    return std::pow(std::abs(t.real()), 1.0 / double(h.edges.size()));
}

// ---------------------------------------------------------------------------
// Cut norms

// sup over u,v:[0,1] -> [-1,1] of |integral of f(x,y)u(x)v(y)|; bilinearity
// puts the optimum at sign vectors, so enumerate u and read off v.
inline double cut_norm_exact(const StepKernel& f) {
    if (f.arity != 2) throw ParseError("cut norm is defined for arity 2");
    if (f.n > 16) throw ResolutionCap("exact cut norm needs n <= 16");
    int n = f.n;
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double val = 0.0;
        for (int j = 0; j < n; ++j) {
            double col = 0.0;
            for (int i = 0; i < n; ++i)
                col += (mask >> i & 1 ? 1.0 : -1.0) * f.at2(i, j);
            val += std::abs(col);
        }
        best = std::max(best, val);
    }
    return best / (double(n) * n);
}

enum class CutNormMode { exact, ascent };

// sup of integral of f(x) * prod_i u_i(x restricted to M_i) over sign-valued
// u_i.  Exact mode enumerates every u_i but the widest, which is optimized
// in closed form; ascent mode is a multistart coordinate ascent and only a
// lower bound.
inline double hypergraph_cut_norm(const StepKernel& f,
                                  std::vector<std::vector<int>> M,
                                  CutNormMode mode, std::uint64_t seed = 0,
                                  int multistarts = 32) {
    if (M.empty()) throw ParseError("cut norm needs at least one index set");
    for (auto& part : M) {
        std::sort(part.begin(), part.end());
        if (part.empty() ||
            std::adjacent_find(part.begin(), part.end()) != part.end())
            throw ParseError("index sets must be non-empty and duplicate-free");
        if (part.front() < 0 || part.back() >= f.arity)
            throw ParseError("index set out of range");
    }
    int n = f.n, m = (int)M.size();
    std::size_t total = f.values.size();
    if (double(total) > 1e8)
        throw WorkCapExceeded("cut norm enumeration needs n^k <= 1e8");

    std::vector<std::size_t> cells(m);
    for (int i = 0; i < m; ++i)
        cells[i] = (std::size_t)std::llround(std::pow(double(n), M[i].size()));

    // cell index of x under each M_i, tabulated once
    std::vector<std::vector<int>> cellidx(m, std::vector<int>(total));
    std::vector<int> coord(f.arity, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int i = f.arity - 1; i >= 0; --i) {
            coord[i] = int(rest % n);
            rest /= n;
        }
        for (int i = 0; i < m; ++i) {
            int c = 0;
            for (int axis : M[i]) c = c * n + coord[axis];
            cellidx[i][idx] = c;
        }
    }

    if (mode == CutNormMode::exact) {
        std::size_t cell_sum = 0;
        for (std::size_t c : cells) cell_sum += c;
        if (cell_sum > 24)
            throw ResolutionCap("exact cut norm needs at most 24 cells");
        // optimize the widest factor in closed form, enumerate the rest
        int last = int(std::max_element(cells.begin(), cells.end()) -
                       cells.begin());
        std::vector<int> outer;
        std::size_t outer_bits = 0;
        for (int i = 0; i < m; ++i)
            if (i != last) {
                outer.push_back(i);
                outer_bits += cells[i];
            }
        if ((double)(1ULL << outer_bits) * double(total) > 2e8)
            throw WorkCapExceeded("exact cut norm enumeration too large");
        std::vector<std::size_t> offset(outer.size(), 0);
        for (std::size_t i = 1; i < outer.size(); ++i)
            offset[i] = offset[i - 1] + cells[outer[i - 1]];
        double best = 0.0;
        std::vector<double> acc(cells[last]);
        for (std::uint64_t pat = 0; pat < (1ULL << outer_bits); ++pat) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::size_t idx = 0; idx < total; ++idx) {
                double s = f.values[idx];
                for (std::size_t i = 0; i < outer.size(); ++i)
                    if (!(pat >> (offset[i] + cellidx[outer[i]][idx]) & 1))
                        s = -s;
                acc[cellidx[last][idx]] += s;
            }
            double val = 0.0;
            for (double a : acc) val += std::abs(a);
            best = std::max(best, val);
        }
        return best / double(total);
    }

    // coordinate ascent: each pass re-optimizes one u_i exactly; the value
    // never decreases, so every start reaches a fixed point
    double best = 0.0;
    for (int s = 0; s < multistarts; ++s) {
        Rng rng(derive_seed(seed, (std::uint64_t)s));
        std::vector<std::vector<double>> u(m);
        for (int i = 0; i < m; ++i) {
            u[i].resize(cells[i]);
            for (auto& x : u[i]) x = rng.next_u64() & 1 ? 1.0 : -1.0;
        }
        std::vector<double> partial(total);
        for (int sweep = 0; sweep < 500; ++sweep) {
            bool changed = false;
            for (int i = 0; i < m; ++i) {
                std::vector<double> t(cells[i], 0.0);
                for (std::size_t idx = 0; idx < total; ++idx) {
                    double p = f.values[idx];
                    for (int j = 0; j < m; ++j)
                        if (j != i) p *= u[j][cellidx[j][idx]];
                    t[cellidx[i][idx]] += p;
                }
                for (std::size_t c = 0; c < cells[i]; ++c) {
                    double want = t[c] >= 0 ? 1.0 : -1.0;
                    if (u[i][c] != want) {
                        u[i][c] = want;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        double val = 0.0;
        for (std::size_t idx = 0; idx < total; ++idx) {
            double p = f.values[idx];
            for (int j = 0; j < m; ++j) p *= u[j][cellidx[j][idx]];
            val += p;
        }
        best = std::max(best, val / double(total));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Inequality checks

// rainbow bound: the colored density against the product of one norm factor
// per edge.  abs mode takes absolute values first (the norm variant that is
// a genuine norm); plain mode states the semi-norm variant.
inline CheckReport check_holder(const Hypergraph& h, const ColoredFamily& fam,
                                bool abs_mode, double tol = 1e-12) {
    detail::validate_family(h, fam);
    CheckReport r;
    r.name = abs_mode ? "holder" : "holder_norming";
    r.tol = tol;
    ColoredFamily use = fam;
    if (abs_mode)
        for (auto& f : use.kernels) f = abs_kernel(f);
    r.lhs = colored_density(h, use);
    std::vector<double> norm(use.kernels.size(), -1.0);
    r.rhs = 1.0;
    for (int c : use.coloring) {
        if (norm[c] < 0)
            norm[c] = abs_mode ? abs_graph_norm(h, use.kernels[c])
                               : graph_norm(h, use.kernels[c]);
        r.rhs *= norm[c];
    }
    r.meta["colors"] = std::to_string(fam.kernels.size());
    return r;
}

inline CheckReport check_sidorenko(const Hypergraph& h, const StepKernel& f,
                                   double tol = 1e-12) {
    CheckReport r;
    r.name = "sidorenko";
    r.tol = tol;
    r.lhs = edge_norm(f);
    r.rhs = abs_graph_norm(h, f);
    return r;
}

// dominating graph on the right; the claim is |f|-norm monotonicity
inline CheckReport check_domination(const Hypergraph& hbig,
                                    const Hypergraph& hsmall,
                                    const StepKernel& f, double tol = 1e-12) {
    if (!hbig.edges.empty() && !hsmall.edges.empty() &&
        hbig.arity() != hsmall.arity())
        throw ParseError("arity mismatch between compared graphs");
    CheckReport r;
    r.name = "domination";
    r.tol = tol;
    r.lhs = abs_graph_norm(hsmall, f);
    r.rhs = abs_graph_norm(hbig, f);
    return r;
}

inline CheckReport check_triangle(const Hypergraph& h, const StepKernel& f,
                                  const StepKernel& g, double tol = 1e-12) {
    CheckReport r;
    r.name = "triangle";
    r.tol = tol;
    r.lhs = abs_graph_norm(h, add_kernels(f, g));
    r.rhs = abs_graph_norm(h, f) + abs_graph_norm(h, g);
    return r;
}

// two-sided bracket of the cut norm by the 4-cycle norm; lhs is the largest
// violation of either side, rhs is zero
inline CheckReport check_cutnorm_sandwich(const StepKernel& f,
                                          double tol = 1e-12) {
    if (f.bound > 1.0 + 1e-12)
        throw ParseError("the sandwich needs |f| <= 1");
    static const Hypergraph c4 =
        Hypergraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    double c = graph_norm(c4, f);
    double q = cut_norm_exact(f);
    CheckReport r;
    r.name = "cutnorm_sandwich";
    r.tol = tol;
    r.lhs = std::max(c * c * c * c - q, q - c);
    r.rhs = 0.0;
    r.meta["cycle_norm"] = std::to_string(c);
    r.meta["cut_norm"] = std::to_string(q);
    return r;
}

// ---------------------------------------------------------------------------
// Tree gluings

// tree decomposition whose bags each induce a copy of the template and whose
// adjacent bags are matched by an isomorphism fixing their intersection
struct NDecomposition {
    Hypergraph pattern;                          // the template N
    std::vector<std::vector<int>> bags;          // vertex subsets of H
    std::vector<std::pair<int, int>> tree_edges; // indices into bags
};

struct DecompositionCheck {
    bool valid = false;
    std::vector<std::string> violations;
    // per tree edge: the matching found between the two bags, as
    // (vertex of X, image in Y) pairs on original labels
    std::vector<std::vector<std::pair<int, int>>> witnesses;
};

inline DecompositionCheck validate_n_decomposition(const Hypergraph& h,
                                                   const NDecomposition& dec) {
    DecompositionCheck out;
    auto fail = [&](std::string msg) { out.violations.push_back(std::move(msg)); };

    if (dec.bags.empty()) {
        fail("no bags");
        return out;
    }
    std::vector<std::vector<int>> bags = dec.bags;
    for (auto& bag : bags) {
        std::sort(bag.begin(), bag.end());
        bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
        for (int v : bag)
            if (v < 0 || v >= h.n) fail("bag vertex out of range");
    }
    if (!out.violations.empty()) return out;

    // coverage of vertices and edges
    std::vector<char> covered(h.n, 0);
    for (const auto& bag : bags)
        for (int v : bag) covered[v] = 1;
    for (int v = 0; v < h.n; ++v)
        if (!covered[v]) fail("vertex " + std::to_string(v) + " in no bag");
    for (const auto& e : h.edges) {
        bool inside = false;
        for (const auto& bag : bags) {
            bool all = true;
            for (int v : e) all &= std::binary_search(bag.begin(), bag.end(), v);
            if (all) {
                inside = true;
                break;
            }
        }
        if (!inside) fail("an edge lies inside no bag");
    }

    // the bag graph must be a tree
    int nb = (int)bags.size();
    if ((int)dec.tree_edges.size() != nb - 1)
        fail("a tree on " + std::to_string(nb) + " bags needs " +
             std::to_string(nb - 1) + " edges");
    std::vector<std::vector<int>> adj(nb);
    for (auto [x, y] : dec.tree_edges) {
        if (x < 0 || x >= nb || y < 0 || y >= nb || x == y) {
            fail("bad tree edge");
            return out;
        }
        adj[x].push_back(y);
        adj[y].push_back(x);
    }
    {
        std::vector<char> seen(nb, 0);
        std::vector<int> queue = {0};
        seen[0] = 1;
        for (std::size_t qh = 0; qh < queue.size(); ++qh)
            for (int u : adj[queue[qh]])
                if (!seen[u]) {
                    seen[u] = 1;
                    queue.push_back(u);
                }
        if (std::count(seen.begin(), seen.end(), 1) != nb)
            fail("the bag graph is disconnected");
    }

    // running intersection: the bags holding any one vertex form a subtree
    for (int v = 0; v < h.n; ++v) {
        std::vector<int> holders;
        for (int b = 0; b < nb; ++b)
            if (std::binary_search(bags[b].begin(), bags[b].end(), v))
                holders.push_back(b);
        if (holders.empty()) continue;
        std::vector<char> seen(nb, 0);
        std::vector<int> queue = {holders[0]};
        seen[holders[0]] = 1;
        for (std::size_t qh = 0; qh < queue.size(); ++qh)
            for (int u : adj[queue[qh]])
                if (!seen[u] &&
                    std::binary_search(bags[u].begin(), bags[u].end(), v)) {
                    seen[u] = 1;
                    queue.push_back(u);
                }
        for (int b : holders)
            if (!seen[b])
                fail("bags holding vertex " + std::to_string(v) +
                     " are not connected in the tree");
    }

    // each bag induces a copy of the template
    for (int b = 0; b < nb; ++b) {
        Hypergraph sub = induced_subgraph(h, bags[b]);
        if (!hypergraph_isomorphic(sub, dec.pattern))
            fail("bag " + std::to_string(b) +
                 " does not induce the template graph");
    }

    // adjacent bags are matched by an isomorphism fixing the overlap
    for (auto [x, y] : dec.tree_edges) {
        Hypergraph subx = induced_subgraph(h, bags[x]);
        Hypergraph suby = induced_subgraph(h, bags[y]);
        std::vector<std::pair<int, int>> pinned;
        for (std::size_t i = 0; i < bags[x].size(); ++i) {
            auto it = std::lower_bound(bags[y].begin(), bags[y].end(),
                                       bags[x][i]);
            if (it != bags[y].end() && *it == bags[x][i])
                pinned.emplace_back(int(i), int(it - bags[y].begin()));
        }
        auto iso = hypergraph_isomorphic(subx, suby, pinned);
        if (!iso) {
            fail("no overlap-fixing isomorphism between bags " +
                 std::to_string(x) + " and " + std::to_string(y));
            continue;
        }
        std::vector<std::pair<int, int>> wit;
        for (std::size_t i = 0; i < bags[x].size(); ++i)
            wit.emplace_back(bags[x][i], bags[y][(*iso)[i]]);
        out.witnesses.push_back(std::move(wit));
    }

    out.valid = out.violations.empty();
    return out;
}

// the gluing bound: the whole graph's density dominates the template
// density raised to the edge ratio, and in turn the single-edge power
inline CheckReport check_tree_gluing(const Hypergraph& h,
                                     const NDecomposition& dec,
                                     const StepKernel& f, double tol = 1e-12) {
    auto chk = validate_n_decomposition(h, dec);
    if (!chk.valid) {
        std::string msg = "invalid decomposition:";
        for (const auto& v : chk.violations) msg += " " + v;
        throw CertificateInvalid(msg);
    }
    StepKernel a = abs_kernel(f);
    double tn = density(dec.pattern, a);
    double th = density(h, a);
    double ratio = double(h.edges.size()) / double(dec.pattern.edges.size());
    double n_bound = std::pow(tn, ratio);
    double edge_bound = std::pow(edge_norm(f), double(h.edges.size()));
    CheckReport r;
    r.name = "tree_gluing";
    r.tol = tol;
    r.lhs = std::max(n_bound, edge_bound);
    r.rhs = th;
    r.meta["template_bound"] = std::to_string(n_bound);
    r.meta["edge_bound"] = std::to_string(edge_bound);
    r.meta["bags"] = std::to_string(dec.bags.size());
    return r;
}

}  // namespace coxnorm
