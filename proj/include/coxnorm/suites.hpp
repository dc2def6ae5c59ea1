#pragma once

// Fixture graphs used across the test suite plus the randomized inequality
// suites behind the command-line `verify` command.  Every suite is
// deterministic: trial i draws from derive_seed(master, i) regardless of
// how many worker threads run.

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "coxnorm/coxeter.hpp"
#include "coxnorm/kernels.hpp"
#include "coxnorm/refgraph.hpp"

namespace coxnorm {

// ---------------------------------------------------------------------------
// Fixtures

inline Hypergraph path_graph(int nverts) {
    std::vector<std::vector<int>> edges;
    for (int i = 0; i + 1 < nverts; ++i) edges.push_back({i, i + 1});
    return Hypergraph::from_edges(nverts, std::move(edges));
}

inline Hypergraph cycle_graph(int nverts) {
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < nverts; ++i) edges.push_back({i, (i + 1) % nverts});
    return Hypergraph::from_edges(nverts, std::move(edges));
}

// 1-subdivision of the complete graph: branch vertices 0..base-1, one
// midpoint per pair in lexicographic order
inline Hypergraph subdivision_of_complete(int base) {
    std::vector<std::vector<int>> edges;
    int mid = base;
    for (int i = 0; i < base; ++i)
        for (int j = i + 1; j < base; ++j) {
            edges.push_back({i, mid});
            edges.push_back({j, mid});
            ++mid;
        }
    return Hypergraph::from_edges(mid, std::move(edges));
}

struct GluedGraph {
    Hypergraph graph;
    NDecomposition dec;
};

// two subdivided tetrahedra sharing an induced hexagon: vertices 0..5 walk
// the shared cycle (branch, midpoint, branch, ...), 6..9 and 10..13 are the
// private apex + midpoints of the two copies
inline GluedGraph glued_subdivided_k4() {
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < 6; ++i) edges.push_back({i, (i + 1) % 6});
    for (int copy = 0; copy < 2; ++copy) {
        int apex = copy == 0 ? 6 : 10;
        int m = apex + 1;
        for (int branch : {0, 2, 4}) {
            edges.push_back({branch, m});
            edges.push_back({m, apex});
            ++m;
        }
    }
    GluedGraph out;
    out.graph = Hypergraph::from_edges(14, std::move(edges));
    out.dec.pattern = subdivision_of_complete(4);
    out.dec.bags = {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9},
                    {0, 1, 2, 3, 4, 5, 10, 11, 12, 13}};
    out.dec.tree_edges = {{0, 1}};
    return out;
}

// faces of the 3-dimensional octahedron: X0,X1,Y0,Y1,Z0,Z1 with every
// axis-transversal triple an edge
inline Hypergraph octahedron_3graph() {
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) edges.push_back({i, 2 + j, 4 + k});
    return Hypergraph::from_edges(6, std::move(edges));
}

// the relaxation splitting each X ray into quadrants X_ij (first index tied
// to the Y choice); dominated by the octahedron norm
inline Hypergraph split_octahedron_3graph() {
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                edges.push_back({i * 2 + j, 4 + i, 6 + k});
    return Hypergraph::from_edges(8, std::move(edges));
}

// the classical non-Sidorenko triple system on {a,b,c,x,y,z}: its
// {x,a}-fixing involution must NOT count as a cut involution
inline Hypergraph tripod_3graph() {
    return Hypergraph::from_edges(6, {{3, 1, 2}, {4, 2, 0}, {5, 0, 1}});
}

// the 4-cycle as a reflection graph of the order-4 dihedral group; the only
// preset-sized graph whose complex norm is exercised at every resolution
inline ReflectionHypergraph c4_reflection_graph() {
    CoxeterSpec s = CoxeterSpec::parse("I2:2");
    return ReflectionHypergraph::build(CoxeterGroup::build(s), {{0}, {1}});
}

// ---------------------------------------------------------------------------
// Suites

struct SuiteConfig {
    int trials = 100;     // per graph (or per pair) in the suite
    int n = 3;            // kernel resolution
    std::uint64_t seed = 0;
    double tol = 1e-12;
    int jobs = 1;
    std::string preset;   // restrict preset-driven suites to one name
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "holder",   "sidorenko",   "triangle", "domination",
        "sandwich", "tree-gluing", "complex"};
    return names;
}

namespace detail {

template <typename Fn>
inline std::vector<CheckReport> parallel_reports(int count, int jobs,
                                                 Fn&& make) {
    std::vector<CheckReport> out(count);
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) out[i] = make(i);
        return out;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i; (i = next.fetch_add(1)) < count;) out[i] = make(i);
    };
    std::vector<std::thread> pool;
    int workers = std::min(jobs, count);
    for (int j = 0; j < workers; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

struct SuiteGraph {
    std::string name;
    Hypergraph graph;
    bool stable = false;  // mirror-free family: the norming (non-abs) cases
};

// presets cheap enough for thousand-trial property runs; the flag 3-graph
// needs seconds per density and is exercised separately at low counts
inline std::vector<SuiteGraph> suite_graphs(const std::string& only) {
    static const char* defaults[] = {
        "c6",          "subdivided_k4",
        "q3_hypercube", "k1_4",
        "octahedron_subdivision", "k22_replacement_octahedron",
        "gowers_octahedron:3",    "m_k:3"};
    std::vector<std::string> names;
    if (only.empty())
        names.assign(std::begin(defaults), std::end(defaults));
    else
        names.push_back(only);
    std::vector<SuiteGraph> out;
    for (const auto& nm : names) {
        ReflectionHypergraph rg = preset(nm);
        out.push_back({nm, rg.graph(), rg.common_generators().empty()});
    }
    return out;
}

inline ColoredFamily random_family(const Hypergraph& h, int n, Rng& rng,
                                   bool nonneg) {
    ColoredFamily fam;
    int m = 1 + int(rng.below(4));
    double lo = nonneg ? 0.0 : -1.0;
    for (int c = 0; c < m; ++c) {
        if (h.arity() == 2)
            fam.kernels.push_back(random_symmetric_kernel(n, rng, lo, 1.0));
        else
            fam.kernels.push_back(random_kernel(h.arity(), n, rng, lo, 1.0));
    }
    for (std::size_t e = 0; e < h.edges.size(); ++e)
        fam.coloring.push_back(int(rng.below(m)));
    return fam;
}

inline StepKernel random_graph_kernel(const Hypergraph& h, int n, Rng& rng,
                                      bool nonneg) {
    double lo = nonneg ? 0.0 : -1.0;
    return h.arity() == 2 ? random_symmetric_kernel(n, rng, lo, 1.0)
                          : random_kernel(h.arity(), n, rng, lo, 1.0);
}

inline std::vector<CheckReport> suite_holder(const SuiteConfig& cfg) {
    auto graphs = suite_graphs(cfg.preset);
    struct Job {
        const SuiteGraph* g;
        bool abs;
        int trial;
    };
    std::vector<Job> jobs;
    for (const auto& g : graphs)
        for (int t = 0; t < cfg.trials; ++t) {
            jobs.push_back({&g, true, t});
            if (g.stable) jobs.push_back({&g, false, t});
        }
    return parallel_reports(int(jobs.size()), cfg.jobs, [&](int i) {
        const Job& job = jobs[i];
        std::uint64_t seed = derive_seed(cfg.seed, (std::uint64_t)i);
        Rng rng(seed);
        auto fam = random_family(job.g->graph, cfg.n, rng, job.abs);
        CheckReport r = check_holder(job.g->graph, fam, job.abs, cfg.tol);
        r.seed = seed;
        r.meta["graph"] = job.g->name;
        r.meta["trial"] = std::to_string(job.trial);
        return r;
    });
}

inline std::vector<CheckReport> suite_sidorenko(const SuiteConfig& cfg) {
    auto graphs = suite_graphs(cfg.preset);
    int per = cfg.trials;
    return parallel_reports(int(graphs.size()) * per, cfg.jobs, [&](int i) {
        const auto& g = graphs[i / per];
        std::uint64_t seed = derive_seed(cfg.seed, (std::uint64_t)i);
        Rng rng(seed);
        auto f = random_graph_kernel(g.graph, cfg.n, rng, true);
        CheckReport r = check_sidorenko(g.graph, f, cfg.tol);
        r.seed = seed;
        r.meta["graph"] = g.name;
        r.meta["trial"] = std::to_string(i % per);
        return r;
    });
}

inline std::vector<CheckReport> suite_triangle(const SuiteConfig& cfg) {
    auto graphs = suite_graphs(cfg.preset);
    int per = cfg.trials;
    return parallel_reports(int(graphs.size()) * per, cfg.jobs, [&](int i) {
        const auto& g = graphs[i / per];
        std::uint64_t seed = derive_seed(cfg.seed, (std::uint64_t)i);
        Rng rng(seed);
        auto f = random_graph_kernel(g.graph, cfg.n, rng, false);
        auto gg = random_graph_kernel(g.graph, cfg.n, rng, false);
        CheckReport r = check_triangle(g.graph, f, gg, cfg.tol);
        r.seed = seed;
        r.meta["graph"] = g.name;
        r.meta["trial"] = std::to_string(i % per);
        return r;
    });
}

inline std::vector<CheckReport> suite_domination(const SuiteConfig& cfg) {
    struct Pair {
        std::string name;
        Hypergraph big, small;
    };
    std::vector<Pair> pairs = {
        {"c4>p3", cycle_graph(4), path_graph(3)},
        {"c6>p4", cycle_graph(6), path_graph(4)},
        {"octahedron>split", octahedron_3graph(), split_octahedron_3graph()}};
    int per = cfg.trials;
    return parallel_reports(int(pairs.size()) * per, cfg.jobs, [&](int i) {
        const auto& p = pairs[i / per];
        std::uint64_t seed = derive_seed(cfg.seed, (std::uint64_t)i);
        Rng rng(seed);
        auto f = random_graph_kernel(p.big, cfg.n, rng, false);
        CheckReport r = check_domination(p.big, p.small, f, cfg.tol);
        r.seed = seed;
        r.meta["pair"] = p.name;
        r.meta["trial"] = std::to_string(i % per);
        return r;
    });
}

inline std::vector<CheckReport> suite_sandwich(const SuiteConfig& cfg) {
    return parallel_reports(cfg.trials, cfg.jobs, [&](int i) {
        std::uint64_t seed = derive_seed(cfg.seed, (std::uint64_t)i);
        Rng rng(seed);
        auto f = random_symmetric_kernel(cfg.n, rng, -1.0, 1.0);
        CheckReport r = check_cutnorm_sandwich(f, cfg.tol);
        r.seed = seed;
        r.meta["trial"] = std::to_string(i);
        return r;
    });
}

inline std::vector<CheckReport> suite_tree_gluing(const SuiteConfig& cfg) {
    GluedGraph fixture = glued_subdivided_k4();
    return parallel_reports(cfg.trials, cfg.jobs, [&](int i) {
        std::uint64_t seed = derive_seed(cfg.seed, (std::uint64_t)i);
        Rng rng(seed);
        auto f = random_symmetric_kernel(cfg.n, rng, 0.0, 1.0);
        CheckReport r = check_tree_gluing(fixture.graph, fixture.dec, f,
                                          cfg.tol);
        r.seed = seed;
        r.meta["trial"] = std::to_string(i);
        return r;
    });
}

inline std::vector<CheckReport> suite_complex(const SuiteConfig& cfg) {
    std::vector<std::pair<std::string, ReflectionHypergraph>> graphs;
    graphs.emplace_back("c4", c4_reflection_graph());
    graphs.emplace_back("gowers_octahedron:3", preset("gowers_octahedron:3"));
    int per = cfg.trials;
    return parallel_reports(int(graphs.size()) * per, cfg.jobs, [&](int i) {
        const auto& [name, rg] = graphs[i / per];
        std::uint64_t seed = derive_seed(cfg.seed, (std::uint64_t)i);
        Rng rng(seed);
        CheckReport r;
        r.name = "complex";
        r.tol = cfg.tol;
        r.seed = seed;
        r.meta["graph"] = name;
        r.meta["trial"] = std::to_string(i % per);
        int arity = rg.graph().arity();
        try {
            auto f = random_complex_kernel(arity, cfg.n, rng, 1.0);
            r.meta["value"] = std::to_string(complex_graph_norm(rg, f));
            // a real kernel must reproduce the real-valued norm exactly
            auto g = random_graph_kernel(rg.graph(), cfg.n, rng, false);
            r.lhs = std::abs(complex_graph_norm(rg, complexify(g)) -
                             graph_norm(rg.graph(), g));
            r.rhs = 0.0;
        } catch (const ImaginaryResidue& e) {
            r.lhs = 1.0;
            r.rhs = 0.0;
            r.meta["violation"] = e.what();
        }
        return r;
    });
}

}  // namespace detail

inline std::vector<CheckReport> run_suite(const std::string& name,
                                          const SuiteConfig& cfg) {
    if (cfg.trials < 0) throw ParseError("trials must be non-negative");
    if (cfg.trials == 0) return {};
    if (name == "holder") return detail::suite_holder(cfg);
    if (name == "sidorenko") return detail::suite_sidorenko(cfg);
    if (name == "triangle") return detail::suite_triangle(cfg);
    if (name == "domination") return detail::suite_domination(cfg);
    if (name == "sandwich") return detail::suite_sandwich(cfg);
    if (name == "tree-gluing") return detail::suite_tree_gluing(cfg);
    if (name == "complex") return detail::suite_complex(cfg);
    throw ParseError("no suite named '" + name + "'");
}

}  // namespace coxnorm
