#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "coxnorm/kernels.hpp"
#include "coxnorm/suites.hpp"

using namespace coxnorm;

namespace {

// independent spectral oracle: the 2k-cycle norm of a symmetric kernel is
// the Schatten 2k-norm of the step operator f/n
double schatten_cycle_norm(const StepKernel& f, int len) {
    int n = f.n;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = f.at2(i, j) / n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double p = 1.0;
        for (int t = 0; t < len; ++t) p *= es.eigenvalues()[i];
        s += p;
    }
    return std::pow(s, 1.0 / len);
}

Hypergraph random_graph(Rng& rng) {
    int v = 2 + int(rng.below(7));
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < v; ++i)
        for (int j = i + 1; j < v; ++j)
            if (rng.unif() < 0.45) edges.push_back({i, j});
    if (edges.empty()) edges.push_back({0, 1});
    return Hypergraph::from_edges(v, std::move(edges));
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("kernel construction validates shape, entries, and symmetry") {
    REQUIRE_THROWS_AS(StepKernel::build(2, 2, {1.0, 2.0, 3.0}), ParseError);
    REQUIRE_THROWS_AS(StepKernel::build(0, 2, {}), ParseError);
    REQUIRE_THROWS_AS(
        StepKernel::build(2, 2, {1.0, 0.0, 0.0, std::nan("")}), ParseError);
    REQUIRE_THROWS_AS(
        StepKernel::build(2, 2, {1.0, 2.0, 3.0, 4.0}, true), ParseError);
    REQUIRE_THROWS_AS(
        StepKernel::build(3, 2, std::vector<double>(8, 0.0), true),
        ParseError);

    auto f = StepKernel::build(2, 2, {1.0, -3.0, -3.0, 2.0}, true);
    REQUIRE(f.bound == 3.0);
    REQUIRE(f.symmetric);
    REQUIRE(f.at2(0, 1) == -3.0);
    int x[2] = {1, 0};
    REQUIRE(f.at(x) == -3.0);
}

TEST_CASE("constant kernels integrate to powers of the constant") {
    auto c4 = cycle_graph(4);
    auto f = constant_kernel<double>(2, 3, 0.5);
    REQUIRE(density_brute(c4, f) == Catch::Approx(0.0625).margin(1e-15));
    REQUIRE(density_fast(c4, f) == Catch::Approx(0.0625).margin(1e-15));
    REQUIRE(graph_norm(c4, f) == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(abs_graph_norm(c4, f) == Catch::Approx(0.5).margin(1e-15));

    // all-ones colored family on a 3-uniform fixture
    auto h = octahedron_3graph();
    auto fam = monochromatic_family(h, constant_kernel<double>(3, 2, 1.0));
    REQUIRE(colored_density_brute(h, fam) == Catch::Approx(1.0).margin(0));
}

TEST_CASE("identity blocks on the 4-cycle give the frozen trace value") {
    auto c4 = cycle_graph(4);
    auto f = StepKernel::build(2, 2, {1.0, 0.0, 0.0, 1.0}, true);
    REQUIRE(density_brute(c4, f) == Catch::Approx(0.125).margin(1e-15));
    REQUIRE(density_fast(c4, f) == Catch::Approx(0.125).margin(1e-15));
}

TEST_CASE("density handles isolated vertices and edgeless graphs") {
    Rng rng(7);
    auto f = random_symmetric_kernel(3, rng, -1.0, 1.0);
    auto h = Hypergraph::from_edges(4, {{0, 1}});
    double mean = 0.0;
    for (double v : f.values) mean += v;
    mean /= 9.0;
    REQUIRE(density_brute(h, f) == Catch::Approx(mean).margin(1e-12));
    REQUIRE(density_fast(h, f) == Catch::Approx(mean).margin(1e-12));

    auto empty = Hypergraph::from_edges(3, {});
    ColoredFamily none;
    none.coloring.clear();
    REQUIRE(colored_density_brute(empty, none) == 1.0);
    REQUIRE(colored_density_fast(empty, none) == 1.0);
    REQUIRE_THROWS_AS(graph_norm(empty, f), ParseError);
}

TEST_CASE("family validation rejects malformed input") {
    auto c4 = cycle_graph(4);
    ColoredFamily fam;
    fam.kernels.push_back(constant_kernel<double>(2, 2, 1.0));
    fam.coloring = {0, 0, 0};  // one edge short
    REQUIRE_THROWS_AS(colored_density_brute(c4, fam), ParseError);
    fam.coloring = {0, 0, 0, 1};  // color out of range
    REQUIRE_THROWS_AS(colored_density_brute(c4, fam), ParseError);
    fam.coloring = {0, 0, 0, 0};
    fam.kernels.push_back(constant_kernel<double>(2, 3, 1.0));
    REQUIRE_THROWS_AS(colored_density_brute(c4, fam), ParseError);
    auto tri = octahedron_3graph();
    ColoredFamily bad;
    bad.kernels.push_back(constant_kernel<double>(2, 2, 1.0));
    bad.coloring.assign(tri.edges.size(), 0);
    REQUIRE_THROWS_AS(colored_density_brute(tri, bad), ParseError);
}

TEST_CASE("work caps guard the enumerations") {
    auto long_path = path_graph(30);
    auto fam = monochromatic_family(long_path,
                                    constant_kernel<double>(2, 3, 1.0));
    REQUIRE_THROWS_AS(colored_density_brute(long_path, fam), WorkCapExceeded);

    Rng rng(1);
    REQUIRE_THROWS_AS(cut_norm_exact(random_symmetric_kernel(17, rng, 0, 1)),
                      ResolutionCap);
    auto f3 = random_kernel(3, 4, rng, -1.0, 1.0);
    REQUIRE_THROWS_AS(
        hypergraph_cut_norm(f3, {{0, 1}, {1, 2}}, CutNormMode::exact),
        ResolutionCap);  // 16 + 16 sign cells is past the exact-mode cap
}

TEST_CASE("fast path equals brute force across random graphs and kernels") {
    Rng rng(2026);
    for (int trial = 0; trial < 500; ++trial) {
        auto h = random_graph(rng);
        int n = 1 + int(rng.below(4));
        if (rng.unif() < 0.5) {
            auto f = random_kernel(2, n, rng, -1.0, 1.0);
            double fast = density_fast(h, f);
            double brute = density_brute(h, f);
            REQUIRE(rel_err(fast, brute) < 1e-10);
        } else {
            ColoredFamily fam;
            int m = 1 + int(rng.below(3));
            for (int c = 0; c < m; ++c)
                fam.kernels.push_back(random_kernel(2, n, rng, -1.0, 1.0));
            for (std::size_t e = 0; e < h.edges.size(); ++e)
                fam.coloring.push_back(int(rng.below(m)));
            double fast = colored_density_fast(h, fam);
            double brute = colored_density_brute(h, fam);
            REQUIRE(rel_err(fast, brute) < 1e-10);
        }
    }
}

TEST_CASE("even cycle norms match the spectral oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_symmetric_kernel(5, rng, -1.0, 1.0);
        for (int len : {4, 6, 8}) {
            double got = graph_norm(cycle_graph(len), f);
            double want = schatten_cycle_norm(f, len);
            REQUIRE(std::abs(got - want) < 1e-9);
        }
    }
}

TEST_CASE("homogeneity and the power identity hold to rounding") {
    Rng rng(12);
    auto c6 = cycle_graph(6);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = random_symmetric_kernel(3, rng, -1.0, 1.0);
        for (double c : {-1.7, 0.3}) {
            double scaled = abs_graph_norm(c6, scale_kernel(f, c));
            REQUIRE(rel_err(scaled, std::abs(c) * abs_graph_norm(c6, f)) <
                    1e-12);
        }
        double norm = abs_graph_norm(c6, f);
        double power = 1.0;
        for (int i = 0; i < 6; ++i) power *= norm;
        REQUIRE(rel_err(power, density(c6, abs_kernel(f))) < 1e-12);
        REQUIRE(rel_err(std::pow(graph_norm(c6, f), 6.0),
                        std::abs(density(c6, f))) < 1e-12);
    }
}

TEST_CASE("tensor products multiply densities and norms") {
    Rng rng(13);
    auto c4 = cycle_graph(4);
    auto p3 = path_graph(3);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_symmetric_kernel(2, rng, -1.0, 1.0);
        auto g = random_symmetric_kernel(3, rng, -1.0, 1.0);
        auto t = tensor_kernel(f, g);
        REQUIRE(rel_err(density(c4, t), density(c4, f) * density(c4, g)) <
                1e-12);
        REQUIRE(rel_err(density(p3, t), density(p3, f) * density(p3, g)) <
                1e-12);
        REQUIRE(rel_err(graph_norm(c4, t),
                        graph_norm(c4, f) * graph_norm(c4, g)) < 1e-12);
    }
}

TEST_CASE("the absolute norm dominates the plain norm") {
    auto c6 = cycle_graph(6);
    auto checker = StepKernel::build(2, 2, {1.0, -1.0, -1.0, 1.0}, true);
    REQUIRE(abs_graph_norm(c6, checker) >= graph_norm(c6, checker) - 1e-12);
    Rng rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = random_symmetric_kernel(4, rng, -1.0, 1.0);
        REQUIRE(abs_graph_norm(c6, f) >= graph_norm(c6, f) - 1e-12);
    }
}

TEST_CASE("complex norms extend the real ones and stay real") {
    auto c4 = c4_reflection_graph();
    auto gow = preset("gowers_octahedron:3");
    Rng rng(15);

    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_symmetric_kernel(3, rng, -1.0, 1.0);
        REQUIRE(rel_err(complex_graph_norm(c4, complexify(f)),
                        graph_norm(c4.graph(), f)) < 1e-12);
        auto f3 = random_kernel(3, 2, rng, -1.0, 1.0);
        REQUIRE(rel_err(complex_graph_norm(gow, complexify(f3)),
                        graph_norm(gow.graph(), f3)) < 1e-12);
    }

    // purely imaginary constant: half the factors conjugate away the phase
    auto ci = constant_kernel<std::complex<double>>(2, 3, {0.0, 0.7});
    REQUIRE(complex_graph_norm(c4, ci) == Catch::Approx(0.7).margin(1e-12));
    auto ci3 = constant_kernel<std::complex<double>>(3, 2, {0.0, 0.7});
    REQUIRE(complex_graph_norm(gow, ci3) == Catch::Approx(0.7).margin(1e-12));

    // rank-1 unimodular phases cancel around the chamber pairing
    for (int n : {2, 5}) {
        std::vector<std::complex<double>> u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u[i] = std::polar(1.0, rng.unif(0.0, 6.28318));
            v[i] = std::polar(1.0, rng.unif(0.0, 6.28318));
        }
        std::vector<std::complex<double>> vals((std::size_t)n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                vals[(std::size_t)i * n + j] = u[i] * std::conj(v[j]);
        auto f = ComplexKernel::build(2, n, std::move(vals));
        REQUIRE(complex_graph_norm(c4, f) == Catch::Approx(1.0).margin(1e-12));
    }

    // a mirror shared by every generator set blocks the construction
    REQUIRE_THROWS_AS(complex_graph_norm(
                          preset("subdivided_k4"),
                          constant_kernel<std::complex<double>>(2, 2, 1.0)),
                      NotStableFamily);
}

TEST_CASE("exact cut norm closed forms and the double enumeration oracle") {
    REQUIRE(cut_norm_exact(constant_kernel<double>(2, 5, -0.4)) ==
            Catch::Approx(0.4).margin(1e-12));

    // rank-1 sign pattern scaled by a: the supremum is exactly a
    std::vector<double> u = {1, 1, -1}, v = {1, -1, -1};
    std::vector<double> vals(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) vals[i * 3 + j] = 0.37 * u[i] * v[j];
    REQUIRE(cut_norm_exact(StepKernel::build(2, 3, std::move(vals))) ==
            Catch::Approx(0.37).margin(1e-12));

    Rng rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = random_kernel(2, 6, rng, -1.0, 1.0);
        double got = cut_norm_exact(f);
        double oracle = 0.0;
        for (int mu = 0; mu < 64; ++mu)
            for (int mv = 0; mv < 64; ++mv) {
                double s = 0.0;
                for (int i = 0; i < 6; ++i)
                    for (int j = 0; j < 6; ++j)
                        s += (mu >> i & 1 ? 1 : -1) * (mv >> j & 1 ? 1 : -1) *
                             f.at2(i, j);
                oracle = std::max(oracle, std::abs(s) / 36.0);
            }
        REQUIRE(got == Catch::Approx(oracle).margin(1e-12));
    }
}

TEST_CASE("hypergraph cut norm: coincidence, constants, and ascent oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_kernel(2, 3, rng, -1.0, 1.0);
        double a = hypergraph_cut_norm(f, {{0}, {1}}, CutNormMode::exact);
        REQUIRE(a == Catch::Approx(cut_norm_exact(f)).margin(1e-12));
    }

    auto c = constant_kernel<double>(3, 2, -0.8);
    REQUIRE(hypergraph_cut_norm(c, {{0}, {1, 2}}, CutNormMode::exact) ==
            Catch::Approx(0.8).margin(1e-12));

    for (int trial = 0; trial < 20; ++trial) {
        auto f = random_kernel(3, 2, rng, -1.0, 1.0);
        for (auto M : {std::vector<std::vector<int>>{{0}, {1, 2}},
                       std::vector<std::vector<int>>{{0, 1}, {1, 2}}}) {
            double exact = hypergraph_cut_norm(f, M, CutNormMode::exact);
            double ascent = hypergraph_cut_norm(f, M, CutNormMode::ascent,
                                                derive_seed(17, trial));
            REQUIRE(ascent <= exact + 1e-12);
            REQUIRE(std::abs(ascent - exact) < 1e-9);
        }
    }

    REQUIRE_THROWS_AS(
        hypergraph_cut_norm(c, {{0, 3}}, CutNormMode::exact), ParseError);
    REQUIRE_THROWS_AS(hypergraph_cut_norm(c, {}, CutNormMode::exact),
                      ParseError);
}

TEST_CASE("holder reports: equal kernels tie, rainbow families pass") {
    auto c6 = cycle_graph(6);
    Rng rng(18);
    auto f = random_symmetric_kernel(3, rng, 0.0, 1.0);
    ColoredFamily same;
    same.kernels = {f, f};
    for (std::size_t e = 0; e < c6.edges.size(); ++e)
        same.coloring.push_back(int(e % 2));
    auto tied = check_holder(c6, same, true);
    REQUIRE(std::abs(tied.margin()) < 1e-12);
    REQUIRE(tied.pass());

    for (int trial = 0; trial < 25; ++trial) {
        ColoredFamily fam;
        for (int c = 0; c < 6; ++c)
            fam.kernels.push_back(random_symmetric_kernel(3, rng, 0.0, 1.0));
        fam.coloring = {0, 1, 2, 3, 4, 5};
        REQUIRE(check_holder(c6, fam, true).pass());
    }

    // norming-mode reports on a stable preset with signed kernels
    auto stable = preset("c6").graph();
    for (int trial = 0; trial < 25; ++trial) {
        ColoredFamily fam;
        for (int c = 0; c < 2; ++c)
            fam.kernels.push_back(random_symmetric_kernel(3, rng, -1.0, 1.0));
        for (std::size_t e = 0; e < stable.edges.size(); ++e)
            fam.coloring.push_back(int(rng.below(2)));
        REQUIRE(check_holder(stable, fam, false).pass());
    }
}

TEST_CASE("the signed product bound genuinely fails off the catalog") {
    // the 3-edge path admits no such semi-norm bound; this frozen family
    // violates it by a wide margin, so a vacuous pass would be a bug
    auto p4 = path_graph(4);
    Rng rng(derive_seed(777, 26));
    auto fam = detail::random_family(p4, 3, rng, false);
    auto rep = check_holder(p4, fam, false);
    REQUIRE_FALSE(rep.pass());
    REQUIRE(rep.margin() < -1e-3);
}

TEST_CASE("sidorenko, domination, and triangle fixtures") {
    Rng rng(19);
    auto c4 = cycle_graph(4);
    auto p3 = path_graph(3);

    auto flat = constant_kernel<double>(2, 3, 0.6);
    REQUIRE(std::abs(check_sidorenko(c4, flat).margin()) < 1e-12);

    for (int trial = 0; trial < 50; ++trial) {
        auto f = random_symmetric_kernel(3, rng, 0.0, 1.0);
        REQUIRE(check_sidorenko(c4, f).pass());
        REQUIRE(check_domination(c4, p3, f).pass());
    }

    auto oct = octahedron_3graph();
    auto split = split_octahedron_3graph();
    for (int trial = 0; trial < 50; ++trial) {
        auto f = random_kernel(3, 2, rng, -1.0, 1.0);
        REQUIRE(check_domination(oct, split, f).pass());
    }
    auto same = random_symmetric_kernel(3, rng, -1.0, 1.0);
    REQUIRE(std::abs(check_domination(c4, c4, same).margin()) < 1e-15);

    auto zero = constant_kernel<double>(2, 3, 0.0);
    auto f = random_symmetric_kernel(3, rng, -1.0, 1.0);
    REQUIRE(std::abs(check_triangle(c4, f, zero).margin()) < 1e-12);
    REQUIRE(std::abs(check_triangle(c4, f, f).margin()) < 1e-12);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_symmetric_kernel(3, rng, -1.0, 1.0);
        auto b = random_symmetric_kernel(3, rng, -1.0, 1.0);
        REQUIRE(check_triangle(c4, a, b).pass());
        REQUIRE(check_triangle(cycle_graph(6), a, b).pass());
    }
}

TEST_CASE("cut norm sandwich fixtures and random kernels") {
    auto one = constant_kernel<double>(2, 4, 1.0);
    auto r1 = check_cutnorm_sandwich(one);
    REQUIRE(r1.pass());
    REQUIRE(std::abs(r1.lhs) < 1e-12);
    auto zero = constant_kernel<double>(2, 4, 0.0);
    REQUIRE(check_cutnorm_sandwich(zero).pass());

    Rng rng(20);
    for (int trial = 0; trial < 50; ++trial) {
        auto f = random_symmetric_kernel(6, rng, -1.0, 1.0);
        REQUIRE(check_cutnorm_sandwich(f).pass());
    }
    REQUIRE_THROWS_AS(check_cutnorm_sandwich(constant_kernel<double>(2, 3, 2.0)),
                      ParseError);
}
