#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "coxnorm/percolation.hpp"
#include "coxnorm/refgraph.hpp"
#include "coxnorm/rng.hpp"

using namespace coxnorm;

namespace {

ElementSet whole_group(const CoxeterGroup& g) {
    ElementSet all(g.order());
    for (std::size_t i = 0; i < g.order(); ++i) all[i] = (std::int32_t)i;
    return all;
}

// downward closure under length-decreasing simple left-multiplications
ElementSet close_downward(const CoxeterGroup& g, ElementSet K) {
    std::set<std::int32_t> s(K.begin(), K.end());
    std::vector<std::int32_t> queue(K.begin(), K.end());
    while (!queue.empty()) {
        std::int32_t w = queue.back();
        queue.pop_back();
        for (int j = 0; j < g.rank(); ++j) {
            std::int32_t sw = g.mult(g.simple_id(j), w);
            if (g.length(sw) < g.length(w) && s.insert(sw).second)
                queue.push_back(sw);
        }
    }
    return {s.begin(), s.end()};
}

std::vector<std::int32_t> project_words_to_edges(
    const ReflectionHypergraph& rg, const ElementSet& K) {
    std::set<std::int32_t> J;
    for (std::int32_t w : K) J.insert(rg.edge_of_element(w));
    return {J.begin(), J.end()};
}

// Edges of a 2-regular 6-cycle in cyclic order, starting at the fundamental
// edge and leaving through its second endpoint.
std::vector<int> hexagon_cycle_edges(const ReflectionHypergraph& rg) {
    const Hypergraph& h = rg.graph();
    REQUIRE(h.edges.size() == 6);
    std::vector<std::vector<int>> at(h.n);
    for (int e = 0; e < 6; ++e)
        for (int v : h.edges[e]) at[v].push_back(e);
    std::vector<int> cycle = {rg.fundamental_edge()};
    int via = h.edges[cycle[0]][1];
    while (cycle.size() < 6) {
        int cur = cycle.back();
        int next = at[via][0] == cur ? at[via][1] : at[via][0];
        cycle.push_back(next);
        via = h.edges[next][0] == via ? h.edges[next][1] : h.edges[next][0];
    }
    return cycle;
}

std::vector<int> in_cycle_order(const std::vector<int>& coloring,
                                const std::vector<int>& cycle) {
    std::vector<int> out;
    for (int e : cycle) out.push_back(coloring[e]);
    return out;
}

}  // namespace

TEST_CASE("folding fixes the identity and copies across the mirror") {
    auto rg = preset("c6");
    const CoxeterGroup& g = rg.group();
    for (int j = 0; j < g.rank(); ++j) {
        ElementSet folded =
            fold_word_set(g, {0}, g.simple_id(j), FoldSign::plus);
        REQUIRE(folded == ElementSet{0, g.simple_id(j)});
    }
    ElementSet all = whole_group(g);
    for (std::int32_t t : g.reflection_ids()) {
        REQUIRE(fold_word_set(g, all, t, FoldSign::plus) == all);
        REQUIRE(fold_word_set(g, all, t, FoldSign::minus) == all);
    }
}

TEST_CASE("folding is idempotent") {
    Rng rng{derive_seed(17, 0)};
    for (const char* spec : {"I2:3", "A2", "B2", "A1xA1"}) {
        auto g = CoxeterGroup::build(CoxeterSpec::parse(spec));
        for (int trial = 0; trial < 10; ++trial) {
            ElementSet K;
            for (std::size_t w = 0; w < g->order(); ++w)
                if (rng.below(2)) K.push_back((std::int32_t)w);
            for (std::int32_t t : g->reflection_ids())
                for (FoldSign s : {FoldSign::plus, FoldSign::minus}) {
                    ElementSet once = fold_word_set(*g, K, t, s);
                    REQUIRE(fold_word_set(*g, once, t, s) == once);
                }
        }
    }
}

TEST_CASE("folding rejects bad inputs") {
    auto g = CoxeterGroup::build(CoxeterSpec::parse("A2"));
    REQUIRE_THROWS_AS(fold_word_set(*g, {0}, 0, FoldSign::plus),
                      NotAReflection);
    std::int32_t len2 = g->mult(g->simple_id(0), g->simple_id(1));
    REQUIRE_THROWS_AS(fold_word_set(*g, {0}, len2, FoldSign::plus),
                      NotAReflection);
    REQUIRE_THROWS_AS(fold_word_set(*g, {99}, g->simple_id(0),
                                    FoldSign::plus),
                      GroupMismatch);
}

TEST_CASE("downward-closed sets only grow under plus folds") {
    Rng rng{derive_seed(17, 1)};
    for (const char* spec : {"I2:5", "A3", "B3"}) {
        auto g = CoxeterGroup::build(CoxeterSpec::parse(spec));
        std::vector<ElementSet> stacks;
        for (int L = 0; L <= g->max_length(); ++L) {
            ElementSet u;
            for (std::size_t w = 0; w < g->order(); ++w)
                if (g->length((std::int32_t)w) <= L)
                    u.push_back((std::int32_t)w);
            stacks.push_back(u);
        }
        for (int trial = 0; trial < 5; ++trial) {
            ElementSet seed;
            for (std::size_t w = 0; w < g->order(); ++w)
                if (rng.below(4) == 0) seed.push_back((std::int32_t)w);
            stacks.push_back(close_downward(*g, seed));
        }
        for (const ElementSet& u : stacks)
            for (int j = 0; j < g->rank(); ++j) {
                ElementSet folded =
                    fold_word_set(*g, u, g->simple_id(j), FoldSign::plus);
                REQUIRE(std::includes(folded.begin(), folded.end(),
                                      u.begin(), u.end()));
            }
    }
}

TEST_CASE("canonical schedule folds every simple once per level") {
    auto c6 = preset("c6");
    PercolationCertificate cert = build_percolating_certificate(c6);
    REQUIRE(cert.steps.size() == 6);
    REQUIRE(cert.group_spec == "I2:3");
    REQUIRE(cert.initial_edge == c6.fundamental_edge());
    const CoxeterGroup& g = c6.group();
    for (std::size_t i = 0; i < cert.steps.size(); ++i) {
        REQUIRE(cert.steps[i].reflection == g.simple_id((int)i % g.rank()));
        REQUIRE(cert.steps[i].sign == FoldSign::plus);
    }

    auto sk4 = preset("subdivided_k4");
    REQUIRE(build_percolating_certificate(sk4).steps.size() == 18);

    auto g1 = CoxeterGroup::build(CoxeterSpec::parse("A1"));
    auto k2 = ReflectionHypergraph::build(g1, {{0}, {0}});
    REQUIRE(build_percolating_certificate(k2).steps.size() == 1);
}

TEST_CASE("canonical replay completes one length level per round") {
    for (const char* name : {"c6", "subdivided_k4", "q3_hypercube"}) {
        auto rg = preset(name);
        const CoxeterGroup& g = rg.group();
        PercolationCertificate cert = build_percolating_certificate(rg);
        ElementSet K = {0};
        for (std::size_t i = 0; i < cert.steps.size(); ++i) {
            K = fold_word_set(g, K, cert.steps[i].reflection,
                              cert.steps[i].sign);
            if ((i + 1) % g.rank() == 0) {
                int level = (int)(i + 1) / g.rank();
                for (std::size_t w = 0; w < g.order(); ++w)
                    if (g.length((std::int32_t)w) <= level)
                        REQUIRE(std::binary_search(K.begin(), K.end(),
                                                   (std::int32_t)w));
            }
        }
        REQUIRE(K == whole_group(g));
    }
}

TEST_CASE("edge replay matches word replay through the covering map") {
    for (const char* name :
         {"c6", "subdivided_k4", "q3_hypercube", "k1_4",
          "octahedron_subdivision", "k22_replacement_octahedron",
          "gowers_octahedron:2", "gowers_octahedron:3", "m_k:3",
          "simplex_incidence:3,0,1", "tetra_flag_3graph"}) {
        auto rg = preset(name);
        PercolationCertificate cert = build_percolating_certificate(rg);
        auto trace = project_certificate_to_edges(rg, cert);
        ElementSet K = {0};
        REQUIRE(trace[0] == project_words_to_edges(rg, K));
        for (std::size_t i = 0; i < cert.steps.size(); ++i) {
            K = fold_word_set(rg.group(), K, cert.steps[i].reflection,
                              cert.steps[i].sign);
            REQUIRE(trace[i + 1] == project_words_to_edges(rg, K));
        }
    }
}

TEST_CASE("certificate replay grows the fundamental edge to every edge") {
    for (const char* name :
         {"c6", "subdivided_k4", "q3_hypercube", "k1_4",
          "octahedron_subdivision", "k22_replacement_octahedron",
          "gowers_octahedron:3", "m_k:3", "simplex_incidence:3,0,1",
          "tetra_flag_3graph"}) {
        auto rg = preset(name);
        PercolationCertificate cert = build_percolating_certificate(rg);
        auto trace = project_certificate_to_edges(rg, cert);
        REQUIRE(trace.size() == cert.steps.size() + 1);
        REQUIRE(trace.front() ==
                std::vector<std::int32_t>{rg.fundamental_edge()});
        std::vector<std::int32_t> all(rg.edge_count());
        for (int e = 0; e < rg.edge_count(); ++e) all[e] = e;
        REQUIRE(trace.back() == all);
    }

    auto c6 = preset("c6");
    PercolationCertificate empty = build_percolating_certificate(c6);
    empty.steps.clear();
    auto trace = project_certificate_to_edges(c6, empty);
    REQUIRE(trace.size() == 1);
    REQUIRE(trace[0] == std::vector<std::int32_t>{c6.fundamental_edge()});
}

TEST_CASE("verification passes canonical certificates and labels stability") {
    for (const char* name :
         {"c6", "octahedron_subdivision", "k22_replacement_octahedron",
          "gowers_octahedron:3", "m_k:3", "tetra_flag_3graph"}) {
        auto rg = preset(name);
        PercolationCertificate cert = build_percolating_certificate(rg);
        REQUIRE(cert.stable);
        CheckReport rep = verify_percolation(rg, cert);
        REQUIRE(rep.pass());
        REQUIRE(rep.meta.at("reached") == "true");
        REQUIRE(rep.meta.at("edge_transitive") == "true");
        REQUIRE(rep.meta.at("annotation") == "norming");
    }
    for (const char* name : {"subdivided_k4", "q3_hypercube", "k1_4",
                               "simplex_incidence:3,0,1"}) {
        auto rg = preset(name);
        PercolationCertificate cert = build_percolating_certificate(rg);
        REQUIRE(!cert.stable);
        CheckReport rep = verify_percolation(rg, cert);
        REQUIRE(rep.pass());
        REQUIRE(rep.meta.at("annotation") == "weakly norming");
    }
}

TEST_CASE("verification reports the first corrupted step") {
    auto rg = preset("c6");
    PercolationCertificate cert = build_percolating_certificate(rg);

    PercolationCertificate bad = cert;
    bad.steps[2].reflection = 0;  // the identity is not a reflection
    bad.steps[4].reflection = 9999;
    CheckReport rep = verify_percolation(rg, bad);
    REQUIRE(!rep.pass());
    REQUIRE(rep.meta.at("first_violating_step") == "2");

    PercolationCertificate wrong_edge = cert;
    wrong_edge.initial_edge = 99;
    rep = verify_percolation(rg, wrong_edge);
    REQUIRE(!rep.pass());
    REQUIRE(rep.meta.at("violation") == "initial edge out of range");

    PercolationCertificate truncated = cert;
    truncated.steps.resize(2);
    rep = verify_percolation(rg, truncated);
    REQUIRE(!rep.pass());
    REQUIRE(rep.meta.count("missing_edges") == 1);

    auto k14 = preset("k1_4");
    PercolationCertificate lying = build_percolating_certificate(k14);
    lying.stable = true;
    rep = verify_percolation(k14, lying);
    REQUIRE(!rep.pass());
    REQUIRE(rep.meta.at("violation") == "stable claim not honest");
}

TEST_CASE("verification rejects certificates from another structure") {
    auto c6 = preset("c6");
    auto q3 = preset("q3_hypercube");
    PercolationCertificate cert = build_percolating_certificate(c6);
    REQUIRE_THROWS_AS(verify_percolation(q3, cert), GroupMismatch);
    REQUIRE_THROWS_AS(project_certificate_to_edges(q3, cert), GroupMismatch);

    // same group, different generator subsets
    auto sk4 = preset("subdivided_k4");
    auto tetra = preset("tetra_flag_3graph");
    PercolationCertificate sk4_cert = build_percolating_certificate(sk4);
    REQUIRE(sk4_cert.group_spec == "A3");
    REQUIRE_THROWS_AS(verify_percolation(tetra, sk4_cert), GroupMismatch);
}

TEST_CASE("hexagon tree doubles halves into monochromatic leaves") {
    auto rg = preset("c6");
    std::vector<int> cycle = hexagon_cycle_edges(rg);
    std::vector<CutInvolution> seq = rg.reflection_involutions();
    REQUIRE(seq.size() == 3);

    std::vector<int> root(6);
    for (int j = 0; j < 6; ++j) root[cycle[j]] = j + 1;
    CSTree tree = build_cs_tree(rg.graph(), seq, root);
    REQUIRE(tree.nodes.size() == 15);

    std::vector<std::vector<int>> want = {
        {1, 2, 3, 4, 5, 6},
        {1, 2, 3, 3, 2, 1}, {6, 5, 4, 4, 5, 6},
        {1, 1, 1, 2, 2, 1}, {2, 2, 3, 3, 3, 3},
        {6, 6, 6, 5, 5, 6}, {5, 5, 4, 4, 4, 4},
        {1, 1, 1, 1, 1, 1}, {2, 1, 1, 2, 2, 2},
        {2, 2, 2, 2, 3, 3}, {3, 3, 3, 3, 3, 3},
        {6, 6, 6, 6, 6, 6}, {5, 6, 6, 5, 5, 5},
        {5, 5, 5, 5, 4, 4}, {4, 4, 4, 4, 4, 4}};
    for (std::size_t i = 0; i < want.size(); ++i)
        REQUIRE(in_cycle_order(tree.nodes[i], cycle) == want[i]);

    auto leaves = tree.leaves();
    REQUIRE(leaves.size() == 8);
    for (std::size_t i = 0; i < 8; ++i)
        REQUIRE(in_cycle_order(leaves[i], cycle) == want[7 + i]);
}

TEST_CASE("tree construction basics and caps") {
    auto rg = preset("c6");
    std::vector<int> root = {1, 2, 3, 4, 5, 6};

    CSTree trivial = build_cs_tree(rg.graph(), {}, root);
    REQUIRE(trivial.nodes.size() == 1);
    REQUIRE(trivial.nodes[0] == root);

    // a constant coloring never changes, whatever the fold sequence
    PercolationCertificate cert = build_percolating_certificate(rg);
    std::vector<CutInvolution> seq;
    for (const FoldStep& st : cert.steps)
        seq.push_back(rg.induced_involution(rg.group().element(st.reflection)));
    CSTree mono = build_cs_tree(rg.graph(), seq, std::vector<int>(6, 7));
    for (const auto& node : mono.nodes)
        REQUIRE(node == std::vector<int>(6, 7));

    auto q3 = preset("q3_hypercube");
    PercolationCertificate big = build_percolating_certificate(q3);
    std::vector<CutInvolution> long_seq;
    for (const FoldStep& st : big.steps)
        long_seq.push_back(
            q3.induced_involution(q3.group().element(st.reflection)));
    REQUIRE(long_seq.size() == 18);
    std::vector<int> q3_root(q3.edge_count(), 1);
    REQUIRE_THROWS_AS(build_cs_tree(q3.graph(), long_seq, q3_root), DepthCap);
    REQUIRE_THROWS_AS(
        build_cs_tree(rg.graph(), seq, root, (int)seq.size() - 1), DepthCap);
    REQUIRE_THROWS_AS(build_cs_tree(rg.graph(), seq, {1, 2, 3}),
                      CertificateInvalid);
}

TEST_CASE("certificate branch walk lands on a monochromatic leaf") {
    for (const char* name : {"c6", "q3_hypercube", "tetra_flag_3graph"}) {
        auto rg = preset(name);
        PercolationCertificate cert = build_percolating_certificate(rg);
        std::vector<int> root(rg.edge_count());
        for (int e = 0; e < rg.edge_count(); ++e) root[e] = e + 1;
        LeafResult leaf = certificate_to_monochromatic_leaf(rg, cert, root);
        REQUIRE(leaf.branch ==
                std::string(cert.steps.size(), '+'));
        REQUIRE(leaf.coloring ==
                std::vector<int>(rg.edge_count(),
                                 root[cert.initial_edge]));
    }

    auto g1 = CoxeterGroup::build(CoxeterSpec::parse("A1"));
    auto k2 = ReflectionHypergraph::build(g1, {{0}, {0}});
    PercolationCertificate empty = build_percolating_certificate(k2);
    empty.steps.clear();
    LeafResult leaf = certificate_to_monochromatic_leaf(k2, empty, {42});
    REQUIRE(leaf.coloring == std::vector<int>{42});
    REQUIRE(leaf.branch.empty());

    auto c6 = preset("c6");
    PercolationCertificate bad = build_percolating_certificate(c6);
    bad.steps.resize(2);
    REQUIRE_THROWS_AS(
        certificate_to_monochromatic_leaf(c6, bad, {1, 2, 3, 4, 5, 6}),
        CertificateInvalid);
}

TEST_CASE("edge-set membership matches the branch walk at every prefix") {
    for (const char* name :
         {"c6", "gowers_octahedron:2", "gowers_octahedron:3", "m_k:3",
          "subdivided_k4", "q3_hypercube", "k1_4", "octahedron_subdivision",
          "simplex_incidence:3,0,1", "tetra_flag_3graph",
          "k22_replacement_octahedron"}) {
        auto rg = preset(name);
        REQUIRE(rg.group().order() <= 48);
        PercolationCertificate cert = build_percolating_certificate(rg);
        auto trace = project_certificate_to_edges(rg, cert);
        detail::FoldCache cache{&rg, {}};
        for (std::size_t p = 0; p <= cert.steps.size(); ++p) {
            std::vector<char> in(rg.edge_count(), 0);
            for (std::int32_t e : trace[p]) in[e] = 1;
            for (std::int32_t e = 0; e < rg.edge_count(); ++e) {
                std::int32_t x = e;
                for (std::size_t i = p; i-- > 0;)
                    x = cache.get(cert.steps[i].reflection)
                            .second.table(cert.steps[i].sign)[x];
                REQUIRE((x == cert.initial_edge) == (bool)in[e]);
            }
        }
    }
}

TEST_CASE("breadth-first search finds a three-step hexagon schedule") {
    auto c6 = preset("c6");
    PercolationCertificate cert = search_shorter_certificate(c6);
    REQUIRE(cert.steps.size() == 3);
    REQUIRE(cert.stable);
    CheckReport rep = verify_percolation(c6, cert);
    REQUIRE(rep.pass());
    REQUIRE(rep.meta.at("annotation") == "norming");

    auto c4 = preset("gowers_octahedron:2");
    REQUIRE(search_shorter_certificate(c4).steps.size() == 2);

    auto big = preset("simplex_incidence:4,0,1");
    REQUIRE_THROWS_AS(search_shorter_certificate(big), SearchCapExceeded);
    auto sk4 = preset("subdivided_k4");
    REQUIRE_THROWS_AS(search_shorter_certificate(sk4, 2), SearchCapExceeded);
}
