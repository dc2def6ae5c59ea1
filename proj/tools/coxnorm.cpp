// Command-line front door: build groups and reflection graphs, emit and
// verify folding certificates, and run the randomized inequality suites.
//
// Exit codes: 0 all checks passed, 1 an inequality or certificate check
// failed, 2 usage or build errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coxnorm/io.hpp"
#include "coxnorm/suites.hpp"

namespace {

using namespace coxnorm;

constexpr const char* kGroupGrammar =
    "group spec: family letter + rank (A3, B4, D5, H3, F4), I2:m for the "
    "dihedral group with bond order m, and 'x' joining factors (B3xA1)";

long long env_order_cap() {
    if (const char* env = std::getenv("COXNORM_ORDER_CAP")) {
        try {
            return std::stoll(env);
        } catch (...) {
            throw ParseError("COXNORM_ORDER_CAP must be an integer");
        }
    }
    return 1'000'000;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << content;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(
            pos, comma == std::string::npos ? comma : comma - pos);
        std::size_t a = item.find_first_not_of(" \t");
        if (a != std::string::npos) {
            std::size_t b = item.find_last_not_of(" \t");
            try {
                out.push_back(std::stoi(item.substr(a, b - a + 1)));
            } catch (...) {
                throw ParseError("bad generator index '" + item + "'");
            }
        } else if (!text.empty()) {
            throw ParseError("empty entry in generator list '" + text + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

constexpr int kMaxParts = 8;

// shared --preset/--group/--s1..--s8/--order-cap plumbing
struct GraphArgs {
    std::string preset_name;
    std::string group;
    std::vector<std::string> subset_text = std::vector<std::string>(kMaxParts);
    std::vector<CLI::Option*> subset_opts;
    long long order_cap = 0;  // 0: fall back to COXNORM_ORDER_CAP or 1e6

    void attach(CLI::App* cmd, bool with_subsets) {
        cmd->add_option("--preset", preset_name,
                        "named construction, e.g. c6, q3_hypercube, "
                        "gowers_octahedron:3, simplex_incidence:3,0,1");
        cmd->add_option("--group", group, kGroupGrammar);
        cmd->add_option("--order-cap", order_cap,
                        "largest group order to enumerate (default 1e6; env "
                        "COXNORM_ORDER_CAP overrides)");
        if (!with_subsets) return;
        for (int i = 0; i < kMaxParts; ++i)
            subset_opts.push_back(cmd->add_option(
                "--s" + std::to_string(i + 1), subset_text[i],
                "comma-separated 0-indexed generators for part " +
                    std::to_string(i + 1)));
    }

    long long cap() const {
        return order_cap > 0 ? order_cap : env_order_cap();
    }

    ReflectionHypergraph build_graph() const {
        if (!preset_name.empty()) {
            if (!group.empty())
                throw ParseError("--preset and --group are mutually exclusive");
            return preset(preset_name, cap());
        }
        if (group.empty())
            throw ParseError("one of --preset or --group is required");
        CoxeterSpec spec = CoxeterSpec::parse(group);
        spec.order_cap = cap();
        auto g = CoxeterGroup::build(spec);
        std::vector<std::vector<int>> subsets;
        for (int i = 0; i < (int)subset_opts.size(); ++i) {
            if (!subset_opts[i]->count()) {
                for (int j = i + 1; j < (int)subset_opts.size(); ++j)
                    if (subset_opts[j]->count())
                        throw ParseError("generator lists must be contiguous: "
                                         "--s" + std::to_string(j + 1) +
                                         " given without --s" +
                                         std::to_string(i + 1));
                break;
            }
            subsets.push_back(parse_int_list(subset_text[i]));
        }
        if (subsets.empty())
            throw ParseError("--group needs at least --s1");
        return ReflectionHypergraph::build(g, std::move(subsets));
    }
};

int cmd_group_info(const std::string& group, long long order_cap) {
    CoxeterSpec spec = CoxeterSpec::parse(group);
    spec.order_cap = order_cap;
    auto g = CoxeterGroup::build(spec);
    long long reflections = 0;
    for (std::int32_t w = 0; w < (std::int32_t)g->order(); ++w)
        if (g->is_reflection(w)) ++reflections;
    json j;
    j["command"] = "group-info";
    j["group"] = g->spec_string();
    j["order"] = g->order();
    j["rank"] = g->rank();
    j["positive_roots"] = g->positive_roots().size();
    j["reflections"] = reflections;
    j["max_length"] = g->max_length();
    j["seed"] = 0;
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_build(const GraphArgs& args, const std::string& out_path,
              const std::string& dot_path) {
    ReflectionHypergraph rg = args.build_graph();
    json j = reflection_graph_to_json(rg);
    j["seed"] = 0;
    std::string text = j.dump() + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    if (!dot_path.empty()) {
        std::vector<int> parts(rg.vertex_count());
        for (int v = 0; v < rg.vertex_count(); ++v) parts[v] = rg.part_of(v);
        write_file(dot_path, to_dot(rg.graph(), parts));
    }
    return 0;
}

int cmd_percolate(const GraphArgs& args, const std::string& cert_path,
                  const std::string& out_path) {
    ReflectionHypergraph rg = args.build_graph();
    PercolationCertificate cert;
    if (cert_path.empty()) {
        cert = build_percolating_certificate(rg);
        std::string text =
            certificate_to_json(cert, rg.group()).dump() + "\n";
        if (out_path.empty())
            std::cout << text;
        else
            write_file(out_path, text);
    } else {
        cert = certificate_from_json(
            coxnorm::detail::parse_json(read_file(cert_path)));
    }
    CheckReport rep = verify_percolation(rg, cert);
    std::cout << report_to_json(rep).dump() << "\n";
    return rep.pass() ? 0 : 1;
}

int cmd_verify(const std::string& suite, SuiteConfig cfg,
               const std::string& out_path) {
    auto reports = run_suite(suite, cfg);
    std::string lines = reports_to_json_lines(reports);
    if (out_path.empty())
        std::cout << lines;
    else
        write_file(out_path, lines);
    for (const auto& r : reports)
        if (!r.pass()) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "reflection graphs of finite Coxeter groups: structure, folding "
        "certificates, and randomized norm-inequality suites"};
    app.require_subcommand(1);

    auto* info = app.add_subcommand(
        "group-info", "order, roots, and length stats of a group");
    std::string info_group;
    long long info_cap = 0;
    info->add_option("--group", info_group, kGroupGrammar)->required();
    info->add_option("--order-cap", info_cap,
                     "largest group order to enumerate (default 1e6; env "
                     "COXNORM_ORDER_CAP overrides)");

    auto* build = app.add_subcommand(
        "build", "construct a reflection graph, emit JSON and optional DOT");
    GraphArgs build_args;
    build_args.attach(build, true);
    std::string build_out, build_dot;
    build->add_option("--out", build_out, "write the graph JSON here");
    build->add_option("--dot", build_dot, "write Graphviz DOT here");

    auto* perc = app.add_subcommand(
        "percolate",
        "emit a folding certificate and verify it (or verify --cert)");
    GraphArgs perc_args;
    perc_args.attach(perc, true);
    std::string perc_cert, perc_out;
    perc->add_option("--cert", perc_cert,
                     "verify this certificate file instead of building one");
    perc->add_option("--out", perc_out, "write the certificate JSON here");

    auto* verify = app.add_subcommand(
        "verify", "run a randomized inequality suite, one JSON report per "
                  "line");
    std::string verify_suite, verify_out, verify_preset;
    SuiteConfig cfg;
    std::string names;
    for (const auto& n : suite_names()) names += (names.empty() ? "" : ", ") + n;
    verify->add_option("--suite", verify_suite, "one of: " + names)
        ->required();
    verify->add_option("--trials", cfg.trials, "trials per graph or pair");
    verify->add_option("--n", cfg.n, "kernel resolution");
    verify->add_option("--seed", cfg.seed, "master seed (default 0)");
    verify->add_option("--tol", cfg.tol, "inequality slack");
    verify->add_option("--jobs", cfg.jobs, "worker threads");
    verify->add_option("--preset", verify_preset,
                       "restrict preset-driven suites to one preset");
    verify->add_option("--out", verify_out, "write JSON lines here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (info->parsed())
            return cmd_group_info(info_group,
                                  info_cap > 0 ? info_cap : env_order_cap());
        if (build->parsed()) return cmd_build(build_args, build_out, build_dot);
        if (perc->parsed()) return cmd_percolate(perc_args, perc_cert, perc_out);
        cfg.preset = verify_preset;
        return cmd_verify(verify_suite, cfg, verify_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
