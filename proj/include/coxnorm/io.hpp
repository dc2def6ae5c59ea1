#pragma once

// Serialization: kernels travel as CSV matrices (arity 2) or JSON nested
// arrays (any arity, with [re, im] pairs under "complex" leaves), graphs and
// folding certificates as versioned JSON documents, check reports as JSON
// lines, and graphs optionally as Graphviz DOT.

#include <charconv>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "coxnorm/errors.hpp"
#include "coxnorm/hypergraph.hpp"
#include "coxnorm/kernels.hpp"
#include "coxnorm/percolation.hpp"
#include "coxnorm/refgraph.hpp"
#include "coxnorm/report.hpp"

namespace coxnorm {

using json = nlohmann::json;

inline constexpr int kFileFormatVersion = 1;

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw Error("unformattable number");
    return std::string(buf, ptr);
}

inline double parse_double(const std::string& text) {
    const char* b = text.data();
    const char* e = b + text.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || ptr != e)
        throw ParseError("bad numeric field '" + text + "'");
    return out;
}

inline json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON document");
    return j;
}

inline void expect_document(const json& j, const std::string& kind) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("version") ||
        !j["kind"].is_string())
        throw ParseError("not a " + kind + " document");
    if (j["kind"] != kind)
        throw ParseError("expected kind '" + kind + "', found '" +
                         std::string(j["kind"]) + "'");
    if (j["version"] != kFileFormatVersion)
        throw ParseError("unsupported " + kind + " version");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Kernels

inline std::string kernel_to_csv(const StepKernel& f) {
    if (f.arity != 2) throw ParseError("CSV kernels are square matrices");
    std::string out;
    for (int i = 0; i < f.n; ++i) {
        for (int j = 0; j < f.n; ++j) {
            if (j) out += ',';
            out += detail::format_double(f.at2(i, j));
        }
        out += '\n';
    }
    return out;
}

inline StepKernel kernel_from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.emplace_back();
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            rows.back().push_back(detail::parse_double(
                line.substr(pos, comma == std::string::npos ? comma
                                                            : comma - pos)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (rows.empty()) throw ParseError("empty CSV kernel");
    int n = (int)rows.size();
    std::vector<double> values;
    for (const auto& row : rows) {
        if ((int)row.size() != n)
            throw ParseError("CSV kernel must be a square matrix");
        values.insert(values.end(), row.begin(), row.end());
    }
    return StepKernel::build(2, n, std::move(values));
}

using LoadedKernel = std::variant<StepKernel, ComplexKernel>;

namespace detail {

template <typename T>
json kernel_values_to_json(const StepKernelT<T>& f, int axis,
                           std::size_t base, std::size_t stride) {
    json arr = json::array();
    for (int x = 0; x < f.n; ++x) {
        std::size_t at = base + (std::size_t)x * stride;
        if (axis + 1 == f.arity) {
            if constexpr (std::is_same_v<T, double>) {
                arr.push_back(f.values[at]);
            } else {
                arr.push_back(json{{"complex",
                                    {f.values[at].real(), f.values[at].imag()}}});
            }
        } else {
            arr.push_back(kernel_values_to_json(f, axis + 1, at, stride / f.n));
        }
    }
    return arr;
}

struct KernelLeaves {
    std::vector<std::complex<double>> values;
    bool any_complex = false;
};

inline void collect_kernel_leaves(const json& node, int axis, int arity,
                                  int n, KernelLeaves& out) {
    if (axis == arity) {
        if (node.is_number()) {
            out.values.emplace_back(double(node), 0.0);
            return;
        }
        if (node.is_object() && node.contains("complex") &&
            node["complex"].is_array() && node["complex"].size() == 2 &&
            node["complex"][0].is_number() && node["complex"][1].is_number()) {
            out.values.emplace_back(double(node["complex"][0]),
                                    double(node["complex"][1]));
            out.any_complex = true;
            return;
        }
        throw ParseError("kernel entries are numbers or {\"complex\":[re,im]}");
    }
    if (!node.is_array() || (int)node.size() != n)
        throw ParseError("kernel values must nest " + std::to_string(arity) +
                         " arrays of length " + std::to_string(n));
    for (const auto& child : node) collect_kernel_leaves(child, axis + 1, arity, n, out);
}

}  // namespace detail

template <typename T>
json kernel_to_json(const StepKernelT<T>& f) {
    std::size_t stride = 1;
    for (int a = 1; a < f.arity; ++a) stride *= (std::size_t)f.n;
    json j;
    j["version"] = kFileFormatVersion;
    j["kind"] = "kernel";
    j["arity"] = f.arity;
    j["n"] = f.n;
    j["values"] = detail::kernel_values_to_json(f, 0, 0, stride);
    if (f.arity == 2 && f.symmetric) j["symmetric"] = true;
    return j;
}

inline LoadedKernel kernel_from_json(const json& j) {
    detail::expect_document(j, "kernel");
    if (!j.contains("arity") || !j.contains("n") || !j.contains("values") ||
        !j["arity"].is_number_integer() || !j["n"].is_number_integer())
        throw ParseError("kernel document needs arity, n, and values");
    int arity = j["arity"];
    int n = j["n"];
    if (arity < 1 || arity > 8 || n < 1)
        throw ParseError("kernel arity/resolution out of range");
    detail::KernelLeaves leaves;
    detail::collect_kernel_leaves(j["values"], 0, arity, n, leaves);
    bool symmetric = j.value("symmetric", false);
    if (leaves.any_complex) {
        return ComplexKernel::build(arity, n, std::move(leaves.values),
                                    symmetric);
    }
    std::vector<double> real(leaves.values.size());
    for (std::size_t i = 0; i < real.size(); ++i)
        real[i] = leaves.values[i].real();
    return StepKernel::build(arity, n, std::move(real), symmetric);
}

inline LoadedKernel kernel_from_text(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{'))
        return kernel_from_json(detail::parse_json(text));
    return kernel_from_csv(text);
}

// ---------------------------------------------------------------------------
// Hypergraphs

inline json hypergraph_to_json(const Hypergraph& h) {
    json j;
    j["version"] = kFileFormatVersion;
    j["kind"] = "hypergraph";
    j["vertices"] = h.n;
    j["edges"] = h.edges;
    return j;
}

inline Hypergraph hypergraph_from_json(const json& j) {
    detail::expect_document(j, "hypergraph");
    if (!j.contains("vertices") || !j.contains("edges") ||
        !j["vertices"].is_number_integer() || !j["edges"].is_array())
        throw ParseError("hypergraph document needs vertices and edges");
    std::vector<std::vector<int>> edges;
    for (const auto& e : j["edges"]) {
        if (!e.is_array()) throw ParseError("edges are arrays of vertex ids");
        edges.push_back(e.get<std::vector<int>>());
    }
    return Hypergraph::from_edges(int(j["vertices"]), std::move(edges));
}

// the built graph plus its group provenance, enough to rebuild the preset
inline json reflection_graph_to_json(const ReflectionHypergraph& rg) {
    json j = hypergraph_to_json(rg.graph());
    j["group"] = rg.group().spec_string();
    j["subsets"] = rg.subsets();
    std::vector<int> parts(rg.vertex_count());
    for (int v = 0; v < rg.vertex_count(); ++v) parts[v] = rg.part_of(v);
    j["parts"] = parts;
    j["norming_certified"] = rg.common_generators().empty();
    return j;
}

// ---------------------------------------------------------------------------
// Folding certificates

inline json certificate_to_json(const PercolationCertificate& cert,
                                const CoxeterGroup& g) {
    json steps = json::array();
    for (const auto& step : cert.steps) {
        const auto& w = g.word(step.reflection);
        steps.push_back(json{{"word", std::vector<int>(w.begin(), w.end())},
                             {"sign", std::string(1, fold_sign_char(step.sign))}});
    }
    json j;
    j["version"] = kFileFormatVersion;
    j["kind"] = "certificate";
    j["group"] = cert.group_spec;
    j["subsets"] = cert.subsets;
    j["initial_edge"] = cert.initial_edge;
    j["steps"] = std::move(steps);
    j["stable"] = cert.stable;
    return j;
}

inline PercolationCertificate certificate_from_json(const json& j) {
    detail::expect_document(j, "certificate");
    for (const char* field : {"group", "subsets", "initial_edge", "steps"})
        if (!j.contains(field))
            throw ParseError(std::string("certificate document needs ") +
                             field);
    PercolationCertificate cert;
    cert.group_spec = j["group"];
    cert.subsets = j["subsets"].get<std::vector<std::vector<int>>>();
    cert.initial_edge = j["initial_edge"];
    cert.stable = j.value("stable", false);

    CoxeterSpec spec = CoxeterSpec::parse(cert.group_spec);
    auto group = CoxeterGroup::build(spec);
    for (const auto& s : j["steps"]) {
        if (!s.is_object() || !s.contains("word") || !s.contains("sign"))
            throw ParseError("certificate steps carry a word and a sign");
        auto word = s["word"].get<std::vector<int>>();
        for (int gen : word)
            if (gen < 0 || gen >= group->rank())
                throw ParseError("certificate word uses an unknown generator");
        std::string sign = s["sign"];
        if (sign != "+" && sign != "-")
            throw ParseError("certificate signs are '+' or '-'");
        FoldStep step;
        step.reflection = group->element_from_word(word);
        step.sign = sign == "+" ? FoldSign::plus : FoldSign::minus;
        cert.steps.push_back(step);
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Check reports

inline json report_to_json(const CheckReport& r) {
    json j;
    j["check"] = r.name;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin();
    j["tol"] = r.tol;
    j["pass"] = r.pass();
    j["seed"] = r.seed;
    if (!r.meta.empty()) j["meta"] = r.meta;
    return j;
}

inline std::string reports_to_json_lines(const std::vector<CheckReport>& rs) {
    std::string out;
    for (const auto& r : rs) {
        out += report_to_json(r).dump();
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Graphviz

// 2-graphs render edges directly; higher arity adds one point node per edge.
// Optional part labels drive the fill color (one color per part).
inline std::string to_dot(const Hypergraph& h,
                          const std::vector<int>& parts = {}) {
    static const char* palette[] = {"lightblue",  "lightsalmon", "palegreen",
                                    "lightyellow", "plum",        "lightgray"};
    std::string out = "graph g {\n  node [style=filled];\n";
    for (int v = 0; v < h.n; ++v) {
        out += "  v" + std::to_string(v);
        const char* color =
            v < (int)parts.size() ? palette[parts[v] % 6] : "white";
        out += " [fillcolor=" + std::string(color) + "];\n";
    }
    if (h.arity() == 2 && !h.edges.empty()) {
        for (const auto& e : h.edges)
            out += "  v" + std::to_string(e[0]) + " -- v" +
                   std::to_string(e[1]) + ";\n";
    } else {
        for (std::size_t i = 0; i < h.edges.size(); ++i) {
            std::string enode = "e" + std::to_string(i);
            out += "  " + enode + " [shape=point];\n";
            for (int v : h.edges[i])
                out += "  " + enode + " -- v" + std::to_string(v) + ";\n";
        }
    }
    out += "}\n";
    return out;
}

}  // namespace coxnorm
