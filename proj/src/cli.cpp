#include "mechindep/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mechindep/blocks.hpp"
#include "mechindep/criteria.hpp"
#include "mechindep/errors.hpp"
#include "mechindep/factor_graphs.hpp"
#include "mechindep/io.hpp"
#include "mechindep/report.hpp"
#include "mechindep/sparse_subspace.hpp"
#include "mechindep/synthgen.hpp"
#include "mechindep/topology.hpp"

namespace mechindep {

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr std::uint64_t kDefaultSeed = 20240607;

struct CommonOptions {
    std::string format = "json";
    std::optional<double> rel;
    std::optional<double> abs;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool allow_dot = false) {
    std::vector<std::string> formats{"json", "text"};
    if (allow_dot) formats.push_back("dot");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember(formats));
    cmd->add_option("--tol", o.rel, "Relative zero tolerance (overrides MECHINDEP_TOL)");
    cmd->add_option("--abs-tol", o.abs, "Absolute zero tolerance");
}

Tolerance resolve_tolerance(const CommonOptions& o) {
    Tolerance tol;
    if (const char* env = std::getenv("MECHINDEP_TOL"); env != nullptr && *env != '\0') {
        const std::string_view text(env);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !(v >= 0.0))
            throw InvalidInput("MECHINDEP_TOL is not a nonnegative number: '" + std::string(text) + "'");
        tol.rel = v;
    }
    if (o.rel) tol.rel = *o.rel;
    if (o.abs) tol.abs = *o.abs;
    if (!(tol.rel >= 0.0) || !(tol.abs >= 0.0)) throw InvalidInput("tolerances must be nonnegative");
    return tol;
}

ReportFormat parse_format(const std::string& f) {
    if (f == "text") return ReportFormat::text;
    if (f == "dot") return ReportFormat::dot;
    return ReportFormat::json;
}

Json make_header(const std::string& command, const Tolerance& tol, const Json& seed) {
    return {{"tool", "mechindep"},
            {"version", kVersion},
            {"command", command},
            {"seed", seed},
            {"tolerance", {{"rel", tol.rel}, {"abs", tol.abs}}}};
}

int exit_code(const std::vector<Certificate>& certs) {
    for (const auto& c : certs)
        if (!c.holds) return 1;
    return 0;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        std::transform(item.begin(), item.end(), item.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

BlockSpec blocks_for(const std::string& text, std::size_t cols) {
    BlockSpec b = text.empty() ? BlockSpec::singletons(cols) : BlockSpec::parse(text);
    b.require_columns(cols);
    return b;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
    CommonOptions common;
    std::string input;
    std::string batch;
    std::string criteria = "d,m,s";
    std::string blocks;
    std::vector<std::string> tensors;
};

const std::vector<std::string>& known_criteria() {
    static const std::vector<std::string> names{
        "d",  "d-irr", "m",  "m-irr",        "s", "s-pairwise", "s-irr", "h2",
        "h3", "h-irr", "o",  "separability", "contrast", "hierarchy"};
    return names;
}

std::vector<Certificate> analyze_one(const std::optional<Matrix>& j,
                                     const std::vector<DerivativeTensor>& tensors,
                                     const std::vector<std::string>& criteria,
                                     const std::string& block_text, const Tolerance& tol) {
    const auto tensor_of_order = [&](std::size_t order) -> const DerivativeTensor& {
        for (const auto& t : tensors)
            if (t.order() == order) return t;
        throw InvalidInput("criterion needs a derivative tensor of order " + std::to_string(order) +
                           " (--tensor)");
    };
    const auto need_matrix = [&](const std::string& name) -> const Matrix& {
        if (!j) throw InvalidInput("criterion '" + name + "' needs an input matrix");
        return *j;
    };
    const std::size_t dim = j ? j->cols() : (tensors.empty() ? 0 : tensors.front().inputs());
    if (dim == 0) throw InvalidInput("no input matrix or tensor given");
    const BlockSpec blocks = blocks_for(block_text, dim);

    std::vector<Certificate> certs;
    for (const auto& name : criteria) {
        if (name == "d") certs.push_back(check_type_d(need_matrix(name), blocks, tol));
        else if (name == "m") certs.push_back(check_type_m(need_matrix(name), blocks, tol));
        else if (name == "s") certs.push_back(check_type_s(need_matrix(name), blocks, tol));
        else if (name == "s-pairwise") certs.push_back(check_type_s_pairwise(need_matrix(name), blocks, tol));
        else if (name == "o") certs.push_back(check_type_o(need_matrix(name), blocks, tol));
        else if (name == "contrast") certs.push_back(check_contrast(need_matrix(name), blocks));
        else if (name == "d-irr" || name == "m-irr" || name == "s-irr") {
            const Matrix& m = need_matrix(name);
            for (std::size_t b = 0; b < blocks.count(); ++b) {
                if (name == "d-irr") certs.push_back(check_type_d_irreducible(m, blocks, b, tol));
                else if (name == "m-irr") certs.push_back(check_type_m_irreducible(m, blocks, b, tol));
                else certs.push_back(check_type_s_irreducible(m, blocks, b, tol));
            }
        } else if (name == "h2") certs.push_back(check_type_h(tensor_of_order(2), blocks, tol));
        else if (name == "h3") certs.push_back(check_type_h(tensor_of_order(3), blocks, tol));
        else if (name == "h-irr") {
            const auto& t = [&]() -> const DerivativeTensor& {
                for (const auto& x : tensors)
                    if (x.order() == 2) return x;
                return tensor_of_order(3);
            }();
            for (std::size_t b = 0; b < blocks.count(); ++b)
                certs.push_back(check_type_h_irreducible(t, blocks, b, tol));
        } else if (name == "separability") {
            auto sorted = tensors;
            // The input matrix stands in for a missing first-order tensor.
            const bool has_first = std::any_of(sorted.begin(), sorted.end(),
                                               [](const auto& t) { return t.order() == 1; });
            if (!has_first && j) sorted.push_back(DerivativeTensor::from_jacobian(*j));
            std::sort(sorted.begin(), sorted.end(),
                      [](const auto& a, const auto& b) { return a.order() < b.order(); });
            certs.push_back(check_separability(sorted, blocks, tol));
        } else if (name == "hierarchy") {
            std::optional<DerivativeTensor> hessian;
            for (const auto& t : tensors)
                if (t.order() == 2) hessian = t;
            certs.push_back(hierarchy_audit(need_matrix(name), blocks, hessian, tol));
        }
    }
    return certs;
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
    const Tolerance tol = resolve_tolerance(o.common);
    const auto criteria = split_list(o.criteria);
    if (criteria.empty()) throw InvalidInput("no criteria requested");
    for (const auto& c : criteria)
        if (std::find(known_criteria().begin(), known_criteria().end(), c) == known_criteria().end())
            throw InvalidInput("unknown criterion '" + c + "'");
    std::vector<DerivativeTensor> tensors;
    for (const auto& path : o.tensors) tensors.push_back(tensor_from_json(read_json_file(path)));

    Json header = make_header("analyze", tol, kGenericSeed);
    header["criteria"] = criteria;
    header["blocks"] = o.blocks.empty() ? Json("singletons") : Json(o.blocks);
    const ReportFormat format = parse_format(o.common.format);

    if (o.batch.empty()) {
        if (o.input.empty() && tensors.empty()) throw InvalidInput("no input given");
        std::optional<Matrix> j;
        if (!o.input.empty()) j = read_matrix_csv(o.input);
        header["input"] = o.input;
        const auto certs = analyze_one(j, tensors, criteria, o.blocks, tol);
        out << emit_report(certs, format, header);
        return exit_code(certs);
    }

    if (!o.input.empty()) throw InvalidInput("give either an input file or --batch, not both");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(o.batch))
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    if (files.empty()) throw InvalidInput("no .csv files in '" + o.batch + "'");
    header["batch"] = o.batch;

    int code = 0;
    Json results = Json::array();
    std::string text;
    for (const auto& path : files) {
        const std::string name = path.filename().string();
        try {
            const auto certs = analyze_one(read_matrix_csv(path.string()), tensors, criteria, o.blocks, tol);
            code = std::max(code, exit_code(certs));
            if (format == ReportFormat::json) {
                Json list = Json::array();
                for (const auto& c : certs) list.push_back(c.to_json());
                results.push_back({{"input", name}, {"certificates", list}});
            } else {
                text += "== " + name + "\n" + emit_report(certs, format);
            }
        } catch (const Error& e) {
            code = 2;
            if (format == ReportFormat::json) results.push_back({{"input", name}, {"error", e.what()}});
            else text += "== " + name + "\nerror: " + e.what() + "\n";
        }
    }
    if (format == ReportFormat::json) {
        out << Json{{"header", header}, {"files", results}}.dump(2) << "\n";
    } else {
        out << emit_report({}, format, header) << text;
    }
    return code;
}

// ---------------------------------------------------------------- decompose

struct DecomposeOptions {
    CommonOptions common;
    std::string input;
    std::string graph = "d";
    std::string blocks;
};

int cmd_decompose(const DecomposeOptions& o, std::ostream& out) {
    const Tolerance tol = resolve_tolerance(o.common);
    const Matrix j = read_matrix_csv(o.input);
    const GraphKind kind = o.graph == "m" ? GraphKind::M : GraphKind::D;
    const auto graph = build_graph(j, kind, tol);
    const ReportFormat format = parse_format(o.common.format);
    if (format == ReportFormat::dot) {
        out << to_dot(graph);
        return 0;
    }
    const auto comps = components(graph);

    // Components become blocks when they are contiguous column ranges.
    std::optional<BlockSpec> inferred;
    {
        std::vector<std::size_t> dims;
        std::size_t next = 1;
        bool contiguous = true;
        for (const auto& c : comps) {
            contiguous = contiguous && c.front() == next && c.back() == next + c.size() - 1;
            next += c.size();
            dims.push_back(c.size());
        }
        if (contiguous) inferred = BlockSpec(dims);
    }

    std::vector<Certificate> certs;
    Json notes = Json::array();
    if (!o.blocks.empty()) {
        const BlockSpec blocks = blocks_for(o.blocks, j.cols());
        certs.push_back(kind == GraphKind::D ? check_type_d(j, blocks, tol) : check_type_m(j, blocks, tol));
    } else if (inferred && kind == GraphKind::D) {
        for (std::size_t b = 0; b < inferred->count(); ++b) {
            try {
                certs.push_back(check_type_d_irreducible(j, *inferred, b, tol));
            } catch (const Error& e) {
                notes.push_back("component " + std::to_string(b + 1) + ": " + e.what());
            }
        }
    }
    if (!inferred) notes.push_back("components are not contiguous column ranges; no block split inferred");

    Json header = make_header("decompose", tol, nullptr);
    header["input"] = o.input;
    header["graph"] = kind == GraphKind::D ? "D" : "M";
    Json extra = {{"components", comps},
                  {"inferredBlocks", inferred ? Json(inferred->dims()) : Json(nullptr)}};
    if (!notes.empty()) extra["notes"] = notes;
    out << emit_report(certs, format, header, extra);
    return exit_code(certs);
}

// ---------------------------------------------------------------- gap

struct GapOptions {
    CommonOptions common;
    std::string input;
    std::string blocks;
    bool pairwise = false;
};

int cmd_gap(const GapOptions& o, std::ostream& out) {
    const Tolerance tol = resolve_tolerance(o.common);
    const Matrix j = read_matrix_csv(o.input);
    const BlockSpec blocks = blocks_for(o.blocks, j.cols());
    if (blocks.count() < 2) throw InvalidInput("the sparsity gap needs at least two blocks");
    std::vector<Certificate> certs{check_type_s(j, blocks, tol)};
    if (o.pairwise) certs.push_back(check_type_s_pairwise(j, blocks, tol));
    const auto& w = certs.front().witness;
    Json extra = {{"rhoPlus", w.at("rhoPlus")},
                  {"rhoMinus", w.at("rhoMinus")},
                  {"independent", certs.front().holds}};
    Json header = make_header("gap", tol, kGenericSeed);
    header["input"] = o.input;
    header["blocks"] = blocks.to_string();
    out << emit_report(certs, parse_format(o.common.format), header, extra);
    return exit_code(certs);
}

// ---------------------------------------------------------------- topology

struct TopologyOptions {
    CommonOptions common;
    std::string input;
    std::optional<std::size_t> k;
};

int cmd_topology(const TopologyOptions& o, std::ostream& out) {
    const Tolerance tol = resolve_tolerance(o.common);
    const GridRegion region = region_from_json(read_json_file(o.input));
    std::vector<Certificate> certs{premise_report(region)};
    Json extra = Json::object();
    if (o.k) {
        const auto report = slices_connected(region, *o.k);
        std::size_t bad = 0;
        for (const auto& s : report.slices) bad += s.connected ? 0 : 1;
        extra["slices"] = {{"k", report.k},
                           {"count", report.slices.size()},
                           {"disconnected", bad},
                           {"allConnected", report.all_connected}};
    }
    Json header = make_header("topology", tol, nullptr);
    header["input"] = o.input;
    out << emit_report(certs, parse_format(o.common.format), header, extra);
    return exit_code(certs);
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
    CommonOptions common;
    std::string template_path;
    std::size_t slots = 2;
    std::size_t slot_dim = 3;
    std::size_t slot_out = 20;
    double overlap = 0.0;
    std::uint64_t seed = kDefaultSeed;
    std::string out_prefix;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
    OverlapTemplate t;
    if (!o.template_path.empty()) {
        t = OverlapTemplate::from_json(read_json_file(o.template_path));
    } else {
        t.slots = o.slots;
        t.slot_dim = o.slot_dim;
        t.slot_out = o.slot_out;
        t.overlap = o.overlap;
        t.seed = o.seed;
    }
    const auto inst = gen_overlap_jacobian(t);
    if (o.out_prefix.empty()) {
        out << format_matrix_csv(inst.jacobian);
        return 0;
    }
    write_matrix_csv(o.out_prefix + ".csv", inst.jacobian);
    write_text_file(o.out_prefix + ".json", inst.sidecar().dump(2) + "\n");
    Json report = {{"header", make_header("synth", resolve_tolerance(o.common), t.seed)},
                   {"matrix", o.out_prefix + ".csv"},
                   {"sidecar", o.out_prefix + ".json"},
                   {"instance", inst.sidecar()}};
    if (parse_format(o.common.format) == ReportFormat::json) {
        out << report.dump(2) << "\n";
    } else {
        out << "# seed: " << t.seed << "\n"
            << "matrix: " << o.out_prefix << ".csv (" << inst.jacobian.rows() << "x"
            << inst.jacobian.cols() << ")\n"
            << "sidecar: " << o.out_prefix << ".json\n"
            << "blocks: " << inst.blocks.to_string() << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- audit

struct AuditOptions {
    CommonOptions common;
    std::string input;
    std::string kind = "blockcount";
    std::optional<std::size_t> expected;
    std::uint64_t seed = kDefaultSeed;
    std::size_t draws = 200;
    std::string blocks;
    std::string hessian;
};

int cmd_audit(const AuditOptions& o, std::ostream& out) {
    const Tolerance tol = resolve_tolerance(o.common);
    const Matrix j = read_matrix_csv(o.input);
    std::vector<Certificate> certs;
    if (o.kind == "hierarchy") {
        std::optional<DerivativeTensor> h;
        if (!o.hessian.empty()) h = tensor_from_json(read_json_file(o.hessian));
        certs.push_back(hierarchy_audit(j, blocks_for(o.blocks, j.cols()), h, tol));
    } else {
        const std::size_t expected =
            o.expected ? *o.expected : block_count_audit(j, tol, o.seed, 0).rank_partition_count;
        certs.push_back(prop_a10_audit(j, expected, tol, o.seed, o.draws));
    }
    Json header = make_header("audit", tol, o.seed);
    header["input"] = o.input;
    header["kind"] = o.kind;
    out << emit_report(certs, parse_format(o.common.format), header);
    return exit_code(certs);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mechanistic independence analysis of Jacobian support patterns", "mechindep"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    AnalyzeOptions analyze;
    auto* a = app.add_subcommand("analyze", "Check independence criteria on a Jacobian");
    a->add_option("input", analyze.input, "CSV matrix");
    a->add_option("--batch", analyze.batch, "Analyze every .csv file of a directory");
    a->add_option("--criteria", analyze.criteria,
                  "Comma list of: d,d-irr,m,m-irr,s,s-pairwise,s-irr,h2,h3,h-irr,o,separability,"
                  "contrast,hierarchy");
    a->add_option("--blocks", analyze.blocks, "Block dimensions, e.g. 3,3,3 (default: singletons)");
    a->add_option("--tensor", analyze.tensors, "Derivative tensor JSON (repeatable)")
        ->allow_extra_args(false);
    add_common(a, analyze.common);

    DecomposeOptions decompose;
    auto* d = app.add_subcommand("decompose", "Connected components of the factor graph");
    d->add_option("input", decompose.input, "CSV matrix")->required();
    d->add_option("--graph", decompose.graph, "Graph kind: d or m")->check(CLI::IsMember({"d", "m"}));
    d->add_option("--blocks", decompose.blocks, "Block dimensions to check");
    add_common(d, decompose.common, true);

    GapOptions gap;
    auto* g = app.add_subcommand("gap", "Sparsity gap rho+ versus rho-");
    g->add_option("input", gap.input, "CSV matrix")->required();
    g->add_option("--blocks", gap.blocks, "Block dimensions (default: singletons)");
    g->add_flag("--pairwise", gap.pairwise, "Also report every pair of blocks");
    add_common(g, gap.common);

    TopologyOptions topo;
    auto* t = app.add_subcommand("topology", "Connectivity premises of a grid region");
    t->add_option("input", topo.input, "Region JSON {dims, occupied}")->required();
    t->add_option("--k", topo.k, "Also report k-slice connectivity");
    add_common(t, topo.common);

    SynthOptions synth;
    auto* s = app.add_subcommand("synth", "Generate a planted overlapping-slot Jacobian");
    s->add_option("--template", synth.template_path, "Template JSON");
    s->add_option("--K", synth.slots, "Number of slots");
    s->add_option("--slot-dim", synth.slot_dim, "Latent dimension per slot");
    s->add_option("--slot-out", synth.slot_out, "Output rows per slot");
    s->add_option("--overlap", synth.overlap, "Overlap ratio in [0, 1)");
    s->add_option("--seed", synth.seed, "Random seed");
    s->add_option("--out", synth.out_prefix, "Write <prefix>.csv and <prefix>.json");
    add_common(s, synth.common);

    AuditOptions audit;
    auto* u = app.add_subcommand("audit", "Block-count or hierarchy audit");
    u->add_option("input", audit.input, "CSV matrix")->required();
    u->add_option("--kind", audit.kind, "blockcount or hierarchy")
        ->check(CLI::IsMember({"blockcount", "hierarchy"}));
    u->add_option("--expected", audit.expected, "Expected maximal block count");
    u->add_option("--seed", audit.seed, "Seed of the random mixing sweep");
    u->add_option("--draws", audit.draws, "Random mixings to sample");
    u->add_option("--blocks", audit.blocks, "Block dimensions (hierarchy)");
    u->add_option("--hessian", audit.hessian, "Hessian tensor JSON (hierarchy)");
    add_common(u, audit.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (a->parsed()) return cmd_analyze(analyze, out);
        if (d->parsed()) return cmd_decompose(decompose, out);
        if (g->parsed()) return cmd_gap(gap, out);
        if (t->parsed()) return cmd_topology(topo, out);
        if (s->parsed()) return cmd_synth(synth, out);
        if (u->parsed()) return cmd_audit(audit, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace mechindep
