#pragma once

#include "tok/checks.hpp"
#include "tok/diagram_json.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace tok::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kInputError = 2, kInternalError = 3 };

struct RunConfig {
    std::string command;
    std::string input;
    std::string output;
    bool reduced = false;
    std::optional<int> basepoint;
    std::string eval;  // "", "generic", or "x1=1,x2=2,..."
    std::vector<std::string> checks;
    bool auto_mark = false;
    bool marks_at_basepoint = false;
    unsigned jobs = 1;
    std::string against;
    std::string slide_signs = "table";
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline MarkedDiagram load(const std::string& path) { return parse_diagram(read_file(path)); }

/// Applies --auto-mark, --basepoint and --marks-at-basepoint.
inline MarkedDiagram prepare(MarkedDiagram d, const RunConfig& cfg)
{
    if (cfg.auto_mark && d.marks().empty()) d = d.with_auto_marks();
    if (cfg.basepoint) d = d.with_basepoint(*cfg.basepoint);
    if (cfg.marks_at_basepoint) {
        if (!d.basepoint()) throw InputError("--marks-at-basepoint needs a basepoint");
        auto marks = d.marks();
        for (auto& m : marks) m.edge = *d.basepoint();
        d = d.with_marks(std::move(marks));
    }
    return d;
}

inline std::optional<Evaluation> evaluation_for(const RunConfig& cfg, const MarkedDiagram& d)
{
    if (cfg.eval.empty()) return std::nullopt;
    if (cfg.eval == "generic") return Evaluation::generic(d.marks().size());
    return Evaluation::parse(cfg.eval, d);
}

inline std::string ranks_line(const HomologyResult& h)
{
    std::ostringstream os;
    os << "total rank " << h.total_rank() << (h.torsion_free() ? ", torsion-free" : ", with torsion") << "; ranks";
    for (const auto& [delta, rank] : h.ranks()) os << " delta " << delta << ": " << rank;
    return os.str();
}

/// Executes one subcommand; returns the JSON report and the exit code.
inline int execute(const RunConfig& cfg, nlohmann::json& report, std::ostream& err)
{
    MarkedDiagram d = prepare(load(cfg.input), cfg);
    if (cfg.reduced && !d.basepoint()) throw InputError("--reduced needs a basepoint (diagram field or --basepoint)");
    report["command"] = cfg.command;
    report["diagram"] = diagram_to_json(d);
    report["reduced"] = cfg.reduced;

    if (cfg.command == "build") {
        const TwistedComplex c = build_complex(d, cfg.reduced, cfg.jobs);
        report["complex"] = complex_to_json(c);
        err << "built complex: " << c.size() << " generators over " << (std::size_t(1) << d.crossing_count())
            << " resolutions\n";
        return kOk;
    }

    if (cfg.command == "homology") {
        const TwistedComplex c = build_complex(d, cfg.reduced, cfg.jobs);
        HomologyResult h;
        if (auto ev = evaluation_for(cfg, d)) {
            h = homology_q(evaluate(c.total(), ev->values));
            report["coefficients"] = "Q";
            nlohmann::json vals = nlohmann::json::array();
            for (const auto& v : ev->values) vals.push_back(rational_string(v));
            report["evaluation"] = vals;
        } else {
            auto z = to_integer(c.total());
            if (!z) throw InputError("differential has polynomial entries; pass --eval or --marks-at-basepoint");
            h = homology_z(*z);
            report["coefficients"] = "Z";
        }
        report["homology"] = homology_to_json(h);
        report["total_rank"] = h.total_rank();
        err << ranks_line(h) << "\n";
        return kOk;
    }

    if (cfg.command == "spantree") {
        MarkedDiagram m = d.marks().empty() ? d.with_auto_marks() : d;
        if (!m.basepoint()) m = m.with_basepoint(m.edges().front());
        const Evaluation ev = cfg.eval.empty() || cfg.eval == "generic" ? Evaluation::generic(m.marks().size())
                                                                       : Evaluation::parse(cfg.eval, m);
        const TwistedComplex c = build_complex(m, true, cfg.jobs);
        const SpanningTreeComplex t = build_tree_complex(c, ev);
        const HomologyResult h = homology_q(t.complex);
        report["diagram"] = diagram_to_json(m);
        report["tree_complex"] = tree_complex_to_json(t);
        report["tait_spanning_trees"] = tait_graph(m).spanning_tree_count().str();
        report["homology"] = homology_to_json(h);
        nlohmann::json coeffs = nlohmann::json::array();
        for (auto [a, b] : adjacent_tree_pairs(t, c)) {
            const TreeCoefficientReport r = tree_coefficient_check(t, c, a, b);
            coeffs.push_back({{"from", vertex_string(a, t.crossings)},
                              {"to", vertex_string(b, t.crossings)},
                              {"configuration", face_name(r.face)},
                              {"coefficient", rational_string(r.actual)},
                              {"w", rational_string(r.w)},
                              {"w_prime", rational_string(r.w_prime)},
                              {"xy_prediction", rational_string(r.predicted)},
                              {"xy_match", r.match},
                              {"side_prediction", rational_string(r.side_predicted)},
                              {"side_match", r.side_match}});
        }
        report["adjacent_pairs"] = coeffs;
        err << t.trees.size() << " spanning-tree generators; " << ranks_line(h) << "\n";
        return kOk;
    }

    if (cfg.command == "verify") {
        CheckOptions o;
        o.reduced = cfg.reduced;
        o.jobs = cfg.jobs;
        o.evaluation = evaluation_for(cfg, d);
        if (!cfg.against.empty()) o.against = prepare(load(cfg.against), cfg);
        if (cfg.slide_signs == "flip") o.slide_signs = SlideSigns::FlipArrow;
        else if (cfg.slide_signs != "table") throw InputError("--slide-signs must be 'table' or 'flip'");
        std::vector<std::string> names = cfg.checks;
        if (names.empty() || (names.size() == 1 && names[0] == "all")) {
            names.clear();
            for (const auto& n : check_names()) {
                if (n == "invariance" && !o.against) continue;
                names.push_back(n);
            }
        }
        const auto results = run_checks(d, names, o);
        nlohmann::json arr = nlohmann::json::array();
        std::size_t failed = 0;
        for (const auto& r : results) {
            arr.push_back(check_to_json(r));
            if (!r.pass) {
                ++failed;
                err << "FAIL " << r.name << " [" << r.instance << "]: " << r.witness << "\n";
            }
        }
        report["checks"] = arr;
        report["passed"] = failed == 0;
        err << results.size() - failed << "/" << results.size() << " checks passed\n";
        return failed == 0 ? kOk : kCheckFailed;
    }

    throw InputError("unknown command '" + cfg.command + "'");
}

/// Full command-line entry point.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Twisted odd Khovanov complexes of marked knot diagrams"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string checks;
    std::optional<int> basepoint;

    auto common = [&](CLI::App* sub) {
        sub->add_option("-i,--input", cfg.input, "diagram JSON file")->required();
        sub->add_option("-o,--output", cfg.output, "write the JSON report here instead of stdout");
        sub->add_flag("--reduced", cfg.reduced, "quotient by the basepoint circle");
        sub->add_option("--basepoint", basepoint, "edge carrying the basepoint");
        sub->add_option("--eval", cfg.eval, "generic or x1=1,x2=3/2,...");
        sub->add_flag("--auto-mark", cfg.auto_mark, "put one mark on every edge when the diagram has none");
        sub->add_flag("--marks-at-basepoint", cfg.marks_at_basepoint, "move every mark to the basepoint edge");
        sub->add_option("-j,--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1u, 256u));
    };
    for (const char* name : {"build", "homology", "spantree", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        common(sub);
        if (std::string(name) == "verify") {
            sub->add_option("--checks", checks, "comma-separated check names, or all");
            sub->add_option("--against", cfg.against, "second diagram for the invariance check");
            sub->add_option("--slide-signs", cfg.slide_signs, "table or flip");
        }
    }
    app.get_subcommand("build")->description("write the twisted complex");
    app.get_subcommand("homology")->description("delta-graded homology over Z, or over Q with --eval");
    app.get_subcommand("spantree")->description("spanning-tree complex of a knot diagram");
    app.get_subcommand("verify")->description("run verification checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.basepoint = basepoint;
    std::stringstream ss(checks);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) cfg.checks.push_back(item);

    nlohmann::json report;
    int code = kOk;
    try {
        code = execute(cfg, report, err);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const InvariantError& e) {
        err << "internal invariant violated: " << e.what() << "\n";
        return kInternalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }

    const std::string text = report.dump(2) + "\n";
    if (cfg.output.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.output);
        if (!f) {
            err << "input error: cannot write '" << cfg.output << "'\n";
            return kInputError;
        }
        f << text;
    }
    return code;
}

}  // namespace tok::cli
