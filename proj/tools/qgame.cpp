// Command-line front end: Newcomb protocol runs and verification, market
// landscape scans and extrema, and execution of declarative game-spec files.
//
// Exit codes: 0 success, 1 rejected input, 2 internal-consistency failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qgame/market.hpp"
#include "qgame/newcomb.hpp"
#include "qgame/spec_runner.hpp"

namespace {

using namespace qgame;

std::string json_matrix_2x2(const Matrix& m) {
    std::ostringstream os;
    os << "[[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) os << "],[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            cx v = m(i, j);
            os << "[" << format_coord(v.real()) << "," << format_coord(v.imag()) << "]";
        }
    }
    os << "]]";
    return os.str();
}

void emit_output(const std::string& text, const std::optional<std::string>& out_path) {
    if (out_path)
        write_file_atomic(*out_path, text);
    else
        std::cout << text;
}

std::string trace_json(const ProtocolTrace& trace) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const TraceEntry& e = trace.steps[i];
        if (i) os << ",";
        os << "{\"step\":\"" << e.label << "\",\"human_reduced\":"
           << json_matrix_2x2(e.human_reduced) << "}";
    }
    os << "]";
    return os.str();
}

int cmd_newcomb_run(double v, double w, bool with_trace, bool as_json,
                    const std::optional<std::string>& out) {
    ProtocolResult res = run_meyer_protocol({v, w});
    double formula = payoff_formula(v);
    bool consistent = std::abs(res.payoff - formula) <= kDollarTol;
    double restoration =
        max_abs_diff(res.trace.steps.back().state.rho(), initial_state(v).rho());

    if (as_json || out) {
        std::ostringstream os;
        os << "{\"params\":{\"v\":" << format_coord(v) << ",\"w\":" << format_coord(w) << "},";
        if (with_trace) os << "\"trace\":" << trace_json(res.trace) << ",";
        os << "\"payoff_usd\": " << format_dollars(res.payoff) << ","
           << "\"checks\":{\"matches_closed_form\":" << (consistent ? "true" : "false")
           << ",\"restoration_deviation\":" << restoration << "}}\n";
        emit_output(os.str(), out);
    } else {
        std::printf("Newcomb protocol run: v=%g w=%g\n", v, w);
        std::printf("  expected payoff: $%s\n", format_dollars(res.payoff).c_str());
        std::printf("  closed form 1000v + 1000000(1-v): $%s (%s)\n",
                    format_dollars(formula).c_str(), consistent ? "match" : "MISMATCH");
        std::printf("  final-state restoration deviation: %.3e\n", restoration);
        if (with_trace) {
            for (const TraceEntry& e : res.trace.steps) {
                std::printf("  %-18s human reduced = [[%.6f%+.6fi, %.6f%+.6fi],"
                            " [%.6f%+.6fi, %.6f%+.6fi]]\n",
                            e.label.c_str(), e.human_reduced(0, 0).real(),
                            e.human_reduced(0, 0).imag(), e.human_reduced(0, 1).real(),
                            e.human_reduced(0, 1).imag(), e.human_reduced(1, 0).real(),
                            e.human_reduced(1, 0).imag(), e.human_reduced(1, 1).real(),
                            e.human_reduced(1, 1).imag());
            }
        }
    }
    return consistent ? 0 : 2;
}

int cmd_newcomb_table(bool as_json, const std::optional<std::string>& out) {
    struct Row {
        const char* strategy;
        const char* tactic;
        double v, w;
    };
    const Row rows[] = {
        {"take-both (v=1)", "change mind (w=1)", 1.0, 1.0},
        {"take-both (v=1)", "keep mind (w=0)", 1.0, 0.0},
        {"one-box (v=0)", "change mind (w=1)", 0.0, 1.0},
        {"one-box (v=0)", "keep mind (w=0)", 0.0, 0.0},
    };
    if (as_json || out) {
        std::ostringstream os;
        os << "{\"params\":{},\"payoff_usd\": null,\"checks\":{\"rows\":[";
        bool first = true;
        for (const Row& r : rows) {
            ProtocolResult res = run_meyer_protocol({r.v, r.w});
            if (!first) os << ",";
            first = false;
            os << "{\"v\":" << r.v << ",\"w\":" << r.w
               << ",\"payoff_usd\": " << format_dollars(res.payoff) << "}";
        }
        os << "]}}\n";
        emit_output(os.str(), out);
    } else {
        std::printf("%-18s %-20s %15s\n", "initial strategy", "tactic", "payoff");
        for (const Row& r : rows) {
            ProtocolResult res = run_meyer_protocol({r.v, r.w});
            std::printf("%-18s %-20s %15s\n", r.strategy, r.tactic,
                        ("$" + format_dollars(res.payoff)).c_str());
        }
        std::printf("\nNote: the protocol restores the initial joint state, so the payoff\n"
                    "depends only on the initial strategy; changing one's mind (any w) has\n"
                    "no effect. Narrative accounts sometimes quote $0 for the take-both/\n"
                    "change-mind case and \"$100000\" for its opposite; the computed values\n"
                    "above ($1000 and $1000000) are what the state evolution yields.\n");
    }
    return 0;
}

int cmd_newcomb_verify(std::size_t grid, double tol, bool as_json,
                       const std::optional<std::string>& out) {
    RestorationReport rep = verify_restoration(grid, tol);
    if (as_json || out) {
        std::ostringstream os;
        os << "{\"params\":{\"grid\":" << rep.grid_n << ",\"tol\":" << rep.tol << "},"
           << "\"payoff_usd\": null,"
           << "\"checks\":{\"max_deviation\":" << rep.max_deviation
           << ",\"pass\":" << (rep.pass ? "true" : "false") << "}}\n";
        emit_output(os.str(), out);
    } else {
        std::printf("restoration check on a %zux%zu (v,w) grid\n", rep.grid_n, rep.grid_n);
        std::printf("  max |final - initial| entry deviation: %.3e at v=%g w=%g\n",
                    rep.max_deviation, rep.worst_v, rep.worst_w);
        std::printf("  tolerance %.3e: %s\n", rep.tol, rep.pass ? "PASS" : "FAIL");
    }
    return rep.pass ? 0 : 2;
}

int cmd_market_scan(std::size_t grid, double radius, bool inverse, unsigned threads,
                    const std::optional<std::string>& out) {
    ScanConfig cfg;
    cfg.grid_n = grid;
    cfg.radius = radius;
    cfg.inverse_chart = inverse;
    cfg.threads = threads;
    std::string csv = emit_landscape_csv(scan_landscape(cfg));
    emit_output(csv, out);
    if (out) std::printf("wrote %zu bytes to %s\n", csv.size(), out->c_str());
    return 0;
}

int cmd_market_extrema(std::size_t grid, std::size_t refine, double radius, bool as_json,
                       const std::optional<std::string>& out) {
    ScanConfig cfg;
    cfg.grid_n = grid;
    cfg.radius = radius;
    cfg.refinement = refine;
    Extrema ext = find_extrema(cfg);
    cx zmax = ext.argmax.z(), zmin = ext.argmin.z();
    if (as_json || out) {
        std::ostringstream os;
        os << "{\"params\":{\"grid\":" << cfg.grid_n << ",\"radius\":" << cfg.radius
           << ",\"refine\":" << cfg.refinement << "},"
           << "\"payoff_usd\": null,\"checks\":{"
           << "\"argmax_z\":[" << format_coord(zmax.real()) << "," << format_coord(zmax.imag())
           << "],\"max_usd\": " << format_dollars(ext.max) << ","
           << "\"argmin_z\":[" << format_coord(zmin.real()) << "," << format_coord(zmin.imag())
           << "],\"min_usd\": " << format_dollars(ext.min) << "}}\n";
        emit_output(os.str(), out);
    } else {
        std::printf("payoff landscape extrema (grid %zu, radius %g, %zu refinements)\n",
                    cfg.grid_n, cfg.radius, cfg.refinement);
        std::printf("  max $%s at z = %.6f %+.6fi\n", format_dollars(ext.max).c_str(),
                    zmax.real(), zmax.imag());
        std::printf("  min $%s at z = %.6f %+.6fi\n", format_dollars(ext.min).c_str(),
                    zmin.real(), zmin.imag());
    }
    return 0;
}

int cmd_run_spec(const std::string& path, bool as_json, const std::optional<std::string>& out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open spec file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    GameSpecDoc doc = parse_game_spec(buf.str());
    RunReport report = execute_spec(doc);

    if (as_json || out) {
        std::ostringstream os;
        os << "{\"params\":{\"spec\":" << json(path).dump() << "},\"trace\":[";
        for (std::size_t i = 0; i < report.moves.size(); ++i) {
            const MoveSummary& m = report.moves[i];
            if (i) os << ",";
            os << "{\"step\":\"" << m.label << "\",\"trace\":" << format_coord(m.trace)
               << ",\"purity\":" << format_coord(m.purity) << ",\"diagonal\":[";
            for (std::size_t k = 0; k < m.diagonal.size(); ++k) {
                if (k) os << ",";
                os << format_coord(m.diagonal[k]);
            }
            os << "]}";
        }
        os << "],\"payoff_usd\": " << format_dollars(report.payoff)
           << ",\"checks\":{\"state_invariants\":"
           << (report.checks_ok ? "true" : "false") << "}}\n";
        emit_output(os.str(), out);
    } else {
        std::printf("executed %s: %zu move(s)\n", path.c_str(), doc.moves.size());
        for (const MoveSummary& m : report.moves)
            std::printf("  %-10s trace=%.12f purity=%.12f\n", m.label.c_str(), m.trace,
                        m.purity);
        std::printf("  expected payoff: $%s\n", format_dollars(report.payoff).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Newcomb game simulator"};
    app.require_subcommand(1);

    bool json_flag = false;
    app.add_flag("--json", json_flag, "emit machine-readable output on stdout");

    // newcomb
    CLI::App* newcomb = app.add_subcommand("newcomb", "Meyer tactic protocol for the two-box game");
    newcomb->require_subcommand(1);

    double v = 0.5, w = 0.5;
    bool with_trace = false;
    std::optional<std::string> out_path;
    CLI::App* nrun = newcomb->add_subcommand("run", "run the three-step protocol once");
    nrun->add_option("--v", v, "probability of the take-both strategy")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    nrun->add_option("--w", w, "probability of the change-of-mind tactic")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    nrun->add_flag("--trace", with_trace, "include per-step reduced matrices");
    nrun->add_option("--out", out_path, "write the JSON report to a file");

    CLI::App* ntable = newcomb->add_subcommand("table", "payoffs of the four pure cases");
    ntable->add_option("--out", out_path, "write the JSON report to a file");

    std::size_t grid = 51;
    double tol = 1e-12;
    CLI::App* nverify = newcomb->add_subcommand("verify", "state-restoration sweep over (v,w)");
    nverify->add_option("--grid", grid, "grid points per axis")->check(CLI::Range(2, 100000));
    nverify->add_option("--tol", tol, "max allowed entry deviation")
        ->check(CLI::PositiveNumber);
    nverify->add_option("--out", out_path, "write the JSON report to a file");

    // market
    CLI::App* market = app.add_subcommand("market", "payoff landscape over the strategy sphere");
    market->require_subcommand(1);

    std::size_t mgrid = 401;
    double radius = 4.0;
    bool inverse_chart = false;
    unsigned threads = 1;
    CLI::App* mscan = market->add_subcommand("scan", "sample the landscape on a chart grid");
    mscan->add_option("--grid", mgrid, "grid points per axis")->check(CLI::Range(3, 100000));
    mscan->add_option("--radius", radius, "half-width of the chart window")
        ->check(CLI::PositiveNumber);
    mscan->add_flag("--inverse-chart", inverse_chart, "also scan the u = 1/z chart");
    mscan->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
    mscan->add_option("--out", out_path, "write the CSV to a file (default: stdout)");

    std::size_t egrid = 101, refine = 24;
    double eradius = 4.0;
    CLI::App* mextrema = market->add_subcommand("extrema", "locate the payoff extrema");
    mextrema->add_option("--grid", egrid, "coarse grid points per axis")
        ->check(CLI::Range(3, 100000));
    mextrema->add_option("--refine", refine, "shrinking-grid refinement iterations")
        ->check(CLI::Range(0, 1000));
    mextrema->add_option("--radius", eradius, "half-width of the chart window")
        ->check(CLI::PositiveNumber);
    mextrema->add_option("--out", out_path, "write the JSON report to a file");

    // run --spec
    std::string spec_path;
    CLI::App* runspec = app.add_subcommand("run", "execute a declarative game-spec file");
    runspec->add_option("--spec", spec_path, "path to the JSON game spec")
        ->required()
        ->check(CLI::ExistingFile);
    runspec->add_option("--out", out_path, "write the JSON report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (nrun->parsed()) return cmd_newcomb_run(v, w, with_trace, json_flag, out_path);
        if (ntable->parsed()) return cmd_newcomb_table(json_flag, out_path);
        if (nverify->parsed()) return cmd_newcomb_verify(grid, tol, json_flag, out_path);
        if (mscan->parsed())
            return cmd_market_scan(mgrid, radius, inverse_chart, threads, out_path);
        if (mextrema->parsed())
            return cmd_market_extrema(egrid, refine, eradius, json_flag, out_path);
        if (runspec->parsed()) return cmd_run_spec(spec_path, json_flag, out_path);
    } catch (const qgame::SpecSyntaxError& e) {
        std::cerr << "spec syntax error at line " << e.line << ", column " << e.column << ": "
                  << e.what() << "\n";
        return 1;
    } catch (const qgame::SpecSchemaError& e) {
        std::cerr << "spec schema violation at " << e.field_path << ": " << e.what() << "\n";
        return 1;
    } catch (const qgame::SpecSemanticError& e) {
        std::cerr << "spec semantic violation: " << e.what() << "\n";
        return 1;
    } catch (const qgame::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const qgame::InternalConsistencyError& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "no subcommand selected\n";
    return 1;
}
