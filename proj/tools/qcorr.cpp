// qcorr: entropic and trace-norm (Schatten 1-norm) correlation measures
// for two-qubit Bell-diagonal states, with XXZ ground-state sweeps and
// self-verification against brute-force oracles.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcorr/core.hpp"
#include "qcorr/csv.hpp"
#include "qcorr/entropic.hpp"
#include "qcorr/geometric.hpp"
#include "qcorr/oracle.hpp"
#include "qcorr/svg.hpp"
#include "qcorr/verify.hpp"
#include "qcorr/xxz.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnphysical = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerification = 4;

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
}

std::string fmt(double v) { return qcorr::format_real(v, 12); }

// ---------------------------------------------------------------- analyze

std::string report_text(const qcorr::CorrelationReport& r) {
    const auto lam = qcorr::spectrum_bell(r.c);
    std::ostringstream out;
    out << "state: c = (" << fmt(r.c.c1) << ", " << fmt(r.c.c2) << ", " << fmt(r.c.c3) << ")\n";
    out << "spectrum: lambda_00 = " << fmt(lam[0]) << "  lambda_01 = " << fmt(lam[1])
        << "  lambda_10 = " << fmt(lam[2]) << "  lambda_11 = " << fmt(lam[3]) << "\n";
    out << "entropic:  Q_E = " << fmt(r.entropic.q_e) << "  C_E = " << fmt(r.entropic.c_e)
        << "  T_E = " << fmt(r.entropic.t_e) << "\n";
    out << "geometric: Q_G = " << fmt(r.geometric.q_g) << "  C_G = " << fmt(r.geometric.c_g)
        << "  T_G = " << fmt(r.geometric.t_g) << "\n";
    out << "optimal measurement axis: " << r.geometric.optimal_axis << "\n";
    return out.str();
}

ordered_json report_json(const qcorr::CorrelationReport& r) {
    const auto lam = qcorr::spectrum_bell(r.c);
    ordered_json j;
    j["c"] = {r.c.c1, r.c.c2, r.c.c3};
    j["spectrum"] = {lam[0], lam[1], lam[2], lam[3]};
    j["QE"] = r.entropic.q_e;
    j["CE"] = r.entropic.c_e;
    j["TE"] = r.entropic.t_e;
    j["QG"] = r.geometric.q_g;
    j["CG"] = r.geometric.c_g;
    j["TG"] = r.geometric.t_g;
    j["optimal_axis"] = r.geometric.optimal_axis;
    return j;
}

int run_analyze(double c1, double c2, double c3, bool verify, const std::string& format,
                const std::string& out_path) {
    const qcorr::CorrelationVector c{c1, c2, c3};
    const auto report = qcorr::analyze(c, verify);
    if (format == "json")
        emit(report_json(report).dump(2) + "\n", out_path);
    else
        emit(report_text(report), out_path);
    return kExitOk;
}

// ------------------------------------------------------------------ sweep

struct FamilyPoint {
    double x;
    qcorr::CorrelationVector c;
};

std::vector<double> linear_grid(double lo, double hi, int steps) {
    if (lo == hi) return {lo};
    if (steps < 2) throw CLI::ValidationError("--steps", "sweeps need at least 2 steps");
    std::vector<double> xs(steps);
    for (int i = 0; i < steps; ++i) xs[i] = lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
    return xs;
}

qcorr::CorrelationVector parse_triple(const std::string& text) {
    qcorr::CorrelationVector c;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &c.c1, &c.c2, &c.c3) != 3)
        throw CLI::ValidationError("triple", "expected 'c1,c2,c3', got '" + text + "'");
    return c;
}

int run_sweep(const std::string& family, double lo, double hi, int steps,
              const std::string& from_text, const std::string& to_text,
              const std::string& out_path, const std::string& plot_path, bool verify) {
    if (hi < lo) throw CLI::ValidationError("--min/--max", "empty range");
    std::vector<FamilyPoint> points;
    if (family == "su2") {
        if (lo < -1.0 - 1e-12 || hi > 1.0 / 3.0 + 1e-12)
            throw CLI::ValidationError("--min/--max", "su2 family domain is [-1, 1/3]");
        for (double x : linear_grid(lo, hi, steps)) points.push_back({x, {x, x, x}});
    } else if (family == "u1") {
        if (lo < -0.95 - 1e-12 || hi > 0.95 + 1e-12)
            throw CLI::ValidationError("--min/--max", "u1 family domain is [-0.95, 0.95]");
        for (double x : linear_grid(lo, hi, steps)) points.push_back({x, {x, -x, 0.9}});
    } else if (family == "custom-line") {
        const auto a = parse_triple(from_text);
        const auto b = parse_triple(to_text);
        for (double x : linear_grid(lo, hi, steps))
            points.push_back({x,
                              {a.c1 + x * (b.c1 - a.c1), a.c2 + x * (b.c2 - a.c2),
                               a.c3 + x * (b.c3 - a.c3)}});
    } else {
        throw CLI::ValidationError("--family", "must be su2, u1 or custom-line");
    }

    qcorr::CsvTable table;
    table.header = {"x", "c1", "c2", "c3", "physical", "QE", "CE", "TE", "QG", "CG", "TG"};
    for (const auto& p : points) {
        std::vector<std::string> row = {fmt(p.x), fmt(p.c.c1), fmt(p.c.c2), fmt(p.c.c3)};
        if (qcorr::is_physical(p.c)) {
            const auto r = qcorr::analyze(p.c, verify);
            row.push_back("true");
            row.push_back(fmt(r.entropic.q_e));
            row.push_back(fmt(r.entropic.c_e));
            row.push_back(fmt(r.entropic.t_e));
            row.push_back(fmt(r.geometric.q_g));
            row.push_back(fmt(r.geometric.c_g));
            row.push_back(fmt(r.geometric.t_g));
        } else {
            row.push_back("false");
            for (int k = 0; k < 6; ++k) row.emplace_back();
        }
        table.rows.push_back(std::move(row));
    }

    emit(qcorr::csv_to_string(table), out_path);
    if (!plot_path.empty())
        qcorr::write_svg(
            qcorr::render_line_chart(table, "x", {"QE", "CE", "TE", "QG", "CG", "TG"}), plot_path);
    return kExitOk;
}

// -------------------------------------------------------------------- xxz

int run_xxz(int length, double lo, double hi, int steps, double jump_threshold, int kink_window,
            const std::string& out_path, const std::string& plot_path, unsigned threads,
            int dense_cutoff, int lanczos_max_iter) {
    qcorr::xxz::SolverLimits limits;
    limits.dense_cutoff = dense_cutoff;
    limits.max_lanczos_iter = lanczos_max_iter;
    (void)qcorr::xxz::ChainSpec(length, lo);  // validate before the sweep starts
    const auto rows = qcorr::xxz::sweep_delta(length, lo, hi, steps, threads, limits);

    qcorr::CsvTable table;
    table.header = {"delta", "L",  "energy_density", "Gxx", "Gyy", "Gzz",        "c1",
                    "c2",    "c3", "QG",             "CG",  "TG",  "QE",         "CE",
                    "TE",    "degeneracy", "status"};
    bool any_failed = false;
    for (const auto& row : rows) {
        std::vector<std::string> r = {fmt(row.delta), std::to_string(row.length)};
        if (row.ok) {
            r.push_back(fmt(row.obs.energy_density));
            r.push_back(fmt(row.obs.g_xx));
            r.push_back(fmt(row.obs.g_yy));
            r.push_back(fmt(row.obs.g_zz));
            r.push_back(fmt(row.c.c1));
            r.push_back(fmt(row.c.c2));
            r.push_back(fmt(row.c.c3));
            r.push_back(fmt(row.report.geometric.q_g));
            r.push_back(fmt(row.report.geometric.c_g));
            r.push_back(fmt(row.report.geometric.t_g));
            r.push_back(fmt(row.report.entropic.q_e));
            r.push_back(fmt(row.report.entropic.c_e));
            r.push_back(fmt(row.report.entropic.t_e));
            r.push_back(std::to_string(row.obs.degeneracy));
            r.emplace_back("ok");
        } else {
            any_failed = true;
            for (int k = 0; k < 14; ++k) r.emplace_back();
            std::string status = row.status;
            for (char& ch : status)
                if (ch == ',' || ch == '\n') ch = ';';
            r.push_back("error: " + status);
        }
        table.rows.push_back(std::move(r));
    }

    emit(qcorr::csv_to_string(table), out_path);
    if (!plot_path.empty())
        qcorr::write_svg(qcorr::render_line_chart(table, "delta", {"QG", "CG", "TG"}), plot_path);

    std::ostream& summary = out_path.empty() ? std::cerr : std::cout;
    std::vector<qcorr::xxz::Transition> transitions;
    if (rows.size() >= 5) transitions = qcorr::xxz::detect_transitions(rows, jump_threshold, kink_window);
    summary << "transitions: " << transitions.size() << "\n";
    for (const auto& t : transitions)
        summary << "  " << (t.type == qcorr::xxz::TransitionType::first_order ? "first_order"
                                                                              : "crossing")
                << " at delta = " << fmt(t.delta) << "\n";
    return any_failed ? kExitSolver : kExitOk;
}

// ----------------------------------------------------------------- verify

int run_verify(std::uint64_t seed, std::size_t count, const std::string& fault_name,
               const std::string& out_path, unsigned threads) {
    qcorr::verify::Options opt;
    opt.seed = seed;
    opt.count = count;
    opt.fault = qcorr::verify::fault_from_name(fault_name);
    opt.workers = threads;
    const auto results = qcorr::verify::run_all(opt);

    ordered_json j;
    for (const auto& r : results) {
        ordered_json entry;
        entry["checked"] = r.checked;
        entry["failed"] = r.failed;
        if (r.first_failure)
            entry["first_failure_state"] = {r.first_failure->c1, r.first_failure->c2,
                                            r.first_failure->c3};
        else
            entry["first_failure_state"] = nullptr;
        entry["max_violation"] = r.max_violation;
        j[r.name] = entry;
    }
    emit(j.dump(2) + "\n", out_path);
    return qcorr::verify::all_passed(results) ? kExitOk : kExitVerification;
}

// ------------------------------------------------------------------- plot

int run_plot(const std::string& csv_path, const std::string& x_column,
             const std::string& y_columns, const std::string& out_path) {
    const auto table = qcorr::read_csv(csv_path);
    std::vector<std::string> ys;
    std::string current;
    for (char ch : y_columns + ",") {
        if (ch == ',') {
            if (!current.empty()) ys.push_back(current);
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    if (ys.empty()) throw CLI::ValidationError("--y", "no y columns given");
    qcorr::write_svg(qcorr::render_line_chart(table, x_column, ys), out_path);
    return kExitOk;
}

int dispatch(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qcorr::UnphysicalStateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnphysical;
    } catch (const qcorr::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "entropic and trace-norm correlation measures for two-qubit Bell-diagonal states"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value configuration file (flags take precedence)");

    // analyze
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    bool an_verify = false;
    std::string an_format = "text", an_out;
    auto* analyze_cmd =
        app.add_subcommand("analyze", "all six correlation measures for one state");
    analyze_cmd->add_option("c1", c1, "correlation <sigma_x sigma_x>")->required();
    analyze_cmd->add_option("c2", c2, "correlation <sigma_y sigma_y>")->required();
    analyze_cmd->add_option("c3", c3, "correlation <sigma_z sigma_z>")->required();
    analyze_cmd->add_flag("--verify", an_verify,
                          "cross-check closed forms against matrix/trace-norm routes");
    analyze_cmd->add_option("--format", an_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    analyze_cmd->add_option("-o,--output", an_out, "output file (default stdout)");

    // sweep
    std::string sw_family, sw_from, sw_to, sw_out, sw_plot;
    double sw_min = 0.0, sw_max = 0.0;
    int sw_steps = 2;
    bool sw_verify = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "one-parameter family sweep to CSV");
    sweep_cmd->add_option("--family", sw_family, "su2 | u1 | custom-line")->required();
    sweep_cmd->add_option("--min", sw_min, "lower end of the parameter range")->required();
    sweep_cmd->add_option("--max", sw_max, "upper end of the parameter range")->required();
    sweep_cmd->add_option("--steps", sw_steps, "number of grid points");
    sweep_cmd->add_option("--from", sw_from, "custom-line start 'c1,c2,c3'");
    sweep_cmd->add_option("--to", sw_to, "custom-line end 'c1,c2,c3'");
    sweep_cmd->add_option("-o,--output", sw_out, "CSV output path (default stdout)");
    sweep_cmd->add_option("--plot", sw_plot, "also render an SVG chart to this path");
    sweep_cmd->add_flag("--verify", sw_verify, "run the dual-path consistency check per row");

    // xxz
    int xx_length = 8, xx_steps = 2, xx_kink_window = 2, xx_dense_cutoff = 96,
        xx_lanczos_max_iter = 500;
    double xx_min = 0.0, xx_max = 0.0, xx_jump = 0.1;
    unsigned xx_threads = 0;
    std::string xx_out, xx_plot;
    auto* xxz_cmd =
        app.add_subcommand("xxz", "XXZ ring ground-state sweep with transition detection");
    xxz_cmd->add_option("-L,--length", xx_length, "ring length (even, 4..16)")->required();
    xxz_cmd->add_option("--min", xx_min, "lower anisotropy Delta")->required();
    xxz_cmd->add_option("--max", xx_max, "upper anisotropy Delta")->required();
    xxz_cmd->add_option("--steps", xx_steps, "number of Delta grid points")->required();
    xxz_cmd->add_option("--jump-threshold", xx_jump, "first-order jump threshold on (c1, c3)");
    xxz_cmd->add_option("--kink-window", xx_kink_window, "rows of stable sign around a crossing");
    xxz_cmd->add_option("--threads", xx_threads,
                        "worker threads (QCORR_THREADS overrides, 0 = auto)");
    xxz_cmd->add_option("--dense-cutoff", xx_dense_cutoff, "largest sector solved densely");
    xxz_cmd->add_option("--lanczos-max-iter", xx_lanczos_max_iter, "Lanczos iteration cap");
    xxz_cmd->add_option("-o,--output", xx_out, "CSV output path (default stdout)");
    xxz_cmd->add_option("--plot", xx_plot, "also render an SVG chart to this path");

    // verify
    std::uint64_t vf_seed = 0;
    std::size_t vf_count = 10000;
    unsigned vf_threads = 0;
    std::string vf_fault = "none", vf_out;
    auto* verify_cmd =
        app.add_subcommand("verify", "closed forms vs oracles; JSON report, exit 4 on failure");
    verify_cmd->add_option("--seed", vf_seed, "sampling seed");
    verify_cmd->add_option("--count", vf_count, "number of sampled states")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--threads", vf_threads, "worker threads (0 = auto)");
    verify_cmd->add_option("--inject-fault", vf_fault,
                           "testing hook: none | tg-flip-max (deliberately broken T_G)");
    verify_cmd->add_option("-o,--output", vf_out, "JSON output path (default stdout)");

    // plot
    std::string pl_csv, pl_x, pl_y, pl_out;
    auto* plot_cmd = app.add_subcommand("plot", "render CSV columns as an SVG line chart");
    plot_cmd->add_option("--input", pl_csv, "CSV file to plot")->required();
    plot_cmd->add_option("--x", pl_x, "x column name")->required();
    plot_cmd->add_option("--y", pl_y, "comma-separated y column names")->required();
    plot_cmd->add_option("-o,--output", pl_out, "SVG output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (app.got_subcommand(analyze_cmd))
        return dispatch([&] { return run_analyze(c1, c2, c3, an_verify, an_format, an_out); });
    if (app.got_subcommand(sweep_cmd))
        return dispatch([&] {
            return run_sweep(sw_family, sw_min, sw_max, sw_steps, sw_from, sw_to, sw_out, sw_plot,
                             sw_verify);
        });
    if (app.got_subcommand(xxz_cmd))
        return dispatch([&] {
            return run_xxz(xx_length, xx_min, xx_max, xx_steps, xx_jump, xx_kink_window, xx_out,
                           xx_plot, xx_threads, xx_dense_cutoff, xx_lanczos_max_iter);
        });
    if (app.got_subcommand(verify_cmd))
        return dispatch([&] { return run_verify(vf_seed, vf_count, vf_fault, vf_out, vf_threads); });
    if (app.got_subcommand(plot_cmd))
        return dispatch([&] { return run_plot(pl_csv, pl_x, pl_y, pl_out); });
    return kExitUsage;
}
