// main.cpp — the nodal-atlas command line: loads an experiment config file,
// dispatches to the library task it names, and writes deterministic
// CSV/JSON (and diagnostic SVG) artifacts into the output directory.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "report.hpp"

#include "nodal/autonomous.hpp"
#include "nodal/certify.hpp"
#include "nodal/errors.hpp"
#include "nodal/flow.hpp"
#include "nodal/log.hpp"
#include "nodal/model.hpp"
#include "nodal/quadrature.hpp"
#include "nodal/shoot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace nodal::cli {
namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    double tol_quad = 1e-10;
    double tol_ode = 1e-10;
    int threads = 1;
    unsigned long long seed = 0;
};

std::string out_path(const Options& opt, const std::string& name) {
    return (fs::path(opt.out_dir) / name).string();
}

// Run fn(i) for i in [0, n) on up to opt.threads workers.  Each index owns
// its output slot, so the artifact order is independent of scheduling.
void parallel_rows(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::min(std::max(threads, 1), n > 0 ? n : 1);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mu;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Shared emission helpers.

json margin_json(const Margin& m) {
    return json{{"label", m.label},
                {"lhs", m.lhs},
                {"rhs", m.rhs},
                {"slack", m.slack},
                {"error", m.err},
                {"status", to_string(margin_status(m))}};
}

CsvTable margins_csv(const std::vector<Margin>& margins) {
    CsvTable t({"label", "lhs", "rhs", "slack", "error", "status"});
    for (const Margin& m : margins)
        t.add_row({m.label, fmt17(m.lhs), fmt17(m.rhs), fmt17(m.slack),
                   fmt17(m.err), to_string(margin_status(m))});
    return t;
}

// task.expect = satisfied (default) demands a certified pass; any accepts
// whatever verdict came out and only reports it.
bool expect_satisfied(const ConfigMap& cfg) {
    const std::string e = cfg.get_string("task.expect", "satisfied");
    if (e == "satisfied") return true;
    if (e == "any") return false;
    throw ConfigError("task.expect must be 'satisfied' or 'any', got '" + e + "'");
}

Kappa kappa_from_config(const ConfigMap& cfg) {
    const std::string k = cfg.get_string("task.kappa0", "I");
    if (k == "I") return Kappa::I;
    if (k == "III") return Kappa::III;
    throw ConfigError("task.kappa0 must be 'I' or 'III', got '" + k + "'");
}

int lambda_sign(const ProblemSpec& pb) {
    if (pb.lambda > 0.0) return 1;
    if (pb.lambda < 0.0) return -1;
    return 0;
}

std::string joined_counts(const std::vector<int>& humps, const std::vector<int>& gaps) {
    std::string out;
    for (std::size_t i = 0; i < humps.size(); ++i) {
        if (i) out += ';' + std::to_string(gaps[i - 1]) + ';';
        out += std::to_string(humps[i]);
    }
    return out;
}

std::vector<std::pair<double, double>> trajectory_xy(const Trajectory& traj) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(traj.samples.size());
    for (const Sample& s : traj.samples) pts.push_back({s.z.x, s.z.y});
    return pts;
}

// ---------------------------------------------------------------------------
// task = periods: quarter and full periods over a list of hump levels.

int run_periods(const ConfigMap& cfg, const ProblemSpec& pb, const Options& opt) {
    const int hump = cfg.get_int("task.hump", 0);
    const std::vector<double> cs = cfg.get_list("task.c");
    if (cs.empty()) throw ConfigError("task.c must list at least one level");

    std::vector<QuarterTimes> qts(cs.size());
    parallel_rows(static_cast<int>(cs.size()), opt.threads, [&](int i) {
        qts[static_cast<std::size_t>(i)] =
            quarter_times(pb, hump, cs[static_cast<std::size_t>(i)], opt.tol_quad);
    });

    CsvTable t({"c", "T", "T_I", "T_II", "T_III", "T_IV", "error_est"});
    json rows = json::array();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const QuarterTimes& q = qts[i];
        t.add_row({fmt17(cs[i]), fmt17(q.period()), fmt17(q.t_I), fmt17(q.t_II),
                   fmt17(q.t_III), fmt17(q.t_IV), fmt17(q.error_est)});
        rows.push_back({{"c", cs[i]},
                        {"T", q.period()},
                        {"T_I", q.t_I},
                        {"T_II", q.t_II},
                        {"T_III", q.t_III},
                        {"T_IV", q.t_IV},
                        {"error_est", q.error_est}});
    }
    t.write(out_path(opt, "periods.csv"));
    write_json(out_path(opt, "periods.json"), json{{"task", "periods"}, {"rows", rows}});
    return 0;
}

// ---------------------------------------------------------------------------
// task = twist: one annulus certificate.

int run_twist(const ConfigMap& cfg, const ProblemSpec& pb, const Options& opt) {
    const int hump = cfg.get_int("task.hump", 0);
    const Annulus an =
        make_annulus(pb, hump, cfg.get_double("task.c1"), cfg.get_double("task.c2"));
    const TwistVariant variant =
        twist_variant_from_string(cfg.get_string("task.variant"));
    const TwistCertificate cert =
        check_twist(pb, an, pb.weight.tau(hump), cfg.get_int("task.alpha", 0),
                    cfg.get_int("task.beta", 1), variant, opt.tol_quad);

    margins_csv(cert.margins).write(out_path(opt, "twist.csv"));
    json j{{"task", "twist"},
           {"hump", cert.hump},
           {"variant", to_string(cert.variant)},
           {"alpha", cert.alpha},
           {"beta", cert.beta},
           {"c1", an.c1},
           {"c2", an.c2},
           {"d_level", cert.d_level},
           {"e_level", cert.e_level},
           {"tau", cert.tau},
           {"status", to_string(cert.status)},
           {"first_violation", cert.first_violation},
           {"deficit", cert.deficit},
           {"margins", json::array()}};
    for (const Margin& m : cert.margins) j["margins"].push_back(margin_json(m));
    write_json(out_path(opt, "twist.json"), j);

    std::cout << "twist " << to_string(cert.variant) << " hump " << cert.hump
              << ": " << to_string(cert.status) << "\n";
    if (expect_satisfied(cfg) && !cert.ok()) return 4;
    return 0;
}

// ---------------------------------------------------------------------------
// task = windows: one gap window condition.

WindowParams window_params_from(const ConfigMap& cfg, const std::string& prefix) {
    WindowParams wp;
    wp.c1_i = cfg.get_double(prefix + "c1_i", 0.0);
    wp.c2_i = cfg.get_double(prefix + "c2_i", 0.0);
    wp.c1_next = cfg.get_double(prefix + "c1_next", 0.0);
    wp.c2_next = cfg.get_double(prefix + "c2_next", 0.0);
    wp.d_hat = cfg.get_double(prefix + "d_hat", 0.0);
    wp.e_hat = cfg.get_double(prefix + "e_hat", 0.0);
    wp.xi = cfg.get_int(prefix + "xi", 0);
    wp.zeta = cfg.get_int(prefix + "zeta", 0);
    wp.c = cfg.get_double(prefix + "c", 0.0);
    wp.theta1 = cfg.get_double(prefix + "theta1", 0.0);
    wp.theta2 = cfg.get_double(prefix + "theta2", 0.0);
    return wp;
}

json window_json(const WindowReport& rep) {
    json j{{"gap", rep.gap},
           {"variant", to_string(rep.variant)},
           {"status", to_string(rep.status)},
           {"multiplier", rep.multiplier},
           {"angle_order_certified", rep.angle_order_certified},
           {"angle_order_empirical", rep.angle_order_empirical},
           {"margins", json::array()}};
    for (const Margin& m : rep.margins) j["margins"].push_back(margin_json(m));
    return j;
}

int run_windows(const ConfigMap& cfg, const ProblemSpec& pb, const Options& opt) {
    const int gap = cfg.get_int("task.gap", 0);
    const WindowVariant variant =
        window_variant_from_string(cfg.get_string("task.variant"));
    const WindowReport rep = check_linear_window(
        pb, gap, variant, window_params_from(cfg, "task."), opt.tol_quad);

    margins_csv(rep.margins).write(out_path(opt, "window.csv"));
    json j = window_json(rep);
    j["task"] = "windows";
    write_json(out_path(opt, "window.json"), j);

    std::cout << "window " << to_string(rep.variant) << " gap " << rep.gap << ": "
              << to_string(rep.status) << " (multiplier " << rep.multiplier << ")\n";
    if (expect_satisfied(cfg) && !rep.ok()) return 4;
    return 0;
}

// ---------------------------------------------------------------------------
// task = itineraries: enumerate the admissible quadrant sequences.

int run_itineraries(const ConfigMap& cfg, const ProblemSpec& pb, const Options& opt) {
    const int m = cfg.get_int("task.m");
    const std::vector<Itinerary> its =
        enumerate_itineraries(m, lambda_sign(pb), kappa_from_config(cfg));

    CsvTable t({"index", "text"});
    json rows = json::array();
    for (std::size_t i = 0; i < its.size(); ++i) {
        t.add_row({std::to_string(i), its[i].text()});
        rows.push_back({{"index", i}, {"text", its[i].text()}});
    }
    t.write(out_path(opt, "itineraries.csv"));
    write_json(out_path(opt, "itineraries.json"),
               json{{"task", "itineraries"}, {"rows", rows}});
    std::cout << its.size() << " admissible itineraries\n";
    return 0;
}

// ---------------------------------------------------------------------------
// task = bound: certify every hump (and optionally every gap) and combine
// into the guaranteed solution-count lower bound.

int run_bound(const ConfigMap& cfg, const ProblemSpec& pb, const Options& opt) {
    const int m = pb.weight.m();
    const std::vector<double> c1 = cfg.get_list("task.c1");
    const std::vector<double> c2 = cfg.get_list("task.c2");
    const std::vector<double> alpha = cfg.get_list("task.alpha");
    const std::vector<double> beta = cfg.get_list("task.beta");
    const std::size_t humps = static_cast<std::size_t>(m) + 1;
    if (c1.size() != humps || c2.size() != humps || alpha.size() != humps ||
        beta.size() != humps)
        throw ConfigError("task.c1/c2/alpha/beta must each list one entry per hump (" +
                          std::to_string(humps) + ")");
    const TwistVariant variant =
        twist_variant_from_string(cfg.get_string("task.variant"));

    const std::string mode_token = cfg.get_string("task.mode", "fixed-quadrants");
    BoundaryMode mode;
    if (mode_token == "fixed-quadrants") mode = BoundaryMode::fixed_quadrants;
    else if (mode_token == "dirichlet-axes") mode = BoundaryMode::dirichlet_axes;
    else
        throw ConfigError("task.mode must be 'fixed-quadrants' or 'dirichlet-axes', got '" +
                          mode_token + "'");

    std::vector<TwistCertificate> certs;
    certs.reserve(humps);
    for (std::size_t i = 0; i < humps; ++i) {
        const Annulus an = make_annulus(pb, static_cast<int>(i), c1[i], c2[i]);
        certs.push_back(check_twist(pb, an, pb.weight.tau(static_cast<int>(i)),
                                    static_cast<int>(alpha[i]),
                                    static_cast<int>(beta[i]), variant,
                                    opt.tol_quad));
    }

    std::vector<WindowReport> windows;
    if (cfg.has("task.window.variant")) {
        const WindowVariant wv =
            window_variant_from_string(cfg.get_string("task.window.variant"));
        for (int g = 0; g < m; ++g) {
            WindowParams wp = window_params_from(cfg, "task.window.");
            wp.c1_i = c1[static_cast<std::size_t>(g)];
            wp.c2_i = c2[static_cast<std::size_t>(g)];
            wp.c1_next = c1[static_cast<std::size_t>(g) + 1];
            wp.c2_next = c2[static_cast<std::size_t>(g) + 1];
            windows.push_back(check_linear_window(pb, g, wv, wp, opt.tol_quad));
        }
    }

    const CountBound bound =
        lower_bound(certs, windows, lambda_sign(pb), mode, kappa_from_config(cfg));

    CsvTable t({"itinerary", "factor"});
    json rows = json::array();
    for (const auto& [it, factor] : bound.breakdown) {
        t.add_row({it.text(), std::to_string(factor)});
        rows.push_back({{"itinerary", it.text()}, {"factor", factor}});
    }
    t.write(out_path(opt, "bound.csv"));

    json j{{"task", "bound"},
           {"total", bound.total},
           {"mode", mode_token},
           {"breakdown", rows},
           {"humps", json::array()},
           {"gaps", json::array()}};
    for (const TwistCertificate& c : certs)
        j["humps"].push_back({{"hump", c.hump},
                              {"variant", to_string(c.variant)},
                              {"status", to_string(c.status)}});
    for (const WindowReport& w : windows) j["gaps"].push_back(window_json(w));
    write_json(out_path(opt, "bound.json"), j);
    std::cout << "guaranteed solutions >= " << bound.total << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// task = solve: shooting scan along r0 against the terminal arc rL.

int run_solve(const ConfigMap& cfg, const ProblemSpec& pb, const Options& opt) {
    const BoundaryArc r0 =
        arc_from_config(cfg, "problem.r0", ArcKind::positive_y_axis);
    const BoundaryArc rL =
        arc_from_config(cfg, "problem.rL", ArcKind::negative_y_axis);
    const double max_winding = cfg.get_double("task.max_winding");

    ShootOptions so;
    so.samples_per_turn = cfg.get_int("task.samples_per_turn", 4096);
    so.tol = opt.tol_ode;
    if (cfg.has("task.span_lo") != cfg.has("task.span_hi"))
        throw ConfigError("task.span_lo and task.span_hi must be given together");
    if (cfg.has("task.span_lo")) {
        so.span = ArcSpan{cfg.get_double("task.span_lo"), cfg.get_double("task.span_hi")};
    } else if (opt.seed != 0) {
        so.span = default_span(pb, r0, max_winding, so.tol);
    }
    if (opt.seed != 0) {
        // Deterministic jitter for a given seed: shift the span start by a
        // fraction of one scan cell so reruns probe shifted sample grids.
        std::mt19937_64 rng(opt.seed);
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double cell = (so.span.hi - so.span.lo) /
                            static_cast<double>(std::max(so.samples_per_turn, 2));
        so.span.lo += u * cell;
        NODAL_LOG_INFO("scan jitter: span.lo shifted by %.3g", u * cell);
    }

    const std::vector<NodalSolution> sols = find_solutions(pb, r0, rL, max_winding, so);

    CsvTable t({"solution_id", "arc_param", "x0", "y0", "itinerary",
                "zeros_x_per_interval", "zeros_y_per_interval", "residual"});
    json rows = json::array();
    std::vector<SvgSeries> series;
    for (std::size_t i = 0; i < sols.size(); ++i) {
        const NodalSolution& s = sols[i];
        const std::string zx = joined_counts(s.signature.hump_x, s.signature.gap_x);
        const std::string zy = joined_counts(s.signature.hump_y, s.signature.gap_y);
        t.add_row({std::to_string(i), fmt17(s.s), fmt17(s.z0.x), fmt17(s.z0.y),
                   s.itinerary.text(), zx, zy, fmt17(s.terminal_residual)});
        rows.push_back({{"solution_id", i},
                        {"arc_param", s.s},
                        {"x0", s.z0.x},
                        {"y0", s.z0.y},
                        {"itinerary", s.itinerary.text()},
                        {"zeros_x_per_interval", zx},
                        {"zeros_y_per_interval", zy},
                        {"residual", s.terminal_residual}});
        series.push_back({"#" + std::to_string(i) + " " + s.itinerary.text(),
                          trajectory_xy(s.trajectory)});
    }
    t.write(out_path(opt, "solutions.csv"));
    write_json(out_path(opt, "solutions.json"),
               json{{"task", "solve"}, {"rows", rows}});
    write_svg_plot(out_path(opt, "phase.svg"), "phase portraits of found solutions",
                   series);
    std::cout << sols.size() << " solutions found\n";
    return 0;
}

// ---------------------------------------------------------------------------
// task = sweep: branch of the constant-weight problem across a lambda grid.

int run_sweep(const ConfigMap& cfg, const ProblemSpec& pb, const Options& opt) {
    if (pb.weight.m() != 0)
        throw ConfigError("sweep needs a constant weight: one hump spanning [0, L]");
    if (pb.g.kind != NonlinKind::power_p)
        throw ConfigError("sweep needs a pure power nonlinearity");
    const int n = cfg.get_int("task.n");
    const std::vector<double> grid = cfg.get_list("task.lambda", {});
    const double mu = pb.weight.heights[0];
    const double p = pb.g.p;
    const double L = pb.weight.L();

    CsvTable t({"n", "lambda", "M_plus", "x_plus", "error_est"});
    json rows = json::array();
    std::vector<SvgSeries> series;
    if (!grid.empty()) {
        const BranchSweep sweep = branch_sweep(n, grid, mu, p, L, opt.tol_quad);
        SvgSeries branch{"M_plus(lambda), n = " + std::to_string(n), {}};
        SvgSeries floor{"a priori bound", {}};
        for (const BranchPoint& bp : sweep.points) {
            t.add_row({std::to_string(bp.n), fmt17(bp.lambda), fmt17(bp.M_plus),
                       fmt17(bp.x_plus), fmt17(bp.period_residual)});
            rows.push_back({{"n", bp.n},
                            {"lambda", bp.lambda},
                            {"M_plus", bp.M_plus},
                            {"x_plus", bp.x_plus},
                            {"error_est", bp.period_residual}});
            branch.points.push_back({bp.lambda, bp.M_plus});
            if (bp.lambda < 0.0 && p > 1.0)
                floor.points.push_back({bp.lambda, apriori_curve(bp.lambda, mu, p)});
        }
        series.push_back(std::move(branch));
        if (floor.points.size() > 1) series.push_back(std::move(floor));
        if (!sweep.monotone)
            NODAL_LOG_WARN("sweep: branch is not monotone across the grid");
    }
    t.write(out_path(opt, "sweep.csv"));
    write_json(out_path(opt, "sweep.json"), json{{"task", "sweep"}, {"rows", rows}});
    write_svg_plot(out_path(opt, "bifurcation.svg"),
                   "branch amplitude vs lambda", series);
    std::cout << rows.size() << " branch points\n";
    return 0;
}

// ---------------------------------------------------------------------------
// task = reproduce-example: frozen worked-example tables.

int run_reproduce(const ConfigMap& cfg, const Options& opt) {
    const std::string which = cfg.get_string("task.example");
    CsvTable t({"choice", "quantity", "value", "error_est"});
    json rows = json::array();
    auto emit = [&](const std::string& choice, const std::string& quantity,
                    double value, double err) {
        t.add_row({choice, quantity, fmt17(value), fmt17(err)});
        rows.push_back({{"choice", choice},
                        {"quantity", quantity},
                        {"value", value},
                        {"error_est", err}});
    };

    if (which == "4.1") {
        // Two superlinear humps (p = 3) around one gap at lambda = 1; the
        // two parameter choices differ in the hump height and annulus levels.
        struct Choice {
            const char* name;
            double mu, c1, c2;
        };
        for (const Choice& ch : {Choice{"1", 20.0, 1.0, 5.0},
                                 Choice{"2", 130.0, 0.8, 20.0}}) {
            ProblemSpec pb;
            pb.h = HomeoSpec::identity();
            pb.g = NonlinSpec::power(3.0);
            pb.lambda = 1.0;
            pb.weight.breakpoints = {0.0, 1.0, 2.0, 3.0};
            pb.weight.heights = {ch.mu, ch.mu};

            const Annulus an = make_annulus(pb, 0, ch.c1, ch.c2);
            const CompatReport compat = check_compat(pb, an, an, ch.c1);
            const double transit = pos_gap_S_II_I(pb, 0, ch.c2, ch.c2, ch.c1);
            const double xp1 = solve_level_abscissa(pb, 0, ch.c1, Side::plus);
            const double xp2 = solve_level_abscissa(pb, 0, ch.c2, Side::plus);

            emit(ch.name, "x_com", compat.x_com, opt.tol_quad);
            emit(ch.name, "transit", transit, opt.tol_quad);
            emit(ch.name, "x_plus_sq_c1", xp1 * xp1, opt.tol_quad);
            emit(ch.name, "x_plus_sq_c2", xp2 * xp2, opt.tol_quad);
            emit(ch.name, "T_c1", period(pb, 0, ch.c1, opt.tol_quad), opt.tol_quad);
            emit(ch.name, "T_c2", period(pb, 0, ch.c2, opt.tol_quad), opt.tol_quad);
        }
    } else if (which == "4.2") {
        // Sweep-length bounds of the lambda = -1, p = 3 gap between
        // amplitude ratios 1.5 and 14.
        const double p = 3.0;
        const LambdaBounds b = lambda_bounds(1.5, 14.0, p, -1.0);
        emit("-", "T1_1.5", script_T1(1.5, p, opt.tol_quad), opt.tol_quad);
        emit("-", "T1_14", script_T1(14.0, p, opt.tol_quad), opt.tol_quad);
        emit("-", "Lambda1", b.Lambda1, opt.tol_quad);
        emit("-", "Lambda2", b.Lambda2, opt.tol_quad);
        // At |lambda| = 1 the sweep cap Lambda_star equals twice the larger
        // of the two bounds, the number the gap length is compared against.
        emit("-", "two_Lambda_star", b.Lambda_star, opt.tol_quad);
    } else {
        throw ConfigError("task.example must be '4.1' or '4.2', got '" + which + "'");
    }

    t.write(out_path(opt, "example.csv"));
    write_json(out_path(opt, "example.json"),
               json{{"task", "reproduce-example"}, {"example", which}, {"rows", rows}});
    std::cout << "example " << which << ": " << rows.size() << " values\n";
    return 0;
}

// ---------------------------------------------------------------------------

int dispatch(const ConfigMap& cfg, const Options& opt) {
    const std::string task = cfg.get_string("task.name");
    if (task == "reproduce-example") return run_reproduce(cfg, opt);

    const ProblemSpec pb = problem_from_config(cfg);
    for (const std::string& w : validate(pb).warnings)
        NODAL_LOG_WARN("%s", w.c_str());

    if (task == "periods") return run_periods(cfg, pb, opt);
    if (task == "twist") return run_twist(cfg, pb, opt);
    if (task == "windows") return run_windows(cfg, pb, opt);
    if (task == "itineraries") return run_itineraries(cfg, pb, opt);
    if (task == "bound") return run_bound(cfg, pb, opt);
    if (task == "solve") return run_solve(cfg, pb, opt);
    if (task == "sweep") return run_sweep(cfg, pb, opt);
    throw ConfigError("unknown task.name '" + task + "'");
}

void apply_env_log_level() {
    const char* lvl = std::getenv("NODAL_ATLAS_LOG");
    if (!lvl) return;
    const std::string s = lvl;
    if (s == "error") set_log_level(LogLevel::error);
    else if (s == "warn") set_log_level(LogLevel::warn);
    else if (s == "info") set_log_level(LogLevel::info);
    else if (s == "debug") set_log_level(LogLevel::debug);
    else
        std::cerr << "nodal-atlas: ignoring NODAL_ATLAS_LOG='" << s
                  << "' (expected error|warn|info|debug)\n";
}

}  // namespace
}  // namespace nodal::cli

int main(int argc, char** argv) {
    using namespace nodal;
    using namespace nodal::cli;

    Options opt;
    CLI::App app{"nodal-atlas: period maps, certificates, and nodal-solution "
                 "searches for stepwise-weight planar systems"};
    app.add_option("--config", opt.config_path, "experiment config file")
        ->required();
    app.add_option("--out", opt.out_dir, "output directory (created if absent)");
    app.add_option("--tol-quad", opt.tol_quad, "quadrature tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-ode", opt.tol_ode, "ODE integration tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", opt.threads, "worker threads for row-parallel tasks")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "scan jitter seed (0 = no jitter)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    apply_env_log_level();

    try {
        fs::create_directories(opt.out_dir);
        const ConfigMap cfg = parse_config_file(opt.config_path);
        return dispatch(cfg, opt);
    } catch (const ConfigError& e) {
        std::cerr << "nodal-atlas: config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidWindowError& e) {
        std::cerr << "nodal-atlas: config error: " << e.what() << "\n";
        return 2;
    } catch (const MissingCertificateError& e) {
        std::cerr << "nodal-atlas: certification failed: " << e.what() << "\n";
        return 4;
    } catch (const IncompatibleGeometryError& e) {
        std::cerr << "nodal-atlas: certification failed: " << e.what() << "\n";
        return 4;
    } catch (const NodalError& e) {
        std::cerr << "nodal-atlas: numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "nodal-atlas: error: " << e.what() << "\n";
        return 3;
    }
}
