#include "cli/commands.hpp"

#include "cli/config.hpp"
#include "cli/table.hpp"
#include "ptkit/analytic.hpp"
#include "ptkit/circuit.hpp"
#include "ptkit/error.hpp"
#include "ptkit/floquet.hpp"
#include "ptkit/model.hpp"
#include "ptkit/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

namespace ptkit::cli {

namespace {

struct Result {
    Table table;
    json summary = json::object();
    bool truncated = false;
};

struct NumericFailure : Error {
    using Error::Error;
};

void push_c(std::vector<Cell>& row, cplx z) {
    row.emplace_back(z.real());
    row.emplace_back(z.imag());
}

std::vector<double> grid_of(const TimeWindow& w) { return uniform_grid(w.t0, w.t1, w.dt_out); }

void validate_window(const ModelSpec& spec, const TimeWindow& w) {
    const int samples = static_cast<int>(std::clamp((w.t1 - w.t0) / w.dt_out + 1.0, 257.0, 20001.0));
    validate(spec, w.t0, w.t1, samples);
}

// ---- simulate -------------------------------------------------------------------

void cmd_simulate(Reader& root, Result& res) {
    const System sys = System::read(root);
    const TimeWindow w = read_time(root);
    const IntegratorConfig cfg = read_integrator(root);
    const std::string frame = root.text("frame", "original");
    if (frame != "original" && frame != "effective") throw ConfigError("frame: expected \"original\" or \"effective\"");
    const Vec2 psi0 = root.vec2("initial", {1.0, 0.0});
    root.finish();

    const ModelSpec spec = sys.build();
    validate_window(spec, w);
    const bool energies = sys.kind() == System::Kind::circuit && frame == "original";

    res.table.columns = {"t", "re_psi1", "im_psi1", "re_psi2", "im_psi2", "norm"};
    if (energies) {
        for (const char* c : {"U_L", "U_C", "U_total"}) res.table.columns.push_back(c);
    }

    Trajectory traj;
    circuit::EnergyTrace et;
    if (energies) {
        if (w.t0 != 0.0) throw ConfigError("time.t0: circuit runs start at 0");
        if (psi0[0].imag() != 0.0 || psi0[1].imag() != 0.0) throw ConfigError("initial: circuit (V, I) must be real");
        et = circuit::simulate_energy(sys.circuit(), psi0[0].real(), psi0[1].real(), w.t1, cfg, w.dt_out);
        traj = et.trajectory;
        res.summary["max_imag_residual"] = et.max_imag_residual;
    } else if (frame == "original") {
        traj = propagate_state([&spec](double t) { return hamiltonian(spec, t); }, psi0, w.t0, w.t1, cfg, grid_of(w),
                               Frame::original);
    } else {
        GaugeTracker gt(spec);
        gt.advance(w.t0);
        const Vec2 chi0 = gt.A_inv() * psi0;
        traj = propagate_state([&spec](double t) { return effective_closed(spec, t); }, chi0, w.t0, w.t1, cfg,
                               grid_of(w), Frame::effective);
    }

    double max_norm = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::vector<Cell> row{traj.t[k]};
        push_c(row, traj.states[k][0]);
        push_c(row, traj.states[k][1]);
        row.emplace_back(traj.norm(k));
        max_norm = std::max(max_norm, traj.norm(k));
        if (energies) {
            const auto& e = et.samples[k];
            row.emplace_back(e.U_L);
            row.emplace_back(e.U_C);
            row.emplace_back(e.total);
        }
        res.table.add(std::move(row));
    }
    res.truncated = traj.truncated;
    res.summary["frame"] = frame;
    res.summary["samples"] = traj.size();
    res.summary["steps"] = traj.steps;
    res.summary["max_norm"] = max_norm;
    if (traj.truncated) throw NumericFailure("state overflowed; output truncated at t = " + std::to_string(traj.t.back()));
}

// ---- effective ------------------------------------------------------------------

void cmd_effective(Reader& root, Result& res) {
    const System sys = System::read(root);
    const TimeWindow w = read_time(root);
    root.finish();

    const ModelSpec spec = sys.build();
    validate_window(spec, w);
    const cplx nu = nu_eff(spec), nup = nu_prime_eff(spec);

    res.table.columns = {"t",      "re_Gamma", "im_Gamma", "re_h11", "im_h11",    "re_h12",      "im_h12",
                         "re_h21", "im_h21",   "re_h22",   "im_h22", "trace_abs", "offdiag_dev", "closed_dev"};
    double max_trace = 0.0, max_off = 0.0, max_closed = 0.0;
    cplx g_first{};
    bool first = true;
    double g_spread = 0.0;
    for (double t : grid_of(w)) {
        const cplx G = gamma_eff(spec, t);
        const Mat2 hn = effective_numeric(spec, t);
        const Mat2 hc = effective_closed(spec, t);
        const double tr = std::abs(trace(hn));
        const double off = std::max(std::abs(hn.m12 - nu), std::abs(hn.m21 - nup));
        const double cd = max_abs(hn - hc);
        std::vector<Cell> row{t};
        push_c(row, G);
        push_c(row, hn.m11);
        push_c(row, hn.m12);
        push_c(row, hn.m21);
        push_c(row, hn.m22);
        row.emplace_back(tr);
        row.emplace_back(off);
        row.emplace_back(cd);
        res.table.add(std::move(row));
        max_trace = std::max(max_trace, tr);
        max_off = std::max(max_off, off);
        max_closed = std::max(max_closed, cd);
        if (first) {
            g_first = G;
            first = false;
        }
        g_spread = std::max(g_spread, std::abs(G - g_first));
    }
    res.summary["max_trace_abs"] = max_trace;
    res.summary["max_offdiag_dev"] = max_off;
    res.summary["max_closed_dev"] = max_closed;
    res.summary["gamma_spread"] = g_spread;
    res.summary["nu_eff"] = complex_json(nu);
    res.summary["nu_prime_eff"] = complex_json(nup);
}

// ---- analytic -------------------------------------------------------------------

void cmd_analytic(Reader& root, Result& res) {
    Reader a = root.child("analytic");
    const std::string cs = a.text("case");
    const cplx nu = a.complex("nu", 1.0), nup = a.complex("nu_prime", 1.0);
    const Vec2 init = a.vec2("initial", {1.0, 0.0});
    const double tau1 = a.real("tau1", 10.0);
    const double dtau = a.real("dtau", 0.05);
    std::function<analytic::AnalyticSolution()> make;
    if (cs == "a") {
        const cplx g = a.complex("gamma", 0.5);
        make = [=] { return analytic::solve_case_a(g, init[0], init[1], nu, nup); };
    } else if (cs == "b-" || cs == "b+") {
        const auto sign = cs == "b-" ? analytic::Sign::minus : analytic::Sign::plus;
        make = [=] { return analytic::solve_case_b(sign, init[0], init[1], nu, nup); };
    } else if (cs == "c") {
        analytic::CaseCParams p;
        p.alpha = a.complex("alpha", 0.5);
        p.beta = a.complex("beta", 0.3);
        p.gamma_drive = a.complex("gamma_drive", 1.0);
        make = [=] { return analytic::solve_case_c(p, init[0], init[1], nu, nup); };
    } else {
        throw ConfigError("analytic.case: expected \"a\", \"b-\", \"b+\" or \"c\"");
    }
    a.finish();
    root.adopt("analytic", a);
    const IntegratorConfig cfg = read_integrator(root);
    root.finish();
    if (!(tau1 > 0.0)) throw ConfigError("analytic.tau1: must be positive");
    if (!(dtau > 0.0)) throw ConfigError("analytic.dtau: must be positive");

    const analytic::AnalyticSolution sol = make();
    const std::vector<double> grid = uniform_grid(0.0, tau1, dtau);
    const Trajectory num = propagate_state([&sol](double tau) { return sol.H_scaled(tau); }, sol.initial(), 0.0,
                                           tau1, cfg, grid, Frame::effective);

    res.table.columns = {"tau",       "re_zm",     "im_zm",     "re_zp",     "im_zp",   "re_zm_num",
                         "im_zm_num", "re_zp_num", "im_zp_num", "abs_err", "residual"};
    double max_err = 0.0, max_res = 0.0;
    for (std::size_t k = 0; k < num.size(); ++k) {
        const double tau = num.t[k];
        const Vec2 z = sol.zeta(tau);
        const Vec2& zn = num.states[k];
        const double err = std::sqrt(std::norm(z[0] - zn[0]) + std::norm(z[1] - zn[1]));
        const double r = analytic::first_order_residual(sol, tau);
        std::vector<Cell> row{tau};
        push_c(row, z[0]);
        push_c(row, z[1]);
        push_c(row, zn[0]);
        push_c(row, zn[1]);
        row.emplace_back(err);
        row.emplace_back(r);
        res.table.add(std::move(row));
        max_err = std::max(max_err, err);
        max_res = std::max(max_res, r);
    }
    res.truncated = num.truncated;
    res.summary["case"] = analytic::case_name(sol.case_id());
    res.summary["scale"] = complex_json(sol.scale());
    res.summary["max_abs_err"] = max_err;
    res.summary["residual_max"] = max_res;
    json consts = json::array();
    for (const cplx& c : sol.constants()) consts.push_back(complex_json(c));
    res.summary["constants"] = consts;
    const auto& d = sol.diagnostics();
    json tabulated = json::array();
    for (const cplx& c : d.tabulated) {
        if (std::isfinite(c.real()) && std::isfinite(c.imag())) {
            tabulated.push_back(complex_json(c));
        } else {
            tabulated.push_back(nullptr);
        }
    }
    res.summary["tabulated_constant_diagnostics"] = {{"tabulated", tabulated},
                                                 {"max_abs_diff", d.max_abs_diff},
                                                 {"tabulated_finite", d.tabulated_finite},
                                                 {"note", d.note}};
    if (num.truncated) throw NumericFailure("numeric reference overflowed");
}

// ---- floquet --------------------------------------------------------------------

void cmd_floquet(Reader& root, Result& res) {
    const System sys = System::read(root);
    const IntegratorConfig cfg = read_integrator(root);
    const double tol_phase = root.real("tol_phase", floquet::kTolPhase);
    Reader s = root.child("sweep");
    const std::string param = s.text("param");
    std::vector<double> values;
    double start = 0, stop = 0, step = 0;
    if (s.has("values")) {
        values = s.reals("values");
        if (values.empty()) throw ConfigError("sweep.values: empty");
        if (s.has("start") || s.has("stop") || s.has("step")) {
            throw ConfigError("sweep: give either values or start/stop/step");
        }
    } else {
        start = s.real("start");
        stop = s.real("stop");
        step = s.real("step");
    }
    const modfn::Expr period = s.expr("period");
    const std::string frame = s.text("frame", "effective");
    s.finish();
    root.adopt("sweep", s);
    root.finish();
    if (frame != "original" && frame != "effective") throw ConfigError("sweep.frame: expected original or effective");
    if (!(tol_phase > 0.0)) throw ConfigError("tol_phase: must be positive");
    sys.check_sweepable(param);
    if (values.empty()) {
        if (!(step > 0.0) || !(stop >= start)) throw ConfigError("sweep: need step > 0 and stop >= start");
        const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (n > 1'000'000) throw ConfigError("sweep: more than 1e6 points");
        for (long k = 0; k < n; ++k) values.push_back(start + k * step);
    }

    const bool eff = frame == "effective";
    auto period_at = [&](double v) {
        const cplx T = period.eval(0.0, sys.scope({{param, v}}));
        if (T.imag() != 0.0 || !(T.real() > 0.0) || !std::isfinite(T.real())) {
            throw ConfigError("sweep.period: must evaluate to a positive real number");
        }
        return T.real();
    };
    // Configuration problems surface here, before the sweep starts.
    (void)sys.build({{param, values.front()}});
    (void)period_at(values.front());

    const floquet::Family family = [&](double v) {
        auto spec = std::make_shared<const ModelSpec>(sys.build({{param, v}}));
        floquet::PeriodicGenerator g;
        g.T = period_at(v);
        if (eff) {
            g.H = [spec](double t) { return effective_closed(*spec, t); };
        } else {
            g.H = [spec](double t) { return hamiltonian(*spec, t); };
        }
        return g;
    };
    const floquet::SweepResult sweep = floquet::phase_sweep(family, values, cfg, tol_phase);

    res.table.columns = {"sweep_value", "abs_lambda1", "abs_lambda2", "re_eps1",
                         "im_eps1",     "re_eps2",     "im_eps2",     "phase"};
    int counts[3] = {0, 0, 0};
    double liouville = 0.0;
    json failures = json::array();
    for (const auto& p : sweep.points) {
        std::vector<Cell> row{p.value, p.abs_lambda[0], p.abs_lambda[1]};
        if (p.ok) {
            push_c(row, p.eps[0]);
            push_c(row, p.eps[1]);
            row.emplace_back(std::string(floquet::phase_name(p.phase)));
            ++counts[static_cast<int>(p.phase)];
            liouville = std::max(liouville, std::abs(p.abs_lambda[0] * p.abs_lambda[1] - 1.0));
        } else {
            for (int k = 0; k < 4; ++k) row.emplace_back(std::nan(""));
            row.emplace_back(std::string("error"));
            failures.push_back({{"sweep_value", p.value}, {"error", p.error}});
        }
        res.table.add(std::move(row));
    }
    res.summary["param"] = param;
    res.summary["points"] = sweep.points.size();
    res.summary["unbroken"] = counts[0];
    res.summary["broken"] = counts[1];
    res.summary["boundary"] = counts[2];
    res.summary["boundaries"] = sweep.boundaries;
    res.summary["max_liouville_dev"] = liouville;
    res.summary["threads"] = floquet::sweep_threads();
    res.summary["failures"] = failures;
    if (!failures.empty()) throw NumericFailure(std::to_string(failures.size()) + " sweep point(s) failed");
}

// ---- ep -------------------------------------------------------------------------

void cmd_ep(Reader& root, Result& res) {
    const System sys = System::read(root);
    const TimeWindow w = read_time(root);
    const double tol = root.real("tol_ep", 1e-6);
    root.finish();
    if (!(tol > 0.0)) throw ConfigError("tol_ep: must be positive");

    const ModelSpec spec = sys.build();
    validate_window(spec, w);
    if (spec.nu == 0.0) throw ConfigError("ep: nu must be nonzero");
    const EPReport rep = ep_report(spec, grid_of(w), tol);

    res.table.columns = {"t", "re_B", "im_B", "re_Bbar", "im_Bbar", "b_r", "b_i", "dist_orig", "dist_eff"};
    for (const auto& s : rep.samples) {
        std::vector<Cell> row{s.t};
        push_c(row, s.B);
        push_c(row, s.B_bar);
        push_c(row, s.b);
        row.emplace_back(s.dist_orig);
        row.emplace_back(s.dist_eff);
        res.table.add(std::move(row));
    }
    res.summary["tol_ep"] = rep.tol_ep;
    res.summary["orig_crossings"] = rep.orig_crossings;
    res.summary["eff_crossings"] = rep.eff_crossings;
}

using Command = void (*)(Reader&, Result&);

const std::map<std::string, Command>& commands() {
    static const std::map<std::string, Command> m{{"simulate", cmd_simulate},
                                                  {"effective", cmd_effective},
                                                  {"analytic", cmd_analytic},
                                                  {"floquet", cmd_floquet},
                                                  {"ep", cmd_ep}};
    return m;
}

bool write_text(const std::string& path, const std::string& text, std::ostream& err) {
    std::ofstream os(path, std::ios::binary);
    os << text;
    os.close();
    if (!os) {
        err << "ptkit: cannot write " << path << '\n';
        return false;
    }
    return true;
}

}  // namespace

const char* const* command_names() {
    static const char* const names[] = {"simulate", "effective", "analytic", "floquet", "ep", nullptr};
    return names;
}

int run(const std::string& command, const std::string& config_path, const std::string& out_path, Format format,
        std::ostream& err) {
    json meta;
    meta["command"] = command;
    meta["format"] = format == Format::csv ? "csv" : "json";
    Result res;
    int code = kOk;
    std::string message;
    json resolved = json::object();
    bool computed = false;

    const auto it = commands().find(command);
    if (it == commands().end()) {
        err << "ptkit: unknown command '" << command << "'\n";
        return kConfigError;
    }

    try {
        std::ifstream is(config_path);
        if (!is) throw ConfigError("cannot open config file " + config_path);
        json cfg;
        try {
            cfg = json::parse(is);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        Reader root(cfg, "");
        try {
            it->second(root, res);
            computed = true;
        } catch (...) {
            resolved = root.resolved();
            throw;
        }
        resolved = root.resolved();
    } catch (const NumericFailure& e) {
        code = kNumericError;
        message = e.what();
        computed = true;
    } catch (const ConfigError& e) {
        code = kConfigError;
        message = e.what();
    } catch (const ParseError& e) {
        code = kConfigError;
        message = e.what();
    } catch (const UnboundParameter& e) {
        code = kConfigError;
        message = e.what();
    } catch (const std::exception& e) {
        code = kNumericError;
        message = e.what();
        computed = true;
        res.truncated = true;
    }

    if (code == kOk && !res.table.sentinel_rows.empty()) {
        code = kNumericError;
        message = std::to_string(res.table.sentinel_rows.size()) + " row(s) with non-finite values";
    }
    if (code != kOk) err << "ptkit " << command << ": " << message << '\n';

    meta["status"] = code == kOk ? "ok" : code == kConfigError ? "config_error" : "numeric_error";
    meta["exit_code"] = code;
    if (!message.empty()) meta["message"] = message;
    meta["truncated"] = code == kNumericError;
    meta["rows"] = res.table.rows.size();
    meta["sentinel_rows"] = res.table.sentinel_rows;
    meta["summary"] = res.summary;
    meta["config"] = resolved;

    if (computed) {
        std::ostringstream os;
        if (format == Format::csv) {
            write_csv(res.table, os);
        } else {
            json doc;
            doc["command"] = command;
            doc["config"] = resolved;
            doc["summary"] = res.summary;
            doc["truncated"] = code == kNumericError;
            const json t = to_json(res.table);
            doc["columns"] = t["columns"];
            doc["rows"] = t["rows"];
            doc["sentinel_rows"] = res.table.sentinel_rows;
            os << doc.dump(1) << '\n';
        }
        if (!write_text(out_path, os.str(), err) && code == kOk) code = kNumericError;
    }
    if (!write_text(out_path + ".meta.json", meta.dump(2) + "\n", err) && code == kOk) code = kNumericError;
    return code;
}

}  // namespace ptkit::cli
