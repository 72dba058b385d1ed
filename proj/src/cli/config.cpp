#include "cli/config.hpp"

#include "ptkit/analytic.hpp"
#include "ptkit/error.hpp"

#include <cmath>
#include <numbers>

namespace ptkit::cli {

using modfn::Expr;

Reader::Reader(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError((path_.empty() ? std::string("config") : path_) + ": expected an object");
}

std::string Reader::where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool Reader::has(const std::string& key) const { return j_->contains(key); }

const json& Reader::at(const std::string& key) {
    if (!j_->contains(key)) throw ConfigError(where(key) + ": required key missing");
    used_.insert(key);
    return (*j_)[key];
}

double Reader::real(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where(key) + ": not finite");
    resolved_[key] = x;
    return x;
}

double Reader::real(const std::string& key, double def) {
    if (has(key)) return real(key);
    resolved_[key] = def;
    return def;
}

long Reader::integer(const std::string& key, long def) {
    if (!has(key)) {
        resolved_[key] = def;
        return def;
    }
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
    const long x = v.get<long>();
    resolved_[key] = x;
    return x;
}

std::vector<double> Reader::reals(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number() || !std::isfinite(x.get<double>())) throw ConfigError(where(key) + ": expected finite numbers");
        out.push_back(x.get<double>());
    }
    resolved_[key] = out;
    return out;
}

namespace {

cplx parse_complex(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ConfigError(where + ": expected a number or [re, im]");
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Expr parse_expr(const json& v, const std::string& where) {
    if (v.is_number()) return Expr::constant(v.get<double>());
    if (!v.is_string()) throw ConfigError(where + ": expected an expression string");
    try {
        return Expr::parse(v.get<std::string>());
    } catch (const ParseError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx Reader::complex(const std::string& key) {
    const cplx z = parse_complex(at(key), where(key));
    if (!finite(z)) throw ConfigError(where(key) + ": not finite");
    resolved_[key] = complex_json(z);
    return z;
}

cplx Reader::complex(const std::string& key, cplx def) {
    if (has(key)) return complex(key);
    resolved_[key] = complex_json(def);
    return def;
}

std::string Reader::text(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    resolved_[key] = v;
    return v.get<std::string>();
}

std::string Reader::text(const std::string& key, const std::string& def) {
    if (has(key)) return text(key);
    resolved_[key] = def;
    return def;
}

Expr Reader::expr(const std::string& key) {
    const Expr e = parse_expr(at(key), where(key));
    resolved_[key] = e.str();
    return e;
}

Expr Reader::expr(const std::string& key, const std::string& def) {
    if (has(key)) return expr(key);
    const Expr e = Expr::parse(def);
    resolved_[key] = e.str();
    return e;
}

Vec2 Reader::vec2(const std::string& key, Vec2 def) {
    if (!has(key)) {
        resolved_[key] = json::array({complex_json(def[0]), complex_json(def[1])});
        return def;
    }
    const json& v = at(key);
    if (!v.is_array() || v.size() != 2) throw ConfigError(where(key) + ": expected a two-component state");
    const Vec2 out{parse_complex(v[0], where(key) + "[0]"), parse_complex(v[1], where(key) + "[1]")};
    resolved_[key] = json::array({complex_json(out[0]), complex_json(out[1])});
    return out;
}

modfn::ParamMap Reader::params(const std::string& key) {
    modfn::ParamMap p;
    p.set("pi", std::numbers::pi);
    json res = json::object();
    if (has(key)) {
        const json& v = at(key);
        if (!v.is_object()) throw ConfigError(where(key) + ": expected an object of name: value");
        for (const auto& [name, val] : v.items()) {
            if (name == "pi" || name == "t" || name == "i") {
                throw ConfigError(where(key) + "." + name + ": reserved name");
            }
            const cplx z = parse_complex(val, where(key) + "." + name);
            if (!finite(z)) throw ConfigError(where(key) + "." + name + ": not finite");
            p.bind(name, z);
            res[name] = complex_json(z);
        }
    }
    resolved_[key] = res;
    return p;
}

Reader Reader::child(const std::string& key) { return Reader(at(key), where(key)); }

void Reader::adopt(const std::string& key, const Reader& child) { resolved_[key] = child.resolved(); }

void Reader::put(const std::string& key, json value) { resolved_[key] = std::move(value); }

void Reader::finish() const {
    for (const auto& item : j_->items()) {
        if (!used_.contains(item.key())) throw ConfigError(where(item.key()) + ": unknown key");
    }
}

// ---- System -------------------------------------------------------------------

const char* System::kind_name() const noexcept {
    switch (kind_) {
        case Kind::model: return "model";
        case Kind::toy: return "toy";
        case Kind::circuit: return "circuit";
    }
    return "?";
}

System System::read(Reader& root) {
    const int n = int(root.has("model")) + int(root.has("toy")) + int(root.has("circuit"));
    if (n != 1) throw ConfigError("config: exactly one of \"model\", \"toy\", \"circuit\" is required");
    System s;
    if (root.has("model")) {
        s.kind_ = Kind::model;
        Reader r = root.child("model");
        s.nu_ = r.complex("nu", 1.0);
        s.nu_prime_ = r.complex("nu_prime", 1.0);
        s.f1_ = r.expr("f1", "1");
        s.f2_ = r.expr("f2", "1");
        s.w1_ = r.expr("omega1", "0");
        s.w2_ = r.expr("omega2", "0");
        s.t_ref_ = r.real("t_ref", 0.0);
        const Vec2 pre = r.vec2("gauge_prefactor", {1.0, 1.0});
        s.prefactor_ = {pre[0], pre[1]};
        s.params_ = r.params("params");
        r.finish();
        root.adopt("model", r);
    } else if (root.has("toy")) {
        s.kind_ = Kind::toy;
        Reader r = root.child("toy");
        s.toy_["omega"] = r.real("omega", 1.0);
        s.toy_["eps1"] = r.real("eps1", 2.0);
        s.toy_["eps2"] = r.real("eps2", 2.0);
        s.toy_["gamma"] = r.real("gamma", 0.5);
        s.toy_["nu"] = r.complex("nu", 1.0);
        s.toy_["nu_prime"] = r.complex("nu_prime", 1.0);
        r.finish();
        root.adopt("toy", r);
    } else {
        s.kind_ = Kind::circuit;
        Reader r = root.child("circuit");
        circuit::CircuitSpec& c = s.circuit_;
        c.L0 = r.real("L0", 1.0);
        c.C0 = r.real("C0", 1.0);
        c.f = r.expr("f");
        const std::string mode = r.text("mode", "RLC");
        if (mode == "LC") {
            c.mode = circuit::Mode::LC;
        } else if (mode == "RLC") {
            c.mode = circuit::Mode::RLC;
        } else {
            throw ConfigError(r.path() + ".mode: expected \"LC\" or \"RLC\"");
        }
        if (r.has("resistance")) c.resistance = r.expr("resistance");
        c.params = r.params("params");
        r.finish();
        root.adopt("circuit", r);
        c.check();
    }
    return s;
}

modfn::ParamMap System::scope(const std::map<std::string, cplx>& overrides) const {
    modfn::ParamMap p;
    if (kind_ == Kind::toy) {
        p.set("pi", std::numbers::pi);
        for (const auto& [k, v] : toy_) p.set(k, v);
    } else {
        p = kind_ == Kind::model ? params_ : circuit_.params;
    }
    for (const auto& [k, v] : overrides) p.set(k, v);
    return p;
}

void System::check_sweepable(const std::string& name) const {
    if (name == "pi") throw ConfigError("sweep.param: pi cannot be swept");
    if (!scope().contains(name)) {
        throw ConfigError("sweep.param: '" + name + "' is not a parameter of the " + kind_name() + " block");
    }
}

circuit::CircuitSpec System::circuit(const std::map<std::string, cplx>& overrides) const {
    if (kind_ != Kind::circuit) throw ConfigError("not a circuit config");
    circuit::CircuitSpec c = circuit_;
    c.params = scope(overrides);
    return c;
}

ModelSpec System::build(const std::map<std::string, cplx>& overrides) const {
    switch (kind_) {
        case Kind::model: {
            ModelSpec m;
            m.params = scope(overrides);
            m.nu = nu_;
            m.nu_prime = nu_prime_;
            m.f1 = modfn::TimeFunction(f1_, m.params);
            m.f2 = modfn::TimeFunction(f2_, m.params);
            m.omega1 = modfn::TimeFunction(w1_, m.params);
            m.omega2 = modfn::TimeFunction(w2_, m.params);
            m.t_ref = t_ref_;
            m.gauge_prefactor = prefactor_;
            return m;
        }
        case Kind::toy: {
            const modfn::ParamMap p = scope(overrides);
            auto realp = [&](const char* k) {
                const cplx z = p.at(k);
                if (z.imag() != 0.0) throw ConfigError(std::string("toy.") + k + ": must be real");
                return z.real();
            };
            return analytic::toy_model(realp("omega"), realp("eps1"), realp("eps2"), realp("gamma"), p.at("nu"),
                                       p.at("nu_prime"));
        }
        case Kind::circuit: return circuit::to_model(circuit(overrides));
    }
    throw ConfigError("unknown system kind");
}

TimeWindow read_time(Reader& root) {
    Reader r = root.child("time");
    TimeWindow w;
    w.t0 = r.real("t0", 0.0);
    w.t1 = r.real("t1");
    w.dt_out = r.real("dt_out");
    r.finish();
    root.adopt("time", r);
    if (!(w.t1 > w.t0)) throw ConfigError("time: t1 must exceed t0");
    if (!(w.dt_out > 0.0)) throw ConfigError("time.dt_out: must be positive");
    if ((w.t1 - w.t0) / w.dt_out > 5e6) throw ConfigError("time: more than 5e6 output samples");
    return w;
}

IntegratorConfig read_integrator(Reader& root) {
    IntegratorConfig c;
    if (root.has("integrator")) {
        Reader r = root.child("integrator");
        c.rtol = r.real("rtol", c.rtol);
        c.atol = r.real("atol", c.atol);
        c.h_init = r.real("h_init", c.h_init);
        c.h_min = r.real("h_min", c.h_min);
        c.max_steps = r.integer("max_steps", c.max_steps);
        r.finish();
        root.adopt("integrator", r);
    } else {
        json d = json::object();
        d["rtol"] = c.rtol;
        d["atol"] = c.atol;
        d["h_init"] = c.h_init;
        d["h_min"] = c.h_min;
        d["max_steps"] = c.max_steps;
        root.put("integrator", d);
    }
    c.check();
    return c;
}

}  // namespace ptkit::cli
