#pragma once

// JSON run configurations. Every object is read through a Reader that
// records the values it handed out (defaults included) and rejects keys
// nobody asked for.

#include "cli/table.hpp"
#include "ptkit/circuit.hpp"
#include "ptkit/model.hpp"
#include "ptkit/modfn.hpp"
#include "ptkit/propagate.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ptkit::cli {

class Reader {
public:
    Reader(const json& j, std::string path);

    bool has(const std::string& key) const;
    double real(const std::string& key);
    double real(const std::string& key, double def);
    long integer(const std::string& key, long def);
    std::vector<double> reals(const std::string& key);
    cplx complex(const std::string& key);
    cplx complex(const std::string& key, cplx def);
    std::string text(const std::string& key);
    std::string text(const std::string& key, const std::string& def);
    /// Expression given as a string or a number.
    modfn::Expr expr(const std::string& key);
    modfn::Expr expr(const std::string& key, const std::string& def);
    Vec2 vec2(const std::string& key, Vec2 def);
    /// Name -> complex bindings; pi is pre-bound and reserved.
    modfn::ParamMap params(const std::string& key);
    Reader child(const std::string& key);
    /// Stores a finished child's resolved content under `key`.
    void adopt(const std::string& key, const Reader& child);
    /// Records a resolved value for a key that was absent.
    void put(const std::string& key, json value);

    /// Throws ConfigError naming the first key that was never read.
    void finish() const;

    const json& resolved() const noexcept { return resolved_; }
    const std::string& path() const noexcept { return path_; }

private:
    const json& at(const std::string& key);
    std::string where(const std::string& key) const;

    const json* j_;
    std::string path_;
    std::set<std::string> used_;
    json resolved_ = json::object();
};

json complex_json(cplx z);

/// The dynamical system a command runs on: a general model, the toy
/// waveguide model, or a circuit. Sweeps rebuild it with overrides.
class System {
public:
    enum class Kind { model, toy, circuit };

    /// Reads whichever of "model", "toy", "circuit" is present (exactly one).
    static System read(Reader& root);

    Kind kind() const noexcept { return kind_; }
    const char* kind_name() const noexcept;

    /// Parameter bindings visible to expressions (model/circuit params, or
    /// the toy's scalar fields), with `overrides` applied.
    modfn::ParamMap scope(const std::map<std::string, cplx>& overrides = {}) const;
    ModelSpec build(const std::map<std::string, cplx>& overrides = {}) const;
    /// Circuit view; only for Kind::circuit.
    circuit::CircuitSpec circuit(const std::map<std::string, cplx>& overrides = {}) const;
    /// Throws ConfigError unless `name` can be overridden.
    void check_sweepable(const std::string& name) const;

private:
    Kind kind_ = Kind::model;
    // model
    cplx nu_{1.0}, nu_prime_{1.0};
    modfn::Expr f1_ = modfn::Expr::number(1.0), f2_ = modfn::Expr::number(1.0);
    modfn::Expr w1_ = modfn::Expr::number(0.0), w2_ = modfn::Expr::number(0.0);
    double t_ref_ = 0.0;
    std::array<cplx, 2> prefactor_{1.0, 1.0};
    modfn::ParamMap params_;
    // toy
    std::map<std::string, cplx> toy_;
    // circuit
    circuit::CircuitSpec circuit_;
};

struct TimeWindow {
    double t0 = 0.0, t1 = 0.0, dt_out = 0.0;
};

TimeWindow read_time(Reader& root);
IntegratorConfig read_integrator(Reader& root);

}  // namespace ptkit::cli
