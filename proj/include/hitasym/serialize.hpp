#pragma once

#include "hitasym/conditions.hpp"
#include "hitasym/cyclic_system.hpp"
#include "hitasym/montecarlo.hpp"
#include "hitasym/odometer.hpp"
#include "hitasym/stamp_machine.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

namespace hitasym {

using json = nlohmann::json;

/// Input that does not follow the file schema (as opposed to well-formed
/// input whose values break a type invariant, which surfaces as
/// std::invalid_argument from the type's constructor).
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace io {

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline Rational rational(const json& j) {
    if (!j.is_string()) throw SchemaError("expected a rational string \"p/q\", got " + j.dump());
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        throw SchemaError(e.what());
    }
}

inline std::uint64_t integer(const json& j) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw SchemaError("expected a nonnegative integer, got " + j.dump());
    return j.get<std::uint64_t>();
}

inline const json& array(const json& j, const char* what) {
    if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array");
    return j;
}

inline std::vector<Rational> rationals(const json& j, const char* what) {
    std::vector<Rational> out;
    for (const auto& x : array(j, what)) out.push_back(rational(x));
    return out;
}

inline std::vector<unsigned> symbols(const json& j) {
    std::vector<unsigned> out;
    for (const auto& x : array(j, "word")) out.push_back(static_cast<unsigned>(integer(x)));
    return out;
}

} // namespace io

// ---- writers -------------------------------------------------------------

inline json to_json(const Rational& r) { return r.str(); }

inline json to_json(const StepCDF& f) {
    json jumps = json::array();
    for (const auto& j : f.jumps()) jumps.push_back({{"t", j.t.str()}, {"size", j.size.str()}});
    return {{"jumps", std::move(jumps)}};
}

inline json to_json(const TargetF& f) {
    json pts = json::array();
    for (const auto& b : f.points()) pts.push_back({b.t.str(), b.value.str()});
    json out{{"breakpoints", std::move(pts)}};
    if (f.encodes_jump()) out["jump_flag"] = true;
    return out;
}

inline json to_json(const RationalF& f) {
    json betas = json::array();
    for (const auto& b : f.betas()) betas.push_back(b.str());
    return {{"alpha", f.alpha().str()}, {"betas", std::move(betas)}};
}

inline json to_json(const CyclicSystem& s) { return {{"q", s.q()}, {"marked", s.marked()}}; }

inline json to_json(const StampParams& sp) {
    return {{"q", sp.q}, {"p", sp.p}, {"k", sp.k}, {"pvals", sp.pvals}};
}

inline json to_json(const Stamp& s) { return {{"height", s.height}, {"offsets", s.marked_offsets}}; }

inline json to_json(const CReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) v.push_back({{"condition", x.condition}, {"witness", x.witness}});
    return {{"pass", r.pass()}, {"violations", std::move(v)}};
}

inline json to_json(const EmpiricalCDF& e) {
    return {{"scale", e.scale.str()}, {"count", e.count},   {"censored", e.censored},
            {"horizon", e.horizon},   {"times", e.times}};
}

inline json to_json(const KacTown& town) {
    json s = json::array();
    for (const auto& x : town.skyscrapers) s.push_back({{"height", x.height}, {"base_width", x.base_width.str()}});
    return {{"skyscrapers", std::move(s)}, {"ground_mass", town.ground_mass.str()}};
}

inline json to_json(const SystemSpec& spec) {
    struct Visitor {
        json operator()(const BernoulliShift& b) const {
            json p = json::array();
            for (const auto& x : b.probabilities) p.push_back(x.str());
            return {{"kind", "bernoulli"}, {"probabilities", std::move(p)}, {"word", b.target.word}};
        }
        json operator()(const MarkovShift& m) const {
            json rows = json::array();
            for (const auto& row : m.matrix) {
                json r = json::array();
                for (const auto& x : row) r.push_back(x.str());
                rows.push_back(std::move(r));
            }
            json pi = json::array();
            for (const auto& x : m.stationary) pi.push_back(x.str());
            return {{"kind", "markov"}, {"matrix", std::move(rows)}, {"stationary", std::move(pi)},
                    {"word", m.target.word}};
        }
        json operator()(const Rotation& r) const {
            return {{"kind", "rotation"}, {"angle", r.angle_text}, {"arc", {r.arc_lo.str(), r.arc_hi.str()}}};
        }
        json operator()(const CyclicTarget& c) const {
            return {{"kind", "cyclic"}, {"q", c.system.q()}, {"marked", c.system.marked()}};
        }
    };
    return std::visit(Visitor{}, spec.kind());
}

inline json to_json(const RealizationTrace& trace) {
    json stages = json::array();
    for (const auto& s : trace.stages) {
        stages.push_back({{"eps", s.eps.str()},
                          {"N", s.N},
                          {"q", s.tower.params.q},
                          {"m", s.tower.m},
                          {"r", s.tower.r},
                          {"leftover", s.tower.leftover},
                          {"mu_U", s.measure.str()},
                          {"levy", s.levy.str()},
                          {"levy_decimal", s.levy.to_double()},
                          {"rational_f", to_json(s.rational)},
                          {"hitting_cdf", to_json(s.hitting)}});
    }
    return {{"margin", trace.margin}, {"stages", std::move(stages)}};
}

// ---- readers -------------------------------------------------------------

inline StepCDF step_cdf_from_json(const json& j) {
    std::vector<Jump> jumps;
    for (const auto& x : io::array(io::field(j, "jumps"), "jumps"))
        jumps.push_back({io::rational(io::field(x, "t")), io::rational(io::field(x, "size"))});
    return StepCDF(std::move(jumps));
}

inline TargetF target_from_json(const json& j) {
    std::vector<Breakpoint> pts;
    for (const auto& x : io::array(io::field(j, "breakpoints"), "breakpoints")) {
        if (!x.is_array() || x.size() != 2) throw SchemaError("breakpoint must be a pair [t, value]");
        pts.push_back({io::rational(x[0]), io::rational(x[1])});
    }
    bool flag = false;
    if (j.contains("jump_flag")) {
        if (!j["jump_flag"].is_boolean()) throw SchemaError("jump_flag must be boolean");
        flag = j["jump_flag"].get<bool>();
    }
    return TargetF(std::move(pts), flag);
}

inline RationalF rational_f_from_json(const json& j) {
    return RationalF(io::rational(io::field(j, "alpha")), io::rationals(io::field(j, "betas"), "betas"));
}

inline CyclicSystem cyclic_from_json(const json& j) {
    std::vector<std::uint64_t> marked;
    for (const auto& x : io::array(io::field(j, "marked"), "marked")) marked.push_back(io::integer(x));
    return CyclicSystem(io::integer(io::field(j, "q")), std::move(marked));
}

inline EmpiricalCDF empirical_from_json(const json& j) {
    EmpiricalCDF e;
    e.scale = io::rational(io::field(j, "scale"));
    e.count = io::integer(io::field(j, "count"));
    e.censored = io::integer(io::field(j, "censored"));
    e.horizon = io::integer(io::field(j, "horizon"));
    for (const auto& x : io::array(io::field(j, "times"), "times")) e.times.push_back(io::integer(x));
    if (e.scale.sign() <= 0) throw std::invalid_argument("empirical CDF: scale must be positive");
    if (!std::is_sorted(e.times.begin(), e.times.end()))
        throw std::invalid_argument("empirical CDF: times are not sorted");
    if (!e.times.empty() && e.times.front() == 0) throw std::invalid_argument("empirical CDF: zero hitting time");
    if (e.times.size() + e.censored != e.count)
        throw std::invalid_argument("empirical CDF: times + censored != count");
    return e;
}

inline SystemSpec system_spec_from_json(const json& j) {
    const auto& kind = io::field(j, "kind");
    if (!kind.is_string()) throw SchemaError("kind must be a string");
    const auto k = kind.get<std::string>();
    if (k == "bernoulli")
        return SystemSpec::bernoulli(io::rationals(io::field(j, "probabilities"), "probabilities"),
                                     io::symbols(io::field(j, "word")));
    if (k == "markov") {
        std::vector<std::vector<Rational>> matrix;
        for (const auto& row : io::array(io::field(j, "matrix"), "matrix")) matrix.push_back(io::rationals(row, "row"));
        return SystemSpec::markov(std::move(matrix), io::rationals(io::field(j, "stationary"), "stationary"),
                                  io::symbols(io::field(j, "word")));
    }
    if (k == "rotation") {
        const auto& angle = io::field(j, "angle");
        if (!angle.is_string()) throw SchemaError("angle must be a string");
        auto arc = io::rationals(io::field(j, "arc"), "arc");
        if (arc.size() != 2) throw SchemaError("arc must be [a, b]");
        try {
            return SystemSpec::rotation(angle.get<std::string>(), arc[0], arc[1]);
        } catch (const std::invalid_argument& e) {
            if (std::string(e.what()).rfind("Rational", 0) == 0) throw SchemaError(e.what());
            throw;
        }
    }
    if (k == "cyclic") return SystemSpec::cyclic(cyclic_from_json(j));
    throw SchemaError("unknown system kind '" + k + "'");
}

/// Any of the file types a curve-consuming command accepts, detected from
/// its keys.
using Curve = std::variant<StepCDF, TargetF, RationalF, CyclicSystem, EmpiricalCDF>;

inline Curve parse_curve(const json& j) {
    if (!j.is_object()) throw SchemaError("top-level value must be an object");
    if (j.contains("jumps")) return step_cdf_from_json(j);
    if (j.contains("breakpoints")) return target_from_json(j);
    if (j.contains("alpha") || j.contains("betas")) return rational_f_from_json(j);
    if (j.contains("times")) return empirical_from_json(j);
    if (j.contains("q") || j.contains("marked")) return cyclic_from_json(j);
    throw SchemaError("unrecognized curve file: none of jumps/breakpoints/alpha/times/q present");
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("'" + path + "': " + e.what());
    }
}

inline Curve parse_curve_file(const std::string& path) { return parse_curve(read_json_file(path)); }

// ---- CSV -----------------------------------------------------------------

inline std::string decimal(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", r.to_double());
    return buf;
}

/// "t,F" rows; each jump contributes its left limit and its value at t.
inline void write_csv(std::ostream& os, const StepCDF& f) {
    os << "t,F\n";
    Rational below;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto& t = f.jumps()[i].t;
        os << decimal(t) << ',' << decimal(below) << '\n';
        below = f.cumulative(i);
        os << decimal(t) << ',' << decimal(below) << '\n';
    }
}

inline void write_csv(std::ostream& os, const TargetF& f) {
    os << "t,F\n";
    for (const auto& b : f.points()) os << decimal(b.t) << ',' << decimal(b.value) << '\n';
}

inline void write_csv(std::ostream& os, const EmpiricalCDF& e) {
    os << "t,F\n";
    std::uint64_t below = 0;
    for (std::size_t i = 0; i < e.times.size();) {
        std::size_t j = i;
        while (j < e.times.size() && e.times[j] == e.times[i]) ++j;
        Rational t = Rational(from_u64(e.times[i])) * e.scale;
        os << decimal(t) << ',' << decimal(make_rational(below, e.count)) << '\n';
        below += j - i;
        os << decimal(t) << ',' << decimal(make_rational(below, e.count)) << '\n';
        i = j;
    }
}

inline std::string csv_string(const auto& curve) {
    std::ostringstream os;
    write_csv(os, curve);
    return os.str();
}

} // namespace hitasym
