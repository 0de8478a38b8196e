#include "cli.hpp"

#include "hitasym/hitasym.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hitasym::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kSeedEnv = "HITASYM_SEED";

std::uint64_t default_seed() {
    if (const char* s = std::getenv(kSeedEnv)) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw SchemaError(std::string(kSeedEnv) + " is not an integer: " + s);
        }
    }
    return 1;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw SchemaError("cannot write '" + path + "'");
    f << text;
}

void write_json(const json& j, const std::string& path, std::ostream& out) { write_text(j.dump(2) + "\n", path, out); }

std::vector<Rational> parse_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(Rational::parse(item));
        } catch (const std::exception& e) {
            throw SchemaError(e.what());
        }
    }
    return out;
}

Rational parse_flag_rational(const std::string& text) {
    try {
        return Rational::parse(text);
    } catch (const std::exception& e) {
        throw SchemaError(e.what());
    }
}

StepCDF step_from(const Curve& c, const char* command) {
    if (auto* s = std::get_if<StepCDF>(&c)) return *s;
    if (auto* r = std::get_if<RationalF>(&c)) return r->step_cdf();
    if (auto* y = std::get_if<CyclicSystem>(&c)) return hitting_cdf(*y);
    throw SchemaError(std::string(command) + ": expected a step CDF, rational F, or cyclic system file");
}

using Distribution = std::variant<StepCDF, TargetF, EmpiricalCDF>;

Distribution distribution_from(Curve c) {
    return std::visit(
        [](auto&& v) -> Distribution {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RationalF>) return v.step_cdf();
            else if constexpr (std::is_same_v<T, CyclicSystem>) return hitting_cdf(v);
            else return std::move(v);
        },
        std::move(c));
}

void echo_config(std::ostream& err, const json& config) { err << "# config: " << config.dump() << "\n"; }

// ---- subcommands -----------------------------------------------------------

struct CurveOutput {
    std::string out_path;
    std::string csv_path;
    std::string format = "json";

    void add_to(CLI::App* sub) {
        sub->add_option("--out,-o", out_path, "Write the primary output here instead of stdout");
        sub->add_option("--csv", csv_path, "Also write the curve as CSV");
        sub->add_option("--format", format, "Primary output format")->check(CLI::IsMember({"json", "csv"}));
    }

    template <typename T>
    void emit(const T& curve, json primary, std::ostream& out) const {
        if (format == "csv") write_text(csv_string(curve), out_path, out);
        else write_json(primary, out_path, out);
        if (!csv_path.empty()) write_text(csv_string(curve), csv_path, out);
    }
};

int cmd_hitting(const std::string& file, bool hitting, const CurveOutput& o, std::ostream& out, std::ostream& err) {
    auto sys = cyclic_from_json(read_json_file(file));
    echo_config(err, {{"command", hitting ? "hitting" : "return"}, {"input", file}});
    StepCDF f = hitting ? hitting_cdf(sys) : return_cdf(sys);
    o.emit(f, to_json(f), out);
    return kPass;
}

int cmd_check_cdf(const std::string& file, const std::string& alpha_text, const std::string& out_path,
                  std::ostream& out, std::ostream& err) {
    StepCDF f = step_from(parse_curve_file(file), "check-cdf");
    echo_config(err, {{"command", "check-cdf"}, {"input", file}, {"alpha", alpha_text}});
    CReport report = check_conditions_c(f);
    json result{{"conditions_c", to_json(report)}};
    bool pass = report.pass();
    if (!alpha_text.empty() || !f.empty()) {
        Rational alpha = alpha_text.empty() ? f.jumps().front().t : parse_flag_rational(alpha_text);
        bool holds = check_inequality_I(f, alpha);
        result["inequality_I"] = {{"alpha", alpha.str()}, {"holds", holds}};
        pass = pass && holds;
    }
    result["pass"] = pass;
    write_json(result, out_path, out);
    return pass ? kPass : kViolation;
}

struct TargetSpec {
    std::string target;
    std::string params;
    std::string mesh = "1/64";

    void add_to(CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--target,--builtin", target, "TargetF JSON file or builtin name");
        if (required) opt->required();
        sub->add_option("--params", params, "Comma-separated builtin parameters (p/q)");
        sub->add_option("--mesh", mesh, "Sampling mesh for builtins")->capture_default_str();
    }

    [[nodiscard]] TargetF load() const {
        if (fs::exists(target)) {
            auto c = parse_curve_file(target);
            if (auto* t = std::get_if<TargetF>(&c)) return *t;
            throw SchemaError("'" + target + "' is not a TargetF file");
        }
        try {
            return cdf_from_builtin(target, parse_list(params), parse_flag_rational(mesh));
        } catch (const std::invalid_argument& e) {
            // unknown builtin names are usage errors, bad parameters are violations
            if (std::string(e.what()).rfind("unknown builtin", 0) == 0) throw SchemaError(e.what());
            throw;
        }
    }

    [[nodiscard]] json config() const { return {{"target", target}, {"params", params}, {"mesh", mesh}}; }
};

int cmd_check_classf(const std::string& file, const TargetSpec& ts, const std::string& out_path, std::ostream& out,
                     std::ostream& err) {
    TargetF f;
    if (!file.empty()) {
        auto c = parse_curve_file(file);
        auto* t = std::get_if<TargetF>(&c);
        if (!t) throw SchemaError("check-classf: '" + file + "' is not a TargetF file");
        f = *t;
    } else if (!ts.target.empty()) {
        f = ts.load();
    } else {
        throw SchemaError("check-classf: give a TargetF file or --builtin");
    }
    json config = ts.config();
    config["command"] = "check-classf";
    config["input"] = file;
    echo_config(err, config);
    CReport report = check_class_f(f);
    write_json(to_json(report), out_path, out);
    return report.pass() ? kPass : kViolation;
}

int cmd_stamp(const std::string& file, bool verify, const std::string& out_path, const std::string& system_path,
              std::ostream& out, std::ostream& err) {
    auto c = parse_curve(read_json_file(file));
    auto* rf = std::get_if<RationalF>(&c);
    if (!rf) throw SchemaError("stamp: '" + file + "' is not a RationalF file");
    echo_config(err, {{"command", "stamp"}, {"input", file}, {"verify", verify}});
    auto sp = derive_params(*rf);
    auto sys = build_system(sp);
    json result{{"params", to_json(sp)}, {"system", to_json(sys)}, {"stamp", to_json(make_stamp(sp))}};
    int code = kPass;
    if (verify) {
        bool ok = verify_roundtrip(*rf);
        result["verified"] = ok;
        if (!ok) code = kViolation;
    }
    if (!system_path.empty()) write_json(to_json(sys), system_path, out);
    write_json(result, out_path, out);
    return code;
}

int cmd_rationalize(const std::string& file, const std::string& eps_text, bool report, const std::string& out_path,
                    std::ostream& out, std::ostream& err) {
    Rational eps = parse_flag_rational(eps_text);
    auto c = parse_curve_file(file);
    echo_config(err, {{"command", "rationalize"}, {"input", file}, {"eps", eps.str()}});
    Rationalization rz = [&] {
        if (auto* t = std::get_if<TargetF>(&c)) return rationalize_target(*t, eps);
        return rationalize_step(step_from(c, "rationalize"), eps);
    }();
    bool star = std::visit(
        [&](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, TargetF>) return check_star(v, rz.f, eps);
            else return check_star(step_from(c, "rationalize"), rz.f, eps);
        },
        c);
    if (report)
        err << "N=" << rz.N << " q=" << rz.f.q() << " K=" << rz.f.K() << " star=" << (star ? "pass" : "fail") << "\n";
    write_json(to_json(rz.f), out_path, out);
    return star ? kPass : kViolation;
}

int cmd_realize(const TargetSpec& ts, const std::string& eps_text, unsigned margin, const std::string& out_path,
                const std::string& csv_dir, const std::string& sets_dir, std::ostream& out, std::ostream& err) {
    TargetF f0 = ts.load();
    auto eps_list = parse_list(eps_text);
    if (eps_list.empty()) throw SchemaError("realize: --eps-list is empty");
    json config = ts.config();
    config["command"] = "realize";
    json eps_json = json::array();
    for (const auto& e : eps_list) eps_json.push_back(e.str());
    config["eps_list"] = eps_json;
    config["margin"] = margin;
    echo_config(err, config);

    auto trace = realize(f0, eps_list, margin);
    json result = to_json(trace);
    result["config"] = config;
    bool all_ok = true;
    for (std::size_t i = 0; i < trace.stages.size(); ++i) {
        const auto& s = trace.stages[i];
        bool cond = check_conditions_c(s.hitting).pass() && s.hitting.jumps().front().t == s.measure;
        bool ineq = check_inequality_I(s.hitting, s.measure);
        bool small = s.measure < s.eps;
        bool close = s.levy <= s.eps + s.eps;
        result["stages"][i]["checks"] = {
            {"conditions_c", cond}, {"inequality_I", ineq}, {"mu_below_eps", small}, {"levy_within_2eps", close}};
        all_ok = all_ok && cond && ineq && small && close;
        err << "stage " << i << ": eps=" << s.eps.str() << " N=" << s.N << " q=" << s.tower.params.q
            << " m=" << s.tower.m << " mu(U)=" << decimal(s.measure) << " levy=" << decimal(s.levy) << "\n";
    }
    if (!csv_dir.empty()) {
        fs::create_directories(csv_dir);
        write_text(csv_string(f0), (fs::path(csv_dir) / "target.csv").string(), out);
        for (std::size_t i = 0; i < trace.stages.size(); ++i)
            write_text(csv_string(trace.stages[i].hitting),
                       (fs::path(csv_dir) / ("stage_" + std::to_string(i) + ".csv")).string(), out);
    }
    if (!sets_dir.empty()) {
        fs::create_directories(sets_dir);
        for (std::size_t i = 0; i < trace.stages.size(); ++i) {
            json u = to_json(trace.stages[i].tower.system());
            u["note"] = "residue i encodes the odometer m-cylinder with index i-1 (first m digits, least "
                        "significant first), m = " +
                        std::to_string(trace.stages[i].tower.m);
            write_json(u, (fs::path(sets_dir) / ("U_" + std::to_string(i) + ".json")).string(), out);
        }
    }
    result["pass"] = all_ok;
    write_json(result, out_path, out);
    return all_ok ? kPass : kViolation;
}

int cmd_simulate(const std::string& file, std::uint64_t samples, std::uint64_t seed, std::uint64_t horizon,
                 unsigned workers, const CurveOutput& o, std::ostream& out, std::ostream& err) {
    auto spec = system_spec_from_json(read_json_file(file));
    json config{{"command", "simulate"}, {"system", to_json(spec)}, {"samples", samples},
                {"seed", seed},          {"horizon", horizon}};
    echo_config(err, config);
    auto e = simulate_hitting(spec, samples, seed, horizon, workers);
    json result = to_json(e);
    result["config"] = config;
    std::string csv = "# seed=" + std::to_string(seed) + " samples=" + std::to_string(samples) +
                      " horizon=" + std::to_string(horizon) + "\n" + csv_string(e);
    if (o.format == "csv") write_text(csv, o.out_path, out);
    else write_json(result, o.out_path, out);
    if (!o.csv_path.empty()) write_text(csv, o.csv_path, out);
    err << "censored " << e.censored << " of " << e.count << "\n";
    if (e.all_censored()) {
        err << "warning: every trajectory was censored; raise --horizon\n";
        return kViolation;
    }
    return kPass;
}

int cmd_distance(const std::string& a_path, const std::string& b_path, const std::string& metric,
                 const std::string& horizon_text, const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto load = [](const std::string& path) -> Distribution {
        if (!fs::exists(path)) {
            TargetSpec builtin;
            builtin.target = path;
            return builtin.load();
        }
        return distribution_from(parse_curve_file(path));
    };
    Distribution a = load(a_path);
    Distribution b = load(b_path);
    echo_config(err, {{"command", "distance"}, {"a", a_path}, {"b", b_path}, {"metric", metric},
                      {"horizon", horizon_text}});
    Rational value = std::visit(
        [&](const auto& x, const auto& y) -> Rational {
            using X = std::decay_t<decltype(x)>;
            using Y = std::decay_t<decltype(y)>;
            if (metric == "levy") return levy_distance(x, y);
            if (metric == "ks") {
                if constexpr (std::is_same_v<X, EmpiricalCDF>) return ks_distance(x, y);
                else if constexpr (std::is_same_v<Y, EmpiricalCDF>) return ks_distance(y, x);
                else return sup_distance_all(x, y);
            }
            if (!horizon_text.empty()) return sup_distance(x, y, parse_flag_rational(horizon_text));
            return sup_distance_all(x, y);
        },
        a, b);
    write_json({{"metric", metric}, {"value", value.str()}, {"decimal", value.to_double()}}, out_path, out);
    return kPass;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact hitting-time distributions, stamp constructions, and Monte Carlo checks"};
    app.name("hitasym");
    app.require_subcommand(1);

    std::string file, file_b, alpha, eps, eps_list, metric = "ks", horizon_text, system_out, csv_dir, sets_dir;
    std::string out_path;
    bool verify = false, report = false;
    unsigned margin = 2, workers = 1;
    std::uint64_t samples = 100000, horizon = 1000000, seed = 0;
    CurveOutput curve_out;
    TargetSpec target;

    auto* hitting = app.add_subcommand("hitting", "Hitting-time CDF of a cyclic system");
    hitting->add_option("system", file, "CyclicSystem JSON")->required();
    curve_out.add_to(hitting);

    auto* ret = app.add_subcommand("return", "Return-time CDF of a cyclic system");
    ret->add_option("system", file, "CyclicSystem JSON")->required();
    curve_out.add_to(ret);

    auto* check_cdf = app.add_subcommand("check-cdf", "Check the hitting-CDF conditions and inequality (I)");
    check_cdf->add_option("cdf", file, "StepCDF, RationalF, or CyclicSystem JSON")->required();
    check_cdf->add_option("--alpha", alpha, "Slack for inequality (I); defaults to the first jump location");
    check_cdf->add_option("--out,-o", out_path, "Report path");

    auto* check_classf = app.add_subcommand("check-classf", "Check membership of a TargetF in the limit class");
    check_classf->add_option("target_file", file, "TargetF JSON");
    target.add_to(check_classf, false);
    check_classf->add_option("--out,-o", out_path, "Report path");

    auto* stamp = app.add_subcommand("stamp", "Build the periodic system and stamp of a rational F");
    stamp->add_option("rational_f", file, "RationalF JSON")->required();
    stamp->add_flag("--verify", verify, "Check that the built system reproduces F exactly");
    stamp->add_option("--out,-o", out_path, "Output path");
    stamp->add_option("--system-out", system_out, "Also write the CyclicSystem alone");

    auto* rationalize = app.add_subcommand("rationalize", "Rational approximation within (eps, eps) closeness");
    rationalize->add_option("input", file, "TargetF or StepCDF JSON")->required();
    rationalize->add_option("--eps", eps, "Closeness budget p/q")->required();
    rationalize->add_flag("--report", report, "Print N, q, K and the closeness verdict");
    rationalize->add_option("--out,-o", out_path, "Output path");

    auto* realize_cmd = app.add_subcommand("realize", "Realize a target as a limit of odometer hitting CDFs");
    target.add_to(realize_cmd, true);
    realize_cmd->add_option("--eps-list", eps_list, "Comma-separated decreasing eps values")->required();
    realize_cmd->add_option("--margin", margin, "Extra tower exponent beyond ceil(log2(q/eps))")->capture_default_str();
    realize_cmd->add_option("--out,-o", out_path, "Trace output path");
    realize_cmd->add_option("--csv-dir", csv_dir, "Directory for per-stage CSV curves");
    realize_cmd->add_option("--emit-sets", sets_dir, "Directory for the sets U_n as CyclicSystem JSON");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo hitting times");
    simulate->add_option("--system", file, "SystemSpec JSON")->required();
    simulate->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, std::string("Seed (default from ") + kSeedEnv + ", else 1)");
    simulate->add_option("--horizon", horizon)->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--workers", workers, "Worker threads; results do not depend on it")->capture_default_str();
    curve_out.add_to(simulate);

    auto* distance = app.add_subcommand("distance", "Distance between two curve files");
    distance->add_option("a", file, "First curve file or builtin name")->required();
    distance->add_option("b", file_b, "Second curve file or builtin name")->required();
    distance->add_option("--metric", metric)->check(CLI::IsMember({"ks", "sup", "levy"}))->capture_default_str();
    distance->add_option("--horizon", horizon_text, "Restrict the sup metric to [0, horizon]");
    distance->add_option("--out,-o", out_path, "Output path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*hitting) return cmd_hitting(file, true, curve_out, out, err);
        if (*ret) return cmd_hitting(file, false, curve_out, out, err);
        if (*check_cdf) return cmd_check_cdf(file, alpha, out_path, out, err);
        if (*check_classf) return cmd_check_classf(file, target, out_path, out, err);
        if (*stamp) return cmd_stamp(file, verify, out_path, system_out, out, err);
        if (*rationalize) return cmd_rationalize(file, eps, report, out_path, out, err);
        if (*realize_cmd) return cmd_realize(target, eps_list, margin, out_path, csv_dir, sets_dir, out, err);
        if (*simulate) {
            if (simulate->count("--seed") == 0) seed = default_seed();
            return cmd_simulate(file, samples, seed, horizon, workers, curve_out, out, err);
        }
        if (*distance) return cmd_distance(file, file_b, metric, horizon_text, out_path, out, err);
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "violation: " << e.what() << "\n";
        return kViolation;
    } catch (const std::domain_error& e) {
        err << "violation: " << e.what() << "\n";
        return kViolation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace hitasym::cli
