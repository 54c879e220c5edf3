#ifndef HHM_APP_HPP
#define HHM_APP_HPP

// Subcommand logic behind the hhm executable. Each run_* returns a JSON
// report and an exit code; argument parsing lives in tools/hhm.cpp.

#include "flow.hpp"
#include "hamsys.hpp"
#include "parse.hpp"
#include "poisson.hpp"
#include "puiseux.hpp"
#include "reference.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hhm::app {

using json = nlohmann::ordered_json;

enum ExitCode : int {
    exit_pass = 0,
    exit_verification_failure = 1,
    exit_usage = 2,
    exit_blow_up = 3,
    exit_no_balance = 4,
    exit_elimination = 5,
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string system = "hh-case3";
    std::optional<std::string> A, B, epsilon;
    int order = 12;
    std::optional<double> rtol, atol;
    std::optional<std::vector<double>> u0;
    double t = 10;
    std::optional<double> t_start;
    std::optional<std::uint64_t> seed;
    double scale = 0.1;
    bool seed_from_series = false;
    double t0 = 0.01;
    double alpha = 0, beta = 0, gamma = 0;
    double threshold = 1e-8;
    std::string csv = "trajectory.csv";
    std::optional<std::string> output;
    std::string f, g;
};

struct RunResult {
    json report;
    int exit_code = exit_pass;
};

inline constexpr int kDefaultOrder = 12;

template <class T>
struct is_optional : std::false_type {};
template <class T>
struct is_optional<std::optional<T>> : std::true_type {};

/// Fills every key of `config` whose flag was not given on the command line.
inline void merge_config(RunConfig& cfg, const json& config, const std::set<std::string>& given)
{
    if (!config.is_object())
        throw UsageError("config file must hold a JSON object");
    auto take = [&](const char* key, auto& field) {
        if (!config.contains(key) || given.count(key))
            return;
        try {
            using T = std::decay_t<decltype(field)>;
            if constexpr (std::is_same_v<T, std::optional<std::string>>) {
                const auto& v = config.at(key);
                field = v.is_string() ? v.get<std::string>() : v.dump();
            } else if constexpr (is_optional<T>::value) {
                field = config.at(key).get<typename T::value_type>();
            } else {
                field = config.at(key).get<T>();
            }
        } catch (const json::exception& e) {
            throw UsageError(std::string("config key '") + key + "': " + e.what());
        }
    };
    for (const auto& [key, value] : config.items()) {
        static const std::set<std::string> known{"system", "A",     "B",     "epsilon", "order",  "rtol",
                                                 "atol",   "u0",    "t",     "t_start", "seed",   "scale",
                                                 "seed_from_series", "t0", "alpha", "beta", "gamma", "threshold",
                                                 "csv",    "output", "f",    "g"};
        if (!known.count(key))
            throw UsageError("unknown config key '" + key + "'");
    }
    take("system", cfg.system);
    take("A", cfg.A);
    take("B", cfg.B);
    take("epsilon", cfg.epsilon);
    take("order", cfg.order);
    take("rtol", cfg.rtol);
    take("atol", cfg.atol);
    take("u0", cfg.u0);
    take("t", cfg.t);
    take("t_start", cfg.t_start);
    take("seed", cfg.seed);
    take("scale", cfg.scale);
    take("seed_from_series", cfg.seed_from_series);
    take("t0", cfg.t0);
    take("alpha", cfg.alpha);
    take("beta", cfg.beta);
    take("gamma", cfg.gamma);
    take("threshold", cfg.threshold);
    take("csv", cfg.csv);
    take("output", cfg.output);
    take("f", cfg.f);
    take("g", cfg.g);
}

inline json load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

/// Integrator tolerances: explicit values, else HHM_RTOL / HHM_ATOL, else
/// the defaults.
inline IntegratorConfig integrator_config(const RunConfig& cfg)
{
    IntegratorConfig ic;
    auto env = [](const char* name, double fallback) {
        const char* v = std::getenv(name);
        if (!v || !*v)
            return fallback;
        char* end = nullptr;
        double x = std::strtod(v, &end);
        if (end == v || *end != '\0' || !(x > 0))
            throw UsageError(std::string(name) + " must be a positive number");
        return x;
    };
    ic.rtol = cfg.rtol.value_or(env("HHM_RTOL", ic.rtol));
    ic.atol = cfg.atol.value_or(env("HHM_ATOL", ic.atol));
    if (!(ic.rtol > 0) || !(ic.atol > 0))
        throw UsageError("tolerances must be positive");
    return ic;
}

inline SystemBundle load_bundle(const std::string& name)
{
    try {
        return systems::bundle_by_name(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

inline Rational exact_parameter(const std::string& name, const std::string& text)
{
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError("parameter " + name + " is not a number: '" + text + "'");
    }
}

/// Parameters fixed on the command line, checked against the system.
inline ParameterValues given_parameters(const RunConfig& cfg, const SystemBundle& b)
{
    ParameterValues out;
    auto put = [&](const char* name, const std::optional<std::string>& v) {
        if (!v)
            return;
        if (std::find(b.parameters.begin(), b.parameters.end(), name) == b.parameters.end())
            throw UsageError(std::string("system ") + b.name + " has no parameter " + name);
        out[name] = exact_parameter(name, *v);
    };
    put("A", cfg.A);
    put("B", cfg.B);
    put("eps", cfg.epsilon);
    return out;
}

inline json parameters_json(const SystemBundle& b, const ParameterValues& values)
{
    json p = json::object();
    for (const auto& name : b.parameters) {
        auto it = values.find(name);
        p[name] = it == values.end() ? json("symbolic") : json(it->second.get_str());
    }
    return p;
}

/// Numeric parameters for integration: A defaults to 1, and on the general
/// system B and eps default to the integrable values 16A and 16.
inline NumericParameters numeric_parameters(const RunConfig& cfg, const SystemBundle& b)
{
    ParameterValues exact = given_parameters(cfg, b);
    if (!exact.count("A"))
        exact["A"] = 1;
    if (b.name == "hh-general") {
        if (!exact.count("B"))
            exact["B"] = exact["A"] * 16;
        if (!exact.count("eps"))
            exact["eps"] = 16;
    }
    NumericParameters out;
    for (const auto& [k, v] : exact)
        out[k] = to_double(v);
    return out;
}

namespace detail {

struct Check {
    std::string name;
    bool pass;
    json residual;
};

inline json checks_json(const std::vector<Check>& checks)
{
    json arr = json::array();
    for (const auto& c : checks) {
        json o;
        o["name"] = c.name;
        o["status"] = c.pass ? "pass" : "fail";
        if (!c.pass)
            o["residual"] = c.residual;
        arr.push_back(std::move(o));
    }
    return arr;
}

inline Check zero_check(std::string name, const Polynomial& p)
{
    return {std::move(name), p.is_zero(), p.to_string()};
}

inline Check zero_check(std::string name, const std::vector<Polynomial>& ps)
{
    bool ok = true;
    json r = json::array();
    for (const auto& p : ps) {
        ok = ok && p.is_zero();
        r.push_back(p.to_string());
    }
    return {std::move(name), ok, r};
}

} // namespace detail

inline RunResult run_verify(const RunConfig& cfg)
{
    const SystemBundle raw = load_bundle(cfg.system);
    const ParameterValues values = given_parameters(cfg, raw);
    const SystemBundle b = raw.specialized(values);
    std::vector<detail::Check> checks;
    json info = json::array();

    for (const auto& inv : b.invariants)
        checks.push_back(detail::zero_check("conservation:" + inv.name, lie_derivative(inv.poly, b.field)));
    const VectorField XH = hamiltonian_vector_field(b.invariants.front().poly, b.poisson);
    checks.push_back(detail::zero_check("hamiltonian_field:" + b.invariants.front().name, (XH - b.field).components()));
    for (std::size_t i = 0; i < b.invariants.size(); ++i)
        for (std::size_t j = i + 1; j < b.invariants.size(); ++j)
            checks.push_back(detail::zero_check("bracket:" + b.invariants[i].name + "," + b.invariants[j].name,
                                                bracket(b.invariants[i].poly, b.invariants[j].poly, b.poisson)));
    {
        JacobiReport jr = jacobi_check(b.poisson);
        json r = json::array();
        for (const auto& t : jr.triples)
            if (!t.residual.is_zero())
                r.push_back({{"triple", {t.i + 1, t.j + 1, t.k + 1}}, {"residual", t.residual.to_string()}});
        checks.push_back({"jacobi", jr.pass, r});
    }

    if (b.name == "master") {
        const Polynomial& F3 = b.invariant("F3");
        checks.push_back(
            detail::zero_check("casimir:F3", hamiltonian_vector_field(F3, b.poisson).components()));
        const VectorField XF2 = hamiltonian_vector_field(b.invariant("F2"), b.poisson);
        auto rows = field_identity_mod_casimir(systems::listed_second_flow_master().specialized(values), XF2, F3);
        bool ok = true;
        json r = json::array();
        for (const auto& row : rows) {
            ok = ok && row.remainder.is_zero();
            r.push_back({{"component", row.component + 1},
                         {"difference", row.difference.to_string()},
                         {"remainder", row.remainder.to_string()}});
        }
        checks.push_back({"second_flow_mod_casimir", ok, r});
        json diff = json::array();
        for (const auto& row : rows)
            diff.push_back({{"component", row.component + 1}, {"difference", row.difference.to_string()}});
        info.push_back({{"name", "listed_second_flow_minus_hamiltonian_flow_of_F2"}, {"components", diff}});
    }
    if (b.name == "hh-case3" || b.name == "master") {
        const auto c3 = systems::build_case3_bundle();
        const auto m = systems::build_master_bundle();
        const auto phi = systems::morphism();
        checks.push_back(detail::zero_check("pushforward", systems::pushforward_check(c3.field, phi, m.field)));
        for (const auto& e : systems::pullback_invariants(phi))
            checks.push_back(detail::zero_check("pullback:" + e.name, e.difference));
    }
    if (b.name == "hh-case3") {
        const VectorField XH2 = hamiltonian_vector_field(b.invariant("H2"), b.poisson);
        const VectorField listed = systems::listed_second_flow_case3().specialized(values);
        const VectorField delta = listed - XH2;
        json diff = json::array();
        for (const auto& p : delta.components())
            diff.push_back(p.to_string());
        info.push_back({{"name", "listed_second_flow_minus_hamiltonian_flow_of_H2"},
                        {"identical", delta.is_zero()},
                        {"components", diff}});
    }

    std::size_t passed = 0;
    for (const auto& c : checks)
        passed += c.pass ? 1 : 0;
    const bool all = passed == checks.size();
    json rep;
    rep["command"] = "verify";
    rep["system"] = b.name;
    rep["parameters"] = parameters_json(raw, values);
    rep["checks"] = detail::checks_json(checks);
    rep["informational"] = info;
    rep["passed"] = passed;
    rep["total"] = checks.size();
    rep["status"] = all ? "pass" : "fail";
    return {rep, all ? exit_pass : exit_verification_failure};
}

inline json state_json(const std::vector<double>& u)
{
    json a = json::array();
    for (double x : u)
        a.push_back(x);
    return a;
}

/// Series of the integrable case at the default order, with the listing's
/// sign convention.
inline Expansion case3_expansion(const VectorField& field, int order)
{
    auto balances = find_balances(field, 2);
    if (balances.empty())
        throw std::runtime_error("no dominant balance for the integrable case");
    return expand_solution(field, balances.front(), order, reference::case3_conventions());
}

inline RunResult run_integrate(const RunConfig& cfg)
{
    const SystemBundle b = load_bundle(cfg.system);
    const NumericParameters params = numeric_parameters(cfg, b);
    const IntegratorConfig ic = integrator_config(cfg);
    if (!std::isfinite(cfg.t) || !(cfg.threshold > 0))
        throw UsageError("--t must be finite and --threshold positive");

    std::vector<NamedPolynomial> invariants = b.invariants;
    if (b.name == "hh-general" && !(params.at("eps") == 16 && params.at("B") == 16 * params.at("A")))
        invariants.resize(1);

    std::vector<double> u0;
    double t_start = cfg.t_start.value_or(0);
    json seeding;
    if (cfg.seed_from_series) {
        if (b.name != "hh-case3")
            throw UsageError("--seed-from-series is only available for hh-case3");
        if (cfg.u0)
            throw UsageError("--u0 and --seed-from-series are exclusive");
        if (!(cfg.t0 > 0))
            throw UsageError("--t0 must be positive");
        const Expansion ex = case3_expansion(b.field, kDefaultOrder);
        NumericParameters sp{{"A", params.at("A")}, {"alpha", cfg.alpha}, {"beta", cfg.beta}, {"gamma", cfg.gamma}};
        try {
            u0 = seed_from_series(ex.series, sp, cfg.t0);
        } catch (const SeedError& e) {
            throw UsageError(e.what());
        }
        t_start = cfg.t_start.value_or(cfg.t0);
        seeding = {{"t0", cfg.t0}, {"alpha", cfg.alpha}, {"beta", cfg.beta}, {"gamma", cfg.gamma}};
    } else if (cfg.u0) {
        u0 = *cfg.u0;
    } else if (cfg.seed) {
        u0 = random_states(b.field.dimension(), 1, *cfg.seed, cfg.scale).front();
    } else {
        throw UsageError("an initial condition is required: --u0, --seed or --seed-from-series");
    }
    if (u0.size() != b.field.dimension())
        throw UsageError("--u0 needs " + std::to_string(b.field.dimension()) + " values for " + b.name);

    const Trajectory tr = integrate(b.field, params, u0, t_start, cfg.t, ic, invariants);
    {
        std::ofstream out(cfg.csv);
        if (!out)
            throw UsageError("cannot write CSV file '" + cfg.csv + "'");
        write_csv(out, tr);
    }
    const DriftReport drift = invariant_drift(tr, invariants, params, cfg.threshold);

    json rep;
    rep["command"] = "integrate";
    rep["system"] = b.name;
    json pj = json::object();
    for (const auto& [k, v] : params)
        pj[k] = v;
    rep["parameters"] = pj;
    if (!seeding.is_null())
        rep["seed_from_series"] = seeding;
    rep["rtol"] = ic.rtol;
    rep["atol"] = ic.atol;
    rep["t_start"] = t_start;
    rep["t_end"] = cfg.t;
    rep["initial_state"] = state_json(u0);
    rep["final_time"] = tr.times.back();
    rep["final_state"] = state_json(tr.final_state());
    rep["accepted_steps"] = tr.accepted;
    rep["rejected_steps"] = tr.rejected;
    rep["status"] = to_string(tr.status);
    if (!tr.message.empty())
        rep["message"] = tr.message;
    json dj = json::object();
    for (std::size_t i = 0; i < drift.names.size(); ++i)
        dj[drift.names[i]] = drift.drift[i];
    rep["drift"] = dj;
    rep["threshold"] = cfg.threshold;
    rep["csv"] = cfg.csv;
    int code = exit_pass;
    if (!tr.ok())
        code = exit_blow_up;
    else if (!drift.pass)
        code = exit_verification_failure;
    rep["pass"] = code == exit_pass;
    return {rep, code};
}

inline json series_json(const PuiseuxSeries& s)
{
    json terms = json::array();
    for (const auto& [k, c] : s.coefficients)
        terms.push_back({s.exponent(k).get_str(), c.to_string()});
    json o;
    o["variable"] = s.variable;
    o["offset"] = s.is_zero() ? json(nullptr) : json(s.exponent(s.offset()).get_str());
    o["truncation"] = s.exponent(s.truncation).get_str();
    o["terms"] = terms;
    return o;
}

inline json balance_json(const Balance& b)
{
    json e = json::array(), c = json::array();
    for (std::size_t i = 0; i < b.exponents.size(); ++i) {
        e.push_back(b.exponent(i).get_str());
        c.push_back(b.coefficients[i].to_string());
    }
    return {{"exponents", e}, {"coefficients", c}, {"free_parameters", b.free_parameters}};
}

inline json resonance_json(const ResonanceReport& r)
{
    json eig = json::array(), orders = json::array(), disc = json::array();
    for (const auto& e : r.eigenvalues)
        eig.push_back({{"value", e.value.get_str()}, {"multiplicity", e.multiplicity}});
    for (const auto& res : r.resonances)
        orders.push_back({{"rho", res.rho.get_str()},
                          {"steps", res.order},
                          {"multiplicity", res.multiplicity},
                          {"parameters", res.parameters}});
    for (const auto& d : r.discarded)
        disc.push_back(d.get_str());
    return {{"indicial_polynomial", r.characteristic.to_string()},
            {"eigenvalues", eig},
            {"irrational_degree", r.irrational_degree},
            {"time_shift", r.time_shift},
            {"resonances", orders},
            {"discarded", disc},
            {"free_parameters_beyond_time_shift", r.resonance_parameter_count()},
            {"parameter_count", r.parameter_count}};
}

inline RunResult run_series(const RunConfig& cfg)
{
    const SystemBundle raw = load_bundle(cfg.system);
    if (cfg.order < kDefaultOrder)
        throw UsageError("--order must be at least " + std::to_string(kDefaultOrder));
    const ParameterValues values = given_parameters(cfg, raw);
    const SystemBundle b = raw.specialized(values);

    json rep;
    rep["command"] = "series";
    rep["system"] = b.name;
    rep["parameters"] = parameters_json(raw, values);
    rep["order"] = cfg.order;
    rep["denominator"] = 2;
    const auto balances = find_balances(b.field, 2);
    json bj = json::array();
    for (const auto& bal : balances)
        bj.push_back(balance_json(bal));
    rep["balances"] = bj;
    if (balances.empty()) {
        rep["status"] = "no_balance";
        return {rep, exit_no_balance};
    }
    const Balance& principal = balances.front();
    rep["principal"] = 0;

    int code = exit_pass;
    Expansion ex;
    try {
        ex = expand_solution(b.field, principal, cfg.order,
                             b.name == "hh-case3" ? reference::case3_conventions() : std::map<int, SeriesConvention>{});
    } catch (const ExpansionError& e) {
        rep["resonance_report"] = resonance_json(kowalewski_exponents(b.field, principal));
        rep["status"] = "inconsistent";
        rep["error"] = e.what();
        return {rep, exit_verification_failure};
    }
    rep["resonance_report"] = resonance_json(ex.resonances);
    json sj = json::array();
    for (const auto& s : ex.series)
        sj.push_back(series_json(s));
    rep["series"] = sj;

    const auto residual = ode_residual(b.field, ex.series);
    json rj = json::array();
    for (const auto& r : residual)
        rj.push_back({{"component", b.field.phase_names()[r.component]},
                      {"exponent", r.exponent.get_str()},
                      {"coefficient", r.coefficient.to_string()}});
    rep["ode_residual"] = {{"verified", residual.empty()}, {"nonzero", rj}};
    if (!residual.empty())
        code = exit_verification_failure;

    json inv = json::array();
    std::size_t casimirs = 0;
    for (const auto& I : b.invariants) {
        json o;
        o["name"] = I.name;
        const bool casimir = b.name == "master" && casimir_check(I.poly, b.poisson);
        casimirs += casimir ? 1 : 0;
        o["casimir"] = casimir;
        try {
            o["restriction"] = invariant_restriction(ex.series, I.poly).to_string();
        } catch (const InvariantMismatch& e) {
            o["error"] = e.what();
            code = exit_verification_failure;
        } catch (const std::domain_error& e) {
            o["unreachable"] = e.what();
        }
        inv.push_back(std::move(o));
    }
    rep["invariants"] = inv;
    if (casimirs)
        rep["parameters_on_casimir_level"] = ex.resonances.parameter_count - casimirs;

    if (b.name == "hh-case3") {
        bool ok = true;
        for (std::size_t i = 0; i < 2; ++i) {
            const auto d = ex.series[i].derivative(ex.series[i + 2].variable);
            const auto& x = ex.series[i + 2];
            for (const auto& [k, c] : x.coefficients)
                if (k <= d.truncation && !(d.coefficient(k) == c))
                    ok = false;
            for (const auto& [k, c] : d.coefficients)
                if (k <= x.truncation && !(x.coefficient(k) == c))
                    ok = false;
        }
        rep["derivative_check"] = ok;
        if (!ok)
            code = exit_verification_failure;
        json diff = json::array();
        std::size_t mismatches = 0;
        for (const auto& d : reference::compare_case3_series(ex.series)) {
            mismatches += d.match ? 0 : 1;
            diff.push_back({{"variable", d.variable},
                            {"exponent", d.exponent.get_str()},
                            {"listed", d.listed.to_string()},
                            {"computed", d.computed.to_string()},
                            {"match", d.match}});
        }
        rep["reference_diff"] = {{"mismatches", mismatches}, {"entries", diff}};
    }
    rep["status"] = code == exit_pass ? "pass" : "fail";
    return {rep, code};
}

inline json monomial_json(const std::vector<MonomialDiff>& rows)
{
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"monomial", r.monomial},
                     {"derived", r.derived.to_string()},
                     {"reference", r.reference.to_string()},
                     {"match", r.match}});
    return a;
}

inline RunResult run_curve(const RunConfig& cfg)
{
    if (cfg.system != "hh-case3")
        throw UsageError("curve is only defined for hh-case3");
    if (cfg.order < kDefaultOrder)
        throw UsageError("--order must be at least " + std::to_string(kDefaultOrder));
    const SystemBundle raw = load_bundle(cfg.system);
    const ParameterValues values = given_parameters(cfg, raw);
    const SystemBundle b = raw.specialized(values);
    const Expansion ex = case3_expansion(b.field, cfg.order);
    const VariableSet ring = ex.ring.extended({"b1", "b2"});
    const Polynomial h1 = invariant_restriction(ex.series, b.invariant("H1")).embed(ring);
    const Polynomial h2 = invariant_restriction(ex.series, b.invariant("H2")).embed(ring);
    const Polynomial r1 = h1 - Polynomial::variable(ring, "b1");
    const Polynomial r2 = h2 - Polynomial::variable(ring, "b2");

    json rep;
    rep["command"] = "curve";
    rep["system"] = b.name;
    rep["parameters"] = parameters_json(raw, values);
    rep["order"] = cfg.order;
    const std::vector<std::string> all{"alpha", "beta", "gamma"};
    rep["relations"] = {
        {"H1",
         {{"computed", h1.to_string()},
          {"reference", reference::case3_h1_relation().to_string()},
          {"monomials", monomial_json(compare_by_monomial(h1, reference::case3_h1_relation(), all))}}},
        {"H2",
         {{"computed", h2.to_string()},
          {"reference", reference::case3_h2_relation().to_string()},
          {"monomials", monomial_json(compare_by_monomial(h2, reference::case3_h2_relation(), all))}}}};
    CurveRelation cr;
    try {
        cr = eliminate_and_compare_curve(r1, r2, reference::case3_curve());
    } catch (const EliminationError& e) {
        rep["status"] = "elimination_failed";
        rep["error"] = e.what();
        return {rep, exit_elimination};
    }
    const bool consistent = cr.back_substitution_r1.is_zero() && cr.back_substitution_curve.is_zero();
    std::size_t mismatches = 0;
    for (const auto& m : cr.comparison)
        mismatches += m.match ? 0 : 1;
    const Exponents ab3 = [&] {
        Exponents e(ring.size(), 0);
        e[ring.index_of("alpha")] = 1;
        e[ring.index_of("beta")] = 3;
        return e;
    }();
    rep["gamma_solution"] = cr.solution.to_string();
    rep["curve"] = {{"primitive", cr.primitive.to_string()},
                    {"normalized", cr.normalized.to_string()},
                    {"degree_in_beta", cr.normalized.degree_in("beta")},
                    {"alpha_beta3_coefficient", cr.normalized.coefficient(ab3).get_str()}};
    rep["reference_curve"] = reference::case3_curve().to_string();
    rep["monomials"] = monomial_json(cr.comparison);
    rep["mismatches"] = mismatches;
    rep["back_substitution"] = {{"r1", cr.back_substitution_r1.to_string()},
                                {"curve", cr.back_substitution_curve.to_string()}};
    rep["status"] = consistent ? "pass" : "fail";
    return {rep, consistent ? exit_pass : exit_verification_failure};
}

inline RunResult run_bracket(const RunConfig& cfg)
{
    const SystemBundle b = load_bundle(cfg.system);
    if (cfg.f.empty() || cfg.g.empty())
        throw UsageError("bracket needs --f and --g");
    const VariableSet& vars = b.field.variables();
    Polynomial F, G;
    try {
        F = parse_polynomial(cfg.f, vars);
        G = parse_polynomial(cfg.g, vars);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const Polynomial br = bracket(F, G, b.poisson);
    json rep;
    rep["command"] = "bracket";
    rep["system"] = b.name;
    rep["f"] = F.to_string();
    rep["g"] = G.to_string();
    rep["bracket"] = br.to_string();
    rep["zero"] = br.is_zero();
    return {rep, exit_pass};
}

inline RunResult run(const std::string& command, const RunConfig& cfg)
{
    if (command == "verify")
        return run_verify(cfg);
    if (command == "integrate")
        return run_integrate(cfg);
    if (command == "series")
        return run_series(cfg);
    if (command == "curve")
        return run_curve(cfg);
    if (command == "bracket")
        return run_bracket(cfg);
    throw UsageError("unknown command '" + command + "'");
}

} // namespace hhm::app

#endif
