#ifndef HHM_PUISEUX_HPP
#define HHM_PUISEUX_HPP

// Formal series solutions in powers of t^(1/d): dominant balances, their
// resonances, the coefficient recursion, restriction of invariants to the
// series and elimination of one parameter between two such restrictions.

#include "linalg.hpp"
#include "vector_field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhm {

inline constexpr int kUnbounded = 1 << 28;

/// One series in t^(1/denominator). Keys are exponents times the
/// denominator; every coefficient with key <= truncation is exact.
struct PuiseuxSeries {
    std::string variable;
    VariableSet ring;
    int denominator = 1;
    std::map<int, Polynomial> coefficients;
    int truncation = 0;

    Rational exponent(int key) const
    {
        Rational r(key, denominator);
        r.canonicalize();
        return r;
    }

    bool is_zero() const { return coefficients.empty(); }

    /// Key of the lowest nonzero coefficient.
    int offset() const
    {
        if (coefficients.empty())
            throw std::domain_error("series for '" + variable + "' has no nonzero coefficient");
        return coefficients.begin()->first;
    }

    Polynomial coefficient(int key) const
    {
        if (key > truncation)
            throw std::out_of_range("series for '" + variable + "' is truncated below key " + std::to_string(key));
        auto it = coefficients.find(key);
        return it == coefficients.end() ? Polynomial(ring) : it->second;
    }

    /// Termwise d/dt.
    PuiseuxSeries derivative(std::string name) const
    {
        PuiseuxSeries out{std::move(name), ring, denominator, {}, truncation - denominator};
        for (const auto& [k, c] : coefficients)
            if (k != 0)
                out.coefficients.emplace(k - denominator, c * ratio(k, denominator));
        return out;
    }

    /// Value at real t > 0 (principal branch), ring variables given in ring order.
    double evaluate(const std::vector<double>& ring_values, double t) const
    {
        if (!(t > 0))
            throw std::domain_error("series evaluation needs t > 0");
        double s = 0;
        for (const auto& [k, c] : coefficients)
            s += c.evaluate(ring_values) * std::pow(t, static_cast<double>(k) / denominator);
        return s;
    }

    /// Largest magnitude among the terms in the last two units of exponent.
    double tail_estimate(const std::vector<double>& ring_values, double t) const
    {
        double m = 0;
        for (const auto& [k, c] : coefficients)
            if (k > truncation - 2 * denominator)
                m = std::max(m, std::abs(c.evaluate(ring_values) * std::pow(t, static_cast<double>(k) / denominator)));
        return m;
    }
};

namespace detail {

struct Trunc {
    std::map<int, Polynomial> c;
    int trunc = kUnbounded;
};

inline int lowest_key(const Trunc& s)
{
    return s.c.empty() ? (s.trunc >= kUnbounded ? kUnbounded : s.trunc + 1) : s.c.begin()->first;
}

inline int clamp_key(long v)
{
    return static_cast<int>(std::min<long>(v, kUnbounded));
}

inline Trunc multiply(const Trunc& a, const Trunc& b, int cap)
{
    Trunc out;
    out.trunc = std::min({clamp_key(static_cast<long>(a.trunc) + lowest_key(b)),
                          clamp_key(static_cast<long>(b.trunc) + lowest_key(a)), cap});
    for (const auto& [ka, ca] : a.c) {
        for (const auto& [kb, cb] : b.c) {
            if (ka + kb > out.trunc)
                break;
            auto [it, inserted] = out.c.try_emplace(ka + kb, ca * cb);
            if (!inserted)
                it->second += ca * cb;
        }
    }
    std::erase_if(out.c, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

inline void add_to(Trunc& acc, const Trunc& t)
{
    acc.trunc = std::min(acc.trunc, t.trunc);
    for (const auto& [k, c] : t.c) {
        auto [it, inserted] = acc.c.try_emplace(k, c);
        if (!inserted)
            it->second += c;
    }
    std::erase_if(acc.c, [&](const auto& kv) { return kv.first > acc.trunc || kv.second.is_zero(); });
}

inline Trunc constant_series(const Polynomial& p)
{
    Trunc t;
    if (!p.is_zero())
        t.c.emplace(0, p);
    return t;
}

/// f(images) where images[v] is the series substituted for variable v of
/// f's ring. Keys above `cap` are not computed.
inline Trunc evaluate_on(const Polynomial& f, const std::vector<Trunc>& images, const VariableSet& ring,
                         int cap = kUnbounded)
{
    const std::size_t n = f.variables().size();
    if (images.size() != n)
        throw std::invalid_argument("evaluate_on: one series per variable required");
    std::vector<std::vector<Trunc>> powers(n);
    for (std::size_t v = 0; v < n; ++v) {
        powers[v].push_back(constant_series(Polynomial(ring, Rational(1))));
        for (unsigned k = 1, d = f.degree_in(v); k <= d; ++k)
            powers[v].push_back(multiply(powers[v].back(), images[v], kUnbounded));
    }
    // Only the final product of each term may be cut at `cap`: a factor's
    // high coefficients still reach low keys through negative exponents.
    Trunc acc;
    acc.trunc = cap;
    for (const auto& [e, c] : f.terms()) {
        std::vector<std::size_t> vars;
        for (std::size_t v = 0; v < n; ++v)
            if (e[v])
                vars.push_back(v);
        Trunc t = constant_series(Polynomial(ring, c));
        for (std::size_t q = 0; q < vars.size(); ++q)
            t = multiply(t, powers[vars[q]][e[vars[q]]], q + 1 == vars.size() ? cap : kUnbounded);
        if (vars.empty())
            t.trunc = cap;
        add_to(acc, t);
    }
    return acc;
}

inline Trunc to_trunc(const PuiseuxSeries& s)
{
    return {s.coefficients, s.truncation};
}

/// Images for the variables of `f_vars`: series by name, else ring variables.
inline std::vector<Trunc> series_images(const VariableSet& f_vars, const std::vector<PuiseuxSeries>& series,
                                        const VariableSet& ring)
{
    std::vector<Trunc> images;
    for (const auto& name : f_vars.names()) {
        auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.variable == name; });
        if (it != series.end())
            images.push_back(to_trunc(*it));
        else if (ring.contains(name))
            images.push_back(constant_series(Polynomial::variable(ring, name)));
        else
            throw std::invalid_argument("no series or parameter for variable '" + name + "'");
    }
    return images;
}

inline const std::vector<std::string>& parameter_pool()
{
    static const std::vector<std::string> pool{"alpha", "beta", "gamma", "delta", "kappa", "lambda", "mu", "nu",
                                               "sigma", "tau"};
    return pool;
}

/// Weighted degree of a monomial: sum over phase variables of e_j * G_j.
inline long weight(const Exponents& e, const std::vector<int>& G)
{
    long w = 0;
    for (std::size_t j = 0; j < G.size(); ++j)
        w += static_cast<long>(e[j]) * G[j];
    return w;
}

} // namespace detail

struct Balance {
    std::vector<std::string> variables;
    int denominator = 1;
    std::vector<int> exponents; // leading exponent times the denominator
    std::vector<Polynomial> coefficients;
    VariableSet ring; // field parameters, then the free parameters
    std::vector<std::string> free_parameters;

    Rational exponent(std::size_t i) const
    {
        Rational r(exponents.at(i), denominator);
        r.canonicalize();
        return r;
    }

    std::size_t zero_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(coefficients.begin(), coefficients.end(), [](const auto& c) { return c.is_zero(); }));
    }
};

/// Terms of component i whose weight equals G_i - d; throws if some term
/// is lighter, i.e. the exponents do not give a dominant balance.
inline Polynomial dominant_part(const Polynomial& f, const std::vector<int>& G, std::size_t i, int d)
{
    Polynomial out(f.variables());
    const long target = static_cast<long>(G[i]) - d;
    for (const auto& [e, c] : f.terms()) {
        long w = detail::weight(e, G);
        if (w < target)
            throw std::invalid_argument("exponents are not dominant for component " + std::to_string(i));
        if (w == target)
            out += Polynomial::term(f.variables(), e, c);
    }
    return out;
}

namespace detail {

class LeadingSolver {
public:
    LeadingSolver(VariableSet vars, std::size_t unknowns) : vars_(std::move(vars)), n_(unknowns) {}

    std::vector<std::vector<std::optional<Polynomial>>> solve(std::vector<Polynomial> eqs)
    {
        out_.clear();
        recurse(std::move(eqs), std::vector<std::optional<Polynomial>>(n_));
        return out_;
    }

private:
    bool mentions_unknown(const Polynomial& p) const
    {
        for (const auto& [e, c] : p.terms())
            for (std::size_t j = 0; j < n_; ++j)
                if (e[j])
                    return true;
        return false;
    }

    void assign(std::vector<Polynomial> eqs, std::vector<std::optional<Polynomial>> val, std::size_t j,
                const Polynomial& v)
    {
        const std::string& name = vars_[j];
        for (auto& e : eqs)
            e = e.substitute_one(name, v);
        for (auto& x : val)
            if (x)
                *x = x->substitute_one(name, v);
        val[j] = v;
        recurse(std::move(eqs), std::move(val));
    }

    void recurse(std::vector<Polynomial> eqs, std::vector<std::optional<Polynomial>> val)
    {
        std::vector<Polynomial> rest;
        for (auto& e : eqs) {
            if (e.is_zero())
                continue;
            if (!mentions_unknown(e))
                return;
            rest.push_back(std::move(e));
        }
        if (rest.empty()) {
            out_.push_back(std::move(val));
            return;
        }
        // Linear with a constant coefficient, highest unknown first.
        for (std::size_t j = n_; j-- > 0;) {
            for (const auto& e : rest) {
                if (e.degree_in(j) != 1)
                    continue;
                Polynomial a = e.coefficient_of(j, 1);
                if (a.is_constant() && !a.is_zero()) {
                    assign(rest, val, j, -e.coefficient_of(j, 0) / a.constant_term());
                    return;
                }
            }
        }
        // Monomial content: c_j^m * q = 0 splits into c_j = 0 or q = 0.
        for (std::size_t q = 0; q < rest.size(); ++q) {
            const auto& e = rest[q];
            for (std::size_t j = 0; j < n_; ++j) {
                unsigned m = ~0u;
                for (const auto& [ex, c] : e.terms())
                    m = std::min(m, ex[j]);
                if (m == 0)
                    continue;
                assign(rest, val, j, Polynomial(vars_));
                Polynomial reduced(vars_);
                for (const auto& [ex, c] : e.terms()) {
                    Exponents f = ex;
                    f[j] -= m;
                    reduced += Polynomial::term(vars_, std::move(f), c);
                }
                auto eqs2 = rest;
                eqs2[q] = reduced;
                recurse(std::move(eqs2), val);
                return;
            }
        }
        // Univariate with rational coefficients.
        for (const auto& e : rest) {
            std::optional<std::size_t> only;
            bool univariate = true;
            for (const auto& [ex, c] : e.terms()) {
                for (std::size_t v = 0; v < ex.size() && univariate; ++v) {
                    if (!ex[v])
                        continue;
                    if (v >= n_ || (only && *only != v))
                        univariate = false;
                    else
                        only = v;
                }
            }
            if (!univariate || !only)
                continue;
            std::vector<Rational> coeffs(e.degree_in(*only) + 1);
            for (const auto& [ex, c] : e.terms())
                coeffs[ex[*only]] = c;
            for (const auto& r : rational_roots(coeffs).roots)
                assign(rest, val, *only, Polynomial(vars_, r.value));
            return;
        }
        // Nothing solvable in closed form; the branch is dropped.
    }

    VariableSet vars_;
    std::size_t n_;
    std::vector<std::vector<std::optional<Polynomial>>> out_;
};

inline std::string balance_key(const Balance& b)
{
    std::string k = std::to_string(b.free_parameters.size()) + "|";
    for (std::size_t i = 0; i < b.coefficients.size(); ++i) {
        if (b.coefficients[i].is_zero())
            continue;
        k += std::to_string(i) + ":" + std::to_string(b.exponents[i]) + ":" + b.coefficients[i].to_string() + ";";
    }
    return k;
}

} // namespace detail

/// Dominant balances y_i ~ c_i t^(G_i/d) with every G_i in
/// [min_exponent * d, -1]. The leading equations (G_i/d) c_i = f_i^dom(c)
/// are solved exactly; unknowns left free become named parameters.
/// Sorted with the most free parameters first, then the fewest zero
/// coefficients.
inline std::vector<Balance> find_balances(const VectorField& field, int denominator_bound, int min_exponent = -4)
{
    if (denominator_bound < 1)
        throw std::invalid_argument("find_balances: denominator bound must be at least 1");
    if (min_exponent >= 0)
        throw std::invalid_argument("find_balances: minimum exponent must be negative");
    const int d = denominator_bound;
    const std::size_t n = field.dimension();
    const auto phase = field.phase_names();
    const auto params = field.parameter_names();

    std::vector<std::string> pool;
    for (const auto& p : detail::parameter_pool())
        if (std::find(params.begin(), params.end(), p) == params.end() && pool.size() < n)
            pool.push_back(p);
    std::vector<std::string> solver_names;
    for (std::size_t i = 0; i < n; ++i)
        solver_names.push_back("%c" + std::to_string(i));
    for (const auto& p : params)
        solver_names.push_back(p);
    for (const auto& p : pool)
        solver_names.push_back(p);
    const VariableSet solver_ring(solver_names);

    // Field variables into the solver ring: phase j -> c_j, parameters by name.
    std::vector<Polynomial> to_unknowns;
    for (std::size_t j = 0; j < field.variables().size(); ++j)
        to_unknowns.push_back(Polynomial::variable(solver_ring, j < n ? solver_names[j] : field.variables()[j]));

    std::vector<std::vector<Exponents>> monomials(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [e, c] : field[i].terms())
            monomials[i].push_back(e);

    const int lo = min_exponent * d;
    std::vector<int> G(n, lo);
    std::vector<Balance> found;
    std::vector<std::string> keys;
    while (true) {
        bool dominant = true;
        for (std::size_t i = 0; i < n && dominant; ++i)
            for (const auto& e : monomials[i])
                if (detail::weight(e, G) < G[i] - d) {
                    dominant = false;
                    break;
                }
        if (dominant) {
            std::vector<Polynomial> eqs;
            for (std::size_t i = 0; i < n; ++i) {
                Polynomial lhs = dominant_part(field[i], G, i, d).substitute(to_unknowns);
                eqs.push_back(lhs - Polynomial::variable(solver_ring, solver_names[i]) * ratio(G[i], d));
            }
            detail::LeadingSolver solver(solver_ring, n);
            for (const auto& sol : solver.solve(eqs)) {
                std::vector<std::string> free;
                for (std::size_t j = 0; j < n; ++j) {
                    if (sol[j])
                        continue;
                    free.push_back(pool[free.size()]);
                }
                std::vector<std::string> ring_names = params;
                ring_names.insert(ring_names.end(), free.begin(), free.end());
                Balance b{phase, d, G, {}, VariableSet(ring_names), free};
                std::size_t next = 0;
                std::vector<Polynomial> images;
                for (std::size_t j = 0; j < n; ++j)
                    images.push_back(sol[j] ? Polynomial(solver_ring) : Polynomial::variable(solver_ring, free[next++]));
                for (std::size_t v = n; v < solver_names.size(); ++v)
                    images.push_back(Polynomial::variable(solver_ring, solver_names[v]));
                bool nonzero = false;
                for (std::size_t j = 0; j < n; ++j) {
                    Polynomial c = sol[j] ? sol[j]->substitute(images) : images[j];
                    b.coefficients.push_back(c.embed(b.ring));
                    nonzero = nonzero || !c.is_zero();
                }
                if (!nonzero)
                    continue;
                std::string key = detail::balance_key(b);
                if (std::find(keys.begin(), keys.end(), key) != keys.end())
                    continue;
                keys.push_back(key);
                found.push_back(std::move(b));
            }
        }
        std::size_t i = 0;
        while (i < n && G[i] == -1) {
            G[i] = lo;
            ++i;
        }
        if (i == n)
            break;
        ++G[i];
    }
    std::stable_sort(found.begin(), found.end(), [](const Balance& a, const Balance& b) {
        if (a.free_parameters.size() != b.free_parameters.size())
            return a.free_parameters.size() > b.free_parameters.size();
        return a.zero_count() < b.zero_count();
    });
    return found;
}

struct Resonance {
    int order = 0; // rho times the denominator
    Rational rho;
    unsigned multiplicity = 0;
    std::vector<std::string> parameters;
};

struct ResonanceReport {
    int denominator = 1;
    Polynomial characteristic; // det(rho + G/d - K) in the single variable rho
    std::vector<RationalRoot> eigenvalues;
    unsigned irrational_degree = 0;
    bool time_shift = false;
    std::vector<Resonance> resonances; // orders >= 0, ascending
    std::vector<Rational> discarded;   // rational roots that never enter the recursion
    std::size_t parameter_count = 0;   // free parameters plus the time shift
    VariableSet ring;                  // balance ring extended by the resonance parameters

    std::size_t resonance_parameter_count() const
    {
        std::size_t k = 0;
        for (const auto& r : resonances)
            k += r.parameters.size();
        return k;
    }

    const Resonance* at(int order) const
    {
        for (const auto& r : resonances)
            if (r.order == order)
                return &r;
        return nullptr;
    }
};

namespace detail {

/// Images of the field variables in the balance ring: phase -> leading
/// coefficient, parameters by name.
inline std::vector<Polynomial> leading_images(const VectorField& field, const Balance& b, const VariableSet& ring)
{
    std::vector<Polynomial> images;
    const std::size_t n = field.dimension();
    for (std::size_t j = 0; j < field.variables().size(); ++j)
        images.push_back(j < n ? b.coefficients[j].embed(ring) : Polynomial::variable(ring, field.variables()[j]));
    return images;
}

inline void validate_balance(const VectorField& field, const Balance& b)
{
    const std::size_t n = field.dimension();
    if (b.exponents.size() != n || b.coefficients.size() != n)
        throw std::invalid_argument("balance dimension does not match the field");
    if (b.variables != field.phase_names())
        throw std::invalid_argument("balance variables do not match the field");
    auto images = leading_images(field, b, b.ring);
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial dom = dominant_part(field[i], b.exponents, i, b.denominator);
        Polynomial r = dom.substitute(images) - b.coefficients[i] * ratio(b.exponents[i], b.denominator);
        if (!r.is_zero())
            throw std::invalid_argument("invalid balance: leading equation " + std::to_string(i) +
                                        " leaves " + r.to_string());
    }
}

/// K_ij = d f_i^dom / d y_j at the balance, over `ring`.
inline PolyMatrix linearization(const VectorField& field, const Balance& b, const VariableSet& ring)
{
    const std::size_t n = field.dimension();
    auto images = leading_images(field, b, ring);
    PolyMatrix K(n, std::vector<Polynomial>(n, Polynomial(ring)));
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial dom = dominant_part(field[i], b.exponents, i, b.denominator);
        for (std::size_t j = 0; j < n; ++j)
            K[i][j] = dom.derivative(j).substitute(images);
    }
    return K;
}

} // namespace detail

/// Roots of det(rho + G/d - K): rho = -1 is the time shift, rho = 0
/// carries the free parameters of the balance, and each rho > 0 with
/// rho * d integral adds `multiplicity` new parameters at order rho * d.
inline ResonanceReport kowalewski_exponents(const VectorField& field, const Balance& balance)
{
    detail::validate_balance(field, balance);
    const std::size_t n = field.dimension();
    const int d = balance.denominator;
    const VariableSet rho_ring = balance.ring.extended({"%rho"});
    PolyMatrix K = detail::linearization(field, balance, rho_ring);
    const Polynomial rho = Polynomial::variable(rho_ring, "%rho");
    PolyMatrix M(n, std::vector<Polynomial>(n, Polynomial(rho_ring)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            M[i][j] = (i == j ? rho + Polynomial(rho_ring, ratio(balance.exponents[i], d)) : Polynomial(rho_ring)) -
                      K[i][j];
    Polynomial det = determinant(M, rho_ring);
    const std::size_t r = rho_ring.size() - 1;
    std::vector<Rational> coeffs(det.degree_in(r) + 1);
    for (const auto& [e, c] : det.terms()) {
        for (std::size_t v = 0; v < r; ++v)
            if (e[v])
                throw std::domain_error("indicial polynomial depends on the parameters: " + det.to_string());
        coeffs[e[r]] = c;
    }

    ResonanceReport rep;
    rep.denominator = d;
    const VariableSet rho_only{"rho"};
    rep.characteristic = Polynomial(rho_only);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] != 0)
            rep.characteristic += Polynomial::term(rho_only, {static_cast<unsigned>(k)}, coeffs[k]);
    RootReport roots = rational_roots(coeffs);
    rep.eigenvalues = roots.roots;
    rep.irrational_degree = roots.remaining_degree;

    std::vector<std::string> used = balance.ring.names();
    std::vector<std::string> added;
    auto next_name = [&]() {
        for (const auto& p : detail::parameter_pool()) {
            if (std::find(used.begin(), used.end(), p) == used.end()) {
                used.push_back(p);
                added.push_back(p);
                return p;
            }
        }
        throw std::runtime_error("ran out of parameter names");
    };
    for (const auto& root : roots.roots) {
        const Rational& v = root.value;
        if (v == -1) {
            rep.time_shift = true;
            for (unsigned m = 1; m < root.multiplicity; ++m)
                rep.discarded.push_back(v);
            continue;
        }
        Rational k = v * d;
        if (v < 0 || !is_integer(k)) {
            for (unsigned m = 0; m < root.multiplicity; ++m)
                rep.discarded.push_back(v);
            continue;
        }
        Resonance res{static_cast<int>(k.get_num().get_si()), v, root.multiplicity, {}};
        if (v == 0)
            res.parameters = balance.free_parameters;
        else
            for (unsigned m = 0; m < root.multiplicity; ++m)
                res.parameters.push_back(next_name());
        rep.resonances.push_back(std::move(res));
    }
    rep.ring = balance.ring.extended(added);
    rep.parameter_count = rep.resonance_parameter_count() + (rep.at(0) ? 0 : balance.free_parameters.size()) +
                          (rep.time_shift ? 1 : 0);
    return rep;
}

/// Fixes which unknown carries the new parameter at a resonance, and with
/// which scale (coefficient = scale * parameter).
struct SeriesConvention {
    std::size_t column = 0;
    Rational scale{1};
};

class ExpansionError : public std::runtime_error {
public:
    ExpansionError(int order, const std::string& what) : std::runtime_error(what), order_(order) {}
    int order() const noexcept { return order_; }

private:
    int order_;
};

struct Expansion {
    Balance balance;
    ResonanceReport resonances;
    VariableSet ring;
    int order = 0; // steps of 1/d beyond the leading exponents
    std::vector<PuiseuxSeries> series;
    std::vector<int> compatible_resonances;

    const PuiseuxSeries& operator[](std::string_view name) const
    {
        for (const auto& s : series)
            if (s.variable == name)
                return s;
        throw std::invalid_argument("no series for '" + std::string(name) + "'");
    }
};

/// Coefficients a_{i,k} of y_i = sum_k a_{i,k} t^((G_i + k)/d), k <= order,
/// from M(k) a_k = R_k with M(k) = diag((G + k)/d) - K. At a resonance
/// the chosen free unknowns become parameters and the remaining rows are
/// checked for consistency.
inline Expansion expand_solution(const VectorField& field, const Balance& balance, int order,
                                 const std::map<int, SeriesConvention>& conventions = {})
{
    ResonanceReport rep = kowalewski_exponents(field, balance);
    for (const auto& r : rep.resonances)
        if (r.order > order)
            throw std::invalid_argument("expansion order " + std::to_string(order) + " stops before the resonance at " +
                                        std::to_string(r.order));
    const std::size_t n = field.dimension();
    const int d = balance.denominator;
    const auto& G = balance.exponents;
    const VariableSet ring = rep.ring;
    PolyMatrix K = detail::linearization(field, balance, ring);

    std::vector<detail::Trunc> known(field.variables().size());
    for (std::size_t j = 0; j < field.variables().size(); ++j) {
        if (j < n) {
            known[j].trunc = G[j];
            Polynomial c = balance.coefficients[j].embed(ring);
            if (!c.is_zero())
                known[j].c.emplace(G[j], c);
        } else {
            known[j] = detail::constant_series(Polynomial::variable(ring, field.variables()[j]));
        }
    }

    Expansion out{balance, rep, ring, order, {}, {}};
    for (int k = 1; k <= order; ++k) {
        for (std::size_t j = 0; j < n; ++j)
            known[j].trunc = G[j] + k;
        std::vector<Polynomial> R;
        for (std::size_t i = 0; i < n; ++i) {
            const int key = G[i] - d + k;
            detail::Trunc v = detail::evaluate_on(field[i], known, ring, key);
            if (v.trunc < key)
                throw ExpansionError(k, "series too short to reach order " + std::to_string(k));
            auto it = v.c.find(key);
            R.push_back(it == v.c.end() ? Polynomial(ring) : it->second);
        }
        PolyMatrix M(n, std::vector<Polynomial>(n, Polynomial(ring)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                M[i][j] = (i == j ? Polynomial(ring, ratio(G[i] + k, d)) : Polynomial(ring)) - K[i][j];

        std::vector<Polynomial> a(n, Polynomial(ring));
        const Resonance* res = rep.at(k);
        if (!res) {
            a = solve_unimodular(M, R, ring);
        } else {
            const std::size_t m = res->parameters.size();
            std::vector<std::vector<std::size_t>> free_choices;
            std::vector<Rational> scales(m, Rational(1));
            if (auto c = conventions.find(k); c != conventions.end()) {
                if (m != 1)
                    throw std::invalid_argument("a series convention needs a simple resonance");
                free_choices.push_back({c->second.column});
                scales[0] = c->second.scale;
            } else {
                free_choices = subsets(n, m);
            }
            bool solved = false;
            for (const auto& F : free_choices) {
                std::vector<std::size_t> C;
                for (std::size_t j = 0; j < n; ++j)
                    if (std::find(F.begin(), F.end(), j) == F.end())
                        C.push_back(j);
                for (const auto& rows : subsets(n, n - m)) {
                    Polynomial minor = minor_determinant(M, rows, C, ring);
                    if (!minor.is_constant() || minor.is_zero())
                        continue;
                    for (std::size_t f = 0; f < m; ++f)
                        a[F[f]] = Polynomial::variable(ring, res->parameters[f]) * scales[f];
                    PolyMatrix sub;
                    std::vector<Polynomial> rhs;
                    for (std::size_t r : rows) {
                        std::vector<Polynomial> row;
                        for (std::size_t c : C)
                            row.push_back(M[r][c]);
                        sub.push_back(std::move(row));
                        Polynomial b = R[r];
                        for (std::size_t f : F)
                            b -= M[r][f] * a[f];
                        rhs.push_back(std::move(b));
                    }
                    auto x = solve_unimodular(sub, rhs, ring);
                    for (std::size_t c = 0; c < C.size(); ++c)
                        a[C[c]] = x[c];
                    solved = true;
                    break;
                }
                if (solved)
                    break;
            }
            if (!solved)
                throw ExpansionError(k, "no unimodular minor at the resonance of order " + std::to_string(k));
            for (std::size_t i = 0; i < n; ++i) {
                Polynomial lhs(ring);
                for (std::size_t j = 0; j < n; ++j)
                    lhs += M[i][j] * a[j];
                Polynomial defect = lhs - R[i];
                if (!defect.is_zero())
                    throw ExpansionError(k, "compatibility condition fails at resonance order " + std::to_string(k) +
                                                ", row " + std::to_string(i) + ": " + defect.to_string());
            }
            out.compatible_resonances.push_back(k);
        }
        for (std::size_t j = 0; j < n; ++j)
            if (!a[j].is_zero())
                known[j].c.emplace(G[j] + k, a[j]);
    }
    for (std::size_t j = 0; j < n; ++j)
        out.series.push_back({field.variables()[j], ring, d, known[j].c, G[j] + order});
    return out;
}

struct ResidualTerm {
    std::size_t component;
    Rational exponent;
    Polynomial coefficient;
};

/// Nonzero coefficients of f_i(series) - d/dt series_i over the range
/// where both sides are exact. Empty means the series solve the field.
inline std::vector<ResidualTerm> ode_residual(const VectorField& field, const std::vector<PuiseuxSeries>& series)
{
    if (series.size() != field.dimension())
        throw std::invalid_argument("ode_residual: one series per phase variable required");
    const VariableSet& ring = series.front().ring;
    auto images = detail::series_images(field.variables(), series, ring);
    std::vector<ResidualTerm> out;
    for (std::size_t i = 0; i < field.dimension(); ++i) {
        detail::Trunc rhs = detail::evaluate_on(field[i], images, ring);
        PuiseuxSeries lhs = series[i].derivative(series[i].variable);
        const int top = std::min(rhs.trunc, lhs.truncation);
        std::map<int, Polynomial> diff;
        for (const auto& [k, c] : rhs.c)
            if (k <= top)
                diff[k] = c;
        for (const auto& [k, c] : lhs.coefficients) {
            if (k > top)
                continue;
            auto [it, inserted] = diff.try_emplace(k, -c);
            if (!inserted)
                it->second -= c;
        }
        for (const auto& [k, c] : diff)
            if (!c.is_zero())
                out.push_back({i, series[i].exponent(k), c});
    }
    return out;
}

class InvariantMismatch : public std::runtime_error {
public:
    InvariantMismatch(Rational exponent, Polynomial coefficient)
        : std::runtime_error("invariant restricted to the series has coefficient " + coefficient.to_string() +
                             " at t^" + exponent.get_str()),
          exponent_(std::move(exponent)), coefficient_(std::move(coefficient))
    {
    }
    const Rational& exponent() const noexcept { return exponent_; }
    const Polynomial& coefficient() const noexcept { return coefficient_; }

private:
    Rational exponent_;
    Polynomial coefficient_;
};

/// H(series) must be constant in t wherever it is exact; returns that
/// constant as a polynomial in the series parameters.
inline Polynomial invariant_restriction(const std::vector<PuiseuxSeries>& series, const Polynomial& H)
{
    if (series.empty())
        throw std::invalid_argument("invariant_restriction: no series");
    const VariableSet& ring = series.front().ring;
    const int d = series.front().denominator;
    for (const auto& s : series)
        if (!(s.ring == ring) || s.denominator != d)
            throw std::invalid_argument("invariant_restriction: series over different rings");
    detail::Trunc h = detail::evaluate_on(H, detail::series_images(H.variables(), series, ring), ring);
    if (h.trunc < 0)
        throw std::domain_error("invariant_restriction: series too short, exact only up to t^" +
                                ratio(h.trunc, d).get_str());
    Polynomial constant(ring);
    for (const auto& [k, c] : h.c) {
        if (k > h.trunc)
            break;
        if (k == 0) {
            constant = c;
            continue;
        }
        Rational e(k, d);
        e.canonicalize();
        throw InvariantMismatch(e, c);
    }
    return constant;
}

/// Highest key at which H(series) is exact.
inline int restriction_reach(const std::vector<PuiseuxSeries>& series, const Polynomial& H)
{
    const VariableSet& ring = series.front().ring;
    return detail::evaluate_on(H, detail::series_images(H.variables(), series, ring), ring).trunc;
}

struct MonomialDiff {
    std::string monomial;
    Polynomial derived;
    Polynomial reference;
    bool match = false;
};

/// Groups both polynomials by monomials in `group` and compares the
/// coefficient polynomials. `reference` is re-expressed over derived's ring.
inline std::vector<MonomialDiff> compare_by_monomial(const Polynomial& derived, const Polynomial& reference,
                                                     const std::vector<std::string>& group)
{
    const VariableSet& ring = derived.variables();
    const Polynomial ref = reference.embed(ring);
    std::vector<std::size_t> idx;
    for (const auto& g : group)
        idx.push_back(ring.index_of(g));
    std::map<Exponents, std::pair<Polynomial, Polynomial>, GradedLexOrder> table;
    auto split = [&](const Polynomial& p, bool first) {
        for (const auto& [e, c] : p.terms()) {
            Exponents key(idx.size());
            Exponents rest = e;
            for (std::size_t g = 0; g < idx.size(); ++g) {
                key[g] = e[idx[g]];
                rest[idx[g]] = 0;
            }
            auto [it, inserted] = table.try_emplace(key, Polynomial(ring), Polynomial(ring));
            (first ? it->second.first : it->second.second) += Polynomial::term(ring, rest, c);
        }
    };
    split(derived, true);
    split(ref, false);
    std::vector<MonomialDiff> out;
    for (const auto& [key, pr] : table) {
        std::string label;
        for (std::size_t g = 0; g < key.size(); ++g) {
            if (!key[g])
                continue;
            if (!label.empty())
                label += '*';
            label += group[g];
            if (key[g] > 1)
                label += '^' + std::to_string(key[g]);
        }
        out.push_back({label.empty() ? "1" : label, pr.first, pr.second, pr.first == pr.second});
    }
    return out;
}

class EliminationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct CurveRelation {
    Polynomial r1, r2;
    Polynomial solution;            // the eliminated parameter in terms of the others
    Polynomial eliminated;          // r2 after substitution
    Polynomial primitive;           // integer content 1, positive leading coefficient
    Polynomial normalized;          // coefficient of the normalizing variable scaled to 1
    Polynomial back_substitution_r1;    // r1 at the solution, must vanish
    Polynomial back_substitution_curve; // curve with both levels replaced by the restrictions, must vanish
    std::vector<MonomialDiff> comparison;
};

/// Solves r1 = 0 for `eliminate` (linear, constant coefficient), substitutes
/// into r2 and compares against `reference` monomial by monomial in
/// `curve_variables`. The r_i are restriction minus level, and the level
/// variables are given in `levels`.
inline CurveRelation eliminate_and_compare_curve(const Polynomial& r1, const Polynomial& r2,
                                                 const std::optional<Polynomial>& reference = {},
                                                 const std::string& eliminate = "gamma",
                                                 const std::vector<std::string>& curve_variables = {"alpha", "beta"},
                                                 const std::array<std::string, 2>& levels = {"b1", "b2"})
{
    if (!(r1.variables() == r2.variables()))
        throw std::invalid_argument("relations over different rings");
    const VariableSet& ring = r1.variables();
    const std::size_t g = ring.index_of(eliminate);
    if (r1.degree_in(g) != 1)
        throw EliminationError("first relation is not linear in " + eliminate);
    Polynomial lead = r1.coefficient_of(g, 1);
    if (!lead.is_constant() || lead.is_zero())
        throw EliminationError("coefficient of " + eliminate + " is not a nonzero constant: " + lead.to_string());

    CurveRelation out;
    out.r1 = r1;
    out.r2 = r2;
    out.solution = -r1.coefficient_of(g, 0) / lead.constant_term();
    out.back_substitution_r1 = r1.substitute_one(eliminate, out.solution);
    out.eliminated = r2.substitute_one(eliminate, out.solution);
    out.primitive = primitive_part(out.eliminated).first;
    out.normalized = out.eliminated;
    if (auto b2 = ring.find(levels[1])) {
        Polynomial c = out.eliminated.coefficient_of(*b2, 1);
        if (c.is_constant() && !c.is_zero())
            out.normalized = out.eliminated / c.constant_term();
    }
    const Polynomial level1 = Polynomial::variable(ring, levels[0]);
    const Polynomial level2 = Polynomial::variable(ring, levels[1]);
    out.back_substitution_curve =
        out.eliminated.substitute_one(levels[0], r1 + level1).substitute_one(levels[1], r2 + level2);
    if (reference)
        out.comparison = compare_by_monomial(out.normalized, *reference, curve_variables);
    return out;
}

} // namespace hhm

#endif
