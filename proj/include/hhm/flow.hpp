#ifndef HHM_FLOW_HPP
#define HHM_FLOW_HPP

// Numerical integration of polynomial fields: Dormand-Prince 5(4) with PI
// step control, invariant drift, flow commutation and series seeding.

#include "puiseux.hpp"
#include "vector_field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhm {

using NumericParameters = std::map<std::string, double, std::less<>>;

struct IntegratorConfig {
    double rtol = 1e-12;
    double atol = 1e-14;
    double initial_step = 0; // 0 picks one automatically
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 2'000'000;
    double blowup_norm = 1e12;
    double fixed_step = 0; // > 0 disables step control

    void validate() const
    {
        if (!(rtol > 0) || !(atol > 0))
            throw std::invalid_argument("tolerances must be positive");
        if (max_steps == 0)
            throw std::invalid_argument("max_steps must be positive");
        if (!(max_step > 0) || initial_step < 0 || fixed_step < 0 || !(blowup_norm > 0))
            throw std::invalid_argument("step sizes and the blow-up ceiling must be positive");
    }
};

enum class FlowStatus { ok, blow_up, step_underflow, max_steps };

inline const char* to_string(FlowStatus s)
{
    switch (s) {
    case FlowStatus::ok:
        return "ok";
    case FlowStatus::blow_up:
        return "blow_up";
    case FlowStatus::step_underflow:
        return "step_underflow";
    case FlowStatus::max_steps:
        return "max_steps";
    }
    return "unknown";
}

/// Polynomial components with the parameters folded into the coefficients.
class CompiledField {
public:
    CompiledField() = default;

    CompiledField(const std::vector<Polynomial>& components, std::size_t dim, const NumericParameters& params)
        : dim_(dim)
    {
        for (const auto& p : components) {
            const VariableSet& vars = p.variables();
            if (vars.size() < dim)
                throw std::invalid_argument("component has fewer variables than the phase dimension");
            std::vector<double> pvals;
            for (std::size_t v = dim; v < vars.size(); ++v) {
                auto it = params.find(vars[v]);
                if (it == params.end())
                    throw std::invalid_argument("no numeric value for parameter '" + vars[v] + "'");
                pvals.push_back(it->second);
            }
            std::map<std::vector<unsigned>, double> folded;
            for (const auto& [e, c] : p.terms()) {
                double coef = to_double(c);
                for (std::size_t v = dim; v < vars.size(); ++v)
                    coef *= std::pow(pvals[v - dim], static_cast<double>(e[v]));
                folded[std::vector<unsigned>(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(dim))] += coef;
            }
            Component comp;
            for (const auto& [e, c] : folded) {
                if (c == 0)
                    continue;
                comp.terms.push_back({c, e});
                for (std::size_t v = 0; v < dim; ++v)
                    max_degree_ = std::max(max_degree_, e[v]);
            }
            components_.push_back(std::move(comp));
        }
    }

    CompiledField(const VectorField& f, const NumericParameters& params)
        : CompiledField(f.components(), f.dimension(), params)
    {
    }

    std::size_t dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept { return components_.size(); }

    void operator()(const double* u, double* out) const
    {
        thread_local std::vector<double> pw;
        const std::size_t stride = max_degree_ + 1;
        pw.resize(dim_ * stride);
        for (std::size_t v = 0; v < dim_; ++v) {
            pw[v * stride] = 1;
            for (unsigned k = 1; k <= max_degree_; ++k)
                pw[v * stride + k] = pw[v * stride + k - 1] * u[v];
        }
        for (std::size_t i = 0; i < components_.size(); ++i) {
            double s = 0;
            for (const auto& t : components_[i].terms) {
                double m = t.coef;
                for (std::size_t v = 0; v < dim_; ++v)
                    if (t.exps[v])
                        m *= pw[v * stride + t.exps[v]];
                s += m;
            }
            out[i] = s;
        }
    }

    std::vector<double> operator()(const std::vector<double>& u) const
    {
        if (u.size() != dim_)
            throw std::invalid_argument("state dimension mismatch");
        std::vector<double> out(components_.size());
        (*this)(u.data(), out.data());
        return out;
    }

    /// Sum of |monomial| values, the natural scale for cancellation error.
    std::vector<double> magnitudes(const std::vector<double>& u) const
    {
        std::vector<double> out;
        for (const auto& c : components_) {
            double s = 0;
            for (const auto& t : c.terms) {
                double m = std::abs(t.coef);
                for (std::size_t v = 0; v < dim_; ++v)
                    m *= std::pow(std::abs(u[v]), static_cast<double>(t.exps[v]));
                s += m;
            }
            out.push_back(s);
        }
        return out;
    }

private:
    struct Term {
        double coef;
        std::vector<unsigned> exps;
    };
    struct Component {
        std::vector<Term> terms;
    };
    std::size_t dim_ = 0;
    unsigned max_degree_ = 0;
    std::vector<Component> components_;
};

struct Trajectory {
    std::vector<std::string> state_names;
    std::vector<std::string> invariant_names;
    std::vector<double> times; // monotone in the direction of integration
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> invariant_values;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    FlowStatus status = FlowStatus::ok;
    std::string message;

    bool ok() const { return status == FlowStatus::ok; }
    const std::vector<double>& final_state() const { return states.back(); }
};

inline std::string short_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DoPri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

class Stepper {
public:
    explicit Stepper(const CompiledField& f) : f_(f), n_(f.dimension())
    {
        for (auto& k : k_)
            k.assign(n_, 0);
        tmp_.assign(n_, 0);
    }

    /// One step from (t, y) with y' = k1 already in k_[0]; fills y_new,
    /// k_[6] = f(y_new) and err (the embedded difference).
    void step(const std::vector<double>& y, double h, std::vector<double>& y_new, std::vector<double>& err)
    {
        using T = DoPri5;
        auto stage = [&](std::size_t out, std::initializer_list<std::pair<std::size_t, double>> coefs) {
            for (std::size_t i = 0; i < n_; ++i) {
                double s = 0;
                for (const auto& [k, a] : coefs)
                    s += a * k_[k][i];
                tmp_[i] = y[i] + h * s;
            }
            f_(tmp_.data(), k_[out].data());
        };
        stage(1, {{0, T::a21}});
        stage(2, {{0, T::a31}, {1, T::a32}});
        stage(3, {{0, T::a41}, {1, T::a42}, {2, T::a43}});
        stage(4, {{0, T::a51}, {1, T::a52}, {2, T::a53}, {3, T::a54}});
        stage(5, {{0, T::a61}, {1, T::a62}, {2, T::a63}, {3, T::a64}, {4, T::a65}});
        y_new.resize(n_);
        err.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            y_new[i] = y[i] + h * (T::a71 * k_[0][i] + T::a73 * k_[2][i] + T::a74 * k_[3][i] + T::a75 * k_[4][i] +
                                   T::a76 * k_[5][i]);
        f_(y_new.data(), k_[6].data());
        for (std::size_t i = 0; i < n_; ++i)
            err[i] = h * (T::e1 * k_[0][i] + T::e3 * k_[2][i] + T::e4 * k_[3][i] + T::e5 * k_[4][i] +
                          T::e6 * k_[5][i] + T::e7 * k_[6][i]);
    }

    void start(const std::vector<double>& y) { f_(y.data(), k_[0].data()); }
    void advance() { std::swap(k_[0], k_[6]); }
    const std::vector<double>& slope() const { return k_[0]; }

private:
    const CompiledField& f_;
    std::size_t n_;
    std::array<std::vector<double>, 7> k_;
    std::vector<double> tmp_;
};

inline double norm2(const std::vector<double>& v)
{
    double s = 0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

inline bool finite(const std::vector<double>& v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace detail

/// Integrates u' = field(u) from t_start to t_end (either direction).
/// Stops early with a status flag on blow-up, step underflow or the step
/// limit; the trajectory up to that point is kept.
inline Trajectory integrate(const VectorField& field, const NumericParameters& params, const std::vector<double>& u0,
                            double t_start, double t_end, const IntegratorConfig& cfg = {},
                            const std::vector<NamedPolynomial>& invariants = {})
{
    cfg.validate();
    const std::size_t n = field.dimension();
    if (u0.size() != n)
        throw std::invalid_argument("initial state has " + std::to_string(u0.size()) + " entries, field needs " +
                                    std::to_string(n));
    if (!detail::finite(u0) || !std::isfinite(t_start) || !std::isfinite(t_end))
        throw std::invalid_argument("initial data must be finite");
    const CompiledField f(field, params);
    std::vector<CompiledField> inv;
    Trajectory tr;
    tr.state_names = field.phase_names();
    for (const auto& p : invariants) {
        inv.emplace_back(std::vector<Polynomial>{p.poly}, n, params);
        tr.invariant_names.push_back(p.name);
    }
    auto record = [&](double t, const std::vector<double>& u) {
        tr.times.push_back(t);
        tr.states.push_back(u);
        std::vector<double> vals;
        for (const auto& g : inv)
            vals.push_back(g(u)[0]);
        tr.invariant_values.push_back(std::move(vals));
    };
    record(t_start, u0);
    if (t_end == t_start)
        return tr;

    const double dir = t_end > t_start ? 1.0 : -1.0;
    detail::Stepper st(f);
    std::vector<double> y = u0, y_new, err;
    double t = t_start;
    st.start(y);

    if (cfg.fixed_step > 0) {
        const double span = std::abs(t_end - t_start);
        const auto steps = static_cast<std::size_t>(std::ceil(span / cfg.fixed_step - 1e-9));
        const double h = dir * span / static_cast<double>(steps);
        for (std::size_t s = 0; s < steps; ++s) {
            st.step(y, h, y_new, err);
            if (!detail::finite(y_new) || detail::norm2(y_new) > cfg.blowup_norm) {
                tr.status = FlowStatus::blow_up;
                tr.message = "state norm exceeded the ceiling near t = " + short_number(t);
                return tr;
            }
            y.swap(y_new);
            st.advance();
            t = s + 1 == steps ? t_end : t_start + h * static_cast<double>(s + 1);
            ++tr.accepted;
            record(t, y);
        }
        return tr;
    }

    auto error_norm = [&](const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& e) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sc = cfg.atol + cfg.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
            s += (e[i] / sc) * (e[i] / sc);
        }
        return std::sqrt(s / static_cast<double>(n));
    };

    double h = cfg.initial_step;
    if (h == 0) {
        // Starting step from the size of the state and its slope.
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sc = cfg.atol + cfg.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (st.slope()[i] / sc) * (st.slope()[i] / sc);
        }
        d0 = std::sqrt(d0 / n);
        d1 = std::sqrt(d1 / n);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, std::abs(t_end - t_start));
    }
    h = std::min(h, cfg.max_step);

    constexpr double beta = 0.04, expo = 0.2 - beta * 0.75, safety = 0.9;
    constexpr double fac_min = 0.2, fac_max = 10.0;
    double facold = 1e-4;
    bool last_rejected = false;
    std::size_t steps = 0;
    while ((t_end - t) * dir > 0) {
        if (++steps > cfg.max_steps) {
            tr.status = FlowStatus::max_steps;
            tr.message = "step limit reached at t = " + short_number(t);
            return tr;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            tr.status = FlowStatus::step_underflow;
            tr.message = "step size underflow at t = " + short_number(t);
            return tr;
        }
        bool last = false;
        if ((t + dir * h - t_end) * dir >= 0) {
            h = std::abs(t_end - t);
            last = true;
        }
        st.step(y, dir * h, y_new, err);
        if (!detail::finite(y_new) || detail::norm2(y_new) > cfg.blowup_norm) {
            tr.status = FlowStatus::blow_up;
            tr.message = "state norm exceeded " + short_number(cfg.blowup_norm) + " near t = " + short_number(t);
            return tr;
        }
        double e = error_norm(y, y_new, err);
        if (!std::isfinite(e)) {
            tr.status = FlowStatus::blow_up;
            tr.message = "non-finite error estimate near t = " + short_number(t);
            return tr;
        }
        double fac11 = std::pow(std::max(e, 1e-300), expo);
        if (e <= 1.0) {
            double fac = fac11 / std::pow(facold, beta);
            fac = std::clamp(fac / safety, 1.0 / fac_max, 1.0 / fac_min);
            facold = std::max(e, 1e-4);
            t = last ? t_end : t + dir * h;
            y.swap(y_new);
            st.advance();
            ++tr.accepted;
            record(t, y);
            double h_new = std::min(h / fac, cfg.max_step);
            if (last_rejected)
                h_new = std::min(h_new, h);
            last_rejected = false;
            h = h_new;
        } else {
            ++tr.rejected;
            last_rejected = true;
            h = h / std::min(1.0 / fac_min, fac11 / safety);
        }
    }
    return tr;
}

struct DriftReport {
    std::vector<std::string> names;
    std::vector<double> drift;
    double threshold = 1e-8;
    bool pass = true;

    double max() const { return drift.empty() ? 0 : *std::max_element(drift.begin(), drift.end()); }
};

/// max_t |H(u(t)) - H(u(t0))| / max(1, |H(u(t0))|) for each invariant.
inline DriftReport invariant_drift(const Trajectory& traj, const std::vector<NamedPolynomial>& invariants,
                                   const NumericParameters& params, double threshold = 1e-8)
{
    if (traj.states.empty())
        throw std::invalid_argument("invariant_drift: empty trajectory");
    DriftReport rep;
    rep.threshold = threshold;
    const std::size_t n = traj.states.front().size();
    for (const auto& inv : invariants) {
        CompiledField g(std::vector<Polynomial>{inv.poly}, n, params);
        const double h0 = g(traj.states.front())[0];
        double m = 0;
        for (const auto& u : traj.states)
            m = std::max(m, std::abs(g(u)[0] - h0));
        rep.names.push_back(inv.name);
        rep.drift.push_back(m / std::max(1.0, std::abs(h0)));
    }
    rep.pass = rep.max() <= threshold;
    return rep;
}

struct CommutationResult {
    double residual = 0;
    FlowStatus status = FlowStatus::ok;
    std::vector<double> xy, yx;
};

/// max-norm of Phi_Y^s(Phi_X^t(u0)) - Phi_X^t(Phi_Y^s(u0)).
inline CommutationResult commute_flows(const VectorField& X, const VectorField& Y, const NumericParameters& params,
                                       const std::vector<double>& u0, double t, double s,
                                       const IntegratorConfig& cfg = {})
{
    if (X.dimension() != Y.dimension())
        throw std::invalid_argument("commute_flows: fields of different dimension");
    CommutationResult out;
    auto leg = [&](const VectorField& F, const std::vector<double>& u, double span) -> std::optional<std::vector<double>> {
        Trajectory tr = integrate(F, params, u, 0, span, cfg);
        if (!tr.ok()) {
            out.status = tr.status;
            return std::nullopt;
        }
        return tr.final_state();
    };
    auto a = leg(X, u0, t);
    auto b = a ? leg(Y, *a, s) : std::nullopt;
    auto c = b ? leg(Y, u0, s) : std::nullopt;
    auto d = c ? leg(X, *c, t) : std::nullopt;
    if (!d) {
        out.residual = std::numeric_limits<double>::infinity();
        return out;
    }
    out.xy = *b;
    out.yx = *d;
    for (std::size_t i = 0; i < out.xy.size(); ++i)
        out.residual = std::max(out.residual, std::abs(out.xy[i] - out.yx[i]));
    return out;
}

class SeedError : public std::domain_error {
public:
    SeedError(const std::string& what, double estimate) : std::domain_error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// Values of the series in the ring's variable order.
inline std::vector<double> ring_values(const VariableSet& ring, const NumericParameters& params)
{
    std::vector<double> v;
    for (const auto& name : ring.names()) {
        auto it = params.find(name);
        if (it == params.end())
            throw std::invalid_argument("no numeric value for series parameter '" + name + "'");
        v.push_back(it->second);
    }
    return v;
}

/// Truncated series evaluated at t0 > 0. Rejects t0 when the last terms are
/// not small: tail / max(1, |value|) must stay below `tolerance`.
inline std::vector<double> seed_from_series(const std::vector<PuiseuxSeries>& series, const NumericParameters& params,
                                            double t0, double tolerance = 1e-8)
{
    if (!(t0 > 0) || !std::isfinite(t0))
        throw std::invalid_argument("seed_from_series: t0 must be a positive real");
    if (series.empty())
        throw std::invalid_argument("seed_from_series: no series");
    const auto vals = ring_values(series.front().ring, params);
    std::vector<double> u;
    for (const auto& s : series) {
        const double v = s.evaluate(vals, t0);
        const double tail = s.tail_estimate(vals, t0) / std::max(1.0, std::abs(v));
        if (tail > tolerance)
            throw SeedError("t0 = " + short_number(t0) + " too large for the truncated series of " + s.variable +
                                ": relative tail estimate " + short_number(tail),
                            tail);
        u.push_back(v);
    }
    return u;
}

/// Fixed-seed states uniform in [-1,1]^n, scaled by `scale`.
inline std::vector<std::vector<double>> random_states(std::size_t n, std::size_t count, std::uint64_t seed,
                                                      double scale)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<std::vector<double>> out(count, std::vector<double>(n));
    for (auto& u : out)
        for (auto& x : u)
            x = scale * U(rng);
    return out;
}

inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// CSV with header t,<states>,<invariants>.
inline void write_csv(std::ostream& os, const Trajectory& tr)
{
    os << "t";
    for (const auto& n : tr.state_names)
        os << ',' << n;
    for (const auto& n : tr.invariant_names)
        os << ',' << n;
    os << '\n';
    for (std::size_t r = 0; r < tr.times.size(); ++r) {
        os << format_double(tr.times[r]);
        for (double x : tr.states[r])
            os << ',' << format_double(x);
        for (double x : tr.invariant_values[r])
            os << ',' << format_double(x);
        os << '\n';
    }
}

} // namespace hhm

#endif
