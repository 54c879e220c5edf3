#ifndef HHM_POISSON_HPP
#define HHM_POISSON_HPP

#include "vector_field.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace hhm {

struct BracketReport {
    std::pair<std::string, std::string> pair;
    Polynomial bracket;
    bool is_zero = false;
};

struct JacobiTriple {
    std::size_t i, j, k;
    Polynomial residual;
};

struct JacobiReport {
    std::vector<JacobiTriple> triples;
    bool pass = true;
};

namespace detail {

inline void require_same_space(const Polynomial& p, const PoissonStructure& J)
{
    if (!(p.variables() == J.variables()))
        throw std::invalid_argument("polynomial and Poisson structure use different variable sets");
}

} // namespace detail

/// <grad F, X> = sum_j dF/dz_j X_j : the derivative of F along X.
inline Polynomial lie_derivative(const Polynomial& F, const VectorField& X)
{
    if (!(F.variables() == X.variables()))
        throw std::invalid_argument("lie_derivative: variable sets differ");
    Polynomial out(F.variables());
    for (std::size_t j = 0; j < X.dimension(); ++j)
        out += F.derivative(j) * X[j];
    return out;
}

/// {F,G} = sum_{k,l} J_kl dF/dz_k dG/dz_l.
inline Polynomial bracket(const Polynomial& F, const Polynomial& G, const PoissonStructure& J)
{
    detail::require_same_space(F, J);
    detail::require_same_space(G, J);
    const std::size_t n = J.dimension();
    std::vector<Polynomial> dG;
    for (std::size_t l = 0; l < n; ++l)
        dG.push_back(G.derivative(l));
    Polynomial out(F.variables());
    for (std::size_t k = 0; k < n; ++k) {
        Polynomial dF = F.derivative(k);
        if (dF.is_zero())
            continue;
        Polynomial row(F.variables());
        for (std::size_t l = 0; l < n; ++l)
            if (!J(k, l).is_zero())
                row += J(k, l) * dG[l];
        out += dF * row;
    }
    return out;
}

inline BracketReport bracket_report(const NamedPolynomial& F, const NamedPolynomial& G, const PoissonStructure& J)
{
    Polynomial b = bracket(F.poly, G.poly, J);
    bool zero = b.is_zero();
    return {{F.name, G.name}, std::move(b), zero};
}

/// X_H with components sum_l J_kl dH/dz_l.
inline VectorField hamiltonian_vector_field(const Polynomial& H, const PoissonStructure& J)
{
    detail::require_same_space(H, J);
    const std::size_t n = J.dimension();
    std::vector<Polynomial> comps;
    for (std::size_t k = 0; k < n; ++k) {
        Polynomial c(H.variables());
        for (std::size_t l = 0; l < n; ++l)
            if (!J(k, l).is_zero())
                c += J(k, l) * H.derivative(l);
        comps.push_back(std::move(c));
    }
    return {H.variables(), std::move(comps)};
}

/// Jacobi identity on every coordinate triple z_i, z_j, z_k with i<j<k.
/// The bracket is a biderivation, so the cyclic sum on coordinates
/// determines it on all polynomials; repeated indices vanish by skew-symmetry.
inline JacobiReport jacobi_check(const PoissonStructure& J)
{
    const VariableSet& vars = J.variables();
    const std::size_t n = J.dimension();
    std::vector<Polynomial> z;
    for (std::size_t i = 0; i < n; ++i)
        z.push_back(Polynomial::variable(vars, vars[i]));
    JacobiReport report;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Polynomial r = bracket(z[i], J(j, k), J) + bracket(z[j], J(k, i), J) + bracket(z[k], J(i, j), J);
                if (!r.is_zero())
                    report.pass = false;
                report.triples.push_back({i, j, k, std::move(r)});
            }
    return report;
}

/// Random small polynomial over the phase variables of `vars` (parameters
/// are left out), coefficients in [-3, 3].
inline Polynomial random_polynomial(const VariableSet& vars, std::size_t phase_dim, unsigned max_degree,
                                    std::size_t term_count, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<unsigned> deg(0, max_degree);
    std::uniform_int_distribution<std::size_t> var(0, phase_dim - 1);
    Polynomial p(vars);
    for (std::size_t t = 0; t < term_count; ++t) {
        Exponents e(vars.size(), 0);
        for (unsigned d = deg(rng); d > 0; --d)
            ++e[var(rng)];
        p += Polynomial::term(vars, std::move(e), Rational(coef(rng)));
    }
    return p;
}

/// Jacobi identity on random polynomial triples. Optional stress mode; a
/// non-zero cyclic sum on any triple is returned as the residual.
inline JacobiReport jacobi_stress(const PoissonStructure& J, std::size_t triples, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    JacobiReport report;
    const auto& vars = J.variables();
    for (std::size_t t = 0; t < triples; ++t) {
        Polynomial f = random_polynomial(vars, J.dimension(), 2, 3, rng);
        Polynomial g = random_polynomial(vars, J.dimension(), 2, 3, rng);
        Polynomial h = random_polynomial(vars, J.dimension(), 2, 3, rng);
        Polynomial r = bracket(f, bracket(g, h, J), J) + bracket(g, bracket(h, f, J), J) +
                       bracket(h, bracket(f, g, J), J);
        if (!r.is_zero())
            report.pass = false;
        report.triples.push_back({t, t, t, std::move(r)});
    }
    return report;
}

/// True iff X_F = J grad F vanishes identically.
inline bool casimir_check(const Polynomial& F, const PoissonStructure& J)
{
    return hamiltonian_vector_field(F, J).is_zero();
}

/// [X, Y]_i = sum_j (X_j dY_i/dz_j - Y_j dX_i/dz_j).
inline VectorField lie_bracket_fields(const VectorField& X, const VectorField& Y)
{
    X.require_compatible(Y);
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < X.dimension(); ++i)
        comps.push_back(lie_derivative(Y[i], X) - lie_derivative(X[i], Y));
    return {X.variables(), std::move(comps)};
}

struct ComponentRemainder {
    std::size_t component;
    Polynomial difference;
    Polynomial remainder;
};

/// Per component, X_i - Y_i and its remainder modulo the Casimir. All
/// remainders zero means X = Y on the zero level set of the Casimir.
inline std::vector<ComponentRemainder> field_identity_mod_casimir(const VectorField& X, const VectorField& Y,
                                                                  const Polynomial& casimir)
{
    X.require_compatible(Y);
    if (casimir.is_zero())
        throw std::domain_error("field_identity_mod_casimir: zero Casimir");
    std::vector<ComponentRemainder> out;
    for (std::size_t i = 0; i < X.dimension(); ++i) {
        Polynomial d = X[i] - Y[i];
        out.push_back({i, d, reduce_mod(d, casimir).remainder});
    }
    return out;
}

} // namespace hhm

#endif
