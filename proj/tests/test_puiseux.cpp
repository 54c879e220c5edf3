#include "hhm/hamsys.hpp"
#include "hhm/linalg.hpp"
#include "hhm/parse.hpp"
#include "hhm/puiseux.hpp"
#include "hhm/reference.hpp"

#include <gtest/gtest.h>

using namespace hhm;
using namespace hhm::systems;

namespace {

// Values below come from tests/oracles/series_oracle.py and
// tests/oracles/master_oracle.py.

const Expansion& case3()
{
    static const Expansion ex = [] {
        const auto b = build_case3_bundle();
        auto balances = find_balances(b.field, 2);
        return expand_solution(b.field, balances.at(0), 12, reference::case3_conventions());
    }();
    return ex;
}

Polynomial in_ring(const Expansion& ex, std::string_view text)
{
    return parse_polynomial(text, ex.ring);
}

std::vector<std::string> strings(const std::vector<Rational>& v)
{
    std::vector<std::string> out;
    for (const auto& r : v)
        out.push_back(r.get_str());
    return out;
}

} // namespace

TEST(Linalg, DeterminantOfPolynomialMatrix)
{
    const VariableSet v{"x"};
    auto P = [&](std::string_view s) { return parse_polynomial(s, v); };
    PolyMatrix m{{P("x"), P("1"), P("0")}, {P("2"), P("x"), P("1")}, {P("0"), P("3"), P("x")}};
    EXPECT_EQ(determinant(m, v), P("x^3 - 5*x"));
    EXPECT_EQ(minor_determinant(m, {0, 1}, {1, 2}, v), P("1"));
}

TEST(Linalg, UnimodularSolveNeedsConstantDeterminant)
{
    const VariableSet v{"a"};
    auto P = [&](std::string_view s) { return parse_polynomial(s, v); };
    auto x = solve_unimodular({{P("2"), P("a")}, {P("0"), P("1")}}, {P("a^2"), P("a")}, v);
    EXPECT_EQ(x[0], P("0"));
    EXPECT_EQ(x[1], P("a"));
    EXPECT_THROW(solve_unimodular({{P("a"), P("0")}, {P("0"), P("1")}}, {P("1"), P("1")}, v), std::domain_error);
}

TEST(Linalg, RationalRootsWithMultiplicity)
{
    // (x - 1/2)^2 (x + 3) x (x^2 + 1)
    auto r = rational_roots({0, ratio(3, 4), ratio(-11, 4), ratio(11, 4), ratio(-7, 4), 2, 1});
    ASSERT_EQ(r.roots.size(), 3u);
    EXPECT_EQ(r.roots[0].value, -3);
    EXPECT_EQ(r.roots[1].value, 0);
    EXPECT_EQ(r.roots[2].value, ratio(1, 2));
    EXPECT_EQ(r.roots[2].multiplicity, 2u);
    EXPECT_EQ(r.remaining_degree, 2u);
    EXPECT_THROW(rational_roots({0, 0}), std::domain_error);
}

TEST(Series, EvaluationAndDerivative)
{
    PuiseuxSeries s;
    s.variable = "y";
    s.ring = VariableSet{"a"};
    s.denominator = 2;
    s.coefficients[-1] = parse_polynomial("a", s.ring);
    s.coefficients[2] = parse_polynomial("3", s.ring);
    s.truncation = 4;
    EXPECT_EQ(s.offset(), -1);
    EXPECT_NEAR(s.evaluate({2.0}, 4.0), 2.0 / 2.0 + 3.0 * 4.0, 1e-14);
    const auto d = s.derivative("x");
    EXPECT_EQ(d.coefficient(-3), parse_polynomial("-1/2*a", s.ring));
    EXPECT_EQ(d.coefficient(0), parse_polynomial("3", s.ring));
    EXPECT_EQ(d.truncation, 2);
    EXPECT_TRUE(s.coefficient(3).is_zero());
    EXPECT_THROW(s.coefficient(5), std::out_of_range);
    EXPECT_THROW(s.evaluate({2.0}, -1.0), std::domain_error);
}

TEST(Balances, DominantPartRejectsLighterTerms)
{
    const auto f = build_case3_bundle().field;
    // G = (-1, -4, -3, -6) in halves: x1' = -A y1 - 2 y1 y2 keeps only y1 y2.
    const Polynomial dom = dominant_part(f[2], {-1, -4, -3, -6}, 2, 2);
    EXPECT_EQ(dom, parse_polynomial("-2*y1*y2", f.variables()));
    // With x1 of weight -1/2 the product y1 y2 outweighs x1'.
    EXPECT_THROW(dominant_part(f[2], {-1, -4, -1, -6}, 2, 2), std::invalid_argument);
}

TEST(Balances, PrincipalBalanceOfTheIntegrableCase)
{
    const auto b = build_case3_bundle();
    const auto balances = find_balances(b.field, 2);
    ASSERT_GE(balances.size(), 1u);
    const Balance& p = balances.front();
    EXPECT_EQ(p.denominator, 2);
    EXPECT_EQ(p.exponents, (std::vector<int>{-1, -4, -3, -6}));
    EXPECT_EQ(p.exponent(0), ratio(-1, 2));
    EXPECT_EQ(p.exponent(3), -3);
    ASSERT_EQ(p.free_parameters.size(), 1u);
    const VariableSet& r = p.ring;
    EXPECT_EQ(p.coefficients[0], Polynomial::variable(r, p.free_parameters[0]));
    EXPECT_EQ(p.coefficients[1], Polynomial(r, ratio(-3, 8)));
    EXPECT_EQ(p.coefficients[2], Polynomial::variable(r, p.free_parameters[0]) * ratio(-1, 2));
    EXPECT_EQ(p.coefficients[3], Polynomial(r, ratio(3, 4)));
    for (const auto& other : balances)
        EXPECT_LE(other.free_parameters.size(), p.free_parameters.size());
}

TEST(Resonances, IntegrableCase)
{
    const Expansion& ex = case3();
    const ResonanceReport& r = ex.resonances;
    EXPECT_EQ(r.characteristic, parse_polynomial("rho^4 - 7*rho^3 + 4*rho^2 + 12*rho", VariableSet{"rho"}));
    std::vector<Rational> eig;
    for (const auto& e : r.eigenvalues)
        eig.push_back(e.value);
    EXPECT_EQ(strings(eig), (std::vector<std::string>{"-1", "0", "2", "6"}));
    EXPECT_EQ(r.irrational_degree, 0u);
    EXPECT_TRUE(r.time_shift);
    ASSERT_EQ(r.resonances.size(), 3u);
    EXPECT_EQ(r.resonances[0].order, 0);
    EXPECT_EQ(r.resonances[1].order, 4);
    EXPECT_EQ(r.resonances[2].order, 12);
    EXPECT_EQ(r.resonances[2].rho, 6);
    // alpha, beta, gamma beyond the time shift.
    EXPECT_EQ(r.resonance_parameter_count(), 3u);
    EXPECT_EQ(r.parameter_count, 4u);
}

TEST(Resonances, FiveDimensionalSystem)
{
    const auto m = build_master_bundle();
    const auto balances = find_balances(m.field, 2);
    ASSERT_FALSE(balances.empty());
    const Balance& p = balances.front();
    EXPECT_EQ(p.exponents, (std::vector<int>{-2, -4, -6, -4, -6}));
    const ResonanceReport r = kowalewski_exponents(m.field, p);
    EXPECT_EQ(r.characteristic,
              parse_polynomial("rho^5 - 11*rho^4 + 32*rho^3 - 4*rho^2 - 48*rho", VariableSet{"rho"}));
    EXPECT_TRUE(r.time_shift);
    EXPECT_EQ(r.parameter_count, 5u);
}

TEST(Expansion, CoefficientsMatchTheOracle)
{
    const Expansion& ex = case3();
    EXPECT_EQ(ex["y1"].coefficient(-1), in_ring(ex, "alpha"));
    EXPECT_EQ(ex["y1"].coefficient(3), in_ring(ex, "beta"));
    EXPECT_EQ(ex["y1"].coefficient(5), in_ring(ex, "-1/18*alpha^3"));
    EXPECT_EQ(ex["y1"].coefficient(7), in_ring(ex, "1/10*A^2*alpha"));
    EXPECT_EQ(ex["y1"].coefficient(9), in_ring(ex, "-1/18*alpha^2*beta"));
    EXPECT_EQ(ex["y1"].coefficient(11), in_ring(ex, "1/30*A^2*beta + 1/2592*alpha^5 + 1/12*alpha*gamma"));
    EXPECT_EQ(ex["y2"].coefficient(-4), in_ring(ex, "-3/8"));
    EXPECT_EQ(ex["y2"].coefficient(0), in_ring(ex, "-1/2*A"));
    EXPECT_EQ(ex["y2"].coefficient(2), in_ring(ex, "1/12*alpha^2"));
    EXPECT_EQ(ex["y2"].coefficient(4), in_ring(ex, "-2/5*A^2"));
    EXPECT_EQ(ex["y2"].coefficient(6), in_ring(ex, "1/3*alpha*beta"));
    EXPECT_EQ(ex["y2"].coefficient(8), in_ring(ex, "-gamma"));
    EXPECT_EQ(ex["x1"].coefficient(3), in_ring(ex, "-5/36*alpha^3"));
    EXPECT_EQ(ex["x2"].coefficient(6), in_ring(ex, "-4*gamma"));
    EXPECT_TRUE(ex["y2"].coefficient(-2).is_zero());
}

TEST(Expansion, ResidualVanishes)
{
    const auto b = build_case3_bundle();
    EXPECT_TRUE(ode_residual(b.field, case3().series).empty());
}

TEST(Expansion, MomentaAreDerivatives)
{
    const Expansion& ex = case3();
    for (auto [y, x] : {std::pair{"y1", "x1"}, std::pair{"y2", "x2"}}) {
        const auto d = ex[y].derivative(x);
        ASSERT_LE(d.truncation, ex[x].truncation);
        for (int k = ex[x].offset(); k <= d.truncation; ++k)
            EXPECT_EQ(d.coefficient(k), ex[x].coefficient(k)) << x << " key " << k;
    }
}

TEST(Expansion, FiveDimensionalResidualVanishes)
{
    const auto m = build_master_bundle();
    const auto ex = expand_solution(m.field, find_balances(m.field, 2).front(), 12);
    EXPECT_TRUE(ode_residual(m.field, ex.series).empty());
    EXPECT_EQ(ex.resonances.parameter_count, 5u);
}

TEST(Expansion, OrderBelowLastResonanceIsRejected)
{
    const auto b = build_case3_bundle();
    EXPECT_THROW(expand_solution(b.field, find_balances(b.field, 2).front(), 11), std::invalid_argument);
}

TEST(Expansion, NonIntegrableParametersFailCompatibility)
{
    const auto g = build_henon_heiles(Rational(1), Rational(3), Rational(16));
    const auto balances = find_balances(g, 2);
    ASSERT_FALSE(balances.empty());
    try {
        expand_solution(g, balances.front(), 12);
        FAIL() << "expected a compatibility failure";
    } catch (const ExpansionError& e) {
        EXPECT_EQ(e.order(), 4);
    }
}

TEST(Restriction, ResidueRelations)
{
    const Expansion& ex = case3();
    const auto b = build_case3_bundle();
    EXPECT_EQ(invariant_restriction(ex.series, b.invariant("H1")),
              in_ring(ex, "5/32*alpha^4 + 4/3*A^3 - 21/4*gamma"));
    EXPECT_EQ(invariant_restriction(ex.series, b.invariant("H2")),
              in_ring(ex, "29/108*alpha^8 + 16*A^2*alpha^3*beta - 14*alpha^4*gamma - 48*alpha*beta^3"));
}

TEST(Restriction, NonInvariantIsReported)
{
    const Expansion& ex = case3();
    const Polynomial y1sq = parse_polynomial("y1^2", case3_ring());
    try {
        invariant_restriction(ex.series, y1sq);
        FAIL() << "y1^2 is not constant along the series";
    } catch (const InvariantMismatch& e) {
        EXPECT_EQ(e.exponent(), -1);
        EXPECT_EQ(e.coefficient(), in_ring(ex, "alpha^2"));
    }
}

TEST(Curve, EliminationAndBackSubstitution)
{
    const Expansion& ex = case3();
    const auto b = build_case3_bundle();
    const VariableSet ring = ex.ring.extended({"b1", "b2"});
    const Polynomial r1 = invariant_restriction(ex.series, b.invariant("H1")).embed(ring) -
                          Polynomial::variable(ring, "b1");
    const Polynomial r2 = invariant_restriction(ex.series, b.invariant("H2")).embed(ring) -
                          Polynomial::variable(ring, "b2");
    const CurveRelation c = eliminate_and_compare_curve(r1, r2, reference::case3_curve());
    auto P = [&](std::string_view s) { return parse_polynomial(s, ring); };
    EXPECT_EQ(c.solution, P("5/168*alpha^4 + 16/63*A^3 - 4/21*b1"));
    EXPECT_EQ(c.normalized,
              P("4/27*alpha^8 + 32/9*A^3*alpha^4 - 16*A^2*alpha^3*beta - 8/3*alpha^4*b1 + 48*alpha*beta^3 + b2"));
    EXPECT_EQ(c.primitive,
              P("4*alpha^8 + 96*A^3*alpha^4 - 432*A^2*alpha^3*beta - 72*alpha^4*b1 + 1296*alpha*beta^3 + 27*b2"));
    EXPECT_EQ(c.normalized.degree_in("beta"), 3u);
    EXPECT_TRUE(c.back_substitution_r1.is_zero());
    EXPECT_TRUE(c.back_substitution_curve.is_zero());

    std::vector<std::string> monomials;
    for (const auto& m : c.comparison)
        monomials.push_back(m.monomial);
    for (const char* m : {"alpha*beta^3", "alpha^3*beta", "alpha^8", "alpha^6", "alpha^4", "1"})
        EXPECT_NE(std::find(monomials.begin(), monomials.end(), m), monomials.end()) << m;
}

TEST(Curve, NonlinearEliminationIsRejected)
{
    const VariableSet v{"alpha", "beta", "gamma", "b1", "b2"};
    auto P = [&](std::string_view s) { return parse_polynomial(s, v); };
    EXPECT_THROW(eliminate_and_compare_curve(P("gamma^2 - b1"), P("beta - b2")), EliminationError);
    EXPECT_THROW(eliminate_and_compare_curve(P("alpha*gamma - b1"), P("beta - b2")), EliminationError);
}

TEST(Reference, ListedSeriesDiff)
{
    std::vector<std::string> mismatched;
    for (const auto& d : reference::compare_case3_series(case3().series))
        if (!d.match)
            mismatched.push_back(d.variable + "@" + d.exponent.get_str());
    // The listing has alpha for alpha^3 in both places.
    EXPECT_EQ(mismatched, (std::vector<std::string>{"y1@5/2", "x1@3/2"}));
}
