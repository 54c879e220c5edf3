#include "hhm/hamsys.hpp"
#include "hhm/poisson.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hhm;
using namespace hhm::systems;

namespace {

bool all_zero(const std::vector<Polynomial>& ps)
{
    for (const auto& p : ps)
        if (!p.is_zero())
            return false;
    return true;
}

} // namespace

TEST(HenonHeiles, EquilibriumAtOrigin)
{
    const auto f = build_henon_heiles();
    std::vector<Rational> origin{0, 0, 0, 0, 2, 3, 5};
    for (const auto& c : f.components())
        EXPECT_EQ(c.evaluate(origin), Rational(0));
    EXPECT_EQ(f[0], Polynomial::variable(general_ring(), "x1"));
}

TEST(HenonHeiles, IntegrableCaseIsTheHamiltonianField)
{
    const auto c3 = build_case3_bundle();
    EXPECT_EQ(hamiltonian_vector_field(c3.invariant("H1"), c3.poisson), c3.field);

    // Same statement on the generic builder, specialized numerically.
    const auto g = build_henon_heiles(Rational(2), Rational(32), Rational(16));
    const auto H = specialize(general_hamiltonian(), {{"A", 2}, {"B", 32}, {"eps", 16}});
    EXPECT_EQ(hamiltonian_vector_field(H, PoissonStructure::canonical(general_ring(), 2)), g);
}

TEST(HenonHeiles, GeneralHamiltonianIsConservedButH2OnlyInTheIntegrableCase)
{
    const auto b = build_general_bundle();
    EXPECT_TRUE(lie_derivative(b.invariant("H"), b.field).is_zero());
    EXPECT_FALSE(lie_derivative(b.invariant("H2"), b.field).is_zero());
    const auto fixed = b.specialized({{"eps", 16}, {"B", 16}, {"A", 1}});
    EXPECT_TRUE(lie_derivative(fixed.invariant("H2"), fixed.field).is_zero());
    const auto wrong = b.specialized({{"eps", 5}, {"B", 16}, {"A", 1}});
    EXPECT_FALSE(lie_derivative(wrong.invariant("H2"), wrong.field).is_zero());
}

TEST(Case3, InvariantValues)
{
    const auto c3 = build_case3_bundle();
    const auto& H1 = c3.invariant("H1");
    EXPECT_EQ(H1.evaluate(std::vector<Rational>{1, 0, 0, 0, 0}), Rational(0));
    EXPECT_EQ(H1.evaluate(std::vector<Rational>{1, 0, 0, 0, 2}), Rational(1));
    const auto& H2 = c3.invariant("H2");
    EXPECT_EQ(H2.evaluate(std::vector<Rational>{0, 7, 0, -3, 11}), Rational(0));
}

TEST(Case3, InvariantsAreConservedSymbolically)
{
    const auto c3 = build_case3_bundle();
    for (const auto& inv : c3.invariants)
        EXPECT_TRUE(lie_derivative(inv.poly, c3.field).is_zero()) << inv.name;
}

TEST(Master, FieldValuesAndMatrixEntries)
{
    const auto m = build_master_bundle();
    std::vector<Rational> e1{1, 0, 0, 0, 0, 5};
    std::vector<Rational> expected{0, 0, -1, -5, 0};
    for (std::size_t i = 0; i < 5; ++i)
        EXPECT_EQ(m.field[i].evaluate(e1), expected[i]);
    const auto& v = master_ring();
    EXPECT_EQ(m.poisson(0, 3), parse_polynomial("2*z1", v));
    EXPECT_EQ(m.poisson(3, 0), parse_polynomial("-2*z1", v));
    EXPECT_EQ(m.invariant("F1").constant_term(), Rational(0));
}

TEST(Master, InvariantsAreConservedSymbolically)
{
    const auto m = build_master_bundle();
    for (const auto& inv : m.invariants)
        EXPECT_TRUE(lie_derivative(inv.poly, m.field).is_zero()) << inv.name;
}

TEST(Master, NonSkewMatrixIsRejected)
{
    const auto& v = master_ring();
    auto m = master_poisson().matrix();
    m[0][3] = parse_polynomial("z2", v);
    EXPECT_THROW(PoissonStructure(v, m), std::invalid_argument);
}

TEST(Morphism, PointImages)
{
    using A4 = std::array<Rational, 4>;
    using A5 = std::array<Rational, 5>;
    EXPECT_EQ(apply_morphism(A4{1, 1, 1, 1}), (A5{1, 1, 1, 1, 5}));
    EXPECT_EQ(apply_morphism(A4{0, 3, 0, 7}), (A5{0, 3, 7, 0, 0}));
    EXPECT_EQ(apply_morphism(A4{-1, 1, -1, 1}), (A5{1, 1, 1, 1, 5}));

    // Same values through the symbolic map.
    const auto phi = morphism();
    std::vector<Rational> u{2, -1, 3, 5, 9};
    auto z = phi.apply(u);
    auto w = apply_morphism(A4{2, -1, 3, 5});
    for (std::size_t i = 0; i < 5; ++i)
        EXPECT_EQ(z[i], w[i]);
}

TEST(Morphism, IsEvenInY1X1)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 50; ++t) {
        std::array<double, 4> u{U(rng), U(rng), U(rng), U(rng)};
        std::array<double, 4> s{-u[0], u[1], -u[2], u[3]};
        EXPECT_EQ(apply_morphism(u), apply_morphism(s));
    }
}

TEST(Morphism, PushesTheCase3FieldOntoTheMasterField)
{
    const auto c3 = build_case3_bundle();
    const auto m = build_master_bundle();
    const auto phi = morphism();
    EXPECT_TRUE(all_zero(pushforward_check(c3.field, phi, m.field)));

    // Perturbing one target component by +1 shows up as -1 there.
    auto comps = m.field.components();
    comps[2] += Polynomial(master_ring(), 1);
    auto r = pushforward_check(c3.field, phi, VectorField(master_ring(), comps));
    for (std::size_t i = 0; i < 5; ++i)
        EXPECT_EQ(r[i], i == 2 ? Polynomial(case3_ring(), -1) : Polynomial(case3_ring()));
}

TEST(Morphism, IdentityMapHasZeroResidual)
{
    const auto c3 = build_case3_bundle();
    const auto& v = case3_ring();
    std::vector<Polynomial> id;
    for (const auto& n : v.names())
        id.push_back(Polynomial::variable(v, n));
    EXPECT_TRUE(all_zero(pushforward_check(c3.field, PolynomialMap(v, v, id), c3.field)));
    EXPECT_THROW(pushforward_check(c3.field, PolynomialMap(v, v, id), build_master_bundle().field),
                 std::invalid_argument);
}

TEST(Morphism, PullsBackTheMasterInvariants)
{
    auto entries = pullback_invariants(morphism());
    ASSERT_EQ(entries.size(), 3u);
    EXPECT_EQ(entries[0].name, "F1");
    for (const auto& e : entries)
        EXPECT_TRUE(e.difference.is_zero()) << e.name << ": " << e.difference.to_string();
    EXPECT_TRUE(entries[2].pulled.is_zero());
}

TEST(ListedFlows, FourDimensionalListingDiffersFromTheHamiltonianFlowOfH2)
{
    const auto c3 = build_case3_bundle();
    const auto XH2 = hamiltonian_vector_field(c3.invariant("H2"), c3.poisson);
    const auto listed = listed_second_flow_case3();
    auto phase_degree = [](const Polynomial& p) {
        unsigned d = 0;
        for (const auto& [e, c] : p.terms())
            d = std::max(d, e[0] + e[1] + e[2] + e[3]);
        return d;
    };
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(phase_degree(listed[i]), i >= 2 ? 3u : 2u);
        EXPECT_GE(phase_degree(XH2[i]), 3u);
    }
    EXPECT_FALSE((listed - XH2).is_zero());
}
