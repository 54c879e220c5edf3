#include "hhm/hamsys.hpp"
#include "hhm/poisson.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hhm;
using namespace hhm::systems;

TEST(Bracket, InvolutionOfTheKnownPairs)
{
    const auto c3 = build_case3_bundle();
    EXPECT_TRUE(bracket(c3.invariant("H1"), c3.invariant("H2"), c3.poisson).is_zero());
    const auto m = build_master_bundle();
    auto rep = bracket_report(m.invariants[0], m.invariants[1], m.poisson);
    EXPECT_TRUE(rep.is_zero);
    EXPECT_EQ(rep.pair.first, "F1");
    EXPECT_TRUE(rep.bracket.is_zero());
}

TEST(Bracket, SelfBracketVanishes)
{
    const auto m = build_master_bundle();
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        Polynomial F = random_polynomial(master_ring(), 5, 3, 4, rng);
        EXPECT_TRUE(bracket(F, F, m.poisson).is_zero());
    }
}

TEST(Bracket, SkewSymmetryAndLeibnizOnRandomInputs)
{
    const auto m = build_master_bundle();
    const auto& J = m.poisson;
    std::mt19937_64 rng(9);
    for (int t = 0; t < 15; ++t) {
        Polynomial F = random_polynomial(master_ring(), 5, 3, 3, rng);
        Polynomial G = random_polynomial(master_ring(), 5, 3, 3, rng);
        Polynomial H = random_polynomial(master_ring(), 5, 3, 3, rng);
        EXPECT_TRUE((bracket(F, G, J) + bracket(G, F, J)).is_zero());
        EXPECT_TRUE((bracket(F * G, H, J) - F * bracket(G, H, J) - G * bracket(F, H, J)).is_zero());
    }
}

TEST(Bracket, ConservationIsBracketVanishing)
{
    const auto m = build_master_bundle();
    const auto XF1 = hamiltonian_vector_field(m.invariant("F1"), m.poisson);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 10; ++t) {
        Polynomial F = random_polynomial(master_ring(), 5, 3, 4, rng);
        EXPECT_EQ(lie_derivative(F, XF1), bracket(F, m.invariant("F1"), m.poisson));
    }
}

TEST(Bracket, RejectsForeignPolynomials)
{
    const auto m = build_master_bundle();
    Polynomial y = Polynomial::variable(case3_ring(), "y1");
    EXPECT_THROW(bracket(y, y, m.poisson), std::invalid_argument);
}

TEST(HamiltonianField, ReproducesBothSystems)
{
    const auto c3 = build_case3_bundle();
    EXPECT_EQ(hamiltonian_vector_field(c3.invariant("H1"), c3.poisson), c3.field);
    const auto m = build_master_bundle();
    EXPECT_EQ(hamiltonian_vector_field(m.invariant("F1"), m.poisson), m.field);
    EXPECT_TRUE(hamiltonian_vector_field(m.invariant("F3"), m.poisson).is_zero());
}

TEST(Jacobi, CanonicalAndMasterStructuresPass)
{
    auto canonical = jacobi_check(PoissonStructure::canonical(case3_ring(), 2));
    EXPECT_TRUE(canonical.pass);
    EXPECT_EQ(canonical.triples.size(), 4u);
    auto master = jacobi_check(master_poisson());
    EXPECT_TRUE(master.pass);
    EXPECT_EQ(master.triples.size(), 10u);
}

TEST(Jacobi, MutatedEntryFails)
{
    // Entry (1,4) changed from 2 z1 to 2 z2: the cyclic sums on the triples
    // (1,3,4), (1,4,5) and (3,4,5) become 2, 24 z4 and 4 z1 - 4 z2.
    const auto& v = master_ring();
    auto mutated = master_poisson().with_entry(0, 3, parse_polynomial("2*z2", v));
    auto rep = jacobi_check(mutated);
    EXPECT_FALSE(rep.pass);
    std::vector<std::string> nonzero;
    for (const auto& t : rep.triples)
        if (!t.residual.is_zero())
            nonzero.push_back(std::to_string(t.i + 1) + std::to_string(t.j + 1) + std::to_string(t.k + 1) + ":" +
                              t.residual.to_string());
    std::vector<std::string> expected{"134:2", "145:24 * z4", "345:4 * z1 - 4 * z2"};
    EXPECT_EQ(nonzero, expected);
}

TEST(Jacobi, RandomStressModePasses)
{
    EXPECT_TRUE(jacobi_stress(master_poisson(), 8, 42).pass);
    const auto& v = master_ring();
    EXPECT_FALSE(jacobi_stress(master_poisson().with_entry(0, 3, parse_polynomial("2*z2", v)), 8, 42).pass);
}

TEST(Casimir, OnlyF3AndConstants)
{
    const auto m = build_master_bundle();
    EXPECT_TRUE(casimir_check(m.invariant("F3"), m.poisson));
    EXPECT_FALSE(casimir_check(m.invariant("F1"), m.poisson));
    EXPECT_TRUE(casimir_check(Polynomial(master_ring(), 17), m.poisson));
}

TEST(LieBracket, CommutingFlows)
{
    const auto m = build_master_bundle();
    const auto X1 = hamiltonian_vector_field(m.invariant("F1"), m.poisson);
    const auto X2 = hamiltonian_vector_field(m.invariant("F2"), m.poisson);
    EXPECT_TRUE(lie_bracket_fields(X1, X2).is_zero());
    EXPECT_TRUE(lie_bracket_fields(X1, X1).is_zero());

    const auto c3 = build_case3_bundle();
    const auto Y1 = hamiltonian_vector_field(c3.invariant("H1"), c3.poisson);
    const auto Y2 = hamiltonian_vector_field(c3.invariant("H2"), c3.poisson);
    EXPECT_TRUE(lie_bracket_fields(Y1, Y2).is_zero());

    // Non-commuting control: X1 against a coordinate translation field.
    std::vector<Polynomial> e1(5, Polynomial(master_ring()));
    e1[0] = Polynomial(master_ring(), 1);
    EXPECT_FALSE(lie_bracket_fields(X1, VectorField(master_ring(), e1)).is_zero());
}

TEST(ModCasimir, ListedMasterSecondFlowAgreesOnTheCasimirLevel)
{
    const auto m = build_master_bundle();
    const auto XF2 = hamiltonian_vector_field(m.invariant("F2"), m.poisson);
    auto rows = field_identity_mod_casimir(listed_second_flow_master(), XF2, m.invariant("F3"));
    ASSERT_EQ(rows.size(), 5u);
    for (const auto& r : rows) {
        EXPECT_TRUE(r.remainder.is_zero()) << r.component;
        if (r.component == 2)
            EXPECT_EQ(r.difference, m.invariant("F3") * Rational(-8));
        else
            EXPECT_TRUE(r.difference.is_zero());
    }
}

TEST(ModCasimir, TrivialCases)
{
    const auto m = build_master_bundle();
    auto rows = field_identity_mod_casimir(m.field, m.field, m.invariant("F3"));
    for (const auto& r : rows)
        EXPECT_TRUE(r.remainder.is_zero());
    auto comps = m.field.components();
    comps[1] += Polynomial(master_ring(), 1);
    rows = field_identity_mod_casimir(VectorField(master_ring(), comps), m.field, m.invariant("F3"));
    EXPECT_EQ(rows[1].remainder, Polynomial(master_ring(), 1));
    EXPECT_THROW(field_identity_mod_casimir(m.field, m.field, Polynomial(master_ring())), std::domain_error);
}
