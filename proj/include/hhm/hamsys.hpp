#ifndef HHM_HAMSYS_HPP
#define HHM_HAMSYS_HPP

// The generalized Henon-Heiles field, its integrable case
// (epsilon = 16, B = 16A), the five-dimensional master system and the
// quadratic morphism between them.

#include "parse.hpp"
#include "poisson.hpp"
#include "vector_field.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hhm {

struct SystemBundle {
    std::string name;
    VectorField field;
    std::vector<NamedPolynomial> invariants;
    PoissonStructure poisson;
    std::vector<std::string> parameters;

    const Polynomial& invariant(std::string_view n) const
    {
        for (const auto& inv : invariants)
            if (inv.name == n)
                return inv.poly;
        throw std::invalid_argument("bundle '" + name + "' has no invariant '" + std::string(n) + "'");
    }

    SystemBundle specialized(const ParameterValues& values) const
    {
        SystemBundle out = *this;
        out.field = field.specialized(values);
        for (auto& inv : out.invariants)
            inv.poly = specialize(inv.poly, values);
        std::vector<std::vector<Polynomial>> m = poisson.matrix();
        for (auto& row : m)
            for (auto& e : row)
                e = specialize(e, values);
        out.poisson = PoissonStructure(poisson.variables(), std::move(m));
        return out;
    }
};

namespace systems {

inline const VariableSet& general_ring()
{
    static const VariableSet vars{"y1", "y2", "x1", "x2", "A", "B", "eps"};
    return vars;
}

inline const VariableSet& case3_ring()
{
    static const VariableSet vars{"y1", "y2", "x1", "x2", "A"};
    return vars;
}

inline const VariableSet& master_ring()
{
    static const VariableSet vars{"z1", "z2", "z3", "z4", "z5", "A"};
    return vars;
}

inline const std::vector<std::string>& system_names()
{
    static const std::vector<std::string> names{"hh-general", "hh-case3", "master"};
    return names;
}

/// Field (x1, x2, -A y1 - 2 y1 y2, -B y2 - y1^2 - eps y2^2) over
/// (y1, y2, x1, x2, A, B, eps). Any of A, B, eps may be fixed numerically.
inline VectorField build_henon_heiles(std::optional<Rational> A = {}, std::optional<Rational> B = {},
                                      std::optional<Rational> eps = {})
{
    const auto& v = general_ring();
    VectorField f(v, {parse_polynomial("x1", v), parse_polynomial("x2", v),
                      parse_polynomial("-A*y1 - 2*y1*y2", v), parse_polynomial("-B*y2 - y1^2 - eps*y2^2", v)});
    ParameterValues fixed;
    if (A)
        fixed["A"] = *A;
    if (B)
        fixed["B"] = *B;
    if (eps)
        fixed["eps"] = *eps;
    return f.specialized(fixed);
}

/// Hamiltonian of the generalized field.
inline Polynomial general_hamiltonian()
{
    return parse_polynomial("1/2*(x1^2 + x2^2) + 1/2*(A*y1^2 + B*y2^2) + y1^2*y2 + eps/3*y2^3", general_ring());
}

/// Quartic-sextic second integral of the integrable case, over `vars`
/// (which must contain y1, y2, x1, x2, A).
inline Polynomial case3_second_integral(const VariableSet& vars)
{
    return parse_polynomial("3*x1^4 + 6*A*x1^2*y1^2 + 12*x1^2*y1^2*y2 - 4*x1*x2*y1^3 - 4*A*y1^4*y2"
                            " - 4*y1^4*y2^2 + 3*A^2*y1^4 - 2/3*y1^6",
                            vars);
}

inline Polynomial case3_hamiltonian()
{
    return parse_polynomial("1/2*(x1^2 + x2^2) + A/2*(y1^2 + 16*y2^2) + y1^2*y2 + 16/3*y2^3", case3_ring());
}

inline SystemBundle build_general_bundle()
{
    const auto& v = general_ring();
    return {"hh-general",
            build_henon_heiles(),
            {{"H", general_hamiltonian()}, {"H2", case3_second_integral(v)}},
            PoissonStructure::canonical(v, 2),
            {"A", "B", "eps"}};
}

/// Integrable case: field specialized at eps = 16, B = 16A, invariants H1
/// and H2, canonical structure.
inline SystemBundle build_case3_bundle()
{
    const auto& g = general_ring();
    const auto& v = case3_ring();
    std::vector<Polynomial> images;
    for (const auto& name : g.names()) {
        if (name == "B")
            images.push_back(parse_polynomial("16*A", v));
        else if (name == "eps")
            images.push_back(Polynomial(v, Rational(16)));
        else
            images.push_back(Polynomial::variable(v, name));
    }
    const VectorField general = build_henon_heiles();
    std::vector<Polynomial> comps;
    for (const auto& c : general.components())
        comps.push_back(c.substitute(images));
    return {"hh-case3",
            VectorField(v, std::move(comps)),
            {{"H1", case3_hamiltonian()}, {"H2", case3_second_integral(v)}},
            PoissonStructure::canonical(v, 2),
            {"A"}};
}

inline PoissonStructure master_poisson()
{
    const auto& v = master_ring();
    auto P = [&](std::string_view s) { return parse_polynomial(s, v); };
    return {v,
            {{P("0"), P("0"), P("0"), P("2*z1"), P("12*z4")},
             {P("0"), P("0"), P("1"), P("0"), P("0")},
             {P("0"), P("-1"), P("0"), P("0"), P("-2*z1")},
             {P("-2*z1"), P("0"), P("0"), P("0"), P("-8*z1*z2 + 2*z5")},
             {P("-12*z4"), P("0"), P("2*z1"), P("8*z1*z2 - 2*z5"), P("0")}}};
}

inline SystemBundle build_master_bundle()
{
    const auto& v = master_ring();
    auto P = [&](std::string_view s) { return parse_polynomial(s, v); };
    VectorField f(v, {P("2*z4"), P("z3"), P("-z1 - 16*A*z2 - 16*z2^2"), P("-A*z1 + 1/3*z5 - 8/3*z1*z2"),
                      P("-6*A*z4 + 2*z1*z3 - 8*z2*z4")});
    std::vector<NamedPolynomial> inv{
        {"F1", P("1/2*A*z1 + 1/6*z5 + 8*A*z2^2 + 1/2*z3^2 + 2/3*z1*z2 + 16/3*z2^3")},
        {"F2", P("9*A^2*z1^2 + z5^2 + 6*A*z1*z5 - 2*z1^3 - 24*A*z1^2*z2 - 12*z1*z3*z4 + 24*z2*z4^2"
                 " - 16*z1^2*z2^2")},
        {"F3", P("z1*z5 - 3*z4^2 - 2*z1^2*z2")}};
    return {"master", std::move(f), std::move(inv), master_poisson(), {"A"}};
}

/// Bundle by CLI name; throws std::invalid_argument for unknown names.
inline SystemBundle bundle_by_name(std::string_view name)
{
    if (name == "hh-general")
        return build_general_bundle();
    if (name == "hh-case3")
        return build_case3_bundle();
    if (name == "master")
        return build_master_bundle();
    throw std::invalid_argument("unknown system '" + std::string(name) + "' (expected hh-general, hh-case3 or master)");
}

/// (y1, y2, x1, x2) -> (y1^2, y2, x2, y1 x1, 3 x1^2 + 2 y1^2 y2), with A
/// carried through unchanged.
inline PolynomialMap morphism()
{
    const auto& s = case3_ring();
    auto P = [&](std::string_view t) { return parse_polynomial(t, s); };
    return {s, master_ring(), {P("y1^2"), P("y2"), P("x2"), P("y1*x1"), P("3*x1^2 + 2*y1^2*y2"), P("A")}};
}

/// Numeric image of a phase point; the map is even in (y1, x1).
template <class T>
std::array<T, 5> apply_morphism(const std::array<T, 4>& u)
{
    const T& y1 = u[0];
    const T& y2 = u[1];
    const T& x1 = u[2];
    const T& x2 = u[3];
    return {y1 * y1, y2, x2, y1 * x1, T(3) * x1 * x1 + T(2) * y1 * y1 * y2};
}

/// residual_i = sum_j (d map_i / d u_j) source_j - target_i o map, over the
/// target's phase components. All zero certifies that the map carries
/// solutions of `source` to solutions of `target`.
inline std::vector<Polynomial> pushforward_check(const VectorField& source, const PolynomialMap& map,
                                                 const VectorField& target)
{
    if (!(source.variables() == map.source()) || !(target.variables() == map.target()))
        throw std::invalid_argument("pushforward_check: map does not connect the two fields");
    if (target.dimension() > map.images().size())
        throw std::invalid_argument("pushforward_check: dimension mismatch");
    std::vector<Polynomial> residual;
    for (std::size_t i = 0; i < target.dimension(); ++i)
        residual.push_back(lie_derivative(map.images()[i], source) - map.pull_back(target[i]));
    return residual;
}

struct PullbackEntry {
    std::string name;
    Polynomial pulled;
    Polynomial expected;
    Polynomial difference;
};

/// F1 o phi, F2 o phi, F3 o phi against H1, 3 H2 and 0. The factor 3 is
/// fixed by direct expansion.
inline std::vector<PullbackEntry> pullback_invariants(const PolynomialMap& map)
{
    const auto master = build_master_bundle();
    const auto c3 = build_case3_bundle();
    const VariableSet& s = map.source();
    const std::array<Polynomial, 3> expected{c3.invariant("H1").embed(s), c3.invariant("H2").embed(s) * Rational(3),
                                             Polynomial(s)};
    std::vector<PullbackEntry> out;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& F = master.invariants[k];
        Polynomial pulled = map.pull_back(F.poly);
        out.push_back({F.name, pulled, expected[k], pulled - expected[k]});
    }
    return out;
}

/// Reference listing of the second flow of the four-dimensional system.
/// Kept verbatim as data only: its components are quadratic while
/// J grad H2 is cubic and higher, so it is reported, never used.
inline VectorField listed_second_flow_case3()
{
    const auto& v = case3_ring();
    auto P = [&](std::string_view t) { return parse_polynomial(t, v); };
    return {v,
            {P("-24*A*x1 - 8*x1*y2 + 4*x2*y1"), P("4*x1*y1"),
             P("24*A^2*y1 - 4*x1*x2 - 8*A*y1*y2 - 8*y1*y2^2 - 4*y1^3"), P("4*x1^2 - 4*A*y1^2 - 8*y1^2*y2")}};
}

/// Reference listing of the second flow of the master system.
inline VectorField listed_second_flow_master()
{
    const auto& v = master_ring();
    auto P = [&](std::string_view t) { return parse_polynomial(t, v); };
    return {v,
            {P("24*z4*z5 - 24*z1^2*z3 + 96*z1*z2*z4 + 72*A*z1*z4"), P("-12*z1*z4"),
             P("12*A*z1^2 - 12*z1*z5 + 48*z1^2*z2"),
             P("4*z5^2 - 36*A^2*z1^2 + 12*z1^3 - 16*z1*z2*z5 + 48*A*z1^2*z2 + 24*z1*z3*z4 + 64*z1^2*z2^2"),
             P("-96*z2*z4*z5 + 768*z1*z2^2*z4 - 72*A*z4*z5 + 576*A*z1*z2*z4 + 144*z3*z4^2 - 216*A^2*z1*z4"
               " + 48*z1^2*z4 - 96*z1^2*z2*z3 + 24*z1*z3*z5")}};
}

} // namespace systems
} // namespace hhm

#endif
