#ifndef HHM_LINALG_HPP
#define HHM_LINALG_HPP

// Small exact linear algebra over polynomial entries, plus rational roots
// of univariate polynomials.

#include "polynomial.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hhm {

using PolyMatrix = std::vector<std::vector<Polynomial>>;

/// Determinant of the submatrix on `rows` x `cols` by Laplace expansion
/// over column subsets (2^n states, fine for the sizes used here).
inline Polynomial minor_determinant(const PolyMatrix& m, const std::vector<std::size_t>& rows,
                                    const std::vector<std::size_t>& cols, const VariableSet& vars)
{
    const std::size_t n = rows.size();
    if (cols.size() != n)
        throw std::invalid_argument("minor_determinant: rows and columns differ in count");
    if (n > 20)
        throw std::invalid_argument("minor_determinant: matrix too large");
    if (n == 0)
        return Polynomial(vars, Rational(1));
    std::vector<Polynomial> f(std::size_t{1} << n, Polynomial(vars));
    f[0] = Polynomial(vars, Rational(1));
    for (std::uint32_t S = 1; S < (1u << n); ++S) {
        const unsigned r = static_cast<unsigned>(__builtin_popcount(S)) - 1;
        Polynomial acc(vars);
        for (std::size_t j = 0; j < n; ++j) {
            if (!(S & (1u << j)))
                continue;
            const Polynomial& e = m[rows[r]][cols[j]];
            if (e.is_zero() || f[S ^ (1u << j)].is_zero())
                continue;
            // Columns of S above j sit to the right of j in the minor.
            const unsigned above = static_cast<unsigned>(__builtin_popcount(S >> (j + 1)));
            Polynomial t = e * f[S ^ (1u << j)];
            if (above % 2)
                acc -= t;
            else
                acc += t;
        }
        f[S] = std::move(acc);
    }
    return f.back();
}

inline Polynomial determinant(const PolyMatrix& m, const VariableSet& vars)
{
    std::vector<std::size_t> idx(m.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    for (const auto& row : m)
        if (row.size() != m.size())
            throw std::invalid_argument("determinant: matrix is not square");
    return minor_determinant(m, idx, idx, vars);
}

/// All k-element subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    if (k > n)
        return out;
    std::vector<std::size_t> s(k);
    for (std::size_t i = 0; i < k; ++i)
        s[i] = i;
    while (true) {
        out.push_back(s);
        std::size_t i = k;
        while (i > 0 && s[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            break;
        ++s[i - 1];
        for (std::size_t j = i; j < k; ++j)
            s[j] = s[j - 1] + 1;
    }
    return out;
}

/// Solves the square system sub * x = rhs when det(sub) is a nonzero
/// constant, by Cramer's rule; the result stays polynomial.
inline std::vector<Polynomial> solve_unimodular(const PolyMatrix& sub, const std::vector<Polynomial>& rhs,
                                                const VariableSet& vars)
{
    const std::size_t n = sub.size();
    Polynomial det = determinant(sub, vars);
    if (!det.is_constant() || det.is_zero())
        throw std::domain_error("solve_unimodular: determinant is not a nonzero constant: " + det.to_string());
    const Rational d = det.constant_term();
    std::vector<Polynomial> x;
    for (std::size_t c = 0; c < n; ++c) {
        PolyMatrix m = sub;
        for (std::size_t r = 0; r < n; ++r)
            m[r][c] = rhs[r];
        x.push_back(determinant(m, vars) / d);
    }
    return x;
}

struct RationalRoot {
    Rational value;
    unsigned multiplicity;
};

struct RootReport {
    std::vector<RationalRoot> roots;
    unsigned remaining_degree = 0; // degree of the factor with no rational roots
};

namespace detail {

inline std::vector<Integer> positive_divisors(Integer n)
{
    if (n < 0)
        n = -n;
    std::vector<Integer> small, large;
    if (n == 0)
        return small;
    if (n > Integer("1000000000000"))
        throw std::domain_error("rational_roots: coefficient too large for divisor search");
    for (Integer d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d * d != n)
                large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

// Horner division by (x - r); returns the quotient and the remainder.
inline std::pair<std::vector<Rational>, Rational> deflate(const std::vector<Rational>& c, const Rational& r)
{
    const std::size_t n = c.size() - 1;
    std::vector<Rational> q(n);
    Rational acc = c[n];
    for (std::size_t i = n; i-- > 0;) {
        q[i] = acc;
        acc = acc * r + c[i];
    }
    return {q, acc};
}

} // namespace detail

/// Rational roots with multiplicity of sum_i coeffs[i] x^i.
inline RootReport rational_roots(std::vector<Rational> coeffs)
{
    while (!coeffs.empty() && coeffs.back() == 0)
        coeffs.pop_back();
    if (coeffs.empty())
        throw std::domain_error("rational_roots: zero polynomial");
    RootReport out;
    unsigned zeros = 0;
    while (coeffs.size() > 1 && coeffs.front() == 0) {
        coeffs.erase(coeffs.begin());
        ++zeros;
    }
    if (zeros)
        out.roots.push_back({Rational(0), zeros});
    while (coeffs.size() > 1) {
        Integer den(1);
        for (const auto& c : coeffs)
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
        Rational scale(den);
        Integer a0 = Rational(coeffs.front() * scale).get_num();
        Integer an = Rational(coeffs.back() * scale).get_num();
        bool found = false;
        for (const auto& p : detail::positive_divisors(a0)) {
            for (const auto& q : detail::positive_divisors(an)) {
                for (int sign : {1, -1}) {
                    Rational r(p * sign, q);
                    r.canonicalize();
                    auto [quot, rem] = detail::deflate(coeffs, r);
                    if (rem != 0)
                        continue;
                    unsigned mult = 1;
                    coeffs = std::move(quot);
                    while (coeffs.size() > 1) {
                        auto [q2, rem2] = detail::deflate(coeffs, r);
                        if (rem2 != 0)
                            break;
                        coeffs = std::move(q2);
                        ++mult;
                    }
                    out.roots.push_back({r, mult});
                    found = true;
                    break;
                }
                if (found)
                    break;
            }
            if (found)
                break;
        }
        if (!found)
            break;
    }
    out.remaining_degree = static_cast<unsigned>(coeffs.size() - 1);
    std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
    return out;
}

} // namespace hhm

#endif
