#ifndef HHM_POLYNOMIAL_HPP
#define HHM_POLYNOMIAL_HPP

#include "rational.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace hhm {

/// Ordered list of distinct variable names. The order is fixed at
/// construction; copies share the same underlying storage.
class VariableSet {
public:
    VariableSet() : names_(std::make_shared<const std::vector<std::string>>()) {}

    VariableSet(std::initializer_list<std::string> names) : VariableSet(std::vector<std::string>(names)) {}

    explicit VariableSet(std::vector<std::string> names)
    {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i].empty())
                throw std::invalid_argument("empty variable name");
            for (std::size_t j = 0; j < i; ++j)
                if (names[i] == names[j])
                    throw std::invalid_argument("duplicate variable name '" + names[i] + "'");
        }
        names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
    }

    std::size_t size() const noexcept { return names_->size(); }
    const std::string& operator[](std::size_t i) const { return (*names_)[i]; }
    const std::vector<std::string>& names() const noexcept { return *names_; }

    std::optional<std::size_t> find(std::string_view name) const
    {
        for (std::size_t i = 0; i < names_->size(); ++i)
            if ((*names_)[i] == name)
                return i;
        return std::nullopt;
    }

    bool contains(std::string_view name) const { return find(name).has_value(); }

    std::size_t index_of(std::string_view name) const
    {
        if (auto i = find(name))
            return *i;
        throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
    }

    /// This set followed by `extra` (names already present are skipped).
    VariableSet extended(const std::vector<std::string>& extra) const
    {
        std::vector<std::string> all = *names_;
        for (const auto& n : extra)
            if (std::find(all.begin(), all.end(), n) == all.end())
                all.push_back(n);
        return VariableSet(std::move(all));
    }

    friend bool operator==(const VariableSet& a, const VariableSet& b)
    {
        return a.names_ == b.names_ || *a.names_ == *b.names_;
    }

private:
    std::shared_ptr<const std::vector<std::string>> names_;
};

using Exponents = std::vector<unsigned>;

inline unsigned total_degree(const Exponents& e)
{
    unsigned d = 0;
    for (unsigned x : e)
        d += x;
    return d;
}

/// Graded lexicographic order over the declared variable order. The
/// comparator returns true when `a` ranks strictly above `b`, so ordered
/// containers iterate from the leading monomial downwards.
struct GradedLexOrder {
    bool operator()(const Exponents& a, const Exponents& b) const
    {
        unsigned da = total_degree(a), db = total_degree(b);
        if (da != db)
            return da > db;
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

/// True when the monomial `a` divides the monomial `b`.
inline bool divides(const Exponents& a, const Exponents& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i])
            return false;
    return true;
}

template <class T>
T coefficient_as(const Rational& q)
{
    if constexpr (std::is_same_v<T, Rational>)
        return q;
    else if constexpr (std::is_same_v<T, std::complex<double>>)
        return {q.get_d(), 0.0};
    else
        return static_cast<T>(q.get_d());
}

class Polynomial;
Polynomial pow(const Polynomial& p, long k);

/// Multivariate polynomial with exact rational coefficients. The zero
/// polynomial has no terms; no stored coefficient is ever zero.
class Polynomial {
public:
    using Terms = std::map<Exponents, Rational, GradedLexOrder>;

    Polynomial() = default;
    explicit Polynomial(VariableSet vars) : vars_(std::move(vars)) {}

    Polynomial(VariableSet vars, const Rational& c) : vars_(std::move(vars))
    {
        if (c != 0)
            terms_.emplace(Exponents(vars_.size(), 0), c);
    }

    static Polynomial variable(const VariableSet& vars, std::string_view name)
    {
        Exponents e(vars.size(), 0);
        e[vars.index_of(name)] = 1;
        return term(vars, std::move(e), Rational(1));
    }

    static Polynomial term(const VariableSet& vars, Exponents e, const Rational& c)
    {
        if (e.size() != vars.size())
            throw std::invalid_argument("exponent vector length does not match variable count");
        Polynomial p(vars);
        if (c != 0)
            p.terms_.emplace(std::move(e), c);
        return p;
    }

    const VariableSet& variables() const noexcept { return vars_; }
    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && hhm::total_degree(terms_.begin()->first) == 0);
    }

    Rational constant_term() const
    {
        auto it = terms_.find(Exponents(vars_.size(), 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational coefficient(const Exponents& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Leading monomial and coefficient under graded lex. Requires non-zero.
    const std::pair<const Exponents, Rational>& leading_term() const
    {
        if (terms_.empty())
            throw std::domain_error("zero polynomial has no leading term");
        return *terms_.begin();
    }

    unsigned total_degree() const
    {
        return terms_.empty() ? 0 : hhm::total_degree(terms_.begin()->first);
    }

    unsigned degree_in(std::size_t var) const
    {
        unsigned d = 0;
        for (const auto& [e, c] : terms_)
            d = std::max(d, e[var]);
        return d;
    }

    unsigned degree_in(std::string_view name) const { return degree_in(vars_.index_of(name)); }

    bool depends_on(std::size_t var) const { return degree_in(var) > 0; }

    /// Coefficient of var^k, as a polynomial over the same variables that
    /// does not involve `var`.
    Polynomial coefficient_of(std::size_t var, unsigned k) const
    {
        Polynomial out(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] != k)
                continue;
            Exponents f = e;
            f[var] = 0;
            out.terms_.emplace(std::move(f), c);
        }
        return out;
    }

    Polynomial& operator+=(const Polynomial& q)
    {
        require_compatible(q);
        for (const auto& [e, c] : q.terms_)
            accumulate(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& q)
    {
        require_compatible(q);
        for (const auto& [e, c] : q.terms_)
            accumulate(e, -c);
        return *this;
    }

    Polynomial& operator*=(const Rational& s)
    {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_)
            c *= s;
        return *this;
    }

    Polynomial& operator/=(const Rational& s)
    {
        if (s == 0)
            throw std::domain_error("division of a polynomial by zero");
        for (auto& [e, c] : terms_)
            c /= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
    friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
    friend Polynomial operator*(Polynomial p, const Rational& s) { return p *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial p) { return p *= s; }
    friend Polynomial operator/(Polynomial p, const Rational& s) { return p /= s; }

    friend Polynomial operator-(Polynomial p)
    {
        for (auto& [e, c] : p.terms_)
            c = -c;
        return p;
    }

    friend Polynomial operator*(const Polynomial& p, const Polynomial& q)
    {
        p.require_compatible(q);
        Polynomial out(p.vars_.size() ? p.vars_ : q.vars_);
        if (p.is_zero() || q.is_zero())
            return out;
        const std::size_t n = out.vars_.size();
        Exponents e(n);
        for (const auto& [ea, ca] : p.terms_) {
            for (const auto& [eb, cb] : q.terms_) {
                for (std::size_t i = 0; i < n; ++i)
                    e[i] = ea[i] + eb[i];
                auto [it, inserted] = out.terms_.try_emplace(e, ca * cb);
                if (!inserted)
                    it->second += ca * cb;
            }
        }
        std::erase_if(out.terms_, [](const auto& kv) { return kv.second == 0; });
        return out;
    }

    Polynomial& operator*=(const Polynomial& q) { return *this = *this * q; }

    friend bool operator==(const Polynomial& p, const Polynomial& q)
    {
        return p.vars_ == q.vars_ && p.terms_ == q.terms_;
    }

    /// Formal partial derivative.
    Polynomial derivative(std::size_t var) const
    {
        if (var >= vars_.size())
            throw std::invalid_argument("derivative: variable index out of range");
        Polynomial out(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0)
                continue;
            Exponents f = e;
            f[var] -= 1;
            out.terms_.emplace(std::move(f), c * e[var]);
        }
        return out;
    }

    Polynomial derivative(std::string_view name) const { return derivative(vars_.index_of(name)); }

    /// Evaluates with one value per variable, in VariableSet order.
    template <class T>
    T evaluate(std::span<const T> values) const
    {
        if (values.size() != vars_.size())
            throw std::invalid_argument("evaluate: expected " + std::to_string(vars_.size()) + " values, got " +
                                        std::to_string(values.size()));
        const T one = coefficient_as<T>(Rational(1));
        std::vector<std::vector<T>> powers(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            powers[i].push_back(one);
            for (unsigned k = 1, d = degree_in(i); k <= d; ++k)
                powers[i].push_back(powers[i].back() * values[i]);
        }
        T sum = coefficient_as<T>(Rational(0));
        for (const auto& [e, c] : terms_) {
            T t = coefficient_as<T>(c);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i])
                    t = t * powers[i][e[i]];
            sum = sum + t;
        }
        return sum;
    }

    template <class T>
    T evaluate(const std::vector<T>& values) const
    {
        return evaluate(std::span<const T>(values));
    }

    /// Evaluates from a name -> value assignment covering every variable.
    template <class T>
    T evaluate(const std::map<std::string, T, std::less<>>& assignment) const
    {
        std::vector<T> values;
        values.reserve(vars_.size());
        for (const auto& name : vars_.names()) {
            auto it = assignment.find(name);
            if (it == assignment.end())
                throw std::invalid_argument("evaluate: no value for variable '" + name + "'");
            values.push_back(it->second);
        }
        return evaluate(std::span<const T>(values));
    }

    /// Composition: variable i is replaced by images[i]. All images share one
    /// VariableSet, which becomes the variable set of the result.
    Polynomial substitute(const std::vector<Polynomial>& images) const
    {
        if (images.size() != vars_.size())
            throw std::invalid_argument("substitute: expected " + std::to_string(vars_.size()) + " images, got " +
                                        std::to_string(images.size()));
        if (images.empty())
            return *this;
        const VariableSet& target = images.front().variables();
        for (const auto& img : images)
            if (!(img.variables() == target))
                throw std::invalid_argument("substitute: images do not share one variable set");
        std::vector<std::vector<Polynomial>> powers(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            powers[i].emplace_back(target, Rational(1));
            for (unsigned k = 1, d = degree_in(i); k <= d; ++k)
                powers[i].push_back(powers[i].back() * images[i]);
        }
        Polynomial out(target);
        for (const auto& [e, c] : terms_) {
            Polynomial t(target, c);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i])
                    t *= powers[i][e[i]];
            out += t;
        }
        return out;
    }

    /// Composition from a name -> image map that must cover every variable.
    Polynomial substitute(const std::map<std::string, Polynomial, std::less<>>& images) const
    {
        std::vector<Polynomial> ordered;
        ordered.reserve(vars_.size());
        for (const auto& name : vars_.names()) {
            auto it = images.find(name);
            if (it == images.end())
                throw std::invalid_argument("substitute: no image for variable '" + name + "'");
            ordered.push_back(it->second);
        }
        return substitute(ordered);
    }

    /// Replaces a single variable, leaving the others untouched.
    Polynomial substitute_one(std::string_view name, const Polynomial& image) const
    {
        require_compatible(image);
        std::vector<Polynomial> images;
        for (const auto& v : vars_.names())
            images.push_back(v == name ? image : variable(vars_, v));
        vars_.index_of(name);
        return substitute(images);
    }

    /// Re-expresses this polynomial over `target`, matching variables by
    /// name. Every variable that actually occurs must exist in `target`.
    Polynomial embed(const VariableSet& target) const
    {
        if (target == vars_)
            return *this;
        std::vector<std::optional<std::size_t>> map(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i)
            map[i] = target.find(vars_[i]);
        Polynomial out(target);
        for (const auto& [e, c] : terms_) {
            Exponents f(target.size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (!e[i])
                    continue;
                if (!map[i])
                    throw std::invalid_argument("embed: variable '" + vars_[i] + "' missing from target");
                f[*map[i]] = e[i];
            }
            out.terms_.emplace(std::move(f), c);
        }
        return out;
    }

    /// Text form `c * v1^e1*v2^e2 + ...`, terms in descending graded lex
    /// order, exponent 1 omitted, coefficients as `p/q`.
    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rational mag = abs(c);
            if (first)
                out += c < 0 ? "-" : "";
            else
                out += c < 0 ? " - " : " + ";
            first = false;
            out += mag.get_str();
            std::string mono;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (!e[i])
                    continue;
                if (!mono.empty())
                    mono += '*';
                mono += vars_[i];
                if (e[i] > 1)
                    mono += '^' + std::to_string(e[i]);
            }
            if (!mono.empty())
                out += " * " + mono;
        }
        return out;
    }

private:
    void require_compatible(const Polynomial& q) const
    {
        if (!(vars_ == q.vars_))
            throw std::invalid_argument("polynomial variable sets differ");
    }

    void accumulate(const Exponents& e, const Rational& c)
    {
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    VariableSet vars_;
    Terms terms_;
};

inline Polynomial pow(const Polynomial& p, long k)
{
    if (k < 0)
        throw std::invalid_argument("pow: negative exponent");
    Polynomial result(p.variables(), Rational(1));
    Polynomial base = p;
    for (unsigned long e = static_cast<unsigned long>(k); e; e >>= 1) {
        if (e & 1)
            result *= base;
        if (e > 1)
            base *= base;
    }
    return result;
}

struct DivisionResult {
    Polynomial quotient;
    Polynomial remainder;
};

/// Division by a single polynomial under graded lex:
/// p = quotient * g + remainder, and no monomial of the remainder is
/// divisible by the leading monomial of g. Because a single polynomial is
/// a Groebner basis of its ideal, remainder == 0 iff g divides p.
inline DivisionResult reduce_mod(const Polynomial& p, const Polynomial& g, GradedLexOrder = {})
{
    if (g.is_zero())
        throw std::domain_error("reduce_mod: division by the zero polynomial");
    if (!(p.variables() == g.variables()))
        throw std::invalid_argument("polynomial variable sets differ");
    const auto& [lm, lc] = g.leading_term();
    const VariableSet& vars = p.variables();
    DivisionResult out{Polynomial(vars), Polynomial(vars)};
    Polynomial rest = p;
    while (!rest.is_zero()) {
        const auto& [m, c] = rest.leading_term();
        if (divides(lm, m)) {
            Exponents shift(m.size());
            for (std::size_t i = 0; i < m.size(); ++i)
                shift[i] = m[i] - lm[i];
            Polynomial t = Polynomial::term(vars, std::move(shift), c / lc);
            out.quotient += t;
            rest -= t * g;
        } else {
            Polynomial t = Polynomial::term(vars, m, c);
            out.remainder += t;
            rest -= t;
        }
    }
    return out;
}

/// p / g when g divides p exactly; throws otherwise.
inline Polynomial divide_exact(const Polynomial& p, const Polynomial& g)
{
    if (g.is_constant()) {
        if (g.is_zero())
            throw std::domain_error("divide_exact: division by zero");
        return p / g.constant_term();
    }
    auto [q, r] = reduce_mod(p, g);
    if (!r.is_zero())
        throw std::domain_error("divide_exact: " + g.to_string() + " does not divide " + p.to_string());
    return q;
}

/// Scales p to integer coefficients with content 1 and a positive leading
/// coefficient. Returns the factor applied (result = factor * p).
inline std::pair<Polynomial, Rational> primitive_part(const Polynomial& p)
{
    if (p.is_zero())
        return {p, Rational(1)};
    Integer lcm_den(1), gcd_num(0);
    for (const auto& [e, c] : p.terms()) {
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
        mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), c.get_num_mpz_t());
    }
    Rational factor(lcm_den, gcd_num);
    factor.canonicalize();
    if (p.leading_term().second < 0)
        factor = -factor;
    return {p * factor, factor};
}

} // namespace hhm

#endif
