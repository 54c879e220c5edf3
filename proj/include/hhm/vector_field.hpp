#ifndef HHM_VECTOR_FIELD_HPP
#define HHM_VECTOR_FIELD_HPP

#include "polynomial.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhm {

using ParameterValues = std::map<std::string, Rational, std::less<>>;

struct NamedPolynomial {
    std::string name;
    Polynomial poly;
};

/// Replaces the named variables by constants; the variable set is kept.
inline Polynomial specialize(const Polynomial& p, const ParameterValues& values)
{
    if (values.empty())
        return p;
    std::vector<Polynomial> images;
    const VariableSet& vars = p.variables();
    for (const auto& name : vars.names()) {
        auto it = values.find(name);
        images.push_back(it == values.end() ? Polynomial::variable(vars, name) : Polynomial(vars, it->second));
    }
    return p.substitute(images);
}

/// Polynomial vector field. The first `dimension()` variables of the
/// variable set are the phase variables; any remaining ones are parameters.
class VectorField {
public:
    VectorField() = default;

    VectorField(VariableSet vars, std::vector<Polynomial> components)
        : vars_(std::move(vars)), components_(std::move(components))
    {
        if (components_.size() > vars_.size())
            throw std::invalid_argument("vector field has more components than variables");
        for (const auto& c : components_)
            if (!(c.variables() == vars_))
                throw std::invalid_argument("vector field component over a different variable set");
    }

    const VariableSet& variables() const noexcept { return vars_; }
    std::size_t dimension() const noexcept { return components_.size(); }
    const std::vector<Polynomial>& components() const noexcept { return components_; }
    const Polynomial& operator[](std::size_t i) const { return components_.at(i); }

    std::vector<std::string> phase_names() const
    {
        return {vars_.names().begin(), vars_.names().begin() + static_cast<std::ptrdiff_t>(dimension())};
    }

    std::vector<std::string> parameter_names() const
    {
        return {vars_.names().begin() + static_cast<std::ptrdiff_t>(dimension()), vars_.names().end()};
    }

    bool is_zero() const
    {
        for (const auto& c : components_)
            if (!c.is_zero())
                return false;
        return true;
    }

    VectorField specialized(const ParameterValues& values) const
    {
        std::vector<Polynomial> out;
        for (const auto& c : components_)
            out.push_back(specialize(c, values));
        return {vars_, std::move(out)};
    }

    friend VectorField operator-(const VectorField& a, const VectorField& b)
    {
        a.require_compatible(b);
        std::vector<Polynomial> out;
        for (std::size_t i = 0; i < a.dimension(); ++i)
            out.push_back(a.components_[i] - b.components_[i]);
        return {a.vars_, std::move(out)};
    }

    friend bool operator==(const VectorField& a, const VectorField& b)
    {
        return a.vars_ == b.vars_ && a.components_ == b.components_;
    }

    void require_compatible(const VectorField& other) const
    {
        if (!(vars_ == other.vars_) || dimension() != other.dimension())
            throw std::invalid_argument("vector fields live on different spaces");
    }

private:
    VariableSet vars_;
    std::vector<Polynomial> components_;
};

/// Skew-symmetric matrix of polynomials over the phase variables.
class PoissonStructure {
public:
    PoissonStructure() = default;

    PoissonStructure(VariableSet vars, std::vector<std::vector<Polynomial>> matrix)
        : vars_(std::move(vars)), matrix_(std::move(matrix))
    {
        const std::size_t n = matrix_.size();
        if (n > vars_.size())
            throw std::invalid_argument("Poisson matrix larger than the variable set");
        for (std::size_t k = 0; k < n; ++k) {
            if (matrix_[k].size() != n)
                throw std::invalid_argument("Poisson matrix is not square");
            for (std::size_t l = 0; l < n; ++l)
                if (!(matrix_[k][l].variables() == vars_))
                    throw std::invalid_argument("Poisson matrix entry over a different variable set");
        }
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = k; l < n; ++l)
                if (!(matrix_[k][l] + matrix_[l][k]).is_zero())
                    throw std::invalid_argument("Poisson matrix is not skew-symmetric at (" + std::to_string(k + 1) +
                                                "," + std::to_string(l + 1) + ")");
    }

    /// Canonical structure ( 0 I ; -I 0 ) on the first 2m variables.
    static PoissonStructure canonical(const VariableSet& vars, std::size_t degrees_of_freedom)
    {
        const std::size_t n = 2 * degrees_of_freedom;
        std::vector<std::vector<Polynomial>> m(n, std::vector<Polynomial>(n, Polynomial(vars)));
        for (std::size_t i = 0; i < degrees_of_freedom; ++i) {
            m[i][i + degrees_of_freedom] = Polynomial(vars, Rational(1));
            m[i + degrees_of_freedom][i] = Polynomial(vars, Rational(-1));
        }
        return {vars, std::move(m)};
    }

    const VariableSet& variables() const noexcept { return vars_; }
    std::size_t dimension() const noexcept { return matrix_.size(); }
    const Polynomial& operator()(std::size_t k, std::size_t l) const { return matrix_.at(k).at(l); }
    const std::vector<std::vector<Polynomial>>& matrix() const noexcept { return matrix_; }

    /// Copy with entry (k,l) replaced by `value` and (l,k) by -value.
    PoissonStructure with_entry(std::size_t k, std::size_t l, const Polynomial& value) const
    {
        auto m = matrix_;
        m.at(k).at(l) = value;
        m.at(l).at(k) = -value;
        return {vars_, std::move(m)};
    }

private:
    VariableSet vars_;
    std::vector<std::vector<Polynomial>> matrix_;
};

/// Polynomial map from the source space to the target space: one image
/// (a polynomial over the source variables) per target variable.
class PolynomialMap {
public:
    PolynomialMap() = default;

    PolynomialMap(VariableSet source, VariableSet target, std::vector<Polynomial> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images))
    {
        if (images_.size() != target_.size())
            throw std::invalid_argument("polynomial map needs one image per target variable");
        for (const auto& p : images_)
            if (!(p.variables() == source_))
                throw std::invalid_argument("polynomial map image over a different variable set");
    }

    const VariableSet& source() const noexcept { return source_; }
    const VariableSet& target() const noexcept { return target_; }
    const std::vector<Polynomial>& images() const noexcept { return images_; }

    /// Pullback p |-> p o map of a polynomial over the target variables.
    Polynomial pull_back(const Polynomial& p) const
    {
        if (!(p.variables() == target_))
            throw std::invalid_argument("pull_back: polynomial is not over the map's target variables");
        return p.substitute(images_);
    }

    template <class T>
    std::vector<T> apply(const std::vector<T>& point) const
    {
        std::vector<T> out;
        for (const auto& img : images_)
            out.push_back(img.evaluate(point));
        return out;
    }

private:
    VariableSet source_, target_;
    std::vector<Polynomial> images_;
};

} // namespace hhm

#endif
