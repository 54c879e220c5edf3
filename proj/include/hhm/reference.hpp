#ifndef HHM_REFERENCE_HPP
#define HHM_REFERENCE_HPP

// Reference listing for the integrable case: leading series coefficients,
// the two restricted invariants and the curve. Kept as data to diff the
// computed expansion against; never used as ground truth.

#include "parse.hpp"
#include "puiseux.hpp"

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hhm::reference {

/// Ring of the listing.
inline const VariableSet& listing_ring()
{
    static const VariableSet vars{"A", "alpha", "beta", "gamma", "b1", "b2"};
    return vars;
}

/// Per variable: (exponent times 2, coefficient text).
inline const std::vector<std::pair<std::string, std::vector<std::pair<int, std::string_view>>>>& case3_series()
{
    static const std::vector<std::pair<std::string, std::vector<std::pair<int, std::string_view>>>> data{
        {"y1", {{-1, "alpha"}, {3, "beta"}, {5, "-alpha/18"}, {7, "alpha*A^2/10"}, {9, "-alpha^2*beta/18"}}},
        {"y2", {{-4, "-3/8"}, {0, "-A/2"}, {2, "alpha^2/12"}, {4, "-2*A^2/5"}, {6, "alpha*beta/3"}, {8, "-gamma"}}},
        {"x1",
         {{-3, "-alpha/2"}, {1, "3/2*beta"}, {3, "-5/36*alpha"}, {5, "7/20*alpha*A^2"}, {7, "-1/4*alpha^2*beta"}}},
        {"x2", {{-6, "3/4"}, {0, "alpha^2/12"}, {2, "-4/5*A^2"}, {4, "alpha*beta"}, {6, "-4*gamma"}}},
    };
    return data;
}

inline Polynomial case3_h1_relation()
{
    return parse_polynomial("1/9*alpha^2 - 21/4*gamma + 13/288*alpha^4 + 4/3*A^3", listing_ring());
}

inline Polynomial case3_h2_relation()
{
    return parse_polynomial("-144*alpha*beta^3 + 294/5*alpha^3*beta*A^2 + 8/9*alpha^6 - 33*gamma*alpha^4",
                            listing_ring());
}

inline Polynomial case3_curve()
{
    return parse_polynomial("144*alpha*beta^3 - 294/5*A^2*alpha^3*beta + 143/504*alpha^8 - 4/21*alpha^6"
                            " + 44/21*(4*A^3 - 3*b1)*alpha^4 + b2",
                            listing_ring());
}

/// The listing writes the y2 coefficient at t^4 as -gamma.
inline std::map<int, SeriesConvention> case3_conventions()
{
    return {{12, SeriesConvention{1, Rational(-1)}}};
}

struct SeriesDiff {
    std::string variable;
    Rational exponent;
    Polynomial listed;
    Polynomial computed;
    bool match = false;
};

/// Every listed coefficient against the computed one at the same exponent.
inline std::vector<SeriesDiff> compare_case3_series(const std::vector<PuiseuxSeries>& series)
{
    std::vector<SeriesDiff> out;
    for (const auto& [name, terms] : case3_series()) {
        auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.variable == name; });
        if (it == series.end())
            throw std::invalid_argument("no computed series for '" + name + "'");
        for (const auto& [key2, text] : terms) {
            if (it->denominator != 2)
                throw std::invalid_argument("listing is in powers of t^(1/2)");
            Polynomial listed = parse_polynomial(text, listing_ring()).embed(it->ring);
            Polynomial computed = it->coefficient(key2);
            out.push_back({name, it->exponent(key2), listed, computed, listed == computed});
        }
    }
    return out;
}

} // namespace hhm::reference

#endif
