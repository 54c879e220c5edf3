#ifndef HHM_PARSE_HPP
#define HHM_PARSE_HPP

#include "polynomial.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hhm {

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*      division by constants only
// unary  := ('+' | '-') unary | power
// power  := primary (('^' | '**') integer)?
// primary:= number | identifier | '(' expr ')'
class PolynomialParser {
public:
    PolynomialParser(std::string_view text, const VariableSet& vars) : text_(text), vars_(vars) {}

    Polynomial parse()
    {
        Polynomial p = expr();
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError("polynomial parse error at offset " + std::to_string(pos_) + ": " + what + " in '" +
                         std::string(text_) + "'");
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(std::string_view token)
    {
        skip_space();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    Polynomial expr()
    {
        Polynomial p = term();
        for (;;) {
            if (accept("+"))
                p += term();
            else if (accept("-"))
                p -= term();
            else
                return p;
        }
    }

    Polynomial term()
    {
        Polynomial p = unary();
        for (;;) {
            skip_space();
            if (text_.substr(pos_, 2) == "**")
                return p;
            if (accept("*")) {
                p *= unary();
            } else if (accept("/")) {
                Polynomial d = unary();
                if (!d.is_constant() || d.is_zero())
                    fail("division by a non-constant or zero expression");
                p /= d.constant_term();
            } else {
                return p;
            }
        }
    }

    Polynomial unary()
    {
        if (accept("-"))
            return -unary();
        if (accept("+"))
            return unary();
        return power();
    }

    Polynomial power()
    {
        Polynomial base = primary();
        if (accept("^") || accept("**")) {
            skip_space();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (start == pos_)
                fail("expected a non-negative integer exponent");
            return pow(base, std::stol(std::string(text_.substr(start, pos_ - start))));
        }
        return base;
    }

    Polynomial primary()
    {
        skip_space();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expr();
            if (!accept(")"))
                fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
                ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                std::size_t save = pos_++;
                if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                    ++pos_;
                if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                        ++pos_;
                } else {
                    pos_ = save;
                }
            }
            return Polynomial(vars_, parse_rational(text_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (!vars_.contains(name))
                fail("unknown variable '" + name + "'");
            return Polynomial::variable(vars_, name);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const VariableSet& vars_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses polynomial text over `vars`; accepts the output of
/// Polynomial::to_string as well as ordinary hand-written expressions.
inline Polynomial parse_polynomial(std::string_view text, const VariableSet& vars)
{
    return detail::PolynomialParser(text, vars).parse();
}

} // namespace hhm

#endif
