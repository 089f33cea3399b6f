// Precedence-climbing parser for the expression grammar:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := integer | identifier | '(' expr ')'
//
// Exponents must evaluate to nonnegative integer constants.

#include "mechquot/errors.hpp"
#include "mechquot/symexpr.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace mechquot {

namespace {

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> chart)
        : text_(text), chart_(chart) {}

    RationalExpr parse() {
        RationalExpr e = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail(ParseError::Kind::Syntax, std::string("unexpected '") + text_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(ParseError::Kind kind, const std::string &msg) const {
        throw ParseError(kind, pos_, msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    RationalExpr expr() {
        RationalExpr lhs = term();
        for (char op = peek(); op == '+' || op == '-'; op = peek()) {
            ++pos_;
            RationalExpr rhs = term();
            lhs = op == '+' ? lhs + rhs : lhs - rhs;
        }
        return lhs;
    }

    RationalExpr term() {
        RationalExpr lhs = unary();
        for (char op = peek(); op == '*' || op == '/'; op = peek()) {
            const std::size_t at = pos_++;
            RationalExpr rhs = unary();
            if (op == '*') {
                lhs = lhs * rhs;
            } else {
                if (rhs.is_zero())
                    throw ParseError(ParseError::Kind::DivisionByZero, at,
                                     "division by the zero polynomial");
                lhs = lhs / rhs;
            }
        }
        return lhs;
    }

    RationalExpr unary() {
        char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    RationalExpr power() {
        RationalExpr base = primary();
        if (peek() != '^')
            return base;
        const std::size_t at = ++pos_;
        RationalExpr exponent = unary();
        if (!exponent.is_constant())
            throw ParseError(ParseError::Kind::BadExponent, at, "exponent is not a constant");
        Rational e = exponent.constant_value();
        if (e.get_den() != 1 || e < 0)
            throw ParseError(ParseError::Kind::BadExponent, at,
                             "exponent must be a nonnegative integer, got " + e.get_str());
        if (e > std::numeric_limits<std::uint32_t>::max())
            throw ParseError(ParseError::Kind::BadExponent, at, "exponent overflow");
        return base.pow(static_cast<std::uint32_t>(e.get_num().get_ui()));
    }

    RationalExpr primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            RationalExpr inner = expr();
            if (peek() != ')')
                fail(ParseError::Kind::Syntax, "expected ')'");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '.')
                fail(ParseError::Kind::Syntax, "decimal literals are not allowed; use p/q");
            return RationalExpr(Rational(mpz_class(std::string(text_.substr(start, pos_ - start)), 10)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (std::find(chart_.begin(), chart_.end(), name) == chart_.end())
                throw ParseError(ParseError::Kind::UnknownIdentifier, start,
                                 "unknown identifier '" + name + "'");
            return RationalExpr::variable(std::move(name));
        }
        if (c == '\0')
            fail(ParseError::Kind::Syntax, "unexpected end of input");
        fail(ParseError::Kind::Syntax, std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    std::span<const std::string> chart_;
    std::size_t pos_ = 0;
};

} // namespace

RationalExpr parse_expr(std::string_view text, std::span<const std::string> chart) {
    return Parser(text, chart).parse();
}

} // namespace mechquot
