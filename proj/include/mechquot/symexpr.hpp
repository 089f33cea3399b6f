#pragma once

// Exact multivariate rational functions over named coordinates.
//
// Coefficients are GMP rationals. A RationalExpr is kept in a canonical
// (but not fully reduced) form: no multivariate GCD is taken. Equality is
// decided by cross multiplication, so two equal values may print differently
// only if their fractions are not reduced the same way.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace mechquot {

using Rational = mpq_class;

/// Exact point: coordinate name -> rational value.
using Point = std::map<std::string, Rational, std::less<>>;

/// Product of coordinate powers. Factors are sorted by name, exponents > 0.
class Monomial {
public:
    using Factor = std::pair<std::string, std::uint32_t>;

    Monomial() = default;
    static Monomial variable(std::string name, std::uint32_t exponent = 1);

    const std::vector<Factor> &factors() const noexcept { return factors_; }
    bool is_constant() const noexcept { return factors_.empty(); }
    std::uint64_t degree() const noexcept;
    std::uint32_t exponent(std::string_view name) const noexcept;

    Monomial operator*(const Monomial &other) const;
    bool divides(const Monomial &other) const noexcept;
    /// Precondition: divisor.divides(*this).
    Monomial quotient(const Monomial &divisor) const;
    Monomial gcd(const Monomial &other) const;
    /// Drops `name`'s factor, returning its exponent.
    std::pair<Monomial, std::uint32_t> split(std::string_view name) const;

    bool operator==(const Monomial &) const = default;

    std::string to_string() const;

private:
    std::vector<Factor> factors_;
};

/// Graded lexicographic order; variables compared by name, smaller name is
/// the more significant variable.
int grlex_compare(const Monomial &a, const Monomial &b) noexcept;

struct GrlexLess {
    bool operator()(const Monomial &a, const Monomial &b) const noexcept {
        return grlex_compare(a, b) < 0;
    }
};

class Polynomial {
public:
    using Terms = std::map<Monomial, Rational, GrlexLess>;

    Polynomial() = default;
    Polynomial(const Rational &c); // NOLINT: implicit constant promotion
    Polynomial(long c) : Polynomial(Rational(c)) {} // NOLINT
    static Polynomial variable(std::string name);
    static Polynomial term(Monomial m, Rational c);

    const Terms &terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    /// Constant term value; only meaningful when is_constant().
    Rational constant_value() const;
    std::size_t size() const noexcept { return terms_.size(); }
    std::uint64_t degree() const noexcept;
    std::uint32_t degree_in(std::string_view name) const noexcept;
    /// Largest term in grlex order. Precondition: !is_zero().
    const std::pair<const Monomial, Rational> &leading() const;
    std::vector<std::string> variables() const;

    Polynomial operator-() const;
    Polynomial &operator+=(const Polynomial &o);
    Polynomial &operator-=(const Polynomial &o);
    Polynomial operator+(const Polynomial &o) const;
    Polynomial operator-(const Polynomial &o) const;
    Polynomial operator*(const Polynomial &o) const;
    Polynomial scaled(const Rational &c) const;
    Polynomial times_monomial(const Monomial &m) const;
    Polynomial pow(std::uint32_t e) const;

    Polynomial derivative(std::string_view name) const;
    Rational evaluate(const Point &point) const;
    /// GCD of all monomials (the constant monomial for zero).
    Monomial monomial_content() const;
    /// Divides every term by `m`. Precondition: m divides every monomial.
    Polynomial divide_monomial(const Monomial &m) const;

    bool operator==(const Polynomial &o) const;

    std::string to_string() const;

private:
    void add_term(const Monomial &m, const Rational &c);
    Terms terms_;
};

/// Exact quotient f / g if g divides f, nullopt otherwise.
std::optional<Polynomial> divide_exact(const Polynomial &f, const Polynomial &g);

class RationalExpr {
public:
    RationalExpr() : num_(), den_(Rational(1)) {}
    RationalExpr(const Rational &c) : num_(c), den_(Rational(1)) {} // NOLINT
    RationalExpr(long c) : RationalExpr(Rational(c)) {}               // NOLINT
    RationalExpr(Polynomial p) : num_(std::move(p)), den_(Rational(1)) {} // NOLINT
    /// Throws DomainError if `den` is the zero polynomial.
    RationalExpr(Polynomial num, Polynomial den);

    static RationalExpr variable(std::string name);

    const Polynomial &numerator() const noexcept { return num_; }
    const Polynomial &denominator() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.is_constant(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const;
    /// max(deg num, deg den)
    std::uint64_t degree() const noexcept;
    std::uint32_t degree_in(std::string_view name) const noexcept;
    std::size_t size() const noexcept { return num_.size() + den_.size(); }
    std::vector<std::string> variables() const;

    RationalExpr operator-() const;
    RationalExpr &operator+=(const RationalExpr &o) { return *this = *this + o; }
    RationalExpr &operator-=(const RationalExpr &o) { return *this = *this - o; }
    RationalExpr &operator*=(const RationalExpr &o) { return *this = *this * o; }
    RationalExpr &operator/=(const RationalExpr &o) { return *this = *this / o; }

    friend RationalExpr operator+(const RationalExpr &a, const RationalExpr &b);
    friend RationalExpr operator-(const RationalExpr &a, const RationalExpr &b);
    friend RationalExpr operator*(const RationalExpr &a, const RationalExpr &b);
    /// Throws DomainError if b is identically zero.
    friend RationalExpr operator/(const RationalExpr &a, const RationalExpr &b);

    RationalExpr pow(std::uint32_t e) const;

    /// Exact equality of the represented functions (cross multiplication).
    friend bool operator==(const RationalExpr &a, const RationalExpr &b);

    /// Structural equality of the stored fraction.
    bool same_form(const RationalExpr &o) const { return num_ == o.num_ && den_ == o.den_; }

    std::string to_string() const;

private:
    void normalize();

    Polynomial num_;
    Polynomial den_;
};

enum class ArithKind { Add, Sub, Mul, Div };

RationalExpr arith(const RationalExpr &a, const RationalExpr &b, ArithKind kind);

/// Parses `text` over the given coordinate names. Throws ParseError.
RationalExpr parse_expr(std::string_view text, std::span<const std::string> chart);

/// Partial derivative with respect to `coord`.
RationalExpr differentiate(const RationalExpr &a, std::string_view coord);
/// Same, but throws ChartError if `coord` is not in `chart`.
RationalExpr differentiate(const RationalExpr &a, std::string_view coord,
                           std::span<const std::string> chart);

using Bindings = std::map<std::string, RationalExpr, std::less<>>;

/// Simultaneous substitution. Throws DomainError if the result has an
/// identically zero denominator.
RationalExpr substitute(const RationalExpr &a, const Bindings &bindings);

/// Exact value at `point`. Throws DomainError at a pole and InputError if a
/// variable of `a` is unbound.
Rational eval_at(const RationalExpr &a, const Point &point);

bool is_zero(const RationalExpr &a);

/// Parses an exact rational literal such as "3", "-2/5" or "0.25".
Rational parse_rational(std::string_view text);

std::string rational_to_string(const Rational &q);

} // namespace mechquot
