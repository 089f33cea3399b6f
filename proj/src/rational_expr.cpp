#include "mechquot/errors.hpp"
#include "mechquot/symexpr.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace mechquot {

RationalExpr::RationalExpr(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
        throw DomainError("division by an identically zero expression");
    normalize();
}

RationalExpr RationalExpr::variable(std::string name) {
    return RationalExpr(Polynomial::variable(std::move(name)));
}

// Canonical form: zero is 0/1; a constant denominator is folded into the
// numerator; the common monomial factor is cancelled; a denominator that
// divides the numerator (or vice versa) is divided out; finally the
// denominator gets integer coefficients with content 1 and a positive
// leading coefficient.
void RationalExpr::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial(Rational(1));
        return;
    }
    if (den_.is_constant()) {
        if (den_.constant_value() != 1) {
            num_ = num_.scaled(1 / den_.constant_value());
            den_ = Polynomial(Rational(1));
        }
        return;
    }
    Monomial common = num_.monomial_content().gcd(den_.monomial_content());
    if (!common.is_constant()) {
        num_ = num_.divide_monomial(common);
        den_ = den_.divide_monomial(common);
    }
    if (auto q = divide_exact(num_, den_)) {
        num_ = std::move(*q);
        den_ = Polynomial(Rational(1));
        return;
    }
    if (!num_.is_constant()) {
        if (auto q = divide_exact(den_, num_)) {
            den_ = std::move(*q);
            num_ = Polynomial(Rational(1));
            if (den_.is_constant()) {
                num_ = Polynomial(1 / den_.constant_value());
                den_ = Polynomial(Rational(1));
                return;
            }
        }
    }
    mpz_class lcm_den(1);
    for (const auto &t : den_.terms())
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), t.second.get_den_mpz_t());
    mpz_class content(0);
    for (const auto &t : den_.terms()) {
        mpz_class v = t.second.get_num() * (lcm_den / t.second.get_den());
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
    }
    Rational factor(lcm_den, content);
    factor.canonicalize();
    if (den_.leading().second < 0)
        factor = -factor;
    if (factor != 1) {
        num_ = num_.scaled(factor);
        den_ = den_.scaled(factor);
    }
}

Rational RationalExpr::constant_value() const {
    return num_.constant_value() / den_.constant_value();
}

std::uint64_t RationalExpr::degree() const noexcept {
    return std::max(num_.degree(), den_.degree());
}

std::uint32_t RationalExpr::degree_in(std::string_view name) const noexcept {
    return std::max(num_.degree_in(name), den_.degree_in(name));
}

std::vector<std::string> RationalExpr::variables() const {
    std::set<std::string> names;
    for (auto &n : num_.variables())
        names.insert(n);
    for (auto &n : den_.variables())
        names.insert(n);
    return {names.begin(), names.end()};
}

RationalExpr RationalExpr::operator-() const {
    RationalExpr r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalExpr operator+(const RationalExpr &a, const RationalExpr &b) {
    if (a.is_zero())
        return b;
    if (b.is_zero())
        return a;
    if (a.den_ == b.den_)
        return RationalExpr(a.num_ + b.num_, a.den_);
    if (b.is_polynomial())
        return RationalExpr(a.num_ + b.num_ * a.den_, a.den_);
    if (a.is_polynomial())
        return RationalExpr(a.num_ * b.den_ + b.num_, b.den_);
    return RationalExpr(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalExpr operator-(const RationalExpr &a, const RationalExpr &b) {
    return a + (-b);
}

RationalExpr operator*(const RationalExpr &a, const RationalExpr &b) {
    if (a.is_zero() || b.is_zero())
        return {};
    if (a.is_polynomial() && b.is_polynomial())
        return RationalExpr(a.num_ * b.num_);
    return RationalExpr(a.num_ * b.num_, a.den_ * b.den_);
}

RationalExpr operator/(const RationalExpr &a, const RationalExpr &b) {
    if (b.is_zero())
        throw DomainError("division by an identically zero expression");
    return RationalExpr(a.num_ * b.den_, a.den_ * b.num_);
}

RationalExpr RationalExpr::pow(std::uint32_t e) const {
    if (is_polynomial())
        return RationalExpr(num_.pow(e));
    return RationalExpr(num_.pow(e), den_.pow(e));
}

bool operator==(const RationalExpr &a, const RationalExpr &b) {
    if (a.den_ == b.den_)
        return a.num_ == b.num_;
    return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
}

std::string RationalExpr::to_string() const {
    if (is_polynomial())
        return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RationalExpr arith(const RationalExpr &a, const RationalExpr &b, ArithKind kind) {
    switch (kind) {
    case ArithKind::Add:
        return a + b;
    case ArithKind::Sub:
        return a - b;
    case ArithKind::Mul:
        return a * b;
    case ArithKind::Div:
        return a / b;
    }
    return {};
}

RationalExpr differentiate(const RationalExpr &a, std::string_view coord) {
    const Polynomial &n = a.numerator();
    const Polynomial &d = a.denominator();
    if (d.is_constant() || d.degree_in(coord) == 0)
        return RationalExpr(n.derivative(coord), d);
    return RationalExpr(n.derivative(coord) * d - n * d.derivative(coord), d * d);
}

RationalExpr differentiate(const RationalExpr &a, std::string_view coord,
                           std::span<const std::string> chart) {
    if (std::find(chart.begin(), chart.end(), coord) == chart.end())
        throw ChartError("unknown coordinate '" + std::string(coord) + "'");
    return differentiate(a, coord);
}

namespace {

RationalExpr substitute_poly(const Polynomial &p, const Bindings &bindings) {
    RationalExpr total;
    for (const auto &[m, c] : p.terms()) {
        RationalExpr term(c);
        Monomial kept;
        for (const auto &[name, e] : m.factors()) {
            auto it = bindings.find(name);
            if (it == bindings.end())
                kept = kept * Monomial::variable(name, e);
            else
                term *= it->second.pow(e);
        }
        if (!kept.is_constant())
            term *= RationalExpr(Polynomial::term(kept, Rational(1)));
        total += term;
    }
    return total;
}

} // namespace

RationalExpr substitute(const RationalExpr &a, const Bindings &bindings) {
    RationalExpr num = substitute_poly(a.numerator(), bindings);
    if (a.is_polynomial())
        return num;
    RationalExpr den = substitute_poly(a.denominator(), bindings);
    if (den.is_zero())
        throw DomainError("substitution makes the denominator identically zero");
    return num / den;
}

Rational eval_at(const RationalExpr &a, const Point &point) {
    Rational den = a.denominator().evaluate(point);
    if (den == 0)
        throw DomainError("pole of " + a.to_string());
    return a.numerator().evaluate(point) / den;
}

bool is_zero(const RationalExpr &a) { return a.is_zero(); }

Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    auto fail = [&]() -> Rational {
        throw InputError("not a rational literal: '" + std::string(text) + "'");
    };
    if (s.empty())
        return fail();
    if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational r;
        try {
            mpz_class p(s.substr(0, slash), 10), q(s.substr(slash + 1), 10);
            if (q == 0)
                throw InputError("zero denominator in '" + std::string(text) + "'");
            r = Rational(p, q);
        } catch (const std::invalid_argument &) {
            return fail();
        }
        r.canonicalize();
        return r;
    }
    // Decimal with optional exponent, converted exactly.
    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-')
        negative = s[i++] == '-';
    std::string digits;
    long scale = 0;
    bool any = false, dot = false;
    for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
        if (s[i] == '.') {
            if (dot)
                return fail();
            dot = true;
            continue;
        }
        any = true;
        digits += s[i];
        if (dot)
            --scale;
    }
    if (!any)
        return fail();
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E')
            return fail();
        try {
            std::size_t used = 0;
            long e = std::stol(s.substr(i + 1), &used);
            if (used != s.size() - i - 1)
                return fail();
            scale += e;
        } catch (const std::exception &) {
            return fail();
        }
    }
    mpz_class mag(digits, 10);
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational r = scale < 0 ? Rational(mag, ten_pow) : Rational(mag * ten_pow);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

} // namespace mechquot
