#include "mechquot/errors.hpp"
#include "mechquot/symexpr.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace mechquot {

namespace {

std::uint32_t checked_add(std::uint32_t a, std::uint32_t b) {
    if (a > std::numeric_limits<std::uint32_t>::max() - b)
        throw ResourceLimitError("monomial exponent overflow");
    return a + b;
}

} // namespace

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(std::string name, std::uint32_t exponent) {
    Monomial m;
    if (exponent > 0)
        m.factors_.emplace_back(std::move(name), exponent);
    return m;
}

std::uint64_t Monomial::degree() const noexcept {
    std::uint64_t d = 0;
    for (const auto &f : factors_)
        d += f.second;
    return d;
}

std::uint32_t Monomial::exponent(std::string_view name) const noexcept {
    for (const auto &f : factors_)
        if (f.first == name)
            return f.second;
    return 0;
}

Monomial Monomial::operator*(const Monomial &other) const {
    Monomial r;
    r.factors_.reserve(factors_.size() + other.factors_.size());
    auto a = factors_.begin();
    auto b = other.factors_.begin();
    while (a != factors_.end() || b != other.factors_.end()) {
        if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
            r.factors_.push_back(*a++);
        } else if (a == factors_.end() || b->first < a->first) {
            r.factors_.push_back(*b++);
        } else {
            r.factors_.emplace_back(a->first, checked_add(a->second, b->second));
            ++a;
            ++b;
        }
    }
    return r;
}

bool Monomial::divides(const Monomial &other) const noexcept {
    auto b = other.factors_.begin();
    for (const auto &f : factors_) {
        while (b != other.factors_.end() && b->first < f.first)
            ++b;
        if (b == other.factors_.end() || b->first != f.first || b->second < f.second)
            return false;
    }
    return true;
}

Monomial Monomial::quotient(const Monomial &divisor) const {
    Monomial r;
    auto d = divisor.factors_.begin();
    for (const auto &f : factors_) {
        std::uint32_t e = f.second;
        if (d != divisor.factors_.end() && d->first == f.first) {
            e -= d->second;
            ++d;
        }
        if (e > 0)
            r.factors_.emplace_back(f.first, e);
    }
    return r;
}

Monomial Monomial::gcd(const Monomial &other) const {
    Monomial r;
    auto b = other.factors_.begin();
    for (const auto &f : factors_) {
        while (b != other.factors_.end() && b->first < f.first)
            ++b;
        if (b != other.factors_.end() && b->first == f.first)
            r.factors_.emplace_back(f.first, std::min(f.second, b->second));
    }
    return r;
}

std::pair<Monomial, std::uint32_t> Monomial::split(std::string_view name) const {
    Monomial r;
    std::uint32_t e = 0;
    for (const auto &f : factors_) {
        if (f.first == name)
            e = f.second;
        else
            r.factors_.push_back(f);
    }
    return {std::move(r), e};
}

std::string Monomial::to_string() const {
    std::string s;
    for (const auto &[name, e] : factors_) {
        if (!s.empty())
            s += '*';
        s += name;
        if (e != 1)
            s += '^' + std::to_string(e);
    }
    return s;
}

int grlex_compare(const Monomial &a, const Monomial &b) noexcept {
    const auto da = a.degree(), db = b.degree();
    if (da != db)
        return da < db ? -1 : 1;
    const auto &fa = a.factors();
    const auto &fb = b.factors();
    std::size_t i = 0, j = 0;
    while (i < fa.size() && j < fb.size()) {
        if (fa[i].first < fb[j].first)
            return 1;
        if (fb[j].first < fa[i].first)
            return -1;
        if (fa[i].second != fb[j].second)
            return fa[i].second < fb[j].second ? -1 : 1;
        ++i;
        ++j;
    }
    if (i < fa.size())
        return 1;
    if (j < fb.size())
        return -1;
    return 0;
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(const Rational &c) {
    if (c != 0) {
        auto it = terms_.emplace(Monomial{}, c).first;
        it->second.canonicalize();
    }
}

Polynomial Polynomial::variable(std::string name) {
    return term(Monomial::variable(std::move(name)), Rational(1));
}

Polynomial Polynomial::term(Monomial m, Rational c) {
    Polynomial p;
    c.canonicalize();
    if (c != 0)
        p.terms_.emplace(std::move(m), std::move(c));
    return p;
}

bool Polynomial::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

Rational Polynomial::constant_value() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

std::uint64_t Polynomial::degree() const noexcept {
    return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

std::uint32_t Polynomial::degree_in(std::string_view name) const noexcept {
    std::uint32_t d = 0;
    for (const auto &t : terms_)
        d = std::max(d, t.first.exponent(name));
    return d;
}

const std::pair<const Monomial, Rational> &Polynomial::leading() const {
    if (terms_.empty())
        throw DomainError("leading term of the zero polynomial");
    return *terms_.rbegin();
}

std::vector<std::string> Polynomial::variables() const {
    std::set<std::string> names;
    for (const auto &t : terms_)
        for (const auto &f : t.first.factors())
            names.insert(f.first);
    return {names.begin(), names.end()};
}

void Polynomial::add_term(const Monomial &m, const Rational &c) {
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto &t : r.terms_)
        t.second = -t.second;
    return r;
}

Polynomial &Polynomial::operator+=(const Polynomial &o) {
    for (const auto &[m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &o) {
    for (const auto &[m, c] : o.terms_)
        add_term(m, -c);
    return *this;
}

Polynomial Polynomial::operator+(const Polynomial &o) const {
    Polynomial r = *this;
    r += o;
    return r;
}

Polynomial Polynomial::operator-(const Polynomial &o) const {
    Polynomial r = *this;
    r -= o;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial &o) const {
    Polynomial r;
    for (const auto &[ma, ca] : terms_)
        for (const auto &[mb, cb] : o.terms_)
            r.add_term(ma * mb, ca * cb);
    return r;
}

Polynomial Polynomial::scaled(const Rational &c) const {
    if (c == 0)
        return {};
    Polynomial r = *this;
    for (auto &t : r.terms_)
        t.second *= c;
    return r;
}

Polynomial Polynomial::times_monomial(const Monomial &m) const {
    Polynomial r;
    for (const auto &[mm, c] : terms_)
        r.terms_.emplace_hint(r.terms_.end(), mm * m, c);
    return r;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
    Polynomial result(Rational(1));
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1u)
            result = result * base;
        e >>= 1u;
        if (e > 0)
            base = base * base;
    }
    return result;
}

Polynomial Polynomial::derivative(std::string_view name) const {
    Polynomial r;
    for (const auto &[m, c] : terms_) {
        auto [rest, e] = m.split(name);
        if (e == 0)
            continue;
        Monomial dm = e > 1 ? rest * Monomial::variable(std::string(name), e - 1) : rest;
        r.add_term(dm, c * Rational(e));
    }
    return r;
}

Rational Polynomial::evaluate(const Point &point) const {
    Rational total(0);
    for (const auto &[m, c] : terms_) {
        Rational v = c;
        for (const auto &[name, e] : m.factors()) {
            auto it = point.find(name);
            if (it == point.end())
                throw InputError("no value bound for variable '" + name + "'");
            mpq_class p;
            mpz_pow_ui(p.get_num_mpz_t(), it->second.get_num_mpz_t(), e);
            mpz_pow_ui(p.get_den_mpz_t(), it->second.get_den_mpz_t(), e);
            v *= p;
        }
        total += v;
    }
    return total;
}

Monomial Polynomial::monomial_content() const {
    if (terms_.empty())
        return {};
    auto it = terms_.begin();
    Monomial g = it->first;
    for (++it; it != terms_.end() && !g.is_constant(); ++it)
        g = g.gcd(it->first);
    return g;
}

Polynomial Polynomial::divide_monomial(const Monomial &m) const {
    if (m.is_constant())
        return *this;
    Polynomial r;
    for (const auto &[mm, c] : terms_)
        r.terms_.emplace_hint(r.terms_.end(), mm.quotient(m), c);
    return r;
}

bool Polynomial::operator==(const Polynomial &o) const {
    if (terms_.size() != o.terms_.size())
        return false;
    auto a = terms_.begin();
    for (auto b = o.terms_.begin(); b != o.terms_.end(); ++a, ++b)
        if (!(a->first == b->first) || a->second != b->second)
            return false;
    return true;
}

std::string rational_to_string(const Rational &q) {
    return q.get_str();
}

std::string Polynomial::to_string() const {
    if (terms_.empty())
        return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto &[m, c] = *it;
        Rational mag = abs(c);
        if (first) {
            if (c < 0)
                s += "-";
        } else {
            s += c < 0 ? " - " : " + ";
        }
        first = false;
        if (m.is_constant()) {
            s += rational_to_string(mag);
        } else {
            if (mag != 1)
                s += rational_to_string(mag) + "*";
            s += m.to_string();
        }
    }
    return s;
}

std::optional<Polynomial> divide_exact(const Polynomial &f, const Polynomial &g) {
    if (g.is_zero())
        throw DomainError("division by the zero polynomial");
    if (g.is_constant())
        return f.scaled(1 / g.constant_value());
    const auto &[lm_g, lc_g] = g.leading();
    Polynomial rem = f;
    Polynomial q;
    while (!rem.is_zero()) {
        const auto &[lm_r, lc_r] = rem.leading();
        // A leading term that lm(g) does not divide lands in the remainder,
        // and remainder terms are never cancelled later.
        if (!lm_g.divides(lm_r))
            return std::nullopt;
        Polynomial t = Polynomial::term(lm_r.quotient(lm_g), lc_r / lc_g);
        rem -= t * g;
        q += t;
    }
    return q;
}

} // namespace mechquot
