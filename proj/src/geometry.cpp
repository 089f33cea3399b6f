#include "mechquot/geometry.hpp"

#include "mechquot/errors.hpp"

#include <algorithm>
#include <set>

namespace mechquot {

bool same_coords(const CoordList &a, const CoordList &b) {
    if (a == b)
        return true;
    return a && b && *a == *b;
}

namespace {

void require_same(const CoordList &a, const CoordList &b, const char *op) {
    if (!same_coords(a, b))
        throw ChartError(std::string(op) + ": vector fields live on different charts");
}

void require_base(const Chart &chart, const VectorField &x, const char *op) {
    if (!same_coords(chart.base_coords(), x.coords()))
        throw ChartError(std::string(op) + ": field is not on the connection's base chart");
}

} // namespace

// ------------------------------------------------------------------- Chart

Chart::Chart(std::vector<std::string> base, std::vector<std::string> velocity) {
    if (base.empty())
        throw ChartError("a chart needs at least one coordinate");
    if (velocity.empty()) {
        velocity.reserve(base.size());
        for (const auto &b : base)
            velocity.push_back(kVelocityPrefix + b);
    }
    if (velocity.size() != base.size())
        throw ChartError("velocity names must match the base dimension");
    std::set<std::string> seen;
    for (const auto &n : base)
        if (!seen.insert(n).second)
            throw ChartError("duplicate coordinate name '" + n + "'");
    for (const auto &n : velocity)
        if (!seen.insert(n).second)
            throw ChartError("velocity name '" + n + "' collides with another coordinate");
    std::vector<std::string> tangent = base;
    tangent.insert(tangent.end(), velocity.begin(), velocity.end());
    base_ = std::make_shared<const std::vector<std::string>>(std::move(base));
    velocity_ = std::move(velocity);
    tangent_ = std::make_shared<const std::vector<std::string>>(std::move(tangent));
}

bool Chart::operator==(const Chart &o) const {
    return *tangent_ == *o.tangent_;
}

// ------------------------------------------------------------- VectorField

VectorField::VectorField(CoordList coords, std::vector<RationalExpr> components)
    : coords_(std::move(coords)), components_(std::move(components)) {
    if (!coords_ || coords_->size() != components_.size())
        throw ChartError("vector field has " + std::to_string(components_.size()) +
                         " components on a chart of dimension " +
                         std::to_string(coords_ ? coords_->size() : 0));
}

VectorField VectorField::zero(CoordList coords) {
    const std::size_t n = coords->size();
    return VectorField(std::move(coords), std::vector<RationalExpr>(n));
}

VectorField VectorField::basis(CoordList coords, std::size_t index) {
    std::vector<RationalExpr> c(coords->size());
    c.at(index) = RationalExpr(1);
    return VectorField(std::move(coords), std::move(c));
}

VectorField VectorField::parse(CoordList coords, const std::vector<std::string> &components) {
    if (components.size() != coords->size())
        throw ChartError("expected " + std::to_string(coords->size()) + " components, got " +
                         std::to_string(components.size()));
    std::vector<RationalExpr> c;
    c.reserve(components.size());
    for (const auto &text : components)
        c.push_back(parse_expr(text, *coords));
    return VectorField(std::move(coords), std::move(c));
}

bool VectorField::is_zero() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const RationalExpr &e) { return e.is_zero(); });
}

std::uint64_t VectorField::degree() const {
    std::uint64_t d = 0;
    for (const auto &c : components_)
        d = std::max(d, c.degree());
    return d;
}

VectorField VectorField::operator+(const VectorField &o) const {
    require_same(coords_, o.coords_, "add");
    std::vector<RationalExpr> c(components_.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = components_[i] + o.components_[i];
    return VectorField(coords_, std::move(c));
}

VectorField VectorField::operator-(const VectorField &o) const {
    require_same(coords_, o.coords_, "subtract");
    std::vector<RationalExpr> c(components_.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = components_[i] - o.components_[i];
    return VectorField(coords_, std::move(c));
}

VectorField VectorField::operator-() const {
    std::vector<RationalExpr> c(components_.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = -components_[i];
    return VectorField(coords_, std::move(c));
}

VectorField VectorField::scaled(const RationalExpr &f) const {
    std::vector<RationalExpr> c(components_.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = f * components_[i];
    return VectorField(coords_, std::move(c));
}

bool VectorField::operator==(const VectorField &o) const {
    if (!same_coords(coords_, o.coords_))
        return false;
    for (std::size_t i = 0; i < components_.size(); ++i)
        if (!(components_[i] == o.components_[i]))
            return false;
    return true;
}

RationalExpr VectorField::apply(const RationalExpr &f) const {
    RationalExpr total;
    for (std::size_t i = 0; i < components_.size(); ++i)
        if (!components_[i].is_zero())
            total += components_[i] * differentiate(f, (*coords_)[i]);
    return total;
}

std::string VectorField::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i)
            s += ", ";
        s += components_[i].to_string();
    }
    return s + ")";
}

// -------------------------------------------------------------- Connection

Connection::Connection(Chart chart) : chart_(std::move(chart)) {
    const std::size_t n = chart_.dim();
    if (n <= kDenseLimit)
        table_ = std::vector<RationalExpr>(n * n * n);
    else
        table_ = std::map<std::size_t, RationalExpr>{};
}

Connection::Connection(Chart chart, const std::vector<ChristoffelEntry> &entries)
    : Connection(std::move(chart)) {
    const std::size_t n = chart_.dim();
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, RationalExpr> seen;
    for (const auto &e : entries) {
        if (e.upper >= n || e.lower1 >= n || e.lower2 >= n)
            throw InputError("Christoffel index out of range");
        auto key = std::make_tuple(e.upper, std::min(e.lower1, e.lower2),
                                   std::max(e.lower1, e.lower2));
        auto [it, inserted] = seen.emplace(key, e.value);
        if (!inserted && !(it->second == e.value))
            throw InputError("inconsistent Christoffel entries for Gamma^" +
                             std::to_string(e.upper + 1) + "_" + std::to_string(e.lower1 + 1) +
                             std::to_string(e.lower2 + 1) + " under index swap");
    }
    for (auto &[key, value] : seen) {
        auto [k, i, j] = key;
        set(k, i, j, value);
        set(k, j, i, value);
    }
}

std::size_t Connection::index(std::size_t k, std::size_t i, std::size_t j) const {
    const std::size_t n = chart_.dim();
    return (k * n + i) * n + j;
}

void Connection::set(std::size_t k, std::size_t i, std::size_t j, RationalExpr value) {
    if (auto *dense = std::get_if<std::vector<RationalExpr>>(&table_)) {
        (*dense)[index(k, i, j)] = std::move(value);
    } else {
        auto &sparse = std::get<std::map<std::size_t, RationalExpr>>(table_);
        if (value.is_zero())
            sparse.erase(index(k, i, j));
        else
            sparse[index(k, i, j)] = std::move(value);
    }
}

const RationalExpr &Connection::gamma(std::size_t k, std::size_t i, std::size_t j) const {
    static const RationalExpr zero;
    if (const auto *dense = std::get_if<std::vector<RationalExpr>>(&table_))
        return (*dense)[index(k, i, j)];
    const auto &sparse = std::get<std::map<std::size_t, RationalExpr>>(table_);
    auto it = sparse.find(index(k, i, j));
    return it == sparse.end() ? zero : it->second;
}

std::vector<ChristoffelEntry> Connection::entries() const {
    std::vector<ChristoffelEntry> out;
    const std::size_t n = chart_.dim();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                if (!gamma(k, i, j).is_zero())
                    out.push_back({k, i, j, gamma(k, i, j)});
    return out;
}

AccsSystem::AccsSystem(Chart c, Connection conn, std::vector<VectorField> g)
    : chart(std::move(c)), connection(std::move(conn)), controls(std::move(g)) {
    if (!(connection.chart() == chart))
        throw ChartError("connection and system charts differ");
    if (controls.empty())
        throw InputError("an affine connection control system needs at least one control");
    for (const auto &x : controls)
        if (!same_coords(x.coords(), chart.base_coords()))
            throw ChartError("control field is not on the base chart");
}

// -------------------------------------------------------------- operations

VectorField covariant_derivative(const Connection &conn, const VectorField &x, const VectorField &y) {
    require_base(conn.chart(), x, "covariant_derivative");
    require_base(conn.chart(), y, "covariant_derivative");
    const std::size_t n = conn.dim();
    std::vector<RationalExpr> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        RationalExpr v = x.apply(y[k]);
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i].is_zero())
                continue;
            for (std::size_t j = 0; j < n; ++j) {
                const RationalExpr &g = conn.gamma(k, i, j);
                if (!g.is_zero() && !y[j].is_zero())
                    v += g * x[i] * y[j];
            }
        }
        c[k] = std::move(v);
    }
    return VectorField(x.coords(), std::move(c));
}

VectorField symmetric_product(const Connection &conn, const VectorField &x, const VectorField &y) {
    return covariant_derivative(conn, x, y) + covariant_derivative(conn, y, x);
}

VectorField lie_bracket(const VectorField &x, const VectorField &y) {
    require_same(x.coords(), y.coords(), "lie_bracket");
    std::vector<RationalExpr> c(x.dim());
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] = x.apply(y[k]) - y.apply(x[k]);
    return VectorField(x.coords(), std::move(c));
}

VectorField torsion(const Connection &conn, const VectorField &x, const VectorField &y) {
    return covariant_derivative(conn, x, y) - covariant_derivative(conn, y, x) - lie_bracket(x, y);
}

VectorField curvature(const Connection &conn, const VectorField &x, const VectorField &y,
                      const VectorField &w) {
    require_base(conn.chart(), w, "curvature");
    return covariant_derivative(conn, x, covariant_derivative(conn, y, w)) -
           covariant_derivative(conn, y, covariant_derivative(conn, x, w)) -
           covariant_derivative(conn, lie_bracket(x, y), w);
}

VectorField geodesic_spray(const Connection &conn) {
    const Chart &chart = conn.chart();
    const std::size_t n = chart.dim();
    std::vector<RationalExpr> c(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        c[i] = RationalExpr::variable(chart.velocity()[i]);
    for (std::size_t j = 0; j < n; ++j) {
        RationalExpr acc;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
                const RationalExpr &g = conn.gamma(j, k, l);
                if (!g.is_zero())
                    acc += g * c[k] * c[l];
            }
        c[n + j] = -acc;
    }
    return VectorField(chart.tangent_coords(), std::move(c));
}

VectorField vertical_lift(const Chart &chart, const VectorField &x) {
    if (!same_coords(chart.base_coords(), x.coords()))
        throw ChartError("vertical_lift: field is not on the base chart");
    const std::size_t n = chart.dim();
    std::vector<RationalExpr> c(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        c[n + i] = x[i];
    return VectorField(chart.tangent_coords(), std::move(c));
}

VectorField horizontal_lift(const Connection &conn, const VectorField &x) {
    const Chart &chart = conn.chart();
    require_base(chart, x, "horizontal_lift");
    const std::size_t n = chart.dim();
    std::vector<RationalExpr> c(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        c[i] = x[i];
    for (std::size_t j = 0; j < n; ++j) {
        RationalExpr acc;
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i].is_zero())
                continue;
            for (std::size_t k = 0; k < n; ++k) {
                const RationalExpr &g = conn.gamma(j, i, k);
                if (!g.is_zero())
                    acc += x[i] * g * RationalExpr::variable(chart.velocity()[k]);
            }
        }
        c[n + j] = -acc;
    }
    return VectorField(chart.tangent_coords(), std::move(c));
}

VectorField velocity_covariant_derivative(const Connection &conn, const VectorField &x) {
    const Chart &chart = conn.chart();
    require_base(chart, x, "velocity_covariant_derivative");
    const std::size_t n = chart.dim();
    std::vector<RationalExpr> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = RationalExpr::variable(chart.velocity()[i]);
    // Evaluate on the tangent chart so the velocity names are legal variables,
    // then re-home the result on the base chart.
    std::vector<RationalExpr> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        RationalExpr acc;
        for (std::size_t i = 0; i < n; ++i) {
            acc += v[i] * differentiate(x[k], chart.base()[i]);
            for (std::size_t j = 0; j < n; ++j) {
                const RationalExpr &g = conn.gamma(k, i, j);
                if (!g.is_zero() && !x[j].is_zero())
                    acc += g * v[i] * x[j];
            }
        }
        c[k] = std::move(acc);
    }
    return VectorField(chart.base_coords(), std::move(c));
}

VectorField base_projection(const Chart &chart, const VectorField &tangent_field) {
    if (!same_coords(chart.tangent_coords(), tangent_field.coords()))
        throw ChartError("base_projection: field is not on the tangent chart");
    const std::size_t n = chart.dim();
    std::vector<RationalExpr> c(tangent_field.components().begin(),
                                tangent_field.components().begin() + static_cast<long>(n));
    return VectorField(chart.base_coords(), std::move(c));
}

TangentSystem lift_system(const AccsSystem &sys) {
    TangentSystem t{sys.chart.tangent_coords(), geodesic_spray(sys.connection), {}};
    t.inputs.reserve(sys.controls.size());
    for (const auto &g : sys.controls)
        t.inputs.push_back(vertical_lift(sys.chart, g));
    return t;
}

} // namespace mechquot
