#pragma once

// Coordinate differential geometry of affine connections: Christoffel
// tables, covariant derivatives, brackets, torsion, curvature, the geodesic
// spray and vertical/horizontal lifts to the tangent bundle.

#include "mechquot/symexpr.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace mechquot {

/// Ordered coordinate names shared between the fields living on one chart.
using CoordList = std::shared_ptr<const std::vector<std::string>>;

bool same_coords(const CoordList &a, const CoordList &b);

/// A base chart (x^1..x^n) together with its velocity names (v^1..v^n).
/// The tangent chart is (x^1..x^n, v^1..v^n).
class Chart {
public:
    static constexpr const char *kVelocityPrefix = "v_";

    /// Velocity names default to "v_" + base name.
    explicit Chart(std::vector<std::string> base, std::vector<std::string> velocity = {});

    std::size_t dim() const noexcept { return base_->size(); }
    const std::vector<std::string> &base() const noexcept { return *base_; }
    const std::vector<std::string> &velocity() const noexcept { return velocity_; }
    const CoordList &base_coords() const noexcept { return base_; }
    const CoordList &tangent_coords() const noexcept { return tangent_; }

    bool operator==(const Chart &o) const;

private:
    CoordList base_;
    std::vector<std::string> velocity_;
    CoordList tangent_;
};

class VectorField {
public:
    VectorField() = default;
    VectorField(CoordList coords, std::vector<RationalExpr> components);

    static VectorField zero(CoordList coords);
    /// The coordinate field d/d(coords[index]).
    static VectorField basis(CoordList coords, std::size_t index);
    static VectorField parse(CoordList coords, const std::vector<std::string> &components);

    const CoordList &coords() const noexcept { return coords_; }
    std::size_t dim() const noexcept { return components_.size(); }
    const std::vector<RationalExpr> &components() const noexcept { return components_; }
    const RationalExpr &operator[](std::size_t i) const { return components_[i]; }

    bool is_zero() const;
    std::uint64_t degree() const;

    VectorField operator+(const VectorField &o) const;
    VectorField operator-(const VectorField &o) const;
    VectorField operator-() const;
    VectorField scaled(const RationalExpr &f) const;

    /// Exact equality on the same chart.
    bool operator==(const VectorField &o) const;

    /// Directional derivative X(f) = X^i d_i f.
    RationalExpr apply(const RationalExpr &f) const;

    std::string to_string() const;

private:
    CoordList coords_;
    std::vector<RationalExpr> components_;
};

/// One Christoffel entry Gamma^upper_{lower1 lower2}, indices 0-based.
struct ChristoffelEntry {
    std::size_t upper;
    std::size_t lower1;
    std::size_t lower2;
    RationalExpr value;
};

/// Symmetric affine connection. Entries are stored densely for n <= 8 and
/// sparsely above.
class Connection {
public:
    static constexpr std::size_t kDenseLimit = 8;

    /// Flat connection (all symbols zero).
    explicit Connection(Chart chart);
    /// Symmetrizes the given entries. Throws InputError on out-of-range
    /// indices or on inconsistent entries for (i,j) and (j,i).
    Connection(Chart chart, const std::vector<ChristoffelEntry> &entries);

    const Chart &chart() const noexcept { return chart_; }
    std::size_t dim() const noexcept { return chart_.dim(); }
    /// Gamma^k_{ij}.
    const RationalExpr &gamma(std::size_t k, std::size_t i, std::size_t j) const;
    /// Nonzero entries with i <= j, in (k, i, j) order.
    std::vector<ChristoffelEntry> entries() const;

private:
    std::size_t index(std::size_t k, std::size_t i, std::size_t j) const;
    void set(std::size_t k, std::size_t i, std::size_t j, RationalExpr value);

    Chart chart_;
    std::variant<std::vector<RationalExpr>, std::map<std::size_t, RationalExpr>> table_;
};

/// Affine connection control system (Q, nabla, g_1..g_m).
struct AccsSystem {
    Chart chart;
    Connection connection;
    std::vector<VectorField> controls;

    AccsSystem(Chart chart, Connection connection, std::vector<VectorField> controls);
};

/// Control-affine system  z' = f_0(z) + sum_r u_r f_r(z)  on a chart. Lifts of
/// AccsSystems live on the tangent chart; explicit systems on any chart.
struct TangentSystem {
    CoordList coords;
    VectorField drift;
    std::vector<VectorField> inputs;
};

VectorField covariant_derivative(const Connection &conn, const VectorField &x, const VectorField &y);
VectorField symmetric_product(const Connection &conn, const VectorField &x, const VectorField &y);
VectorField lie_bracket(const VectorField &x, const VectorField &y);
VectorField torsion(const Connection &conn, const VectorField &x, const VectorField &y);
/// R(X,Y)W = nabla_X nabla_Y W - nabla_Y nabla_X W - nabla_[X,Y] W.
VectorField curvature(const Connection &conn, const VectorField &x, const VectorField &y,
                      const VectorField &w);

/// S = v^i d/dx^i - Gamma^j_kl v^k v^l d/dv^j on the tangent chart.
VectorField geodesic_spray(const Connection &conn);
VectorField vertical_lift(const Chart &chart, const VectorField &x);
/// X^H = X^i (d/dx^i - Gamma^j_ik v^k d/dv^j).
VectorField horizontal_lift(const Connection &conn, const VectorField &x);
/// nabla_v X with v the velocity coordinates, as a base-indexed field whose
/// components depend on (x, v).
VectorField velocity_covariant_derivative(const Connection &conn, const VectorField &x);
/// Push-forward of a tangent-chart field through the base projection.
VectorField base_projection(const Chart &chart, const VectorField &tangent_field);
TangentSystem lift_system(const AccsSystem &sys);

} // namespace mechquot
