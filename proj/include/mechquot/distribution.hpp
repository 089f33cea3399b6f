#pragma once

// Distributions given by generators: ranks, membership, involutivity,
// geodesic invariance, symmetric-product closure and connection restriction.
//
// Span conditions are decided generically, i.e. over the field of rational
// functions in the chart coordinates. When a base point is attached, the
// pointwise rank is computed too and a drop below the generic rank is
// flagged as singular.

#include "mechquot/geometry.hpp"
#include "mechquot/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mechquot {

class Distribution {
public:
    Distribution(CoordList coords, std::vector<VectorField> generators,
                 std::optional<Point> base_point = std::nullopt);

    const CoordList &coords() const noexcept { return coords_; }
    std::size_t ambient_dim() const noexcept { return coords_->size(); }
    const std::vector<VectorField> &generators() const noexcept { return generators_; }
    const std::optional<Point> &base_point() const noexcept { return base_point_; }

    /// Cached echelon form of the generator matrix.
    const Echelon &echelon() const;

private:
    CoordList coords_;
    std::vector<VectorField> generators_;
    std::optional<Point> base_point_;
    mutable std::optional<Echelon> echelon_;
};

struct RankReport {
    std::size_t generic_rank = 0;
    std::optional<std::size_t> pointwise_rank;
    bool singular = false;
};

struct Membership {
    bool member = false;
    /// Coefficients on the generators, present when member is true.
    std::optional<std::vector<RationalExpr>> coefficients;
};

/// A failed closure condition: the fields that produced `offender`, which is
/// not in the distribution.
struct Witness {
    std::string condition;
    std::vector<VectorField> sources;
    VectorField offender;
};

struct Verdict {
    bool holds = true;
    std::optional<Witness> witness;
};

ExprRow to_row(const VectorField &x);

/// Exact rank of the fields evaluated at `point`. Throws DomainError at a pole.
std::size_t pointwise_rank(const std::vector<VectorField> &fields, const Point &point);

RankReport generic_rank(const Distribution &d);
Membership contains(const Distribution &d, const VectorField &w);
Verdict is_involutive(const Distribution &d);
Verdict is_geodesically_invariant(const Connection &conn, const Distribution &d);
/// nabla_{d_i} g_a in D for every coordinate field d_i and generator g_a.
Verdict restricts_connection(const Connection &conn, const Distribution &d);

struct ClosureOptions {
    std::uint64_t degree_ceiling = 64;
};

struct SymClosure {
    /// Independent generators: the seed fields that raise the rank, followed
    /// by every symmetric product that raised it.
    Distribution distribution;
    RankReport rank;
    std::size_t passes = 0;
    /// Every nonzero field produced (independent or not), for pointwise rank.
    std::vector<VectorField> all_fields;
};

/// Smallest distribution containing `seed` and closed under the symmetric
/// product. Throws ResourceLimitError if the pass cap (dimension + 1) or the
/// degree ceiling is exceeded.
SymClosure sym_closure(const Connection &conn, const std::vector<VectorField> &seed,
                       std::optional<Point> base_point = std::nullopt,
                       const ClosureOptions &options = {});

} // namespace mechquot
