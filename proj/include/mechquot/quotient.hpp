#pragma once

// Quotients of affine connection control systems by an invariant
// distribution D. Two independent decision routes:
//
//  * direct: D involutive, the connection restricts to D, R(X, v)v in D for
//    X in D, and [g_i, D] in D;
//  * lifted: Dt = span{D^v, [S, D^v]} on the tangent bundle is invariant
//    under the spray S and the lifted controls, and involutive.
//
// For D = span{d_e : e in E} the reduced system lives on the remaining
// coordinates.

#include "mechquot/distribution.hpp"
#include "mechquot/geometry.hpp"

#include <optional>
#include <vector>

namespace mechquot {

struct QuotientVerdict {
    bool involutive = false;
    bool connection_restricts = false;
    bool curvature_ok = false;
    bool controls_invariant = false;
    bool overall = false;
    /// The first offending combination of each failed condition.
    std::vector<Witness> witnesses;
    RankReport rank;
};

/// Direct route. Curvature uses polarization over coordinate pairs j <= l:
/// R(g_a, d_j) d_l + R(g_a, d_l) d_j in D (for j = l the witness reports
/// R(g_a, d_j) d_j). Throws PreconditionError "SINGULAR_POINT" when D drops
/// rank at its base point.
QuotientVerdict check_quotient_conditions(const AccsSystem &sys, const Distribution &d);

/// span{D^H, D^v}. Throws PreconditionError "NOT_RESTRICTED" unless the
/// connection restricts to D.
Distribution build_lifted_distribution(const AccsSystem &sys, const Distribution &d);

struct LiftedVerdict {
    bool spray_invariant = false;
    bool controls_invariant = false;
    bool involutive = false;
    bool overall = false;
    std::vector<Witness> witnesses;
    /// Generators of Dt: vertical lifts, then their brackets with S.
    std::vector<VectorField> generators;
};

/// Lifted route on Dt = span{D^v, [S, D^v]}. Always runs to completion.
LiftedVerdict verify_lifted_invariance(const AccsSystem &sys, const Distribution &d);

struct QuotientSystem {
    /// Coordinate indices spanning D, and the ones kept by the quotient.
    std::vector<std::size_t> removed;
    std::vector<std::size_t> kept;
    /// Empty when D is the whole tangent space.
    std::optional<AccsSystem> system;
    std::size_t input_count = 0;
};

/// Coordinate directions spanning D, if D = span{d_e : e in E} generically.
std::optional<std::vector<std::size_t>> aligned_directions(const Distribution &d);

/// Reduced system on the coordinates outside E. Throws PreconditionError
/// with code NOT_ADAPTED, CONDITIONS_FAIL or DEPENDENCE_VIOLATION.
/// Controls that project to zero are kept so that inputs keep their index.
QuotientSystem build_quotient_system(const AccsSystem &sys, const Distribution &d);

} // namespace mechquot
