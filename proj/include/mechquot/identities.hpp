#pragma once

// Exact bracket and curvature identities that every symmetric connection
// satisfies. Used as a self-check on user connections (verify-identities)
// and by the test suites.

#include "mechquot/geometry.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mechquot {

struct IdentityCheck {
    std::string name;
    bool holds = false;
};

/// Checks, for the given fields and function f:
///   spray_vertical_bracket      [S, X^v] = -X^H + (nabla_v X)^v
///   vertical_symmetric_product  [X^v, [S, Y^v]] = <X:Y>^v
///   double_spray_horizontal     base part of [S, [S, X^v]] = -2 nabla_v X
///   torsion_free                T(X, Y) = 0
///   symmetric_product_symmetric <X:Y> = <Y:X>
///   curvature_antisymmetric     R(X,Y)W = -R(Y,X)W
///   curvature_tensorial         R(fX,Y)W = f R(X,Y)W and R(X,Y)(fW) = f R(X,Y)W
///   first_bianchi               R(X,Y)W + R(Y,W)X + R(W,X)Y = 0
std::vector<IdentityCheck> check_identities(const Connection &conn, const VectorField &x,
                                            const VectorField &y, const VectorField &w,
                                            const RationalExpr &f);

/// Deterministic random polynomial over `vars`: up to `max_terms` terms of
/// total degree <= max_degree with small integer coefficients.
Polynomial random_polynomial(std::mt19937_64 &rng, const std::vector<std::string> &vars,
                             int max_degree, int max_terms);

struct IdentitySuiteOptions {
    std::uint64_t seed = 42;
    int trials = 3;
    int max_degree = 3;
};

struct IdentityTrial {
    VectorField x, y, w;
    RationalExpr f;
    std::vector<IdentityCheck> checks;
};

/// Runs check_identities on `trials` random polynomial field triples.
std::vector<IdentityTrial> run_identity_suite(const Connection &conn,
                                              const IdentitySuiteOptions &options = {});

} // namespace mechquot
