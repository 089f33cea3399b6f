#pragma once

// Shared helpers for the test binaries: deterministic random expressions and
// fixtures that do not go through the file format.

#include "mechquot/distribution.hpp"
#include "mechquot/geometry.hpp"
#include "mechquot/symexpr.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mechquot::testing {

/// Uniform integer in [lo, hi] that does not depend on the standard
/// library's distribution implementation.
inline long draw(std::mt19937_64 &rng, long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(rng() % span);
}

inline Polynomial random_poly(std::mt19937_64 &rng, const std::vector<std::string> &vars,
                              int max_degree, int max_terms) {
    Polynomial p;
    const int terms = static_cast<int>(draw(rng, 1, max_terms));
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        const int deg = static_cast<int>(draw(rng, 0, max_degree));
        for (int k = 0; k < deg; ++k)
            m = m * Monomial::variable(vars[static_cast<std::size_t>(
                        draw(rng, 0, static_cast<long>(vars.size()) - 1))]);
        long c = draw(rng, -4, 4);
        if (c == 0)
            c = 1;
        p += Polynomial::term(m, Rational(c, draw(rng, 1, 3)));
    }
    return p;
}

inline RationalExpr random_rational(std::mt19937_64 &rng, const std::vector<std::string> &vars) {
    Polynomial num = random_poly(rng, vars, 2, 3);
    Polynomial den;
    do
        den = random_poly(rng, vars, 1, 2);
    while (den.is_zero());
    return RationalExpr(num, den);
}

inline VectorField random_field(std::mt19937_64 &rng, const CoordList &coords, int max_degree,
                                int max_terms = 2) {
    std::vector<RationalExpr> c;
    for (std::size_t i = 0; i < coords->size(); ++i)
        c.emplace_back(draw(rng, 0, 3) == 0 ? Polynomial()
                                            : random_poly(rng, *coords, max_degree, max_terms));
    return VectorField(coords, std::move(c));
}

inline Connection random_connection(std::mt19937_64 &rng, const Chart &chart, int max_degree) {
    std::vector<ChristoffelEntry> entries;
    const std::size_t n = chart.dim();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                if (draw(rng, 0, 2) == 0)
                    entries.push_back({k, i, j, RationalExpr(random_poly(rng, chart.base(), max_degree, 2))});
    return Connection(chart, entries);
}

inline std::vector<std::string> names(std::initializer_list<const char *> list) {
    return {list.begin(), list.end()};
}

/// The worked example: Christoffels read off the quadratic drift
///   y1' = y1^2 + y1 y2,  y2' = y1^2 - y2^2 + y1 y2 + u,  y3' = v.
inline AccsSystem example_system() {
    Chart chart(names({"x1", "x2", "x3"}), names({"y1", "y2", "y3"}));
    const Rational half(1, 2);
    Connection conn(chart, {{0, 0, 0, RationalExpr(-1)},
                            {0, 0, 1, RationalExpr(-half)},
                            {1, 0, 0, RationalExpr(-1)},
                            {1, 0, 1, RationalExpr(-half)},
                            {1, 1, 1, RationalExpr(1)}});
    return AccsSystem(chart, conn,
                      {VectorField::basis(chart.base_coords(), 1),
                       VectorField::basis(chart.base_coords(), 2)});
}

/// Only Gamma^2_22 = x1 nonzero on R^2, control d/dx2.
inline AccsSystem curved_plane_system() {
    Chart chart(names({"x1", "x2"}));
    Connection conn(chart, {{1, 1, 1, RationalExpr::variable("x1")}});
    return AccsSystem(chart, conn, {VectorField::basis(chart.base_coords(), 1)});
}

struct RandomInstance {
    AccsSystem sys;
    Distribution dist;
    bool structured;
};

// Structured instances satisfy every condition by construction:
// Gamma^a_{b e} = 0 and Gamma^a_{bc} free of x^E for a outside E, e in E,
// and control components outside E free of x^E.
inline RandomInstance random_instance(std::mt19937_64 &rng) {
    const std::size_t n = static_cast<std::size_t>(draw(rng, 2, 3));
    Chart chart(n == 2 ? names({"x1", "x2"}) : names({"x1", "x2", "x3"}));
    const auto &x = chart.base();
    auto b = chart.base_coords();
    std::vector<bool> in_e(n, false);
    std::size_t count = 0;
    while (count == 0 || count == n) {
        count = 0;
        for (std::size_t i = 0; i < n; ++i)
            count += (in_e[i] = draw(rng, 0, 1) == 1);
    }
    std::vector<std::string> kept_vars;
    for (std::size_t i = 0; i < n; ++i)
        if (!in_e[i])
            kept_vars.push_back(x[i]);

    const bool structured = draw(rng, 0, 1) == 1;
    auto poly = [&](const std::vector<std::string> &vars) {
        return RationalExpr(random_poly(rng, vars, 1, 2));
    };
    std::vector<ChristoffelEntry> entries;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                if (draw(rng, 0, 2) != 0)
                    continue;
                if (structured && !in_e[a]) {
                    if (in_e[i] || in_e[j])
                        continue;
                    entries.push_back({a, i, j, poly(kept_vars)});
                } else {
                    entries.push_back({a, i, j, poly(x)});
                }
            }
    std::vector<VectorField> controls;
    const long m = draw(rng, 1, 2);
    for (long k = 0; k < m; ++k) {
        std::vector<RationalExpr> comps;
        for (std::size_t a = 0; a < n; ++a) {
            if (draw(rng, 0, 1) == 0)
                comps.emplace_back(draw(rng, -2, 2));
            else
                comps.push_back(structured && !in_e[a] ? poly(kept_vars) : poly(x));
        }
        controls.emplace_back(b, std::move(comps));
    }
    std::vector<VectorField> gens;
    for (std::size_t i = 0; i < n; ++i)
        if (in_e[i]) {
            RationalExpr scale = draw(rng, 0, 2) == 0 ? poly(x) : RationalExpr(1);
            if (scale.is_zero())
                scale = RationalExpr(1);
            gens.push_back(VectorField::basis(b, i).scaled(scale));
        }
    if (!structured && draw(rng, 0, 3) == 0)
        gens.push_back(random_field(rng, b, 1, 1));
    return {AccsSystem(chart, Connection(chart, entries), controls), Distribution(b, gens), structured};
}

} // namespace mechquot::testing
