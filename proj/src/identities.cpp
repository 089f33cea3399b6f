#include "mechquot/identities.hpp"

namespace mechquot {

std::vector<IdentityCheck> check_identities(const Connection &conn, const VectorField &x,
                                            const VectorField &y, const VectorField &w,
                                            const RationalExpr &f) {
    const Chart &chart = conn.chart();
    const VectorField spray = geodesic_spray(conn);
    const VectorField xv = vertical_lift(chart, x);
    const VectorField yv = vertical_lift(chart, y);
    const VectorField nabla_v_x = velocity_covariant_derivative(conn, x);
    const VectorField s_xv = lie_bracket(spray, xv);

    std::vector<IdentityCheck> out;
    out.push_back({"spray_vertical_bracket",
                   s_xv == -horizontal_lift(conn, x) + vertical_lift(chart, nabla_v_x)});
    out.push_back({"vertical_symmetric_product",
                   lie_bracket(xv, lie_bracket(spray, yv)) ==
                       vertical_lift(chart, symmetric_product(conn, x, y))});
    out.push_back({"double_spray_horizontal",
                   base_projection(chart, lie_bracket(spray, s_xv)) ==
                       nabla_v_x.scaled(RationalExpr(-2))});
    out.push_back({"torsion_free", torsion(conn, x, y).is_zero()});
    out.push_back({"symmetric_product_symmetric",
                   symmetric_product(conn, x, y) == symmetric_product(conn, y, x)});

    const VectorField rxy_w = curvature(conn, x, y, w);
    out.push_back({"curvature_antisymmetric", rxy_w == -curvature(conn, y, x, w)});
    out.push_back({"curvature_tensorial",
                   curvature(conn, x.scaled(f), y, w) == rxy_w.scaled(f) &&
                       curvature(conn, x, y, w.scaled(f)) == rxy_w.scaled(f)});
    out.push_back({"first_bianchi",
                   (rxy_w + curvature(conn, y, w, x) + curvature(conn, w, x, y)).is_zero()});
    return out;
}

Polynomial random_polynomial(std::mt19937_64 &rng, const std::vector<std::string> &vars,
                             int max_degree, int max_terms) {
    // Reduction modulo a span keeps the stream independent of the standard
    // library's distribution implementations.
    auto draw = [&](long lo, long hi) {
        return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    Polynomial p;
    const long terms = draw(1, max_terms);
    for (long t = 0; t < terms; ++t) {
        Monomial m;
        const long deg = draw(0, max_degree);
        for (long k = 0; k < deg; ++k)
            m = m * Monomial::variable(vars[static_cast<std::size_t>(
                        draw(0, static_cast<long>(vars.size()) - 1))]);
        long c = draw(-3, 3);
        p += Polynomial::term(m, Rational(c == 0 ? 1 : c));
    }
    return p;
}

std::vector<IdentityTrial> run_identity_suite(const Connection &conn,
                                              const IdentitySuiteOptions &options) {
    std::mt19937_64 rng(options.seed);
    const auto &coords = conn.chart().base_coords();
    auto field = [&] {
        std::vector<RationalExpr> c;
        for (std::size_t i = 0; i < coords->size(); ++i)
            c.emplace_back(random_polynomial(rng, *coords, options.max_degree, 2));
        return VectorField(coords, std::move(c));
    };
    std::vector<IdentityTrial> trials;
    for (int t = 0; t < options.trials; ++t) {
        IdentityTrial trial{field(), field(), field(),
                            RationalExpr(random_polynomial(rng, *coords, 1, 2)), {}};
        trial.checks = check_identities(conn, trial.x, trial.y, trial.w, trial.f);
        trials.push_back(std::move(trial));
    }
    return trials;
}

} // namespace mechquot
