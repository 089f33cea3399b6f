#include "mechquot/quotient.hpp"

#include "mechquot/errors.hpp"

namespace mechquot {

namespace {

bool in_span(const Distribution &d, const VectorField &w) {
    return d.echelon().contains(to_row(w));
}

} // namespace

QuotientVerdict check_quotient_conditions(const AccsSystem &sys, const Distribution &d) {
    const auto &base = sys.chart.base_coords();
    if (!same_coords(d.coords(), base))
        throw ChartError("the distribution is not on the system's base chart");
    QuotientVerdict v;
    v.rank = generic_rank(d);
    if (v.rank.singular)
        throw PreconditionError("SINGULAR_POINT",
                                "the distribution has rank " + std::to_string(*v.rank.pointwise_rank) +
                                    " at the base point but generic rank " +
                                    std::to_string(v.rank.generic_rank));

    auto record = [&](bool &flag, Verdict verdict) {
        flag = verdict.holds;
        if (verdict.witness)
            v.witnesses.push_back(std::move(*verdict.witness));
    };
    record(v.involutive, is_involutive(d));
    record(v.connection_restricts, restricts_connection(sys.connection, d));

    v.curvature_ok = true;
    const std::size_t n = sys.chart.dim();
    for (const auto &g : d.generators()) {
        if (!v.curvature_ok)
            break;
        for (std::size_t j = 0; j < n && v.curvature_ok; ++j)
            for (std::size_t l = j; l < n; ++l) {
                const VectorField ej = VectorField::basis(base, j);
                const VectorField el = VectorField::basis(base, l);
                VectorField r = curvature(sys.connection, g, ej, el);
                if (j != l)
                    r = r + curvature(sys.connection, g, el, ej);
                if (!in_span(d, r)) {
                    v.curvature_ok = false;
                    v.witnesses.push_back({"curvature", {g, ej, el}, std::move(r)});
                    break;
                }
            }
    }

    v.controls_invariant = true;
    for (const auto &gi : sys.controls) {
        if (!v.controls_invariant)
            break;
        for (const auto &g : d.generators()) {
            VectorField br = lie_bracket(gi, g);
            if (!in_span(d, br)) {
                v.controls_invariant = false;
                v.witnesses.push_back({"controls_invariant", {gi, g}, std::move(br)});
                break;
            }
        }
    }
    v.overall = v.involutive && v.connection_restricts && v.curvature_ok && v.controls_invariant;
    return v;
}

Distribution build_lifted_distribution(const AccsSystem &sys, const Distribution &d) {
    Verdict r = restricts_connection(sys.connection, d);
    if (!r.holds)
        throw PreconditionError("NOT_RESTRICTED",
                                "the connection does not restrict to the distribution: " +
                                    r.witness->offender.to_string());
    std::vector<VectorField> gens;
    for (const auto &g : d.generators())
        gens.push_back(horizontal_lift(sys.connection, g));
    for (const auto &g : d.generators())
        gens.push_back(vertical_lift(sys.chart, g));
    return Distribution(sys.chart.tangent_coords(), std::move(gens));
}

LiftedVerdict verify_lifted_invariance(const AccsSystem &sys, const Distribution &d) {
    const VectorField spray = geodesic_spray(sys.connection);
    LiftedVerdict v;
    for (const auto &g : d.generators())
        v.generators.push_back(vertical_lift(sys.chart, g));
    const std::size_t k = v.generators.size();
    for (std::size_t a = 0; a < k; ++a)
        v.generators.push_back(lie_bracket(spray, v.generators[a]));
    const Distribution lifted(sys.chart.tangent_coords(), v.generators);

    v.spray_invariant = true;
    for (const auto &g : v.generators) {
        VectorField br = lie_bracket(spray, g);
        if (!in_span(lifted, br)) {
            v.spray_invariant = false;
            v.witnesses.push_back({"spray_invariant", {spray, g}, std::move(br)});
            break;
        }
    }

    v.controls_invariant = true;
    for (const auto &gi : sys.controls) {
        if (!v.controls_invariant)
            break;
        const VectorField lift = vertical_lift(sys.chart, gi);
        for (const auto &g : v.generators) {
            VectorField br = lie_bracket(lift, g);
            if (!in_span(lifted, br)) {
                v.controls_invariant = false;
                v.witnesses.push_back({"lifted_controls_invariant", {lift, g}, std::move(br)});
                break;
            }
        }
    }

    Verdict inv = is_involutive(lifted);
    v.involutive = inv.holds;
    if (inv.witness)
        v.witnesses.push_back(std::move(*inv.witness));
    v.overall = v.spray_invariant && v.controls_invariant && v.involutive;
    return v;
}

std::optional<std::vector<std::size_t>> aligned_directions(const Distribution &d) {
    std::vector<std::size_t> dirs;
    for (std::size_t i = 0; i < d.ambient_dim(); ++i)
        for (const auto &g : d.generators())
            if (!g[i].is_zero()) {
                dirs.push_back(i);
                break;
            }
    // span D lies inside span{d_e}; equal ranks make them equal.
    if (d.echelon().rank() != dirs.size())
        return std::nullopt;
    return dirs;
}

QuotientSystem build_quotient_system(const AccsSystem &sys, const Distribution &d) {
    auto dirs = aligned_directions(d);
    if (!dirs)
        throw PreconditionError("NOT_ADAPTED",
                                "the distribution is not spanned by coordinate directions");
    QuotientVerdict verdict = check_quotient_conditions(sys, d);
    if (!verdict.overall)
        throw PreconditionError("CONDITIONS_FAIL", "condition '" + verdict.witnesses.front().condition +
                                                       "' does not hold");

    const auto &x = sys.chart.base();
    const auto &vel = sys.chart.velocity();
    QuotientSystem q;
    q.removed = *dirs;
    q.input_count = sys.controls.size();
    std::vector<bool> is_removed(x.size(), false);
    for (auto e : q.removed)
        is_removed[e] = true;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!is_removed[i])
            q.kept.push_back(i);

    auto check_independent = [&](const RationalExpr &f, const std::string &symbol) {
        for (auto e : q.removed)
            if (!differentiate(f, x[e]).is_zero())
                throw PreconditionError("DEPENDENCE_VIOLATION",
                                        symbol + " = " + f.to_string() + " depends on " + x[e]);
    };
    auto one_based = [](std::size_t i) { return std::to_string(i + 1); };
    for (auto a : q.kept)
        for (auto b : q.kept)
            for (auto c : q.kept)
                if (b <= c)
                    check_independent(sys.connection.gamma(a, b, c),
                                      "Gamma^" + one_based(a) + "_" + one_based(b) + one_based(c));
    for (std::size_t i = 0; i < sys.controls.size(); ++i)
        for (auto a : q.kept)
            check_independent(sys.controls[i][a],
                              "component " + one_based(a) + " of control " + one_based(i));

    if (q.kept.empty())
        return q;

    std::vector<std::string> base, velocity;
    for (auto a : q.kept) {
        base.push_back(x[a]);
        velocity.push_back(vel[a]);
    }
    Chart chart(base, velocity);
    std::vector<ChristoffelEntry> entries;
    for (std::size_t a = 0; a < q.kept.size(); ++a)
        for (std::size_t b = 0; b < q.kept.size(); ++b)
            for (std::size_t c = b; c < q.kept.size(); ++c) {
                const RationalExpr &g = sys.connection.gamma(q.kept[a], q.kept[b], q.kept[c]);
                if (!g.is_zero())
                    entries.push_back({a, b, c, g});
            }
    std::vector<VectorField> controls;
    for (const auto &g : sys.controls) {
        std::vector<RationalExpr> comps;
        for (auto a : q.kept)
            comps.push_back(g[a]);
        controls.emplace_back(chart.base_coords(), std::move(comps));
    }
    q.system.emplace(chart, Connection(chart, entries), std::move(controls));
    return q;
}

} // namespace mechquot
