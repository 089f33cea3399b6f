#include "mechquot/distribution.hpp"

#include "mechquot/errors.hpp"

#include <set>

namespace mechquot {

Distribution::Distribution(CoordList coords, std::vector<VectorField> generators,
                           std::optional<Point> base_point)
    : coords_(std::move(coords)), generators_(std::move(generators)),
      base_point_(std::move(base_point)) {
    if (generators_.empty())
        throw InputError("a distribution needs at least one generator");
    for (const auto &g : generators_)
        if (!same_coords(g.coords(), coords_))
            throw ChartError("distribution generators must share the chart");
    if (base_point_)
        for (const auto &g : generators_)
            for (const auto &c : g.components())
                eval_at(c, *base_point_);
}

const Echelon &Distribution::echelon() const {
    if (!echelon_) {
        std::vector<ExprRow> rows;
        rows.reserve(generators_.size());
        for (const auto &g : generators_)
            rows.push_back(to_row(g));
        echelon_ = Echelon::build(ambient_dim(), rows);
    }
    return *echelon_;
}

ExprRow to_row(const VectorField &x) { return x.components(); }

std::size_t pointwise_rank(const std::vector<VectorField> &fields, const Point &point) {
    std::vector<std::vector<Rational>> rows;
    rows.reserve(fields.size());
    for (const auto &f : fields) {
        std::vector<Rational> r;
        r.reserve(f.dim());
        for (const auto &c : f.components())
            r.push_back(eval_at(c, point));
        rows.push_back(std::move(r));
    }
    return rational_rank(std::move(rows));
}

RankReport generic_rank(const Distribution &d) {
    RankReport r;
    r.generic_rank = d.echelon().rank();
    if (d.base_point()) {
        r.pointwise_rank = pointwise_rank(d.generators(), *d.base_point());
        r.singular = *r.pointwise_rank < r.generic_rank;
    }
    return r;
}

Membership contains(const Distribution &d, const VectorField &w) {
    if (!same_coords(d.coords(), w.coords()))
        throw ChartError("contains: field is not on the distribution's chart");
    Membership m;
    m.member = d.echelon().contains(to_row(w));
    if (m.member) {
        std::vector<ExprRow> rows;
        for (const auto &g : d.generators())
            rows.push_back(to_row(g));
        m.coefficients = solve_combination(rows, to_row(w));
    }
    return m;
}

namespace {

bool in_span(const Distribution &d, const VectorField &w) {
    return d.echelon().contains(to_row(w));
}

} // namespace

Verdict is_involutive(const Distribution &d) {
    const auto &g = d.generators();
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = a + 1; b < g.size(); ++b) {
            VectorField br = lie_bracket(g[a], g[b]);
            if (!in_span(d, br))
                return {false, Witness{"involutive", {g[a], g[b]}, std::move(br)}};
        }
    return {};
}

Verdict is_geodesically_invariant(const Connection &conn, const Distribution &d) {
    const auto &g = d.generators();
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = a; b < g.size(); ++b) {
            VectorField sp = symmetric_product(conn, g[a], g[b]);
            if (!in_span(d, sp))
                return {false, Witness{"geodesically_invariant", {g[a], g[b]}, std::move(sp)}};
        }
    return {};
}

Verdict restricts_connection(const Connection &conn, const Distribution &d) {
    const auto &coords = conn.chart().base_coords();
    for (std::size_t i = 0; i < conn.dim(); ++i) {
        VectorField e = VectorField::basis(coords, i);
        for (const auto &g : d.generators()) {
            VectorField cd = covariant_derivative(conn, e, g);
            if (!in_span(d, cd))
                return {false, Witness{"connection_restricts", {e, g}, std::move(cd)}};
        }
    }
    return {};
}

SymClosure sym_closure(const Connection &conn, const std::vector<VectorField> &seed,
                       std::optional<Point> base_point, const ClosureOptions &options) {
    const std::size_t n = conn.dim();
    const auto &coords = conn.chart().base_coords();
    if (seed.empty())
        throw InputError("sym_closure needs a nonempty seed");
    Echelon echelon(n);
    std::vector<VectorField> gens;
    std::vector<VectorField> all;
    auto adjoin = [&](VectorField f) {
        if (f.degree() > options.degree_ceiling)
            throw ResourceLimitError("symmetric closure exceeded the degree ceiling of " +
                                     std::to_string(options.degree_ceiling));
        if (f.is_zero())
            return false;
        all.push_back(f);
        if (!echelon.insert(to_row(f)))
            return false;
        gens.push_back(std::move(f));
        return true;
    };
    for (const auto &s : seed) {
        if (!same_coords(s.coords(), coords))
            throw ChartError("sym_closure: seed field is not on the base chart");
        adjoin(s);
    }
    std::set<std::pair<std::size_t, std::size_t>> done;
    std::size_t passes = 0;
    for (;;) {
        if (++passes > n + 1)
            throw ResourceLimitError("symmetric closure did not stabilize within " +
                                     std::to_string(n + 1) + " passes");
        bool grew = false;
        const std::size_t current = gens.size();
        for (std::size_t i = 0; i < current; ++i)
            for (std::size_t j = i; j < current; ++j) {
                if (!done.emplace(i, j).second)
                    continue;
                grew |= adjoin(symmetric_product(conn, gens[i], gens[j]));
            }
        if (!grew)
            break;
    }
    if (gens.empty())
        gens.push_back(VectorField::zero(coords));
    SymClosure result{Distribution(coords, gens, base_point), {}, passes, std::move(all)};
    result.rank.generic_rank = echelon.rank();
    if (base_point) {
        result.rank.pointwise_rank =
            result.all_fields.empty() ? 0 : pointwise_rank(result.all_fields, *base_point);
        result.rank.singular = *result.rank.pointwise_rank < result.rank.generic_rank;
    }
    return result;
}

} // namespace mechquot
