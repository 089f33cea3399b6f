#include "mechquot/accessibility.hpp"

#include "mechquot/errors.hpp"

#include <map>

namespace mechquot {

namespace {

// Rank-revealing reduction over Q. Fields with rational components are put
// over a common denominator first, so that each field becomes a sparse
// vector indexed by (component, monomial).
class RationalSpan {
public:
    using Key = std::pair<std::size_t, Monomial>;
    struct KeyLess {
        bool operator()(const Key &a, const Key &b) const {
            if (a.first != b.first)
                return a.first < b.first;
            return grlex_compare(a.second, b.second) < 0;
        }
    };
    using Row = std::map<Key, Rational, KeyLess>;

    bool insert(Row row) {
        for (const auto &[key, pivot] : pivots_) {
            auto it = row.find(key);
            if (it == row.end())
                continue;
            const Rational f = it->second / pivot.at(key);
            for (const auto &[k, c] : pivot) {
                Rational &slot = row[k];
                slot -= f * c;
                if (slot == 0)
                    row.erase(k);
            }
        }
        if (row.empty())
            return false;
        Key key = row.begin()->first;
        pivots_.emplace_back(std::move(key), std::move(row));
        return true;
    }

private:
    std::vector<std::pair<Key, Row>> pivots_;
};

std::vector<VectorField> rational_basis(const std::vector<VectorField> &fields) {
    std::vector<Polynomial> dens;
    for (const auto &f : fields)
        for (const auto &c : f.components()) {
            if (c.is_polynomial())
                continue;
            bool seen = false;
            for (const auto &d : dens)
                seen = seen || d == c.denominator();
            if (!seen)
                dens.push_back(c.denominator());
        }
    Polynomial common(Rational(1));
    for (const auto &d : dens)
        common = common * d;

    RationalSpan span;
    std::vector<VectorField> out;
    for (const auto &f : fields) {
        if (f.is_zero())
            continue;
        RationalSpan::Row row;
        for (std::size_t i = 0; i < f.dim(); ++i) {
            const RationalExpr &c = f[i];
            if (c.is_zero())
                continue;
            Polynomial scaled = c.numerator() * *divide_exact(common, c.denominator());
            for (const auto &[m, q] : scaled.terms())
                row.emplace(RationalSpan::Key{i, m}, q);
        }
        if (span.insert(std::move(row)))
            out.push_back(f);
    }
    return out;
}

void check_degree(const VectorField &f, std::uint64_t ceiling) {
    if (f.degree() > ceiling)
        throw ResourceLimitError("nu-sequence field exceeded the degree ceiling of " +
                                 std::to_string(ceiling));
}

std::size_t rank_at(const std::vector<VectorField> &fields, const Point &p) {
    return fields.empty() ? 0 : pointwise_rank(fields, p);
}

} // namespace

AccessibilityReport is_geodesically_accessible(const AccsSystem &sys, const Point &x0,
                                               const ClosureOptions &options) {
    for (const auto &e : sys.connection.entries())
        eval_at(e.value, x0);
    SymClosure closure = sym_closure(sys.connection, sys.controls, x0, options);
    AccessibilityReport r;
    r.dimension = sys.chart.dim();
    r.sym_generic_rank = closure.rank.generic_rank;
    r.sym_rank_at_point = closure.rank.pointwise_rank.value_or(0);
    r.geodesically_accessible = r.sym_rank_at_point == r.dimension;
    r.sym_generators = closure.distribution.generators();
    return r;
}

std::vector<VectorField> NuSequence::all_fields() const {
    std::vector<VectorField> out;
    for (const auto &level : levels)
        out.insert(out.end(), level.begin(), level.end());
    return out;
}

NuSequence nu_sequence(const TangentSystem &tsys, const NuOptions &options) {
    const std::size_t dim = tsys.coords->size();
    const std::size_t max_level = options.max_level == 0 ? 2 * dim : options.max_level;
    if (max_level < 2)
        throw InputError("nu-sequence needs max_level >= 2");

    NuSequence nu;
    Echelon cumulative(dim);
    auto add_level = [&](std::vector<VectorField> candidates) {
        for (const auto &c : candidates)
            check_degree(c, options.degree_ceiling);
        std::vector<VectorField> level = rational_basis(candidates);
        std::vector<VectorField> ad;
        ad.reserve(level.size());
        for (const auto &f : level) {
            cumulative.insert(to_row(f));
            ad.push_back(lie_bracket(tsys.drift, f));
            check_degree(ad.back(), options.degree_ceiling);
        }
        nu.levels.push_back(std::move(level));
        nu.drift_brackets.push_back(std::move(ad));
        RankReport span;
        span.generic_rank = cumulative.rank();
        nu.spans.push_back(span);
    };

    add_level(tsys.inputs);
    for (std::size_t i = 2; i <= max_level; ++i) {
        std::vector<VectorField> candidates;
        for (std::size_t p = 1; p < i; ++p) {
            const auto &left = nu.levels[p - 1];
            const auto &right = nu.drift_brackets[i - p - 1];
            if (candidates.size() + left.size() * right.size() > options.max_fields_per_level)
                throw ResourceLimitError("nu-sequence level " + std::to_string(i) +
                                         " exceeded " +
                                         std::to_string(options.max_fields_per_level) + " fields");
            for (const auto &x : left)
                for (const auto &y : right)
                    candidates.push_back(lie_bracket(x, y));
        }
        add_level(std::move(candidates));
        const std::size_t r = nu.spans[i - 1].generic_rank;
        // An empty nu_2 empties every later level.
        if (i == 2 && nu.levels[1].empty()) {
            nu.stabilized_at = 2;
            break;
        }
        if (i >= 3 && r == nu.spans[i - 2].generic_rank && r == nu.spans[i - 3].generic_rank) {
            nu.stabilized_at = i;
            break;
        }
    }
    return nu;
}

NuReport check_mechanical_form(const TangentSystem &tsys, const Point &y0, const NuOptions &options) {
    const std::size_t dim = tsys.coords->size();
    if (dim % 2 != 0)
        throw InputError("the state dimension must be even");
    for (const auto &c : tsys.drift.components())
        eval_at(c, y0);

    NuReport r;
    r.n = dim / 2;
    NuSequence nu = nu_sequence(tsys, options);
    r.truncation_level = nu.truncation_level();
    r.stabilized_at = nu.stabilized_at;

    const std::vector<VectorField> fields = nu.all_fields();
    r.nu_generic_dim = nu.spans.back().generic_rank;
    r.nu_dim = rank_at(fields, y0);

    std::vector<VectorField> plus = fields;
    for (const auto &ad : nu.drift_brackets)
        plus.insert(plus.end(), ad.begin(), ad.end());
    std::vector<ExprRow> rows;
    for (const auto &f : plus)
        rows.push_back(to_row(f));
    r.nu_plus_bracket_generic_dim = generic_rank(dim, rows);
    r.nu_plus_bracket_dim = rank_at(plus, y0);

    r.dimension_condition = r.nu_dim == r.n && r.nu_generic_dim == r.n &&
                            r.nu_plus_bracket_dim == dim && r.nu_plus_bracket_generic_dim == dim;

    r.nu_abelian = true;
    for (std::size_t a = 0; a < fields.size() && r.nu_abelian; ++a)
        for (std::size_t b = a + 1; b < fields.size(); ++b) {
            VectorField br = lie_bracket(fields[a], fields[b]);
            if (!br.is_zero()) {
                r.nu_abelian = false;
                r.commutator_witness = CommutatorWitness{fields[a], fields[b], std::move(br)};
                break;
            }
        }

    std::vector<VectorField> with_drift = fields;
    with_drift.push_back(tsys.drift);
    r.drift_in_nu = rank_at(with_drift, y0) == r.nu_dim;
    return r;
}

std::uint64_t degree_in(const VectorField &x, const std::vector<std::string> &vars) {
    std::uint64_t best = 0;
    for (const auto &c : x.components())
        for (const auto &[m, q] : c.numerator().terms()) {
            std::uint64_t d = 0;
            for (const auto &v : vars)
                d += m.exponent(v);
            best = std::max(best, d);
        }
    return best;
}

} // namespace mechquot
