#include "mechquot/linalg.hpp"

#include "mechquot/errors.hpp"

#include <algorithm>

namespace mechquot {

std::vector<Polynomial> clear_denominators(const ExprRow &row) {
    // Product of the distinct denominators; each entry is scaled by the
    // cofactor D / den_k, computed by exact division.
    std::vector<const Polynomial *> dens;
    for (const auto &e : row) {
        if (e.is_polynomial())
            continue;
        const Polynomial &d = e.denominator();
        if (std::none_of(dens.begin(), dens.end(), [&](const Polynomial *p) { return *p == d; }))
            dens.push_back(&d);
    }
    std::vector<Polynomial> out;
    out.reserve(row.size());
    if (dens.empty()) {
        for (const auto &e : row)
            out.push_back(e.numerator());
        return out;
    }
    Polynomial common(Rational(1));
    for (const auto *d : dens)
        common = common * *d;
    for (const auto &e : row) {
        if (e.is_zero()) {
            out.emplace_back();
            continue;
        }
        auto cofactor = divide_exact(common, e.denominator());
        if (!cofactor)
            throw Error("internal: denominator does not divide the common denominator");
        out.push_back(e.numerator() * *cofactor);
    }
    return out;
}

std::vector<Polynomial> Echelon::reduce(std::vector<Polynomial> row) const {
    Polynomial previous(Rational(1));
    for (const auto &p : pivots_) {
        const Polynomial &pivot = p.entries[p.column];
        const Polynomial factor = row[p.column];
        for (std::size_t j = 0; j < columns_; ++j) {
            if (j == p.column) {
                row[j] = Polynomial();
                continue;
            }
            Polynomial v = pivot * row[j];
            if (!factor.is_zero() && !p.entries[j].is_zero())
                v -= factor * p.entries[j];
            if (v.is_zero()) {
                row[j] = std::move(v);
                continue;
            }
            auto q = divide_exact(v, previous);
            if (!q)
                throw Error("internal: Bareiss step is not an exact division");
            row[j] = std::move(*q);
        }
        previous = pivot;
    }
    return row;
}

bool Echelon::contains(const ExprRow &row) const {
    if (row.size() != columns_)
        throw ChartError("row length does not match the matrix");
    auto reduced = reduce(clear_denominators(row));
    return std::all_of(reduced.begin(), reduced.end(),
                       [](const Polynomial &p) { return p.is_zero(); });
}

bool Echelon::insert(const ExprRow &row) {
    if (row.size() != columns_)
        throw ChartError("row length does not match the matrix");
    auto reduced = reduce(clear_denominators(row));
    std::size_t best = columns_;
    for (std::size_t j = 0; j < columns_; ++j)
        if (!reduced[j].is_zero() && (best == columns_ || reduced[j].size() < reduced[best].size()))
            best = j;
    if (best == columns_)
        return false;
    pivots_.push_back({best, std::move(reduced)});
    return true;
}

Echelon Echelon::build(std::size_t columns, const std::vector<ExprRow> &rows) {
    Echelon e(columns);
    std::vector<std::vector<Polynomial>> work;
    work.reserve(rows.size());
    for (const auto &r : rows) {
        if (r.size() != columns)
            throw ChartError("row length does not match the matrix");
        work.push_back(clear_denominators(r));
    }
    Polynomial previous(Rational(1));
    std::vector<bool> used(work.size(), false);
    for (std::size_t col = 0; col < columns; ++col) {
        std::size_t pick = work.size();
        for (std::size_t r = 0; r < work.size(); ++r) {
            if (used[r] || work[r][col].is_zero())
                continue;
            if (pick == work.size() || work[r][col].size() < work[pick][col].size())
                pick = r;
        }
        if (pick == work.size())
            continue;
        used[pick] = true;
        const auto &prow = work[pick];
        const Polynomial &pivot = prow[col];
        for (std::size_t r = 0; r < work.size(); ++r) {
            if (used[r])
                continue;
            auto &row = work[r];
            const Polynomial factor = row[col];
            for (std::size_t j = col; j < columns; ++j) {
                Polynomial v = pivot * row[j];
                if (!factor.is_zero() && !prow[j].is_zero())
                    v -= factor * prow[j];
                if (v.is_zero()) {
                    row[j] = std::move(v);
                    continue;
                }
                auto q = divide_exact(v, previous);
                if (!q)
                    throw Error("internal: Bareiss step is not an exact division");
                row[j] = std::move(*q);
            }
        }
        previous = pivot;
        e.pivots_.push_back({col, prow});
    }
    return e;
}

std::vector<std::size_t> Echelon::pivot_columns() const {
    std::vector<std::size_t> cols;
    for (const auto &p : pivots_)
        cols.push_back(p.column);
    return cols;
}

std::size_t generic_rank(std::size_t columns, const std::vector<ExprRow> &rows) {
    return Echelon::build(columns, rows).rank();
}

std::size_t rational_rank(std::vector<std::vector<Rational>> rows) {
    if (rows.empty())
        return 0;
    const std::size_t cols = rows.front().size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t p = rank;
        while (p < rows.size() && rows[p][c] == 0)
            ++p;
        if (p == rows.size())
            continue;
        std::swap(rows[p], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0)
                continue;
            Rational f = rows[r][c] / rows[rank][c];
            for (std::size_t j = c; j < cols; ++j)
                rows[r][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

std::optional<std::vector<RationalExpr>> solve_combination(const std::vector<ExprRow> &rows,
                                                           const ExprRow &target) {
    // Augmented system A c = target with A[i][a] = rows[a][i].
    const std::size_t unknowns = rows.size();
    const std::size_t eqs = target.size();
    std::vector<ExprRow> m(eqs, ExprRow(unknowns + 1));
    for (std::size_t i = 0; i < eqs; ++i) {
        for (std::size_t a = 0; a < unknowns; ++a)
            m[i][a] = rows[a].at(i);
        m[i][unknowns] = target[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < unknowns && r < eqs; ++c) {
        std::size_t pick = eqs;
        for (std::size_t i = r; i < eqs; ++i)
            if (!m[i][c].is_zero() && (pick == eqs || m[i][c].size() < m[pick][c].size()))
                pick = i;
        if (pick == eqs)
            continue;
        std::swap(m[pick], m[r]);
        for (std::size_t i = 0; i < eqs; ++i) {
            if (i == r || m[i][c].is_zero())
                continue;
            RationalExpr f = m[i][c] / m[r][c];
            for (std::size_t j = c; j <= unknowns; ++j)
                if (!m[r][j].is_zero())
                    m[i][j] -= f * m[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < eqs; ++i)
        if (!m[i][unknowns].is_zero())
            return std::nullopt;
    std::vector<RationalExpr> coeffs(unknowns);
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
        coeffs[pivot_col[k]] = m[k][unknowns] / m[k][pivot_col[k]];
    return coeffs;
}

} // namespace mechquot
