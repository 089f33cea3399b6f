#pragma once

// Exact linear algebra over the field of rational functions.

#include "mechquot/symexpr.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace mechquot {

using ExprRow = std::vector<RationalExpr>;

/// Fraction-free (Bareiss) row echelon form of a matrix whose rows are
/// vectors of rational functions. Rows are cleared of denominators first;
/// all later arithmetic is polynomial with exact division by the previous
/// pivot. Rows can be appended incrementally.
class Echelon {
public:
    explicit Echelon(std::size_t columns) : columns_(columns) {}

    /// Bareiss elimination of `rows` with fewest-terms pivoting (ties by row
    /// index).
    static Echelon build(std::size_t columns, const std::vector<ExprRow> &rows);

    std::size_t rank() const noexcept { return pivots_.size(); }
    std::size_t columns() const noexcept { return columns_; }

    /// True if `row` lies in the span of the rows seen so far.
    bool contains(const ExprRow &row) const;
    /// Adds `row`; returns true if it increased the rank.
    bool insert(const ExprRow &row);

    /// Pivot column of each pivot row, in elimination order.
    std::vector<std::size_t> pivot_columns() const;

private:
    struct PivotRow {
        std::size_t column;
        std::vector<Polynomial> entries;
    };

    std::vector<Polynomial> reduce(std::vector<Polynomial> row) const;

    std::size_t columns_;
    std::vector<PivotRow> pivots_;
};

/// Multiplies a row by a common denominator; the result spans the same line.
std::vector<Polynomial> clear_denominators(const ExprRow &row);

/// Generic rank of the matrix with the given rows.
std::size_t generic_rank(std::size_t columns, const std::vector<ExprRow> &rows);

/// Rank over Q of an exact rational matrix.
std::size_t rational_rank(std::vector<std::vector<Rational>> rows);

/// Solves sum_a c_a rows[a] = target over the rational-function field.
/// Returns nullopt if there is no solution. Free coefficients are set to 0.
std::optional<std::vector<RationalExpr>> solve_combination(const std::vector<ExprRow> &rows,
                                                           const ExprRow &target);

} // namespace mechquot
