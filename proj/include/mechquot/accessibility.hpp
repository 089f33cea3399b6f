#pragma once

// Geodesic accessibility (Sym-closure of the controls spans the tangent
// space) and the nu-sequence of iterated brackets of a control-affine
// system on the tangent bundle:
//
//   nu_1 = {f_1, ..., f_r},   nu_i = U_{p+l=i} [nu_p, ad_{f_0} nu_l].

#include "mechquot/distribution.hpp"
#include "mechquot/geometry.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace mechquot {

struct AccessibilityReport {
    std::size_t dimension = 0;
    std::size_t sym_generic_rank = 0;
    std::size_t sym_rank_at_point = 0;
    bool geodesically_accessible = false;
    /// Independent generators of the Sym-closure.
    std::vector<VectorField> sym_generators;
};

/// Sym-closure of the controls and its rank at x0.
/// Throws DomainError if x0 is a pole, ResourceLimitError on closure caps.
AccessibilityReport is_geodesically_accessible(const AccsSystem &sys, const Point &x0,
                                               const ClosureOptions &options = {});

struct NuOptions {
    /// 0 means 2 * (tangent dimension).
    std::size_t max_level = 0;
    std::size_t max_fields_per_level = 4096;
    std::uint64_t degree_ceiling = 64;
};

struct NuSequence {
    /// levels[i] holds nu_{i+1}, reduced to a basis of its span over Q.
    std::vector<std::vector<VectorField>> levels;
    /// ad_{f_0} applied to each field of the matching level.
    std::vector<std::vector<VectorField>> drift_brackets;
    /// Generic rank of nu_1 + ... + nu_{i+1}.
    std::vector<RankReport> spans;
    /// 1-based level at which the cumulative span stopped growing.
    std::optional<std::size_t> stabilized_at;

    std::size_t truncation_level() const noexcept { return levels.size(); }
    std::vector<VectorField> all_fields() const;
};

/// Computes levels until the cumulative generic rank is unchanged for two
/// consecutive levels or max_level is reached. Bracket sets are reduced to a
/// basis over Q at every level (brackets are bilinear over constants, so the
/// spans are unaffected). Throws ResourceLimitError past the field or degree
/// caps and InputError if max_level < 2.
NuSequence nu_sequence(const TangentSystem &tsys, const NuOptions &options = {});

struct CommutatorWitness {
    VectorField left, right, bracket;
};

/// The three conditions of the mechanical-form test, evaluated on the
/// truncated nu. A rank condition holds at y0 when the rank at y0 equals the
/// generic rank and the target, so it holds on a neighborhood.
struct NuReport {
    std::size_t n = 0;
    std::size_t truncation_level = 0;
    std::optional<std::size_t> stabilized_at;
    std::size_t nu_generic_dim = 0;
    std::size_t nu_dim = 0;
    std::size_t nu_plus_bracket_generic_dim = 0;
    std::size_t nu_plus_bracket_dim = 0;
    bool dimension_condition = false;
    /// [X, Y] = 0 for every pair of computed nu fields.
    bool nu_abelian = false;
    std::optional<CommutatorWitness> commutator_witness;
    bool drift_in_nu = false;
};

/// Throws InputError if the tangent dimension is odd, DomainError at a pole.
NuReport check_mechanical_form(const TangentSystem &tsys, const Point &y0, const NuOptions &options = {});

/// Highest total degree in `vars` over the numerators of the components.
std::uint64_t degree_in(const VectorField &x, const std::vector<std::string> &vars);

} // namespace mechquot
