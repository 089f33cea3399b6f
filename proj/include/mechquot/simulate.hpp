#pragma once

// Fixed-step RK4 integration of control-affine systems on the tangent
// bundle under piecewise-constant inputs, projection through quotient maps
// and the commutation check z(t) = psi(y(t)).

#include "mechquot/geometry.hpp"
#include "mechquot/quotient.hpp"
#include "mechquot/symexpr.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mechquot {

/// Polynomial or rational expressions lowered to double precision. A
/// denominator with magnitude below kPoleThreshold counts as a pole.
class CompiledExprs {
public:
    static constexpr double kPoleThreshold = 1e-12;

    CompiledExprs(const std::vector<RationalExpr> &exprs, const std::vector<std::string> &vars);

    std::size_t size() const noexcept { return num_.size(); }
    /// Throws DomainError at a pole.
    void eval(const double *x, double *out) const;

private:
    struct Term {
        double coeff;
        std::vector<std::pair<std::size_t, std::uint32_t>> powers;
    };
    using Poly = std::vector<Term>;
    static Poly lower(const Polynomial &p, const std::vector<std::string> &vars);
    static double eval(const Poly &p, const double *x);

    std::vector<Poly> num_;
    std::vector<Poly> den_;
    std::vector<bool> polynomial_;
};

/// Inputs held at values[k] on [breakpoints[k], breakpoints[k+1]).
struct ControlSignal {
    std::vector<double> breakpoints;
    std::vector<std::vector<double>> values;

    static ControlSignal constant(std::vector<double> value);
    /// Throws InputError unless breakpoints start at 0, increase strictly,
    /// and every value is finite with `inputs` entries.
    void validate(std::size_t inputs) const;
    const std::vector<double> &at(double t) const;
};

struct Trajectory {
    std::vector<std::string> names;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
};

/// Classical RK4 with the input held constant over each step. Throws
/// InputError for a bad grid or signal and IntegrationError on a pole or a
/// non-finite state.
Trajectory integrate(const TangentSystem &tsys, const std::vector<double> &x0, const ControlSignal &u,
                     double t_end, double dt);

struct QuotientMap {
    std::vector<std::string> source;
    std::vector<std::string> target;
    std::vector<RationalExpr> components;

    /// Throws InputError unless there is one component per target name and
    /// every component is over the source names.
    void validate() const;
};

/// Drops the removed directions and their velocities.
QuotientMap adapted_projection(const Chart &source, const QuotientSystem &q);

std::vector<double> apply_map(const QuotientMap &map, const std::vector<double> &state);

/// Throws IntegrationError if a component has a pole along the trajectory.
Trajectory project(const Trajectory &traj, const QuotientMap &map);

struct CommutationReport {
    double residual = 0;
    double residual_time = 0;
    double tol = 0;
    bool passed = false;
    Trajectory source;
    Trajectory projected;
    Trajectory target;
};

/// Integrates both systems with the same inputs, starting the target at
/// psi(x0), and compares psi(source) with the target in the sup norm.
CommutationReport check_commutation(const TangentSystem &source, const TangentSystem &target,
                                    const QuotientMap &map, const std::vector<double> &x0,
                                    const ControlSignal &u, double t_end, double dt, double tol);

struct StepHalving {
    double coarse_error = 0;
    double fine_error = 0;
    double ratio = 0;
};

/// Final-state differences between runs at dt, dt/2 and dt/4.
StepHalving step_halving(const TangentSystem &tsys, const std::vector<double> &x0,
                         const ControlSignal &u, double t_end, double dt);

/// Largest least-squares residual of the velocity against span{g_a(x)} over
/// the trajectory, for a trajectory on chart's tangent coordinates.
double velocity_span_residual(const Chart &chart, const std::vector<VectorField> &generators,
                              const Trajectory &traj);

/// Header of names, then one row per step, 17 significant digits.
void write_csv(std::ostream &out, const Trajectory &traj);

} // namespace mechquot
