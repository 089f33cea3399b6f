#include "mechquot/simulate.hpp"

#include "mechquot/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace mechquot {

namespace {

std::size_t index_of(const std::vector<std::string> &vars, const std::string &name) {
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end())
        throw InputError("variable '" + name + "' is not a state coordinate");
    return static_cast<std::size_t>(it - vars.begin());
}

std::size_t grid_steps(double t_end, double dt) {
    if (!(dt > 0) || !std::isfinite(dt))
        throw InputError("dt must be positive");
    if (!(t_end >= 0) || !std::isfinite(t_end))
        throw InputError("t_end must be nonnegative");
    const double steps = std::round(t_end / dt);
    if (std::abs(steps * dt - t_end) > 1e-9 * std::max(1.0, t_end))
        throw InputError("t_end is not a multiple of dt");
    return static_cast<std::size_t>(steps);
}

double sup_distance(const std::vector<double> &a, const std::vector<double> &b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

CompiledExprs::CompiledExprs(const std::vector<RationalExpr> &exprs,
                             const std::vector<std::string> &vars) {
    for (const auto &e : exprs) {
        num_.push_back(lower(e.numerator(), vars));
        den_.push_back(lower(e.denominator(), vars));
        polynomial_.push_back(e.is_polynomial());
    }
}

CompiledExprs::Poly CompiledExprs::lower(const Polynomial &p, const std::vector<std::string> &vars) {
    Poly out;
    for (const auto &[m, c] : p.terms()) {
        Term t{c.get_d(), {}};
        for (const auto &[name, e] : m.factors())
            t.powers.emplace_back(index_of(vars, name), e);
        out.push_back(std::move(t));
    }
    return out;
}

double CompiledExprs::eval(const Poly &p, const double *x) {
    double s = 0;
    for (const auto &t : p) {
        double v = t.coeff;
        for (const auto &[i, e] : t.powers) {
            double b = x[i];
            for (std::uint32_t k = 1; k < e; ++k)
                b *= x[i];
            v *= b;
        }
        s += v;
    }
    return s;
}

void CompiledExprs::eval(const double *x, double *out) const {
    for (std::size_t i = 0; i < num_.size(); ++i) {
        const double n = eval(num_[i], x);
        if (polynomial_[i]) {
            out[i] = n;
            continue;
        }
        const double d = eval(den_[i], x);
        if (std::abs(d) < kPoleThreshold)
            throw DomainError("pole: denominator magnitude below 1e-12");
        out[i] = n / d;
    }
}

ControlSignal ControlSignal::constant(std::vector<double> value) {
    return {{0.0}, {std::move(value)}};
}

void ControlSignal::validate(std::size_t inputs) const {
    if (breakpoints.empty() || breakpoints.front() != 0.0)
        throw InputError("control breakpoints must start at 0");
    if (values.size() != breakpoints.size())
        throw InputError("control signal needs one value vector per breakpoint");
    for (std::size_t k = 1; k < breakpoints.size(); ++k)
        if (!(breakpoints[k] > breakpoints[k - 1]))
            throw InputError("control breakpoints must be strictly increasing");
    for (const auto &v : values) {
        if (v.size() != inputs)
            throw InputError("control value has " + std::to_string(v.size()) + " entries, expected " +
                             std::to_string(inputs));
        for (double x : v)
            if (!std::isfinite(x))
                throw InputError("control values must be finite");
    }
}

const std::vector<double> &ControlSignal::at(double t) const {
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    const auto k = static_cast<std::size_t>(it - breakpoints.begin());
    return values[k == 0 ? 0 : k - 1];
}

Trajectory integrate(const TangentSystem &tsys, const std::vector<double> &x0, const ControlSignal &u,
                     double t_end, double dt) {
    const auto &vars = *tsys.coords;
    const std::size_t dim = vars.size();
    const std::size_t m = tsys.inputs.size();
    if (x0.size() != dim)
        throw InputError("initial state has " + std::to_string(x0.size()) + " entries, expected " +
                         std::to_string(dim));
    u.validate(m);
    const std::size_t steps = grid_steps(t_end, dt);
    for (double b : u.breakpoints) {
        const double k = std::round(b / dt);
        if (std::abs(k * dt - b) > 1e-9 * std::max(1.0, b))
            throw InputError("control breakpoint " + std::to_string(b) + " is not on the step grid");
    }

    CompiledExprs drift(tsys.drift.components(), vars);
    std::vector<CompiledExprs> inputs;
    for (const auto &g : tsys.inputs)
        inputs.emplace_back(g.components(), vars);

    // A denominator that changes sign between evaluations has crossed a
    // pole, even if no evaluation landed within the threshold.
    std::vector<RationalExpr> den_exprs;
    auto collect = [&](const VectorField &f) {
        for (const auto &c : f.components())
            if (!c.is_polynomial())
                den_exprs.emplace_back(c.denominator());
    };
    collect(tsys.drift);
    for (const auto &g : tsys.inputs)
        collect(g);
    CompiledExprs dens(den_exprs, vars);
    std::vector<double> den_values(dens.size()), den_signs(dens.size());
    dens.eval(x0.data(), den_signs.data());

    std::vector<double> scratch(dim);
    double now = 0;
    auto rhs = [&](const std::vector<double> &x, const std::vector<double> &uk, std::vector<double> &out) {
        dens.eval(x.data(), den_values.data());
        for (std::size_t i = 0; i < den_values.size(); ++i)
            if ((den_values[i] > 0) != (den_signs[i] > 0) || std::abs(den_values[i]) < CompiledExprs::kPoleThreshold)
                throw IntegrationError(now, "pole: a denominator vanished");
        try {
            drift.eval(x.data(), out.data());
            for (std::size_t i = 0; i < m; ++i) {
                if (uk[i] == 0)
                    continue;
                inputs[i].eval(x.data(), scratch.data());
                for (std::size_t j = 0; j < dim; ++j)
                    out[j] += uk[i] * scratch[j];
            }
        } catch (const DomainError &e) {
            throw IntegrationError(now, e.what());
        }
    };

    Trajectory traj;
    traj.names = vars;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.times.push_back(0);
    traj.states.push_back(x0);

    std::vector<double> x = x0, k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    // Rejects an initial state at a pole even when there are no steps.
    rhs(x, u.at(0), k1);
    for (std::size_t s = 0; s < steps; ++s) {
        now = static_cast<double>(s) * dt;
        // Nudge forward so a breakpoint that rounds just above the grid time
        // still selects the interval starting there.
        const auto &uk = u.at(now + 0.5 * dt * 1e-6);
        rhs(x, uk, k1);
        for (std::size_t j = 0; j < dim; ++j)
            tmp[j] = x[j] + 0.5 * dt * k1[j];
        rhs(tmp, uk, k2);
        for (std::size_t j = 0; j < dim; ++j)
            tmp[j] = x[j] + 0.5 * dt * k2[j];
        rhs(tmp, uk, k3);
        for (std::size_t j = 0; j < dim; ++j)
            tmp[j] = x[j] + dt * k3[j];
        rhs(tmp, uk, k4);
        for (std::size_t j = 0; j < dim; ++j) {
            x[j] += dt / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
            if (!std::isfinite(x[j]))
                throw IntegrationError(now + dt, "state became non-finite");
        }
        traj.times.push_back(static_cast<double>(s + 1) * dt);
        traj.states.push_back(x);
    }
    return traj;
}

void QuotientMap::validate() const {
    if (components.size() != target.size())
        throw InputError("quotient map has " + std::to_string(components.size()) +
                         " components for " + std::to_string(target.size()) + " target coordinates");
    for (const auto &c : components)
        for (const auto &v : c.variables())
            index_of(source, v);
}

QuotientMap adapted_projection(const Chart &source, const QuotientSystem &q) {
    QuotientMap map;
    map.source = *source.tangent_coords();
    for (auto a : q.kept) {
        map.target.push_back(source.base()[a]);
        map.components.push_back(RationalExpr::variable(source.base()[a]));
    }
    for (auto a : q.kept) {
        map.target.push_back(source.velocity()[a]);
        map.components.push_back(RationalExpr::variable(source.velocity()[a]));
    }
    return map;
}

std::vector<double> apply_map(const QuotientMap &map, const std::vector<double> &state) {
    map.validate();
    CompiledExprs c(map.components, map.source);
    std::vector<double> out(c.size());
    c.eval(state.data(), out.data());
    return out;
}

Trajectory project(const Trajectory &traj, const QuotientMap &map) {
    map.validate();
    if (traj.names != map.source)
        throw InputError("quotient map source does not match the trajectory coordinates");
    CompiledExprs c(map.components, map.source);
    Trajectory out;
    out.names = map.target;
    out.times = traj.times;
    out.states.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        std::vector<double> z(c.size());
        try {
            c.eval(traj.states[k].data(), z.data());
        } catch (const DomainError &e) {
            throw IntegrationError(traj.times[k], e.what());
        }
        out.states.push_back(std::move(z));
    }
    return out;
}

CommutationReport check_commutation(const TangentSystem &source, const TangentSystem &target,
                                    const QuotientMap &map, const std::vector<double> &x0,
                                    const ControlSignal &u, double t_end, double dt, double tol) {
    if (map.target != *target.coords)
        throw InputError("quotient map target does not match the target system coordinates");
    CommutationReport r;
    r.tol = tol;
    r.source = integrate(source, x0, u, t_end, dt);
    r.projected = project(r.source, map);
    r.target = integrate(target, r.projected.states.front(), u, t_end, dt);
    for (std::size_t k = 0; k < r.target.states.size(); ++k) {
        const double d = sup_distance(r.projected.states[k], r.target.states[k]);
        if (d > r.residual) {
            r.residual = d;
            r.residual_time = r.target.times[k];
        }
    }
    r.passed = r.residual <= tol;
    return r;
}

StepHalving step_halving(const TangentSystem &tsys, const std::vector<double> &x0,
                         const ControlSignal &u, double t_end, double dt) {
    const auto a = integrate(tsys, x0, u, t_end, dt).states.back();
    const auto b = integrate(tsys, x0, u, t_end, dt / 2).states.back();
    const auto c = integrate(tsys, x0, u, t_end, dt / 4).states.back();
    StepHalving s;
    s.coarse_error = sup_distance(a, b);
    s.fine_error = sup_distance(b, c);
    s.ratio = s.fine_error > 0 ? s.coarse_error / s.fine_error : 0;
    return s;
}

double velocity_span_residual(const Chart &chart, const std::vector<VectorField> &generators,
                              const Trajectory &traj) {
    const std::size_t n = chart.dim();
    const auto &vars = *chart.tangent_coords();
    if (traj.names != vars)
        throw InputError("trajectory is not on the chart's tangent coordinates");
    std::vector<RationalExpr> flat;
    for (const auto &g : generators)
        flat.insert(flat.end(), g.components().begin(), g.components().end());
    CompiledExprs c(flat, vars);
    const auto k = static_cast<Eigen::Index>(generators.size());
    Eigen::MatrixXd g(static_cast<Eigen::Index>(n), k);
    std::vector<double> values(flat.size());
    double worst = 0;
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
        const auto &x = traj.states[s];
        c.eval(x.data(), values.data());
        for (Eigen::Index a = 0; a < k; ++a)
            for (std::size_t i = 0; i < n; ++i)
                g(static_cast<Eigen::Index>(i), a) = values[static_cast<std::size_t>(a) * n + i];
        Eigen::VectorXd v(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            v(static_cast<Eigen::Index>(i)) = x[n + i];
        Eigen::VectorXd coef = g.completeOrthogonalDecomposition().solve(v);
        worst = std::max(worst, (g * coef - v).norm());
    }
    return worst;
}

void write_csv(std::ostream &out, const Trajectory &traj) {
    out << 't';
    for (const auto &n : traj.names)
        out << ',' << n;
    out << '\n';
    char buf[32];
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.times[k]);
        out << buf;
        for (double v : traj.states[k]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace mechquot
