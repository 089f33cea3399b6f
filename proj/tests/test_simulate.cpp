#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mechquot/errors.hpp"
#include "mechquot/simulate.hpp"
#include "support.hpp"

#include <cmath>
#include <sstream>

using namespace mechquot;
using mechquot::testing::names;

namespace {

CoordList coords(std::initializer_list<const char *> n) {
    return std::make_shared<const std::vector<std::string>>(names(n));
}

TangentSystem explicit_system(const CoordList &c, const std::vector<std::string> &drift,
                              const std::vector<std::vector<std::string>> &inputs) {
    TangentSystem t{c, VectorField::parse(c, drift), {}};
    for (const auto &g : inputs)
        t.inputs.push_back(VectorField::parse(c, g));
    return t;
}

TangentSystem flat_line() {
    Chart chart(names({"x"}), names({"y"}));
    return lift_system(AccsSystem(chart, Connection(chart), {VectorField::basis(chart.base_coords(), 0)}));
}

// The reduced velocity system and its image under the coordinate change.
TangentSystem velocity_system() {
    return explicit_system(coords({"y1", "y2"}), {"y1^2 + y1*y2", "y1^2 - y2^2 + y1*y2"}, {{"0", "1"}});
}

TangentSystem changed_system() {
    return explicit_system(coords({"z1", "z2"}), {"z2", "4*z1*z2 - z1^3"}, {{"0", "z1"}});
}

QuotientMap map_of(const std::vector<std::string> &source, const std::vector<std::string> &target,
                   const std::vector<std::string> &comps) {
    QuotientMap m{source, target, {}};
    for (const auto &c : comps)
        m.components.push_back(parse_expr(c, source));
    return m;
}

double sup_diff(const Trajectory &a, const Trajectory &b) {
    double d = 0;
    for (std::size_t k = 0; k < a.states.size(); ++k)
        for (std::size_t i = 0; i < a.states[k].size(); ++i)
            d = std::max(d, std::abs(a.states[k][i] - b.states[k][i]));
    return d;
}

} // namespace

TEST_CASE("straight-line geodesic") {
    Trajectory t = integrate(flat_line(), {0, 1}, ControlSignal::constant({0}), 1.0, 1e-3);
    REQUIRE(t.states.size() == 1001);
    for (std::size_t k = 0; k < t.states.size(); ++k) {
        CHECK(std::abs(t.states[k][0] - t.times[k]) <= 1e-12);
        CHECK(std::abs(t.states[k][1] - 1.0) <= 1e-12);
    }
}

TEST_CASE("constant acceleration from rest") {
    Trajectory t = integrate(flat_line(), {0, 0}, ControlSignal::constant({1}), 1.0, 1e-3);
    for (std::size_t k = 0; k < t.states.size(); ++k) {
        const double s = t.times[k];
        CHECK(std::abs(t.states[k][0] - s * s / 2) <= 1e-9);
        CHECK(std::abs(t.states[k][1] - s) <= 1e-9);
    }
}

TEST_CASE("worked example matches a half-step run") {
    TangentSystem ex = lift_system(testing::example_system());
    const std::vector<double> x0 = {0, 0, 0, -1, 1, 0};
    Trajectory a = integrate(ex, x0, ControlSignal::constant({0, 0}), 0.5, 1e-3);
    Trajectory b = integrate(ex, x0, ControlSignal::constant({0, 0}), 0.5, 5e-4);
    double d = 0;
    for (std::size_t k = 0; k < a.states.size(); ++k)
        for (std::size_t i = 0; i < 6; ++i)
            d = std::max(d, std::abs(a.states[k][i] - b.states[2 * k][i]));
    CHECK(d <= 1e-8);
    // The state does move: y2' = -1 at the start.
    CHECK(std::abs(a.states.back()[4] - 1.0) > 0.1);
}

TEST_CASE("property: step halving shows fourth order") {
    TangentSystem ex = lift_system(testing::example_system());
    StepHalving s = step_halving(ex, {0, 0, 0, -1, 1, 0}, ControlSignal::constant({0, 0}), 0.5, 0.1);
    INFO("ratio " << s.ratio);
    CHECK(s.ratio >= 8);
    CHECK(s.ratio <= 32);

    TangentSystem curved = lift_system(testing::curved_plane_system());
    StepHalving c = step_halving(curved, {0.5, 0, 0.3, 1}, ControlSignal::constant({0.5}), 1.0, 0.1);
    INFO("ratio " << c.ratio);
    CHECK(c.ratio >= 8);
    CHECK(c.ratio <= 32);
}

TEST_CASE("control signal validation and lookup") {
    ControlSignal u{{0, 0.5}, {{-1}, {0.5}}};
    CHECK_NOTHROW(u.validate(1));
    CHECK(u.at(0.2)[0] == -1);
    CHECK(u.at(0.5)[0] == 0.5);
    CHECK(u.at(0.9)[0] == 0.5);
    CHECK_THROWS_AS((ControlSignal{{0.1}, {{1}}}).validate(1), InputError);
    CHECK_THROWS_AS((ControlSignal{{0, 0}, {{1}, {2}}}).validate(1), InputError);
    CHECK_THROWS_AS((ControlSignal{{0}, {{1, 2}}}).validate(1), InputError);
    CHECK_THROWS_AS((ControlSignal{{0}, {{NAN}}}).validate(1), InputError);
    CHECK_THROWS_AS(integrate(flat_line(), {0, 0}, ControlSignal{{0, 0.00025}, {{1}, {0}}}, 1.0, 1e-3),
                    InputError);
    CHECK_THROWS_AS(integrate(flat_line(), {0, 0}, ControlSignal::constant({0}), 1.0005, 1e-3), InputError);
    CHECK_THROWS_AS(integrate(flat_line(), {0, 0}, ControlSignal::constant({0}), 1.0, 0), InputError);
}

TEST_CASE("piecewise controls switch on the grid") {
    ControlSignal u{{0, 0.5}, {{1}, {-1}}};
    Trajectory t = integrate(flat_line(), {0, 0}, u, 1.0, 1e-3);
    // y rises to 0.5 then returns to 0; x = t^2/2 then mirrors.
    CHECK(std::abs(t.states[500][1] - 0.5) <= 1e-12);
    CHECK(std::abs(t.states[1000][1]) <= 1e-12);
    CHECK(std::abs(t.states[1000][0] - 0.25) <= 1e-12);
}

TEST_CASE("poles and blow-up are reported with a time") {
    auto c = coords({"x", "y"});
    TangentSystem pole = explicit_system(c, {"y", "1/(1 - x)"}, {});
    try {
        integrate(pole, {0.9, 1}, ControlSignal{{0}, {{}}}, 1.0, 0.1);
        FAIL("expected an integration error");
    } catch (const IntegrationError &e) {
        CHECK(e.time() >= 0);
        CHECK(e.time() <= 0.1 + 1e-12);
    }
    TangentSystem at_pole = explicit_system(c, {"y", "1/x"}, {});
    CHECK_THROWS_AS(integrate(at_pole, {0, 1}, ControlSignal{{0}, {{}}}, 0.0, 0.1), IntegrationError);

    TangentSystem blow = explicit_system(c, {"y", "y^3"}, {});
    CHECK_THROWS_AS(integrate(blow, {0, 10}, ControlSignal{{0}, {{}}}, 1.0, 0.1), IntegrationError);
}

TEST_CASE("projection examples") {
    TangentSystem ex = lift_system(testing::example_system());
    Trajectory t = integrate(ex, {0, 0, 0, -1, 1, 0}, ControlSignal::constant({0, 0}), 0.1, 1e-3);
    const auto &src = *ex.coords;
    Trajectory id = project(t, map_of(src, src, src));
    CHECK(sup_diff(id, t) == 0);

    Trajectory tau = project(t, map_of(src, names({"y1", "y2"}), names({"y1", "y2"})));
    for (std::size_t k = 0; k < t.states.size(); ++k) {
        CHECK(tau.states[k][0] == t.states[k][3]);
        CHECK(tau.states[k][1] == t.states[k][4]);
    }

    QuotientSystem q;
    q.removed = {2};
    q.kept = {0, 1};
    QuotientMap adapted = adapted_projection(testing::example_system().chart, q);
    CHECK(adapted.target == names({"x1", "x2", "y1", "y2"}));
    Trajectory p = project(t, adapted);
    CHECK(p.states[10] == std::vector<double>{t.states[10][0], t.states[10][1], t.states[10][3], t.states[10][4]});

    CHECK_THROWS_AS(project(t, map_of(src, names({"a"}), names({"1/(x1 - x1 + 0*y1)"}))), Error);
    QuotientMap pole = map_of(src, names({"a"}), names({"1/x1"}));
    CHECK_THROWS_AS(project(t, pole), IntegrationError);
}

TEST_CASE("commutation: flat quotient") {
    Chart chart(names({"x1", "x2", "x3"}));
    auto b = chart.base_coords();
    AccsSystem flat(chart, Connection(chart), {VectorField::basis(b, 1), VectorField::basis(b, 2)});
    QuotientSystem q = build_quotient_system(flat, Distribution(b, {VectorField::basis(b, 0)}));
    REQUIRE(q.system);
    ControlSignal u{{0, 0.5}, {{-1, 0.5}, {0.5, -1}}};
    CommutationReport r = check_commutation(lift_system(flat), lift_system(*q.system),
                                            adapted_projection(chart, q), {1, 2, 3, 0.1, 0.2, 0.3}, u,
                                            1.0, 1e-3, 1e-9);
    CHECK(r.passed);
    CHECK(r.residual <= 1e-9);
}

TEST_CASE("commutation: worked example onto the velocity system") {
    TangentSystem ex = lift_system(testing::example_system());
    QuotientMap tau = map_of(*ex.coords, names({"y1", "y2"}), names({"y1", "y2"}));
    // The velocity system has one input; the second input of the original
    // acts only on y3.
    TangentSystem target = velocity_system();
    target.inputs.push_back(VectorField::zero(target.coords));
    CommutationReport r = check_commutation(ex, target, tau, {0, 0, 0, -1, 1, 0},
                                            ControlSignal::constant({1, 0}), 0.5, 1e-3, 1e-6);
    CHECK(r.passed);
    // With u = 1 the initial velocity is an equilibrium; a moving case:
    CommutationReport m = check_commutation(ex, target, tau, {0.2, -0.1, 0, -1, 0.5, 0.3},
                                            ControlSignal{{0, 0.25}, {{0.5, 1}, {-1, 0}}}, 0.5, 1e-3, 1e-6);
    CHECK(m.passed);
    CHECK(std::abs(m.target.states.back()[1] - 0.5) > 0.05);
}

TEST_CASE("commutation: coordinate change of the velocity system") {
    TangentSystem src = velocity_system();
    QuotientMap phi = map_of(*src.coords, names({"z1", "z2"}), names({"y1", "y1^2 + y1*y2"}));
    CommutationReport r = check_commutation(src, changed_system(), phi, {-1, 1},
                                            ControlSignal::constant({1}), 0.5, 1e-3, 1e-6);
    CHECK(r.passed);
    CommutationReport m = check_commutation(src, changed_system(), phi, {-1, 0.4},
                                            ControlSignal{{0, 0.2}, {{0.3}, {-0.7}}}, 0.5, 1e-3, 1e-6);
    CHECK(m.passed);
    CHECK(m.residual <= 1e-6);
}

TEST_CASE("commutation fails loudly when the dependence condition is violated") {
    // Gamma^2_22 = x1 couples the removed direction into the kept dynamics;
    // dropping x1 from the quotient by hand gives a wrong reduced system.
    const AccsSystem curved = testing::curved_plane_system();
    Chart reduced(names({"x2"}));
    AccsSystem wrong(reduced, Connection(reduced), {VectorField::basis(reduced.base_coords(), 0)});
    QuotientSystem q;
    q.removed = {0};
    q.kept = {1};
    CommutationReport r =
        check_commutation(lift_system(curved), lift_system(wrong), adapted_projection(curved.chart, q),
                          {1, 0, 0.5, 1}, ControlSignal::constant({0.2}), 0.5, 1e-3, 1e-6);
    CHECK_FALSE(r.passed);
    CHECK(r.residual > 1e-3);
}

TEST_CASE("property: zero-control geodesics stay tangent to an invariant distribution") {
    // D = span{d3} passes every condition for the worked example.
    const AccsSystem ex = testing::example_system();
    auto b = ex.chart.base_coords();
    Trajectory t = integrate(lift_system(ex), {0.3, -0.2, 1, 0, 0, 0.7}, ControlSignal::constant({0, 0}), 0.5,
                             1e-3);
    CHECK(velocity_span_residual(ex.chart, {VectorField::basis(b, 2)}, t) <= 1e-6);

    // Not invariant: D = span{d1}, velocity leaves it.
    Trajectory s = integrate(lift_system(ex), {0, 0, 0, -0.5, 0, 0}, ControlSignal::constant({0, 0}), 0.5,
                             1e-3);
    CHECK(velocity_span_residual(ex.chart, {VectorField::basis(b, 0)}, s) > 1e-3);
}

TEST_CASE("csv export") {
    Trajectory t = integrate(flat_line(), {0, 1}, ControlSignal::constant({0}), 0.002, 1e-3);
    std::ostringstream out;
    write_csv(out, t);
    CHECK(out.str() ==
          "t,x,y\n"
          "0,0,1\n"
          "0.001,0.001,1\n"
          "0.002,0.002,1\n");
}
