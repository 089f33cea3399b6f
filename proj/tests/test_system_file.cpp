#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mechquot/errors.hpp"
#include "mechquot/system_file.hpp"
#include "support.hpp"

#include <random>

using namespace mechquot;
using mechquot::testing::names;

namespace {

std::string fixture(const std::string &name) { return std::string(MECHQUOT_FIXTURES) + "/" + name; }

const std::vector<std::string> kValid = {"worked_example.json", "wrong_quotient.json", "flat_r2.json",
                                         "flat_r3.json",        "gamma222_x1.json",    "gamma122.json",
                                         "gamma122_x2.json",    "pole.json"};

const char *kMinimal = R"({
  "chart": {"base": ["x1", "x2"]},
  "christoffel": [CHR],
  "controls": [["0", "1"]]
})";

std::string minimal(const std::string &christoffel) {
    std::string s = kMinimal;
    s.replace(s.find("CHR"), 3, christoffel);
    return s;
}

} // namespace

TEST_CASE("worked example file") {
    SystemFile f = load_system_file(fixture("worked_example.json"));
    const Connection &c = f.system.connection;
    CHECK(f.system.chart.velocity() == names({"y1", "y2", "y3"}));
    CHECK(c.gamma(0, 1, 0) == RationalExpr(Rational(-1, 2)));
    CHECK(c.gamma(1, 1, 1) == RationalExpr(1));
    CHECK(c.gamma(2, 0, 0).is_zero());
    CHECK(f.system.controls.size() == 2);
    CHECK(f.distributions.count("D3"));
    CHECK(f.systems.at("velocity").inputs.size() == 2);
    CHECK(f.maps.at("phi").components[1] == parse_expr("y1^2 + y1*y2", names({"y1", "y2"})));
    const Scenario &s = f.scenarios.at("tau");
    CHECK(s.x0 == std::vector<double>{0, 0, 0, -1, 1, 0});
    CHECK(s.dt == 0.001);
    CHECK(*s.target == "velocity");
    CHECK(f.points.at("p").at("x3") == Rational(1, 3));
}

TEST_CASE("default velocity names") {
    SystemFile f = parse_system_file(minimal(""));
    CHECK(f.system.chart.velocity() == names({"v_x1", "v_x2"}));
}

TEST_CASE("christoffel entries in either index order") {
    SystemFile a = parse_system_file(minimal(R"({"k": 1, "i": 2, "j": 1, "expr": "x2"})"));
    SystemFile b = parse_system_file(minimal(R"({"k": 1, "i": 1, "j": 2, "expr": "x2"})"));
    CHECK(a.system.connection.gamma(0, 0, 1) == b.system.connection.gamma(0, 1, 0));
    CHECK(equivalent(a, b));
    // A consistent duplicate is accepted.
    CHECK_NOTHROW(parse_system_file(
        minimal(R"({"k": 1, "i": 2, "j": 1, "expr": "x2"}, {"k": 1, "i": 1, "j": 2, "expr": "2*x2 - x2"})")));
}

TEST_CASE("rejected documents") {
    CHECK_THROWS_AS(load_system_file(fixture("bad_index.json")), InputError);
    CHECK_THROWS_AS(load_system_file(fixture("asymmetric_christoffel.json")), InputError);
    CHECK_THROWS_AS(load_system_file(fixture("missing.json")), InputError);
    CHECK_THROWS_AS(parse_system_file("{"), InputError);
    CHECK_THROWS_AS(parse_system_file("[]"), InputError);
    CHECK_THROWS_AS(parse_system_file(minimal(R"({"k": 0, "i": 1, "j": 1, "expr": "1"})")), InputError);
    CHECK_THROWS_AS(parse_system_file(minimal(R"({"k": 1, "i": 1, "j": 1, "expr": "y"})")), ParseError);
    CHECK_THROWS_AS(parse_system_file(minimal(R"j({"k": 1, "i": 1, "j": 1, "expr": "1/(x1 - x1)"})j")),
                    InputError);
    CHECK_THROWS_AS(parse_system_file(R"({"chart": {"base": ["x"]}, "controls": [["1", "0"]]})"),
                    InputError);
    CHECK_THROWS_AS(parse_system_file(R"({"chart": {"base": ["x"]}, "controls": []})"), InputError);
    CHECK_THROWS_AS(parse_system_file(R"({"chart": {"base": ["x"]}, "controls": [["1"]], "extra": 1})"),
                    InputError);
    CHECK_THROWS_AS(parse_system_file(R"({"chart": {"base": ["x", "x"]}, "controls": [["1", "0"]]})"),
                    InputError);
    // Scenario whose x0 has the wrong length.
    CHECK_THROWS_AS(parse_system_file(R"({"chart": {"base": ["x"]}, "controls": [["1"]],
        "scenarios": {"s": {"x0": [0], "controls": {"breakpoints": [0], "values": [[1]]}, "t_end": 1}}})"),
                    InputError);
    // Map into a system of the wrong size.
    CHECK_THROWS_AS(parse_system_file(R"({"chart": {"base": ["x"]}, "controls": [["1"]],
        "systems": {"s": {"coords": ["a", "b"], "drift": ["0", "0"]}},
        "maps": {"m": {"source": "tangent", "target": "s", "components": ["x"]}}})"),
                    InputError);
    // Quotient target naming an unknown distribution.
    CHECK_THROWS_AS(parse_system_file(R"({"chart": {"base": ["x"]}, "controls": [["1"]],
        "scenarios": {"s": {"target": "quotient:D", "x0": [0, 0],
                            "controls": {"breakpoints": [0], "values": [[1]]}, "t_end": 1}}})"),
                    InputError);
}

TEST_CASE("points") {
    SystemFile f = load_system_file(fixture("worked_example.json"));
    const auto &base = f.system.chart.base();
    Point origin = resolve_point(f, "", base);
    CHECK(origin.size() == 3);
    CHECK(origin.at("x2") == 0);
    Point p = resolve_point(f, "p", base);
    CHECK(p.at("x1") == 1);
    Point q = resolve_point(f, "x2=1/2,x3=-3", base);
    CHECK(q.at("x1") == 0);
    CHECK(q.at("x2") == Rational(1, 2));
    CHECK(q.at("x3") == -3);
    CHECK_THROWS_AS(resolve_point(f, "nowhere", base), InputError);
    CHECK_THROWS_AS(resolve_point(f, "z=1", base), InputError);

    SystemFile g = parse_system_file(R"({"chart": {"base": ["x"]}, "controls": [["1"]],
        "points": {"a": {"x": 0.25}, "b": {"x": "2/3"}}})");
    CHECK(g.points.at("a").at("x") == Rational(1, 4));
    CHECK(g.points.at("b").at("x") == Rational(2, 3));
}

TEST_CASE("resolve_system") {
    SystemFile f = load_system_file(fixture("worked_example.json"));
    TangentSystem lifted = lift_system(f.system);
    CHECK(&resolve_system(f, lifted, "tangent") == &lifted);
    CHECK(resolve_system(f, lifted, "changed").coords->at(0) == "z1");
    CHECK_THROWS_AS(resolve_system(f, lifted, "nothing"), InputError);
}

TEST_CASE("round trip of every fixture") {
    for (const auto &name : kValid) {
        CAPTURE(name);
        SystemFile f = load_system_file(fixture(name));
        const std::string text = emit_system_file(f);
        SystemFile g = parse_system_file(text);
        CHECK(equivalent(f, g));
        CHECK(emit_system_file(g) == text);
    }
}

TEST_CASE("equivalent notices changes") {
    SystemFile f = load_system_file(fixture("worked_example.json"));
    SystemFile g = f;
    CHECK(equivalent(f, g));
    g.scenarios.at("tau").tol = 1e-5;
    CHECK_FALSE(equivalent(f, g));
    SystemFile h = load_system_file(fixture("wrong_quotient.json"));
    CHECK_FALSE(equivalent(f, h));
}

TEST_CASE("round trip of random connections") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        CAPTURE(trial);
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        std::vector<std::string> base;
        for (std::size_t i = 0; i < n; ++i)
            base.push_back("q" + std::to_string(i + 1));
        Chart chart(base);
        std::vector<ChristoffelEntry> entries;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j)
                    if (testing::draw(rng, 0, 2) == 0)
                        entries.push_back({k, i, j, testing::random_rational(rng, base)});
        std::vector<VectorField> controls = {testing::random_field(rng, chart.base_coords(), 2),
                                             VectorField::basis(chart.base_coords(), 0)};
        SystemFile f{AccsSystem(chart, Connection(chart, entries), controls), {}, {}, {}, {}, {}};
        f.distributions["D"] = {{testing::random_field(rng, chart.base_coords(), 2)}, std::nullopt};
        Point p;
        for (const auto &b : base) {
            p[b] = Rational(testing::draw(rng, -9, 9), testing::draw(rng, 1, 7));
            p[b].canonicalize();
        }
        f.points["p"] = p;
        SystemFile g = parse_system_file(emit_system_file(f));
        CHECK(equivalent(f, g));
    }
}
