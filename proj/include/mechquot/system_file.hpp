#pragma once

// JSON system description. Indices are 1-based; Christoffel entries give
// Gamma^k_ij with either order of i and j. Expressions are strings in the
// expression grammar over the declared chart. Example:
//
//   {
//     "chart": {"base": ["x1", "x2"], "velocity": ["y1", "y2"]},
//     "christoffel": [{"k": 2, "i": 2, "j": 2, "expr": "x1"}],
//     "controls": [["0", "1"]],
//     "distributions": {"D1": {"generators": [["1", "0"]], "base_point": {"x1": "0", "x2": "0"}}},
//     "points": {"origin": {"x1": "0", "x2": "0"}},
//     "systems": {"line": {"coords": ["x2", "y2"], "drift": ["y2", "0"], "inputs": [["0", "1"]]}},
//     "maps": {"drop": {"source": "tangent", "target": "line", "components": ["x2", "y2"]}},
//     "scenarios": {"s": {"source": "tangent", "target": "quotient:D1", "x0": [0, 0, 1, 0],
//                         "controls": {"breakpoints": [0], "values": [[1]]},
//                         "t_end": 0.5, "dt": 0.001, "tol": 1e-6}}
//   }
//
// A scenario source is "tangent" (the lifted system) or a name in "systems".
// A target is a system name or "quotient:NAME" for the adapted quotient by
// a distribution; the map may be omitted for quotient targets.

#include "mechquot/geometry.hpp"
#include "mechquot/simulate.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mechquot {

struct NamedDistribution {
    std::vector<VectorField> generators;
    std::optional<Point> base_point;
};

struct MapSpec {
    std::string source;
    std::string target;
    std::vector<RationalExpr> components;
};

struct Scenario {
    std::string source = "tangent";
    std::optional<std::string> target;
    std::optional<std::string> map;
    std::vector<double> x0;
    ControlSignal controls;
    double t_end = 0;
    double dt = 1e-3;
    double tol = 1e-6;
};

struct SystemFile {
    AccsSystem system;
    std::map<std::string, NamedDistribution> distributions;
    std::map<std::string, Point> points;
    std::map<std::string, TangentSystem> systems;
    std::map<std::string, MapSpec> maps;
    std::map<std::string, Scenario> scenarios;
};

/// Throws InputError (or a subclass) on malformed documents.
SystemFile parse_system_file(std::string_view text);
SystemFile load_system_file(const std::string &path);
/// Pretty-printed JSON that parses back to an equivalent SystemFile.
std::string emit_system_file(const SystemFile &file);

/// Coordinates of a scenario endpoint: "tangent" or a system name.
const TangentSystem &resolve_system(const SystemFile &file, const TangentSystem &lifted,
                                    const std::string &name);

/// A named point, or an inline list "x1=0,x2=1/2". Missing coordinates of
/// `coords` default to 0.
Point resolve_point(const SystemFile &file, const std::string &spec,
                    const std::vector<std::string> &coords);

/// Exact equality of the two descriptions (expressions compared as
/// functions, floats compared exactly).
bool equivalent(const SystemFile &a, const SystemFile &b);

} // namespace mechquot
