#include "mechquot/system_file.hpp"

#include "mechquot/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mechquot {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> string_list(const json &j, const std::string &what) {
    if (!j.is_array())
        throw InputError(what + " must be a list of names");
    std::vector<std::string> out;
    for (const auto &e : j) {
        if (!e.is_string())
            throw InputError(what + " must contain strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

RationalExpr expr(const json &j, const std::vector<std::string> &vars, const std::string &what) {
    std::string text;
    if (j.is_string())
        text = j.get<std::string>();
    else if (j.is_number_integer())
        text = j.dump();
    else
        throw InputError(what + " must be an expression string");
    try {
        return parse_expr(text, vars);
    } catch (const ParseError &e) {
        throw ParseError(e.kind(), e.position(), what + ": " + e.what());
    }
}

VectorField field(const json &j, const CoordList &coords, const std::string &what) {
    if (!j.is_array() || j.size() != coords->size())
        throw InputError(what + " must list " + std::to_string(coords->size()) + " components");
    std::vector<RationalExpr> comps;
    for (std::size_t i = 0; i < j.size(); ++i)
        comps.push_back(expr(j[i], *coords, what + "[" + std::to_string(i) + "]"));
    return VectorField(coords, std::move(comps));
}

Rational number(const json &j, const std::string &what) {
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number())
        return parse_rational(j.dump());
    throw InputError(what + " must be a number");
}

double real(const json &j, const std::string &what) {
    if (!j.is_number())
        throw InputError(what + " must be a number");
    return j.get<double>();
}

Point point(const json &j, const std::vector<std::string> &coords, const std::string &what) {
    if (!j.is_object())
        throw InputError(what + " must map coordinate names to numbers");
    Point p;
    for (const auto &[k, v] : j.items()) {
        if (std::find(coords.begin(), coords.end(), k) == coords.end())
            throw InputError(what + ": unknown coordinate '" + k + "'");
        p[k] = number(v, what + "." + k);
    }
    for (const auto &c : coords)
        if (!p.count(c))
            throw InputError(what + ": missing coordinate '" + c + "'");
    return p;
}

const json &required(const json &obj, const char *key, const std::string &what) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw InputError(what + ": missing '" + key + "'");
    return *it;
}

std::size_t index(const json &j, std::size_t n, const std::string &what) {
    if (!j.is_number_integer())
        throw InputError(what + " must be an integer");
    const auto v = j.get<long long>();
    if (v < 1 || static_cast<std::size_t>(v) > n)
        throw InputError(what + " = " + std::to_string(v) + " is out of range 1.." + std::to_string(n));
    return static_cast<std::size_t>(v - 1);
}

CoordList coords_of(const SystemFile &f, const std::string &name, const std::string &what) {
    if (name == "tangent")
        return f.system.chart.tangent_coords();
    auto it = f.systems.find(name);
    if (it == f.systems.end())
        throw InputError(what + ": unknown system '" + name + "'");
    return it->second.coords;
}

bool is_quotient_target(const std::string &t) { return t.rfind("quotient:", 0) == 0; }

void check_quotient_target(const SystemFile &f, const std::string &t, const std::string &what) {
    if (!f.distributions.count(t.substr(9)))
        throw InputError(what + ": unknown distribution in '" + t + "'");
}

ControlSignal signal(const json &j, const std::string &what) {
    ControlSignal s;
    for (const auto &b : required(j, "breakpoints", what))
        s.breakpoints.push_back(real(b, what + ".breakpoints"));
    for (const auto &v : required(j, "values", what)) {
        std::vector<double> row;
        if (!v.is_array())
            throw InputError(what + ".values must be a list of lists");
        for (const auto &x : v)
            row.push_back(real(x, what + ".values"));
        s.values.push_back(std::move(row));
    }
    return s;
}

SystemFile parse_document(const json &doc) {
    if (!doc.is_object())
        throw InputError("system file must be a JSON object");
    const json &chart_j = required(doc, "chart", "file");
    std::vector<std::string> base = string_list(required(chart_j, "base", "chart"), "chart.base");
    std::vector<std::string> velocity;
    if (chart_j.contains("velocity"))
        velocity = string_list(chart_j["velocity"], "chart.velocity");
    Chart chart(base, velocity);
    const std::size_t n = chart.dim();

    std::vector<ChristoffelEntry> entries;
    if (doc.contains("christoffel")) {
        const json &cj = doc["christoffel"];
        if (!cj.is_array())
            throw InputError("christoffel must be a list");
        for (std::size_t e = 0; e < cj.size(); ++e) {
            const std::string what = "christoffel[" + std::to_string(e) + "]";
            const json &entry = cj[e];
            entries.push_back({index(required(entry, "k", what), n, what + ".k"),
                               index(required(entry, "i", what), n, what + ".i"),
                               index(required(entry, "j", what), n, what + ".j"),
                               expr(required(entry, "expr", what), base, what + ".expr")});
        }
    }
    Connection conn(chart, entries);

    std::vector<VectorField> controls;
    const json &controls_j = required(doc, "controls", "file");
    if (!controls_j.is_array() || controls_j.empty())
        throw InputError("controls must be a nonempty list of fields");
    for (std::size_t i = 0; i < controls_j.size(); ++i)
        controls.push_back(field(controls_j[i], chart.base_coords(), "controls[" + std::to_string(i) + "]"));

    SystemFile f{AccsSystem(chart, conn, std::move(controls)), {}, {}, {}, {}, {}};

    if (doc.contains("points"))
        for (const auto &[name, p] : doc["points"].items())
            f.points[name] = point(p, base, "points." + name);

    if (doc.contains("distributions"))
        for (const auto &[name, d] : doc["distributions"].items()) {
            const std::string what = "distributions." + name;
            NamedDistribution nd;
            const json &gens = required(d, "generators", what);
            if (!gens.is_array() || gens.empty())
                throw InputError(what + ".generators must be a nonempty list");
            for (std::size_t i = 0; i < gens.size(); ++i)
                nd.generators.push_back(
                    field(gens[i], chart.base_coords(), what + ".generators[" + std::to_string(i) + "]"));
            if (d.contains("base_point")) {
                const json &bp = d["base_point"];
                if (bp.is_string()) {
                    auto it = f.points.find(bp.get<std::string>());
                    if (it == f.points.end())
                        throw InputError(what + ": unknown point '" + bp.get<std::string>() + "'");
                    nd.base_point = it->second;
                } else {
                    nd.base_point = point(bp, base, what + ".base_point");
                }
            }
            Distribution(chart.base_coords(), nd.generators, nd.base_point);
            f.distributions.emplace(name, std::move(nd));
        }

    if (doc.contains("systems"))
        for (const auto &[name, s] : doc["systems"].items()) {
            const std::string what = "systems." + name;
            if (name == "tangent" || is_quotient_target(name))
                throw InputError(what + ": reserved system name");
            auto coords = std::make_shared<const std::vector<std::string>>(
                string_list(required(s, "coords", what), what + ".coords"));
            (void)Chart(*coords); // validates the names
            TangentSystem t{coords, field(required(s, "drift", what), coords, what + ".drift"), {}};
            if (s.contains("inputs"))
                for (std::size_t i = 0; i < s["inputs"].size(); ++i)
                    t.inputs.push_back(
                        field(s["inputs"][i], coords, what + ".inputs[" + std::to_string(i) + "]"));
            f.systems.emplace(name, std::move(t));
        }

    if (doc.contains("maps"))
        for (const auto &[name, m] : doc["maps"].items()) {
            const std::string what = "maps." + name;
            MapSpec spec;
            spec.source = required(m, "source", what).get<std::string>();
            spec.target = required(m, "target", what).get<std::string>();
            CoordList src = coords_of(f, spec.source, what);
            const json &comps = required(m, "components", what);
            for (std::size_t i = 0; i < comps.size(); ++i)
                spec.components.push_back(expr(comps[i], *src, what + ".components[" + std::to_string(i) + "]"));
            if (is_quotient_target(spec.target)) {
                check_quotient_target(f, spec.target, what);
            } else {
                CoordList tgt = coords_of(f, spec.target, what);
                if (tgt->size() != spec.components.size())
                    throw InputError(what + ": " + std::to_string(spec.components.size()) +
                                     " components for a target with " + std::to_string(tgt->size()) +
                                     " coordinates");
            }
            f.maps.emplace(name, std::move(spec));
        }

    if (doc.contains("scenarios"))
        for (const auto &[name, s] : doc["scenarios"].items()) {
            const std::string what = "scenarios." + name;
            Scenario sc;
            if (s.contains("source"))
                sc.source = s["source"].get<std::string>();
            CoordList src = coords_of(f, sc.source, what);
            if (s.contains("target")) {
                sc.target = s["target"].get<std::string>();
                if (is_quotient_target(*sc.target))
                    check_quotient_target(f, *sc.target, what);
                else
                    coords_of(f, *sc.target, what);
            }
            if (s.contains("map")) {
                sc.map = s["map"].get<std::string>();
                auto it = f.maps.find(*sc.map);
                if (it == f.maps.end())
                    throw InputError(what + ": unknown map '" + *sc.map + "'");
                if (it->second.source != sc.source || !sc.target || it->second.target != *sc.target)
                    throw InputError(what + ": map '" + *sc.map + "' does not go from '" + sc.source +
                                     "' to the scenario target");
            } else if (sc.target && !is_quotient_target(*sc.target)) {
                throw InputError(what + ": a map is required for target '" + *sc.target + "'");
            }
            for (const auto &x : required(s, "x0", what))
                sc.x0.push_back(real(x, what + ".x0"));
            if (sc.x0.size() != src->size())
                throw InputError(what + ": x0 has " + std::to_string(sc.x0.size()) + " entries, expected " +
                                 std::to_string(src->size()));
            sc.controls = signal(required(s, "controls", what), what + ".controls");
            sc.t_end = real(required(s, "t_end", what), what + ".t_end");
            if (s.contains("dt"))
                sc.dt = real(s["dt"], what + ".dt");
            if (s.contains("tol"))
                sc.tol = real(s["tol"], what + ".tol");
            f.scenarios.emplace(name, std::move(sc));
        }

    for (const auto &[key, value] : doc.items()) {
        static const std::vector<std::string> known = {"chart", "christoffel", "controls", "distributions",
                                                       "points", "systems", "maps", "scenarios"};
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw InputError("unknown top-level key '" + key + "'");
    }
    return f;
}

ordered_json field_json(const VectorField &x) {
    ordered_json j = ordered_json::array();
    for (const auto &c : x.components())
        j.push_back(c.to_string());
    return j;
}

ordered_json point_json(const Point &p, const std::vector<std::string> &order) {
    ordered_json j = ordered_json::object();
    for (const auto &c : order)
        j[c] = rational_to_string(p.at(c));
    return j;
}

bool same_fields(const std::vector<VectorField> &a, const std::vector<VectorField> &b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (*a[i].coords() != *b[i].coords() || !(a[i] == b[i]))
            return false;
    return true;
}

bool same_exprs(const std::vector<RationalExpr> &a, const std::vector<RationalExpr> &b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i]))
            return false;
    return true;
}

} // namespace

SystemFile parse_system_file(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    try {
        return parse_document(doc);
    } catch (const json::exception &e) {
        throw InputError(std::string("malformed system file: ") + e.what());
    }
}

SystemFile load_system_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system_file(buf.str());
}

std::string emit_system_file(const SystemFile &f) {
    const Chart &chart = f.system.chart;
    ordered_json doc;
    doc["chart"]["base"] = chart.base();
    doc["chart"]["velocity"] = chart.velocity();
    doc["christoffel"] = ordered_json::array();
    for (const auto &e : f.system.connection.entries())
        doc["christoffel"].push_back({{"k", e.upper + 1},
                                      {"i", e.lower1 + 1},
                                      {"j", e.lower2 + 1},
                                      {"expr", e.value.to_string()}});
    doc["controls"] = ordered_json::array();
    for (const auto &g : f.system.controls)
        doc["controls"].push_back(field_json(g));
    if (!f.points.empty())
        for (const auto &[name, p] : f.points)
            doc["points"][name] = point_json(p, chart.base());
    if (!f.distributions.empty())
        for (const auto &[name, d] : f.distributions) {
            ordered_json j;
            j["generators"] = ordered_json::array();
            for (const auto &g : d.generators)
                j["generators"].push_back(field_json(g));
            if (d.base_point)
                j["base_point"] = point_json(*d.base_point, chart.base());
            doc["distributions"][name] = j;
        }
    if (!f.systems.empty())
        for (const auto &[name, s] : f.systems) {
            ordered_json j;
            j["coords"] = *s.coords;
            j["drift"] = field_json(s.drift);
            j["inputs"] = ordered_json::array();
            for (const auto &g : s.inputs)
                j["inputs"].push_back(field_json(g));
            doc["systems"][name] = j;
        }
    if (!f.maps.empty())
        for (const auto &[name, m] : f.maps) {
            ordered_json j;
            j["source"] = m.source;
            j["target"] = m.target;
            j["components"] = ordered_json::array();
            for (const auto &c : m.components)
                j["components"].push_back(c.to_string());
            doc["maps"][name] = j;
        }
    if (!f.scenarios.empty())
        for (const auto &[name, s] : f.scenarios) {
            ordered_json j;
            j["source"] = s.source;
            if (s.target)
                j["target"] = *s.target;
            if (s.map)
                j["map"] = *s.map;
            j["x0"] = s.x0;
            j["controls"]["breakpoints"] = s.controls.breakpoints;
            j["controls"]["values"] = s.controls.values;
            j["t_end"] = s.t_end;
            j["dt"] = s.dt;
            j["tol"] = s.tol;
            doc["scenarios"][name] = j;
        }
    return doc.dump(2) + "\n";
}

const TangentSystem &resolve_system(const SystemFile &file, const TangentSystem &lifted,
                                    const std::string &name) {
    if (name == "tangent")
        return lifted;
    auto it = file.systems.find(name);
    if (it == file.systems.end())
        throw InputError("unknown system '" + name + "'");
    return it->second;
}

Point resolve_point(const SystemFile &file, const std::string &spec,
                    const std::vector<std::string> &coords) {
    Point p;
    for (const auto &c : coords)
        p[c] = 0;
    if (spec.empty())
        return p;
    if (spec.find('=') == std::string::npos) {
        auto it = file.points.find(spec);
        if (it == file.points.end())
            throw InputError("unknown point '" + spec + "'");
        for (const auto &[k, v] : it->second)
            p[k] = v;
        return p;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InputError("point entries must look like name=value, got '" + item + "'");
        const std::string name = item.substr(0, eq);
        if (!p.count(name))
            throw InputError("unknown coordinate '" + name + "' in point");
        p[name] = parse_rational(item.substr(eq + 1));
    }
    return p;
}

bool equivalent(const SystemFile &a, const SystemFile &b) {
    const Chart &ca = a.system.chart;
    const Chart &cb = b.system.chart;
    if (!(ca == cb))
        return false;
    const std::size_t n = ca.dim();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!(a.system.connection.gamma(k, i, j) == b.system.connection.gamma(k, i, j)))
                    return false;
    if (!same_fields(a.system.controls, b.system.controls))
        return false;
    if (a.points != b.points)
        return false;
    if (a.distributions.size() != b.distributions.size())
        return false;
    for (const auto &[name, d] : a.distributions) {
        auto it = b.distributions.find(name);
        if (it == b.distributions.end() || !same_fields(d.generators, it->second.generators) ||
            d.base_point != it->second.base_point)
            return false;
    }
    if (a.systems.size() != b.systems.size())
        return false;
    for (const auto &[name, s] : a.systems) {
        auto it = b.systems.find(name);
        if (it == b.systems.end() || *s.coords != *it->second.coords || !(s.drift == it->second.drift) ||
            !same_fields(s.inputs, it->second.inputs))
            return false;
    }
    if (a.maps.size() != b.maps.size())
        return false;
    for (const auto &[name, m] : a.maps) {
        auto it = b.maps.find(name);
        if (it == b.maps.end() || m.source != it->second.source || m.target != it->second.target ||
            !same_exprs(m.components, it->second.components))
            return false;
    }
    if (a.scenarios.size() != b.scenarios.size())
        return false;
    for (const auto &[name, s] : a.scenarios) {
        auto it = b.scenarios.find(name);
        if (it == b.scenarios.end())
            return false;
        const Scenario &t = it->second;
        if (s.source != t.source || s.target != t.target || s.map != t.map || s.x0 != t.x0 ||
            s.controls.breakpoints != t.controls.breakpoints || s.controls.values != t.controls.values ||
            s.t_end != t.t_end || s.dt != t.dt || s.tol != t.tol)
            return false;
    }
    return true;
}

} // namespace mechquot
