#include "mechquot/commands.hpp"

#include "mechquot/accessibility.hpp"
#include "mechquot/errors.hpp"
#include "mechquot/identities.hpp"
#include "mechquot/quotient.hpp"
#include "mechquot/simulate.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

namespace mechquot {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kKeyWidth = 30;
constexpr const char *kGlobalNote = "local conditions hold; global structure requires completeness assumptions";

// Collects the two renderings side by side.
class Report {
public:
    ordered_json doc = ordered_json::object();

    void heading(const std::string &title) { lines_.push_back("\n[" + title + "]"); }
    void row(const std::string &key, const std::string &value) {
        std::string k = "  " + key;
        if (k.size() < kKeyWidth)
            k.resize(kKeyWidth, ' ');
        else
            k += ' ';
        lines_.push_back(k + value);
    }
    void line(const std::string &text) { lines_.push_back("  " + text); }

    std::string text() const {
        std::string s;
        for (const auto &l : lines_)
            s += l + "\n";
        return s;
    }

private:
    std::vector<std::string> lines_;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

std::string fixed(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string point_text(const Point &p, const std::vector<std::string> &order) {
    std::string s;
    for (const auto &c : order) {
        if (!s.empty())
            s += ", ";
        s += c + "=" + rational_to_string(p.at(c));
    }
    return s;
}

ordered_json point_json(const Point &p, const std::vector<std::string> &order) {
    ordered_json j = ordered_json::object();
    for (const auto &c : order)
        j[c] = rational_to_string(p.at(c));
    return j;
}

ordered_json fields_json(const std::vector<VectorField> &fields) {
    ordered_json j = ordered_json::array();
    for (const auto &f : fields)
        j.push_back(f.to_string());
    return j;
}

ordered_json witness_json(const Witness &w) {
    return {{"condition", w.condition}, {"sources", fields_json(w.sources)}, {"offender", w.offender.to_string()}};
}

void witness_rows(Report &r, const std::vector<Witness> &ws) {
    for (const auto &w : ws) {
        std::string src;
        for (const auto &s : w.sources)
            src += (src.empty() ? "" : "; ") + s.to_string();
        r.row("witness " + w.condition, w.offender.to_string() + " from " + src);
    }
}

struct Context {
    const SystemFile &file;
    const CommandOptions &options;
    Report &report;
};

std::string pick(const std::string &requested, const std::vector<std::string> &available, const char *what) {
    if (!requested.empty())
        return requested;
    if (available.size() == 1)
        return available.front();
    throw InputError(std::string("--") + what + " is required (" + std::to_string(available.size()) +
                     " available)");
}

template <class Map>
std::vector<std::string> keys(const Map &m) {
    std::vector<std::string> k;
    for (const auto &e : m)
        k.push_back(e.first);
    return k;
}

Distribution named_distribution(Context &c) {
    const std::string name = pick(c.options.distribution, keys(c.file.distributions), "distribution");
    auto it = c.file.distributions.find(name);
    if (it == c.file.distributions.end())
        throw InputError("unknown distribution '" + name + "'");
    c.report.doc["distribution"] = name;
    c.report.row("distribution", name + " = span{" + [&] {
        std::string s;
        for (const auto &g : it->second.generators)
            s += (s.empty() ? "" : ", ") + g.to_string();
        return s;
    }() + "}");
    return Distribution(c.file.system.chart.base_coords(), it->second.generators, it->second.base_point);
}

const Scenario &named_scenario(Context &c) {
    const std::string name = pick(c.options.scenario, keys(c.file.scenarios), "scenario");
    auto it = c.file.scenarios.find(name);
    if (it == c.file.scenarios.end())
        throw InputError("unknown scenario '" + name + "'");
    c.report.doc["scenario"] = name;
    c.report.row("scenario", name);
    return it->second;
}

// ------------------------------------------------------------------ commands

int check_accessibility(Context &c) {
    const AccsSystem &sys = c.file.system;
    const Chart &chart = sys.chart;
    const Point tangent_point = resolve_point(c.file, c.options.point, *chart.tangent_coords());
    Point base_point;
    for (const auto &b : chart.base())
        base_point[b] = tangent_point.at(b);

    Report &r = c.report;
    r.doc["point"] = point_json(tangent_point, *chart.tangent_coords());
    r.row("point", point_text(tangent_point, *chart.tangent_coords()));

    AccessibilityReport acc = is_geodesically_accessible(sys, base_point);
    r.heading("symmetric closure");
    ordered_json &a = r.doc["accessibility"];
    a["dimension"] = acc.dimension;
    a["sym_generic_rank"] = acc.sym_generic_rank;
    a["sym_rank_at_point"] = acc.sym_rank_at_point;
    a["geodesically_accessible"] = acc.geodesically_accessible;
    a["sym_generators"] = fields_json(acc.sym_generators);
    r.row("generic rank", std::to_string(acc.sym_generic_rank) + " of " + std::to_string(acc.dimension));
    r.row("rank at point",
          "sym rank " + std::to_string(acc.sym_rank_at_point) + " of " + std::to_string(acc.dimension));
    for (std::size_t i = 0; i < acc.sym_generators.size(); ++i)
        r.row("generator " + std::to_string(i + 1), acc.sym_generators[i].to_string());
    r.row("geodesically accessible", yes_no(acc.geodesically_accessible));

    // The nu-sequence is informational; its caps do not decide the exit code.
    r.heading("mechanical form (nu-sequence)");
    ordered_json &nj = r.doc["nu"];
    try {
        NuOptions no;
        if (c.options.max_level)
            no.max_level = *c.options.max_level;
        NuReport nu = check_mechanical_form(lift_system(sys), tangent_point, no);
        nj["truncation_level"] = nu.truncation_level;
        nj["stabilized_at"] = nu.stabilized_at ? ordered_json(*nu.stabilized_at) : ordered_json(nullptr);
        nj["nu_generic_dim"] = nu.nu_generic_dim;
        nj["nu_dim"] = nu.nu_dim;
        nj["nu_plus_bracket_generic_dim"] = nu.nu_plus_bracket_generic_dim;
        nj["nu_plus_bracket_dim"] = nu.nu_plus_bracket_dim;
        nj["dimension_condition"] = nu.dimension_condition;
        nj["nu_abelian"] = nu.nu_abelian;
        nj["drift_in_nu"] = nu.drift_in_nu;
        r.row("levels computed", std::to_string(nu.truncation_level) +
                                     (nu.stabilized_at ? " (stable from " + std::to_string(*nu.stabilized_at) + ")"
                                                       : " (truncated)"));
        r.row("dim nu", std::to_string(nu.nu_dim) + " at point, " + std::to_string(nu.nu_generic_dim) +
                            " generic, target " + std::to_string(nu.n));
        r.row("dim nu + [f0, nu]", std::to_string(nu.nu_plus_bracket_dim) + " at point, " +
                                       std::to_string(nu.nu_plus_bracket_generic_dim) + " generic, target " +
                                       std::to_string(2 * nu.n));
        r.row("dimension condition", yes_no(nu.dimension_condition));
        r.row("[nu, nu] = 0", yes_no(nu.nu_abelian));
        if (nu.commutator_witness) {
            nj["commutator_witness"] = {{"left", nu.commutator_witness->left.to_string()},
                                        {"right", nu.commutator_witness->right.to_string()},
                                        {"bracket", nu.commutator_witness->bracket.to_string()}};
            r.row("witness [X, Y]", nu.commutator_witness->bracket.to_string());
        }
        r.row("f0 in nu at point", yes_no(nu.drift_in_nu));
        r.line("note: [nu, nu] = 0 is tested on the computed generators only");
    } catch (const ResourceLimitError &e) {
        nj["error"] = e.what();
        r.row("aborted", e.what());
    }
    return acc.geodesically_accessible ? kExitHolds : kExitFails;
}

int check_quotient(Context &c) {
    Distribution d = named_distribution(c);
    Report &r = c.report;
    QuotientVerdict direct = check_quotient_conditions(c.file.system, d);
    LiftedVerdict lifted = verify_lifted_invariance(c.file.system, d);

    r.heading("direct conditions");
    ordered_json &dj = r.doc["direct"];
    dj["rank"] = direct.rank.generic_rank;
    dj["involutive"] = direct.involutive;
    dj["connection_restricts"] = direct.connection_restricts;
    dj["curvature"] = direct.curvature_ok;
    dj["controls_invariant"] = direct.controls_invariant;
    dj["overall"] = direct.overall;
    dj["witnesses"] = ordered_json::array();
    for (const auto &w : direct.witnesses)
        dj["witnesses"].push_back(witness_json(w));
    r.row("rank", std::to_string(direct.rank.generic_rank) +
                      (direct.rank.pointwise_rank ? " (at base point " + std::to_string(*direct.rank.pointwise_rank) + ")"
                                                  : ""));
    r.row("involutive", yes_no(direct.involutive));
    r.row("connection restricts", yes_no(direct.connection_restricts));
    r.row("curvature", yes_no(direct.curvature_ok));
    r.row("[g_i, D] in D", yes_no(direct.controls_invariant));
    witness_rows(r, direct.witnesses);
    r.row("overall", direct.overall ? "pass" : "fail");

    r.heading("lifted invariance");
    ordered_json &lj = r.doc["lifted"];
    lj["generators"] = fields_json(lifted.generators);
    lj["spray_invariant"] = lifted.spray_invariant;
    lj["controls_invariant"] = lifted.controls_invariant;
    lj["involutive"] = lifted.involutive;
    lj["overall"] = lifted.overall;
    lj["witnesses"] = ordered_json::array();
    for (const auto &w : lifted.witnesses)
        lj["witnesses"].push_back(witness_json(w));
    r.row("generators", std::to_string(lifted.generators.size()));
    r.row("spray invariant", yes_no(lifted.spray_invariant));
    r.row("lifted controls invariant", yes_no(lifted.controls_invariant));
    r.row("involutive", yes_no(lifted.involutive));
    witness_rows(r, lifted.witnesses);
    r.row("overall", lifted.overall ? "pass" : "fail");

    r.heading("verdict");
    const bool agree = direct.overall == lifted.overall;
    r.doc["routes_agree"] = agree;
    r.row("routes agree", yes_no(agree));
    if (!agree) {
        r.line("internal error: the two routes disagree");
        return kExitInternal;
    }
    r.doc["overall"] = direct.overall;
    r.row("quotient exists", yes_no(direct.overall));
    r.line("note: [g_i, D] in D is checked on the generators of D");
    if (direct.overall) {
        r.doc["note"] = kGlobalNote;
        r.line(kGlobalNote);
    }
    return direct.overall ? kExitHolds : kExitFails;
}

int build_quotient(Context &c) {
    Distribution d = named_distribution(c);
    Report &r = c.report;
    QuotientSystem q = build_quotient_system(c.file.system, d);
    const Chart &chart = c.file.system.chart;

    auto names_of = [&](const std::vector<std::size_t> &idx) {
        ordered_json j = ordered_json::array();
        for (auto i : idx)
            j.push_back(chart.base()[i]);
        return j;
    };
    auto joined = [](const ordered_json &j) {
        std::string s;
        for (const auto &e : j)
            s += (s.empty() ? "" : ", ") + e.get<std::string>();
        return s;
    };
    r.heading("quotient");
    r.doc["removed"] = names_of(q.removed);
    r.doc["kept"] = names_of(q.kept);
    r.doc["inputs"] = q.input_count;
    r.row("removed", joined(r.doc["removed"]));
    r.row("kept", q.kept.empty() ? "(none)" : joined(r.doc["kept"]));
    if (!q.system) {
        r.doc["emitted"] = nullptr;
        r.line("D is the whole tangent space; the quotient is a point");
        return kExitHolds;
    }

    const AccsSystem &red = *q.system;
    for (const auto &e : red.connection.entries()) {
        const auto &b = red.chart.base();
        r.row("Gamma^" + b[e.upper] + "_{" + b[e.lower1] + " " + b[e.lower2] + "}", e.value.to_string());
    }
    for (std::size_t a = 0; a < red.controls.size(); ++a)
        r.row("control " + std::to_string(a + 1), red.controls[a].to_string());
    TangentSystem lifted = lift_system(red);
    const std::size_t k = red.chart.dim();
    ordered_json eq = ordered_json::object();
    for (std::size_t i = 0; i < k; ++i) {
        const std::string &v = red.chart.velocity()[i];
        eq[v] = lifted.drift[k + i].to_string();
        r.row(v + "' drift", lifted.drift[k + i].to_string());
    }
    r.doc["velocity_drift"] = eq;

    SystemFile out{red, {}, {}, {}, {}, {}};
    const std::string text = emit_system_file(out);
    const bool round_trip = equivalent(parse_system_file(text), out);
    r.doc["round_trip"] = round_trip;
    r.row("round trip", yes_no(round_trip));
    if (!round_trip)
        return kExitInternal;
    if (!c.options.out.empty()) {
        std::ofstream f(c.options.out);
        if (!f || !(f << text))
            throw InputError("cannot write '" + c.options.out + "'");
        r.doc["written"] = c.options.out;
        r.row("written", c.options.out);
    }
    r.doc["emitted"] = ordered_json::parse(text);
    return kExitHolds;
}

void write_trajectory(const std::string &path, const Trajectory &t, Report &r) {
    if (path.empty())
        return;
    std::ofstream f(path);
    if (!f)
        throw InputError("cannot write '" + path + "'");
    write_csv(f, t);
    r.doc["written"] = path;
    r.row("written", path);
}

ordered_json state_json(const Trajectory &t, std::size_t k) {
    ordered_json j = ordered_json::object();
    for (std::size_t i = 0; i < t.names.size(); ++i)
        j[t.names[i]] = t.states[k][i];
    return j;
}

int simulate(Context &c) {
    const Scenario &sc = named_scenario(c);
    Report &r = c.report;
    const TangentSystem lifted = lift_system(c.file.system);
    const TangentSystem &src = resolve_system(c.file, lifted, sc.source);
    const double dt = c.options.dt.value_or(sc.dt);
    r.doc["source"] = sc.source;
    r.doc["dt"] = dt;
    r.doc["t_end"] = sc.t_end;
    r.row("source", sc.source);
    r.row("dt", fixed(dt));
    r.row("t_end", fixed(sc.t_end));
    Trajectory t = integrate(src, sc.x0, sc.controls, sc.t_end, dt);
    r.heading("trajectory");
    r.doc["steps"] = t.times.size() - 1;
    r.doc["final"] = state_json(t, t.states.size() - 1);
    r.row("steps", std::to_string(t.times.size() - 1));
    for (std::size_t i = 0; i < t.names.size(); ++i)
        r.row("final " + t.names[i], sci(t.states.back()[i]));
    write_trajectory(c.options.out, t, r);
    return kExitHolds;
}

int check_commutation(Context &c) {
    const Scenario &sc = named_scenario(c);
    Report &r = c.report;
    if (!sc.target)
        throw InputError("scenario has no target");
    const TangentSystem lifted = lift_system(c.file.system);
    const TangentSystem &src = resolve_system(c.file, lifted, sc.source);
    const double dt = c.options.dt.value_or(sc.dt);
    const double tol = c.options.tol.value_or(sc.tol);

    TangentSystem target_store;
    const TangentSystem *target = nullptr;
    QuotientMap map;
    if (sc.target->rfind("quotient:", 0) == 0) {
        if (sc.source != "tangent")
            throw InputError("quotient targets need the tangent system as source");
        const std::string dname = sc.target->substr(9);
        const auto &nd = c.file.distributions.at(dname);
        Distribution d(c.file.system.chart.base_coords(), nd.generators, nd.base_point);
        QuotientSystem q = build_quotient_system(c.file.system, d);
        if (!q.system)
            throw InputError("the quotient by '" + dname + "' is a point");
        target_store = lift_system(*q.system);
        target = &target_store;
        map = adapted_projection(c.file.system.chart, q);
    } else {
        target = &resolve_system(c.file, lifted, *sc.target);
        const MapSpec &m = c.file.maps.at(*sc.map);
        map = QuotientMap{*src.coords, *target->coords, m.components};
    }
    r.doc["source"] = sc.source;
    r.doc["target"] = *sc.target;
    r.doc["dt"] = dt;
    r.doc["t_end"] = sc.t_end;
    r.doc["tol"] = tol;
    r.row("source", sc.source);
    r.row("target", *sc.target);
    {
        std::string s;
        for (std::size_t i = 0; i < map.target.size(); ++i)
            s += (i ? ", " : "") + map.target[i] + " = " + map.components[i].to_string();
        r.row("map", s);
        r.doc["map"] = s;
    }
    r.row("dt", fixed(dt));
    r.row("t_end", fixed(sc.t_end));

    CommutationReport rep = check_commutation(src, *target, map, sc.x0, sc.controls, sc.t_end, dt, tol);
    r.heading("commutation");
    r.doc["residual"] = rep.residual;
    r.doc["residual_time"] = rep.residual_time;
    r.doc["passed"] = rep.passed;
    r.row("sup residual", sci(rep.residual));
    r.row("at t", fixed(rep.residual_time));
    r.row("tolerance", sci(tol));
    r.row("commutes", yes_no(rep.passed));

    if (!c.options.out.empty()) {
        Trajectory both{{}, rep.target.times, {}};
        both.names = rep.target.names;
        for (const auto &n : rep.projected.names)
            both.names.push_back("mapped_" + n);
        for (std::size_t k = 0; k < rep.target.states.size(); ++k) {
            auto row = rep.target.states[k];
            row.insert(row.end(), rep.projected.states[k].begin(), rep.projected.states[k].end());
            both.states.push_back(std::move(row));
        }
        write_trajectory(c.options.out, both, r);
    }
    return rep.passed ? kExitHolds : kExitFails;
}

int verify_identities(Context &c) {
    Report &r = c.report;
    IdentitySuiteOptions o;
    o.seed = c.options.seed;
    r.doc["seed"] = o.seed;
    r.row("seed", std::to_string(o.seed));
    std::vector<IdentityTrial> trials = run_identity_suite(c.file.system.connection, o);
    std::optional<std::string> first;
    ordered_json tj = ordered_json::array();
    for (std::size_t t = 0; t < trials.size(); ++t) {
        const auto &tr = trials[t];
        r.heading("trial " + std::to_string(t + 1));
        r.row("X", tr.x.to_string());
        r.row("Y", tr.y.to_string());
        r.row("W", tr.w.to_string());
        r.row("f", tr.f.to_string());
        ordered_json checks = ordered_json::object();
        for (const auto &ch : tr.checks) {
            checks[ch.name] = ch.holds;
            r.row(ch.name, ch.holds ? "holds" : "VIOLATED");
            if (!ch.holds && !first)
                first = ch.name;
        }
        tj.push_back({{"x", tr.x.to_string()},
                      {"y", tr.y.to_string()},
                      {"w", tr.w.to_string()},
                      {"f", tr.f.to_string()},
                      {"checks", checks}});
    }
    r.doc["trials"] = tj;
    r.heading("verdict");
    if (first) {
        r.doc["first_violation"] = *first;
        r.row("first violation", *first);
        return kExitFails;
    }
    r.row("all identities hold", "yes");
    return kExitHolds;
}

const std::map<std::string, std::function<int(Context &)>> &table() {
    static const std::map<std::string, std::function<int(Context &)>> t = {
        {"check-accessibility", check_accessibility}, {"check-quotient", check_quotient},
        {"build-quotient", build_quotient},           {"simulate", simulate},
        {"check-commutation", check_commutation},     {"verify-identities", verify_identities},
    };
    return t;
}

const char *status_name(int code) {
    switch (code) {
    case kExitHolds:
        return "holds";
    case kExitFails:
        return "fails";
    case kExitInput:
        return "input_error";
    case kExitResource:
        return "resource_limit";
    default:
        return "internal_error";
    }
}

CommandResult finish(Report &r, int code) {
    r.doc["exit_code"] = code;
    r.doc["status"] = status_name(code);
    r.heading("result");
    r.row("status", status_name(code));
    r.row("exit code", std::to_string(code));
    return CommandResult{code, r.text(), r.doc.dump(2) + "\n"};
}

void header(Report &r, const std::string &command, const std::string &label) {
    r.doc["command"] = command;
    r.doc["file"] = label;
    r.line("mechquot " + command + " " + label);
    r.heading("input");
}

template <class F>
int guarded(Report &r, F &&body) {
    auto fail = [&](int code, const std::string &kind, const std::string &what) {
        r.doc["error"] = {{"kind", kind}, {"message", what}};
        r.heading("error");
        r.row(kind, what);
        return code;
    };
    try {
        return body();
    } catch (const PreconditionError &e) {
        r.doc["error"] = {{"kind", "precondition"}, {"code", e.code()}, {"message", e.what()}};
        r.heading("error");
        r.row(e.code(), e.what());
        return kExitFails;
    } catch (const ResourceLimitError &e) {
        return fail(kExitResource, "resource limit", e.what());
    } catch (const IntegrationError &e) {
        r.doc["error"] = {{"kind", "integration"}, {"time", e.time()}, {"message", e.what()}};
        r.heading("error");
        r.row("integration failure", e.what());
        return kExitInput;
    } catch (const DomainError &e) {
        return fail(kExitInput, "domain", e.what());
    } catch (const Error &e) {
        return fail(kExitInput, "input", e.what());
    } catch (const std::exception &e) {
        return fail(kExitInternal, "internal", e.what());
    }
}

} // namespace

const std::vector<std::string> &command_names() {
    static const std::vector<std::string> names = {"check-accessibility", "check-quotient",    "build-quotient",
                                                   "simulate",            "check-commutation", "verify-identities"};
    return names;
}

CommandResult run_command(const std::string &command, const SystemFile &file, const std::string &label,
                          const CommandOptions &options) {
    Report r;
    header(r, command, label);
    auto it = table().find(command);
    if (it == table().end())
        return finish(r, guarded(r, [&]() -> int { throw InputError("unknown command '" + command + "'"); }));
    Context c{file, options, r};
    return finish(r, guarded(r, [&] { return it->second(c); }));
}

CommandResult run_command(const std::string &command, const std::string &path, const CommandOptions &options) {
    std::optional<SystemFile> file;
    Report r;
    const int code = guarded(r, [&] {
        file = load_system_file(path);
        return kExitHolds;
    });
    if (!file) {
        Report failed;
        header(failed, command, path);
        failed.doc["error"] = r.doc["error"];
        failed.heading("error");
        failed.row("input", r.doc["error"]["message"].get<std::string>());
        return finish(failed, code);
    }
    return run_command(command, *file, path, options);
}

} // namespace mechquot
