#include "mechquot/commands.hpp"
#include "mechquot/errors.hpp"
#include "mechquot/symexpr.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mechquot;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact checks for mechanical quotients of affine connection control systems";

    py::register_exception<Error>(m, "Error");
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    py::class_<CommandResult>(m, "CommandResult")
        .def_readonly("exit_code", &CommandResult::exit_code)
        .def_readonly("text", &CommandResult::text)
        .def_readonly("machine", &CommandResult::machine)
        .def("__repr__", [](const CommandResult &r) {
            return "<CommandResult exit_code=" + std::to_string(r.exit_code) + ">";
        });

    m.def(
        "run_command",
        [](const std::string &command, const std::string &path, const std::string &point,
           const std::string &distribution, const std::string &scenario, const std::string &out,
           std::uint64_t seed, std::optional<std::size_t> max_level, std::optional<double> dt,
           std::optional<double> tol) {
            CommandOptions o{point, distribution, scenario, out, seed, max_level, dt, tol, false};
            py::gil_scoped_release release;
            return run_command(command, path, o);
        },
        py::arg("command"), py::arg("path"), py::kw_only(), py::arg("point") = "", py::arg("distribution") = "",
        py::arg("scenario") = "", py::arg("out") = "", py::arg("seed") = 42, py::arg("max_level") = py::none(),
        py::arg("dt") = py::none(), py::arg("tol") = py::none(),
        "Run one command on a system file; library errors become exit codes.");

    m.def("commands", &command_names);

    m.def(
        "canonical",
        [](const std::string &expr, const std::vector<std::string> &vars) {
            return parse_expr(expr, vars).to_string();
        },
        py::arg("expr"), py::arg("vars"), "Canonical form of an expression over the given variables.");

    m.def(
        "equal",
        [](const std::string &a, const std::string &b, const std::vector<std::string> &vars) {
            return parse_expr(a, vars) == parse_expr(b, vars);
        },
        py::arg("a"), py::arg("b"), py::arg("vars"), "Exact equality as rational functions.");
}
