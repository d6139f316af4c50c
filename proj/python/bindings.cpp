#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "pmsep/cli.hpp"
#include "pmsep/errors.hpp"
#include "pmsep/scalar.hpp"

namespace py = pybind11;
using pmsep::io::Json;

namespace {

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw pmsep::InputError(e.what());
  }
}

pmsep::NumericMode mode_of(const std::string& numeric) {
  if (numeric == "rational") return pmsep::NumericMode::rational;
  if (numeric == "float") return pmsep::NumericMode::floating;
  throw pmsep::InputError("numeric mode must be 'rational' or 'float'");
}

template <class F>
std::tuple<int, std::string> report(const std::string& numeric, F&& f) {
  pmsep::NumericModeGuard guard(mode_of(numeric));
  try {
    pmsep::cli::Report r = f();
    return {r.exit_code, r.body.dump()};
  } catch (const Json::exception& e) {
    throw pmsep::InputError(e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of pmsep; documents are exchanged as JSON text.";

  py::register_exception<pmsep::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<pmsep::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<pmsep::StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<pmsep::ResourceError>(m, "ResourceError", PyExc_RuntimeError);

  m.def("validate", [](const std::string& dataset, const std::string& numeric) {
    return report(numeric, [&] { return pmsep::cli::validate(parse(dataset)); });
  }, py::arg("dataset"), py::arg("numeric") = "rational");
  m.def("check", [](const std::string& dataset, bool flattest, const std::string& numeric) {
    return report(numeric, [&] { return pmsep::cli::check(parse(dataset), flattest); });
  }, py::arg("dataset"), py::arg("flattest") = false, py::arg("numeric") = "rational");
  m.def("recover", [](const std::string& dataset, bool flattest, const std::string& numeric) {
    return report(numeric, [&] { return pmsep::cli::recover(parse(dataset), flattest); });
  }, py::arg("dataset"), py::arg("flattest") = false, py::arg("numeric") = "rational");
  m.def("solve", [](const std::string& problem, std::optional<std::size_t> refine, const std::string& numeric) {
    return report(numeric, [&] { return pmsep::cli::solve(parse(problem), refine); });
  }, py::arg("problem"), py::arg("refine") = py::none(), py::arg("numeric") = "rational");
  m.def("concavity", [](const std::string& dataset, std::size_t budget, const std::string& numeric) {
    return report(numeric, [&] { return pmsep::cli::concavity(parse(dataset), budget); });
  }, py::arg("dataset"), py::arg("budget") = 10'000, py::arg("numeric") = "rational");
  m.def("verify", [](const std::string& dataset, const std::string& rep, const std::string& numeric) {
    return report(numeric, [&] { return pmsep::cli::verify(parse(dataset), parse(rep)); });
  }, py::arg("dataset"), py::arg("report"), py::arg("numeric") = "rational");
  m.def("generate", [](const std::string& spec) {
    try {
      return pmsep::cli::generate(parse(spec)).dump();
    } catch (const Json::exception& e) {
      throw pmsep::InputError(e.what());
    }
  }, py::arg("spec"));
  m.def("run", [](const std::vector<std::string>& args) {
    std::vector<std::string> full{"pmsep"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = pmsep::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command-line interface in-process; returns (exit code, stdout, stderr).");
}
