#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "expsplit/builtins.hpp"
#include "expsplit/commands.hpp"
#include "expsplit/errors.hpp"

namespace py = pybind11;
using namespace expsplit;

namespace {

RunConfig make_config(const std::string& target, std::optional<std::uint64_t> window, std::optional<std::string> norm,
                      double ncap, double tol, std::uint64_t seed) {
  RunConfig c;
  c.target = target;
  c.window = window;
  if (norm) c.norm = parse_norm(*norm);
  c.N_cap = ncap;
  c.tol = tol;
  c.seed = seed;
  validate(c);
  return c;
}

py::array_t<double> to_numpy(const ScaledMatrix& m) {
  const Mat values = m.dense();
  py::array_t<double> out({values.rows(), values.cols()});
  auto view = out.mutable_unchecked<2>();
  for (Index i = 0; i < values.rows(); ++i)
    for (Index k = 0; k < values.cols(); ++k) view(i, k) = static_cast<double>(values(i, k));
  return out;
}

}  // namespace

PYBIND11_MODULE(_expsplit, m) {
  m.doc() = "Exponential splitting analysis of nonautonomous linear difference systems";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NotStronglyInvariant>(m, "NotStronglyInvariant", PyExc_ArithmeticError);

  m.attr("schema_version") = kSchemaVersion;

  m.def("corpus_names", &corpus_names, "Names of the built-in corpus entries.");

  m.def(
      "run",
      [](const std::string& command, const std::string& target, std::optional<std::uint64_t> window,
         std::optional<std::string> norm, double ncap, double tol, std::uint64_t seed, const std::string& format,
         const std::string& cert, std::optional<std::string> notion) {
        RunConfig c;
        c.target = target;
        c.window = window;
        c.N_cap = ncap;
        c.tol = tol;
        c.seed = seed;
        c.certificate_path = cert;
        CommandResult r;
        try {
          if (norm) c.norm = parse_norm(*norm);
          c.format = parse_format(format);
          if (notion) c.notion = parse_concept(*notion);
        } catch (const ConfigError& e) {
          r.exit_code = kExitConfig;
          r.diagnostic = e.what();
          return py::make_tuple(r.exit_code, r.output, r.diagnostic);
        }
        {
          py::gil_scoped_release release;
          r = run_command(command, c);
        }
        return py::make_tuple(r.exit_code, r.output, r.diagnostic);
      },
      py::arg("command"), py::arg("target") = "", py::arg("window") = py::none(), py::arg("norm") = py::none(),
      py::arg("ncap") = 1e3, py::arg("tol") = kDefaultTol, py::arg("seed") = 1, py::arg("format") = "json",
      py::arg("cert") = "", py::arg("concept") = py::none(),
      "Runs a command line command in process; returns (exit_code, output, diagnostic).");

  m.def(
      "verify",
      [](const std::string& target, const std::string& cert_json, std::optional<std::uint64_t> window,
         std::optional<std::string> norm, double tol, std::uint64_t seed) {
        const Target t = resolve_target(make_config(target, window, norm, 1e3, tol, seed));
        const std::vector<Certificate> certs = certificates_from_json(Json::parse(cert_json));
        py::gil_scoped_release release;
        GainOptions gains;
        gains.seed = seed;
        const GainTable table = gain_table(t.system, t.projection, t.window, tol, gains);
        Json out = Json::array();
        for (const Certificate& cert : certs) {
          out.push_back({{"certificate", to_json(cert)}, {"verification", to_json(verify_certificate(table, cert, tol))}});
        }
        return out.dump();
      },
      py::arg("target"), py::arg("certificate"), py::arg("window") = py::none(), py::arg("norm") = py::none(),
      py::arg("tol") = kDefaultTol, py::arg("seed") = 1,
      "Verifies certificates (JSON text) on a target's gain table; returns JSON text.");

  m.def(
      "evolution",
      [](const std::string& target, std::uint64_t m_index, std::uint64_t n_index) {
        RunConfig c;
        c.target = target;
        return to_numpy(evolution(resolve_target(c).system, m_index, n_index));
      },
      py::arg("target"), py::arg("m"), py::arg("n"), "A_m^n as a float64 array.");

  m.def(
      "projection",
      [](const std::string& target, std::uint64_t n_index) {
        RunConfig c;
        c.target = target;
        return to_numpy(projection(resolve_target(c).projection, n_index));
      },
      py::arg("target"), py::arg("n"), "P_n as a float64 array.");

  m.def(
      "log2_norm",
      [](const std::string& target, std::uint64_t m_index, std::uint64_t n_index, const std::string& norm) {
        RunConfig c;
        c.target = target;
        return operator_norm(evolution(resolve_target(c).system, m_index, n_index), parse_norm(norm)).log2();
      },
      py::arg("target"), py::arg("m"), py::arg("n"), py::arg("norm") = "sup",
      "log2 ||A_m^n||, valid beyond the range of float64.");
}
