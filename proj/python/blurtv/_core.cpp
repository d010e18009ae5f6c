#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blurtv/bounds.hpp"
#include "blurtv/error.hpp"
#include "blurtv/estimator.hpp"
#include "blurtv/experiments.hpp"
#include "blurtv/kernels.hpp"
#include "blurtv/oracle.hpp"
#include "blurtv/serialize.hpp"

namespace py = pybind11;
using namespace blurtv;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// A 1-D array is n scalar points; a 2-D array is n rows in R^d.
Sample to_sample(const Array& a, const char* label) {
  if (a.ndim() != 1 && a.ndim() != 2) throw ArgumentError(std::string(label) + ": expected a 1-D or 2-D array");
  const std::size_t dim = a.ndim() == 1 ? 1 : static_cast<std::size_t>(a.shape(1));
  if (dim == 0) throw ArgumentError(std::string(label) + ": zero columns");
  std::vector<double> coords(a.data(), a.data() + a.size());
  return Sample(std::move(coords), dim, label);
}

std::size_t common_dim(const Sample& x, const Sample& y) {
  if (x.dim() != y.dim()) throw ArgumentError("x and y have different dimensions");
  return x.dim();
}

double blurred_tv(const Array& xa, const Array& ya, double h, const std::string& kernel,
                  std::optional<std::size_t> draws, std::uint64_t seed, double tol, unsigned threads) {
  const Sample x = to_sample(xa, "x"), y = to_sample(ya, "y");
  const Kernel k = parse_kernel_spec(kernel, common_dim(x, y));
  py::gil_scoped_release release;
  if (draws) return blurred_tv_monte_carlo(x.measure(), y.measure(), k, Bandwidth(h), {*draws, seed, threads}).value;
  if (x.dim() > 1) throw ArgumentError("quadrature unavailable above dimension 1 (pass draws)");
  return blurred_tv_quadrature_1d(x.measure(), y.measure(), k, Bandwidth(h), tol);
}

std::string bound_json(const Array& xa, const Array& ya, double h, const std::string& method, double alpha,
                       const std::string& kernel, std::optional<std::size_t> draws, std::optional<double> h_star,
                       std::optional<std::string> grid, std::uint64_t seed, double tol, unsigned threads) {
  const Sample x = to_sample(xa, "x"), y = to_sample(ya, "y");
  const Kernel k = parse_kernel_spec(kernel, common_dim(x, y));
  BoundSpec spec;
  spec.method = parse_bound_method(method);
  spec.alpha = alpha;
  spec.h = Bandwidth(h);
  spec.draws = draws;
  if (h_star) spec.h_star = Bandwidth(*h_star);
  if (grid) spec.grid = BandwidthGrid::parse(*grid);
  spec.seed = seed;
  spec.estimator.tol = tol;
  spec.estimator.seed = seed;
  spec.estimator.threads = threads;
  if (x.dim() > 1) spec.estimator.substitute_draws = draws;
  py::gil_scoped_release release;
  return dump(to_json(compute_bound(x, y, k, spec)));
}

std::string experiment_csv(const std::string& name, const std::string& config, unsigned threads) {
  const auto parsed = config.empty() ? nlohmann::json::object() : nlohmann::json::parse(config);
  std::ostringstream out;
  {
    py::gil_scoped_release release;
    run_experiment(name, parsed, threads).write_csv(out);
  }
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Blurred total variation estimators, bounds and oracles";
  m.attr("__version__") = BLURTV_VERSION;

  auto arg_error = py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  (void)arg_error;

  m.def("blurred_tv", &blurred_tv, py::arg("x"), py::arg("y"), py::arg("h"), py::arg("kernel") = "gaussian",
        py::arg("draws") = py::none(), py::arg("seed") = 0, py::arg("tol") = kDefaultTolerance,
        py::arg("threads") = 1,
        "Empirical blurred TV. Quadrature in 1-D unless draws is given; Monte Carlo otherwise.");

  m.def("bound_json", &bound_json, py::arg("x"), py::arg("y"), py::arg("h"), py::arg("method") = "naive",
        py::arg("alpha") = 0.05, py::arg("kernel") = "gaussian", py::arg("draws") = py::none(),
        py::arg("h_star") = py::none(), py::arg("grid") = py::none(), py::arg("seed") = 0,
        py::arg("tol") = kDefaultTolerance, py::arg("threads") = 1);

  m.def(
      "variance_proxy",
      [](const Array& xa, const Array& ya, double h, const std::string& kernel) {
        const Sample x = to_sample(xa, "x"), y = to_sample(ya, "y");
        return variance_proxy(x, y, parse_kernel_spec(kernel, common_dim(x, y)), Bandwidth(h)).value;
      },
      py::arg("x"), py::arg("y"), py::arg("h"), py::arg("kernel") = "gaussian");

  m.def(
      "shift_modulus",
      [](const std::vector<double>& v, const std::string& kernel) {
        return parse_kernel_spec(kernel, v.size()).shift_modulus(v);
      },
      py::arg("v"), py::arg("kernel") = "gaussian");

  m.def("epsilon_nm", &epsilon_nm, py::arg("n"), py::arg("m"), py::arg("alpha"));
  m.def("epsilon_B", &epsilon_B, py::arg("draws"), py::arg("alpha"));

  m.def(
      "oracle_gaussian",
      [](std::vector<double> mean_p, std::vector<double> cov_p, std::vector<double> mean_q,
         std::vector<double> cov_q, double h) {
        return oracle_blurred_tv_gaussian(OracleDistribution::gaussian(std::move(mean_p), std::move(cov_p)),
                                          OracleDistribution::gaussian(std::move(mean_q), std::move(cov_q)),
                                          Bandwidth(h));
      },
      py::arg("mean_p"), py::arg("cov_p"), py::arg("mean_q"), py::arg("cov_q"), py::arg("h"),
      "Blurred TV between two Gaussians; covariances are row-major d*d lists.");

  m.def(
      "oracle_mixture_1d",
      [](std::vector<double> means_p, std::vector<double> weights_p, std::vector<double> sds_p,
         std::vector<double> means_q, std::vector<double> weights_q, std::vector<double> sds_q, double h,
         const std::string& kernel, double tol) {
        const auto p = OracleDistribution::mixture_1d(std::move(means_p), std::move(weights_p), std::move(sds_p));
        const auto q = OracleDistribution::mixture_1d(std::move(means_q), std::move(weights_q), std::move(sds_q));
        return oracle_blurred_tv_quadrature_1d(p, q, parse_kernel_spec(kernel, 1), Bandwidth(h), tol);
      },
      py::arg("means_p"), py::arg("weights_p"), py::arg("sds_p"), py::arg("means_q"), py::arg("weights_q"),
      py::arg("sds_q"), py::arg("h"), py::arg("kernel") = "gaussian", py::arg("tol") = 1e-9);

  m.def("experiment_names", &experiment_names);
  m.def("experiment_csv", &experiment_csv, py::arg("name"), py::arg("config") = "", py::arg("threads") = 1,
        "Runs a named experiment from a JSON config string and returns the CSV text.");
}
