#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ntkeoc/activation.hpp"
#include "ntkeoc/dataset.hpp"
#include "ntkeoc/duals.hpp"
#include "ntkeoc/jacobi_eigen.hpp"
#include "ntkeoc/kernel.hpp"
#include "ntkeoc/mlp.hpp"
#include "ntkeoc/rng.hpp"
#include "ntkeoc/scalar_maps.hpp"
#include "ntkeoc/spectral.hpp"

namespace py = pybind11;
using namespace ntkeoc;

PYBIND11_MODULE(_ntkeoc, m) {
  m.doc() = "Exact infinite-width NTK of critically initialized (a,b)-ReLU networks";

  py::class_<ActivationParams>(m, "ActivationParams")
      .def_readonly("a", &ActivationParams::a)
      .def_readonly("b", &ActivationParams::b)
      .def_readonly("delta", &ActivationParams::delta)
      .def_readonly("sigma", &ActivationParams::sigma)
      .def_readonly("lipschitz", &ActivationParams::lipschitz)
      .def("__repr__", [](const ActivationParams& p) {
        return "ActivationParams(a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) + ")";
      });
  m.def("make_activation", &make_activation, py::arg("a"), py::arg("b"),
        "Validated activation parameters at the critical weight scale");

  // scalar maps
  m.def("cosine_map", &cosine_map, py::arg("delta"), py::arg("rho"));
  m.def("cosine_map_deriv", &cosine_map_deriv, py::arg("delta"), py::arg("rho"));
  m.def("sqdist_map", &sqdist_map, py::arg("delta"), py::arg("z"));
  m.def("sqdist_map_deriv", &sqdist_map_deriv, py::arg("delta"), py::arg("z"));
  m.def("invdist_map", &invdist_map, py::arg("delta"), py::arg("w"));
  m.def("invdist_map_deriv", &invdist_map_deriv, py::arg("delta"), py::arg("w"));
  m.def("invdist_argmin", &invdist_argmin, py::arg("delta"));
  m.def("invdist_remainder", &invdist_remainder, py::arg("delta"), py::arg("w"));
  m.def("invdist_iterate", &invdist_iterate, py::arg("delta"), py::arg("w"), py::arg("k"));
  m.def("propagation_estimate", &propagation_estimate, py::arg("delta"), py::arg("w"),
        py::arg("k"));
  m.def("sandwich_coeff", &sandwich_coeff, py::arg("delta"), py::arg("rho1"));
  m.def("series_coeff", &series_coeff, py::arg("r"));
  m.def("series_coeffs", &series_coeffs, py::arg("r_max"));

  py::class_<MapTrace>(m, "MapTrace")
      .def_readonly("cosine", &MapTrace::cosine)
      .def_readonly("sqdist", &MapTrace::sqdist)
      .def_readonly("invdist", &MapTrace::invdist)
      .def_readonly("kernel_sum", &MapTrace::kernel_sum)
      .def("depth", &MapTrace::depth);
  m.def("propagate", &propagate, py::arg("delta"), py::arg("rho1"), py::arg("depth"),
        "Layer-wise cosine, squared distance, inverse distance, and kernel sum");

  // closed-form duals
  m.def("dual_abs", &dual_abs, py::arg("rho"));
  m.def("dual_sign", &dual_sign, py::arg("rho"));
  m.def("dual_activation", &dual_activation, py::arg("params"), py::arg("rho"));
  m.def("dual_activation_deriv", &dual_activation_deriv, py::arg("params"), py::arg("rho"));

  // datasets
  py::class_<Dataset>(m, "Dataset")
      .def_readonly("points", &Dataset::points)
      .def_readonly("norms", &Dataset::norms)
      .def("n", &Dataset::n)
      .def("dim", &Dataset::dim);
  m.def("make_dataset", &make_dataset, py::arg("points"), py::arg("tol") = 1e-9);
  m.def("sample_sphere_dataset", &sample_sphere_dataset, py::arg("n"), py::arg("dim"),
        py::arg("seed"));
  m.def("append_bias", &append_bias, py::arg("dataset"), py::arg("beta"));
  m.def("gram_cosines", &gram_cosines, py::arg("dataset"));

  // kernel assembly
  py::class_<KernelMatrix>(m, "KernelMatrix")
      .def_readonly("block", &KernelMatrix::block)
      .def_readonly("multiplicity", &KernelMatrix::multiplicity)
      .def_readonly("depth", &KernelMatrix::depth);
  py::class_<DistanceMatrix>(m, "DistanceMatrix")
      .def_readonly("entries", &DistanceMatrix::entries)
      .def_readonly("layer", &DistanceMatrix::layer);
  m.def("ntk_entry", &ntk_entry, py::arg("params"), py::arg("x1_norm"), py::arg("x2_norm"),
        py::arg("rho1"), py::arg("l"));
  m.def("ntk_matrix", &ntk_matrix, py::arg("params"), py::arg("dataset"), py::arg("l"),
        py::arg("m_l") = 1);
  m.def("u_matrix", &u_matrix, py::arg("params"), py::arg("dataset"), py::arg("l"));
  m.def("invdist_matrix", &invdist_matrix, py::arg("params"), py::arg("dataset"), py::arg("k"));
  m.def("approx_matrix", &approx_matrix, py::arg("params"), py::arg("dataset"), py::arg("l"));

  // spectra
  m.def(
      "eigen_symmetric",
      [](const Eigen::MatrixXd& matrix) { return eigen_symmetric(matrix); }, py::arg("matrix"),
      "Eigenvalues of a symmetric matrix, descending");
  m.def("expand_eigenvalues", &expand_eigenvalues, py::arg("block_eigs"), py::arg("m"));
  m.def("condition_number", &condition_number, py::arg("eigs"));
  m.def("kappa_limit", &kappa_limit, py::arg("n"));
  m.def("solve_generator", &solve_generator, py::arg("params"), py::arg("dataset"), py::arg("l"));
  m.def("log_depth_correction", &log_depth_correction, py::arg("params"), py::arg("W"),
        py::arg("l"));

  py::class_<SpectralReport>(m, "SpectralReport")
      .def_readonly("n", &SpectralReport::n)
      .def_readonly("depth", &SpectralReport::depth)
      .def_readonly("multiplicity", &SpectralReport::multiplicity)
      .def_readonly("eigenvalues", &SpectralReport::eigenvalues)
      .def_readonly("kappa", &SpectralReport::kappa)
      .def_readonly("W", &SpectralReport::W)
      .def_readonly("xi", &SpectralReport::xi)
      .def_readonly("c", &SpectralReport::c)
      .def_readonly("out_of_regime", &SpectralReport::out_of_regime)
      .def_readonly("dist_lambda1", &SpectralReport::dist_lambda1)
      .def_readonly("dist_lambda2", &SpectralReport::dist_lambda2)
      .def_readonly("perron_ok", &SpectralReport::perron_ok)
      .def_readonly("lambda2_ok", &SpectralReport::lambda2_ok)
      .def_readonly("pred_kappa", &SpectralReport::pred_kappa)
      .def_readonly("res_kappa", &SpectralReport::res_kappa);
  m.def("spectrum_report", &spectrum_report, py::arg("params"), py::arg("dataset"), py::arg("l"),
        py::arg("m_l") = 1);

  // finite-width reference
  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("width", &ConvergenceRow::width)
      .def_readonly("mean_rel_error", &ConvergenceRow::mean_rel_error)
      .def_readonly("std_error", &ConvergenceRow::std_error)
      .def_readonly("slope_so_far", &ConvergenceRow::slope_so_far);
  m.def("convergence_sweep", &convergence_sweep, py::arg("params"), py::arg("dataset"),
        py::arg("widths"), py::arg("depth"), py::arg("trials"), py::arg("base_seed"));

  m.def("rng_key", &rng_key, py::arg("seed"), py::arg("stream"));
}
