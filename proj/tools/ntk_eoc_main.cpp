// Command-line surface over the library: dataset generation, map traces,
// dual-function cross-checks, bound verification, spectral reports, the
// condition-number depth sweep, and the finite-width convergence experiment.
// Every command is a pure function of its flags (plus NTK_EOC_THREADS for
// worker count, which never changes results), emits %.12g CSV/JSON with LF
// endings, and exits nonzero when an asserted inequality fails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ntkeoc/activation.hpp"
#include "ntkeoc/dataset.hpp"
#include "ntkeoc/duals.hpp"
#include "ntkeoc/io.hpp"
#include "ntkeoc/jacobi_eigen.hpp"
#include "ntkeoc/kernel.hpp"
#include "ntkeoc/mlp.hpp"
#include "ntkeoc/parallel.hpp"
#include "ntkeoc/rng.hpp"
#include "ntkeoc/scalar_maps.hpp"
#include "ntkeoc/spectral.hpp"

namespace {

using namespace ntkeoc;

constexpr double kPi = 3.14159265358979323846;

struct FigurePoint {
  const char* label;  // file suffix, also the delta as a fraction
  double a;
  double b;
};

// the eight smoothness gaps delta = 1/8 .. 1 via exact (a, b) pairs
const FigurePoint kFigureSet[] = {
    {"1_8", 2.6457513110645905905, 1.0},  // sqrt(7)
    {"1_4", 1.7320508075688772935, 1.0},  // sqrt(3)
    {"3_8", 2.2360679774997896964, 1.7320508075688772935},
    {"1_2", 1.0, 1.0},
    {"5_8", 1.7320508075688772935, 2.2360679774997896964},
    {"3_4", 1.0, 1.7320508075688772935},
    {"7_8", 1.0, 2.6457513110645905905},
    {"1", 0.0, 1.0},
};

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
  } else {
    write_text_file(out_path, content);
  }
}

std::string delta_file_label(double delta) {
  std::string s = format_g12(delta);
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

Dataset build_dataset(int n, int dim, std::uint64_t seed, double bias) {
  Dataset d = sample_sphere_dataset(n, dim, seed);
  if (bias > 0.0) d = append_bias(d, bias);
  return d;
}

int run_dual_check(double a, double b, const std::string& out) {
  const ActivationParams p = make_activation(a, b);
  const int order = 64;
  double max_abs = 0.0, max_sgn = 0.0, max_phi = 0.0, max_phip = 0.0;
  for (int i = -99; i <= 99; ++i) {
    const double rho = i / 100.0;
    max_abs = std::max(max_abs,
                       std::abs(dual_quadrature(abs_fn(), rho, order).value - dual_abs(rho)));
    max_sgn = std::max(max_sgn,
                       std::abs(dual_quadrature(sign_fn(), rho, order).value - dual_sign(rho)));
    max_phi = std::max(max_phi, std::abs(dual_quadrature(activation_fn(p), rho, order).value -
                                         dual_activation(p, rho)));
    max_phip = std::max(max_phip,
                        std::abs(dual_quadrature(activation_deriv_fn(p), rho, order).value -
                                 dual_activation_deriv(p, rho)));
  }
  std::string csv = "function,max_error\n";
  csv += "abs," + format_g12(max_abs) + "\n";
  csv += "sgn," + format_g12(max_sgn) + "\n";
  csv += "phi," + format_g12(max_phi) + "\n";
  csv += "phi_prime," + format_g12(max_phip) + "\n";
  emit(out, csv);
  const double worst = std::max(std::max(max_abs, max_sgn), std::max(max_phi, max_phip));
  return worst > 1e-8 ? 1 : 0;
}

int run_eval_map(double a, double b, double rho, int depth, const std::string& out) {
  const ActivationParams p = make_activation(a, b);
  const MapTrace t = propagate(p.delta, rho, depth);
  std::string csv = "k,rho,z,w,u\n";
  for (int k = 1; k <= t.depth(); ++k) {
    csv += std::to_string(k);
    csv += ',' + format_g12(t.cosine[k - 1]);
    csv += ',' + format_g12(t.sqdist[k - 1]);
    csv += ',' + format_g12(t.invdist[k - 1]);
    csv += ',' + format_g12(t.kernel_sum[k - 1]);
    csv += '\n';
  }
  emit(out, csv);
  return 0;
}

int run_gen_dataset(int n, int dim, std::uint64_t seed, double bias,
                    const std::string& out) {
  const Dataset d = build_dataset(n, dim, seed, bias);
  DatasetDescriptor desc;
  desc.n = n;
  desc.dim = dim;
  desc.seed = seed;
  desc.has_bias = bias > 0.0;
  desc.bias = bias;
  if (out.empty()) {
    emit("", dataset_csv(d));
  } else {
    write_text_file(out + ".csv", dataset_csv(d));
    write_text_file(out + ".json", descriptor_json(desc));
  }
  return 0;
}

int run_kernel(double a, double b, int n, int dim, std::uint64_t seed, double bias,
               int depth, int m_l, const std::string& out) {
  const ActivationParams p = make_activation(a, b);
  const Dataset d = build_dataset(n, dim, seed, bias);
  const KernelMatrix K = ntk_matrix(p, d, depth, m_l);
  emit(out, matrix_csv(K.block, d.n(), depth, m_l));
  return 0;
}

int run_spectrum(double a, double b, int n, int dim, std::uint64_t seed, double bias,
                 int depth, int m_l, const std::string& format, const std::string& out) {
  const ActivationParams p = make_activation(a, b);
  const Dataset d = build_dataset(n, dim, seed, bias);
  const SpectralReport rep = spectrum_report(p, d, depth, m_l);
  if (format == "csv") {
    emit(out, std::string(kReportCsvHeader) + "\n" + report_csv_row(rep) + "\n");
  } else {
    emit(out, report_json(rep));
  }
  return (rep.perron_ok && rep.lambda2_ok) ? 0 : 1;
}

int run_verify_bounds(double a, double b, const std::string& out) {
  const ActivationParams p = make_activation(a, b);
  if (!(p.delta > 0.0)) {
    std::fprintf(stderr,
                 "verify-bounds: delta = 0 has identity maps and no bounds to check; "
                 "pick (a, b) with b != 0\n");
    return 2;
  }
  std::string csv;
  bool all_ok = true;

  // growth estimate of the iterated inverse distance: the deviation from the
  // closed-form estimate must stay O(1), checked as a plateau between the
  // early and the late part of the orbit
  csv += "check,delta,w,early,late,ok\n";
  const double deltas[] = {0.125, 0.5, 1.0};
  const double starts[] = {1.1, 2.0, 10.0};
  for (double delta : deltas) {
    for (double w0 : starts) {
      double w = w0;
      double max_early = 0.0, max_late = 0.0;
      for (int k = 1; k <= 10000; ++k) {
        const double dev = std::abs(w - propagation_estimate(delta, w0, k));
        if (k >= 10 && k <= 100) max_early = std::max(max_early, dev);
        if (k >= 100) max_late = std::max(max_late, dev);
        w = invdist_map(delta, w);
      }
      const bool ok = max_late < max_early + 0.1;
      all_ok = all_ok && ok;
      csv += "propagation," + format_g12(delta) + ',' + format_g12(w0) + ',' +
             format_g12(max_early) + ',' + format_g12(max_late) + ',' + (ok ? "1" : "0") +
             "\n";
    }
  }

  // kernel-sum sandwich: largest signed violations over rho1 in
  // [-0.99, 0.99] (step 0.01) and k <= 1000; positive means violated
  csv += "\ncheck,delta,upper_violation,lower_violation,ok\n";
  for (int dn = 1; dn <= 8; ++dn) {
    const double delta = dn / 8.0;
    double worst_upper = -std::numeric_limits<double>::infinity();
    double worst_lower = -std::numeric_limits<double>::infinity();
    for (int i = -99; i <= 99; ++i) {
      const double rho1 = i / 100.0;
      const double c = sandwich_coeff(delta, rho1);
      const MapTrace t = propagate(delta, rho1, 1000);
      for (int k = 1; k <= 1000; ++k) {
        const double upper =
            (3.0 * kPi / 16.0) / delta * t.invdist[k - 1] - 0.125;
        const double u = t.kernel_sum[k - 1];
        worst_upper = std::max(worst_upper, u - upper);
        worst_lower = std::max(worst_lower, (upper - c * k * t.sqdist[k - 1]) - u);
      }
    }
    const bool ok = worst_upper <= 0.0 && worst_lower <= 0.0;
    all_ok = all_ok && ok;
    csv += "sandwich," + format_g12(delta) + ',' + format_g12(worst_upper) + ',' +
           format_g12(worst_lower) + ',' + (ok ? "1" : "0") + "\n";
  }

  emit(out, csv);
  return all_ok ? 0 : 1;
}

int run_sweep_depth(double a, double b, bool custom_ab, int n, int dim, int seeds,
                    std::uint64_t seed, double bias, int depth, int depth_max, int m_l,
                    const std::string& out) {
  if (depth_max < depth) throw CLI::ValidationError("--depth-max must be >= --depth");
  std::vector<int> depths;
  for (int l = depth; l <= depth_max; ++l) depths.push_back(l);

  std::vector<FigurePoint> set;
  if (custom_ab) {
    set.push_back(FigurePoint{"", a, b});
  } else {
    set.assign(std::begin(kFigureSet), std::end(kFigureSet));
  }

  for (const FigurePoint& fp : set) {
    const ActivationParams p = make_activation(fp.a, fp.b);
    // kappa table: one row per dataset seed, one column per depth
    std::vector<std::vector<double>> kappa(seeds, std::vector<double>(depths.size(), 0.0));
    std::vector<std::vector<KernelMatrix>> blocks(seeds);
    for (int s = 0; s < seeds; ++s) {
      const Dataset d = build_dataset(n, dim, rng_key(seed, s), bias);
      blocks[s] = ntk_matrices_over_depths(p, d, depths, m_l);
    }
    parallel_for(static_cast<std::size_t>(seeds) * depths.size(), [&](std::size_t task) {
      const std::size_t s = task / depths.size();
      const std::size_t di = task % depths.size();
      kappa[s][di] = condition_number(eigen_symmetric(blocks[s][di].block));
    });

    std::string csv = "Step,Value\n";
    for (std::size_t di = 0; di < depths.size(); ++di) {
      double mean = 0.0;
      for (int s = 0; s < seeds; ++s) mean += kappa[s][di];
      mean /= seeds;
      csv += std::to_string(depths[di]) + ',' + format_g12(mean) + '\n';
    }
    const std::string label = fp.label[0] ? fp.label : delta_file_label(p.delta);
    if (out.empty()) {
      emit("", "# delta=" + std::string(label) + "\n" + csv);
    } else {
      write_text_file(out + "_delta_" + label + ".csv", csv);
    }
  }
  return 0;
}

int run_empirical(double a, double b, int n, int dim, int trials, std::uint64_t seed,
                  int depth, const std::string& out) {
  const ActivationParams p = make_activation(a, b);
  const Dataset d = sample_sphere_dataset(n, dim, seed);
  const std::vector<int> widths = {64, 128, 256, 512};
  const std::vector<ConvergenceRow> rows =
      convergence_sweep(p, d, widths, depth, trials, seed);
  std::string csv = "width,mean_rel_error,stderr,slope_so_far\n";
  for (const ConvergenceRow& r : rows) {
    csv += std::to_string(r.width) + ',' + format_g12(r.mean_rel_error) + ',' +
           format_g12(r.std_error) + ',' + format_g12(r.slope_so_far) + '\n';
  }
  emit(out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact infinite-width NTK of critically initialized (a,b)-ReLU networks"};
  app.require_subcommand(1);

  double a = 1.0, b = 1.0;
  int n = 32, dim = 16, depth = 8, depth_max = -1, m_l = 1, seeds = 100;
  std::uint64_t seed = 2024;
  double bias = 0.0, rho = 0.0;
  std::string out, format = "json";

  auto add_activation = [&](CLI::App* cmd) {
    cmd->add_option("--a", a, "activation slope a");
    cmd->add_option("--b", b, "activation kink coefficient b");
  };
  auto add_dataset = [&](CLI::App* cmd) {
    cmd->add_option("--n", n, "number of points");
    cmd->add_option("--dim", dim, "input dimension");
    cmd->add_option("--seed", seed, "base seed (default 2024; dataset i uses substream i)");
    cmd->add_option("--bias", bias, "append this constant coordinate to every point");
  };
  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", out, "output path (stdout if omitted)"); };

  CLI::App* c_dual = app.add_subcommand("dual-check",
                                        "closed-form duals vs order-64 quadrature on a rho grid");
  add_activation(c_dual);
  add_out(c_dual);

  CLI::App* c_eval = app.add_subcommand("eval-map", "depth trace of the propagation maps");
  add_activation(c_eval);
  c_eval->add_option("--rho", rho, "starting cosine");
  c_eval->add_option("--depth", depth, "trace depth");
  add_out(c_eval);

  CLI::App* c_gen = app.add_subcommand("gen-dataset", "seeded unit-sphere dataset");
  add_dataset(c_gen);
  add_out(c_gen);

  CLI::App* c_kernel = app.add_subcommand("kernel", "limiting kernel block of a sphere dataset");
  add_activation(c_kernel);
  add_dataset(c_kernel);
  c_kernel->add_option("--depth", depth, "network depth l");
  c_kernel->add_option("--ml", m_l, "output multiplicity m_l");
  add_out(c_kernel);

  CLI::App* c_spectrum = app.add_subcommand("spectrum",
                                        "spectral report with exact bounds and predictions");
  add_activation(c_spectrum);
  add_dataset(c_spectrum);
  c_spectrum->add_option("--depth", depth, "network depth l");
  c_spectrum->add_option("--ml", m_l, "output multiplicity m_l");
  c_spectrum->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  add_out(c_spectrum);

  CLI::App* c_verify = app.add_subcommand("verify-bounds",
                                          "propagation-estimate plateau and kernel-sum sandwich");
  add_activation(c_verify);
  add_out(c_verify);

  CLI::App* c_sweep = app.add_subcommand(
      "sweep-depth", "mean condition number vs depth; default runs all eight gaps");
  add_activation(c_sweep);
  add_dataset(c_sweep);
  c_sweep->add_option("--seeds", seeds, "number of seeded datasets to average");
  c_sweep->add_option("--depth", depth, "first depth");
  c_sweep->add_option("--depth-max", depth_max, "last depth (default: first + 60)");
  c_sweep->add_option("--ml", m_l, "output multiplicity m_l");
  add_out(c_sweep);

  CLI::App* c_emp = app.add_subcommand("empirical",
                                       "finite-width kernel convergence experiment");
  add_activation(c_emp);
  c_emp->add_option("--n", n, "number of points");
  c_emp->add_option("--dim", dim, "input dimension");
  c_emp->add_option("--seed", seed, "base seed");
  c_emp->add_option("--seeds", seeds, "trials per width");
  c_emp->add_option("--depth", depth, "network depth l");
  add_out(c_emp);

  // command-appropriate defaults that differ from the shared ones
  c_sweep->parse_complete_callback([&]() {
    if (!c_sweep->count("--depth")) depth = 4;
    if (depth_max < 0) depth_max = depth + 60;
  });
  c_emp->parse_complete_callback([&]() {
    if (!c_emp->count("--n")) n = 4;
    if (!c_emp->count("--dim")) dim = 8;
    if (!c_emp->count("--seeds")) seeds = 10;
    if (!c_emp->count("--depth")) depth = 3;
  });

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(c_dual)) return run_dual_check(a, b, out);
    if (app.got_subcommand(c_eval)) return run_eval_map(a, b, rho, depth, out);
    if (app.got_subcommand(c_gen)) return run_gen_dataset(n, dim, seed, bias, out);
    if (app.got_subcommand(c_kernel))
      return run_kernel(a, b, n, dim, seed, bias, depth, m_l, out);
    if (app.got_subcommand(c_spectrum))
      return run_spectrum(a, b, n, dim, seed, bias, depth, m_l, format, out);
    if (app.got_subcommand(c_verify)) return run_verify_bounds(a, b, out);
    if (app.got_subcommand(c_sweep)) {
      const bool custom = c_sweep->count("--a") > 0 || c_sweep->count("--b") > 0;
      return run_sweep_depth(a, b, custom, n, dim, seeds, seed, bias, depth, depth_max,
                             m_l, out);
    }
    if (app.got_subcommand(c_emp))
      return run_empirical(a, b, n, dim, seeds, seed, depth, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
