#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "ntkeoc/dataset.hpp"
#include "ntkeoc/spectral.hpp"

namespace ntkeoc {

// Text serialization. Every emitter assembles the full payload in memory
// with %.12g numeric formatting and LF line endings, so identical inputs
// produce byte-identical files on every platform and worker count.

/// printf("%.12g") of v.
std::string format_g12(double v);

/// One row per point, comma-separated coordinates.
std::string dataset_csv(const Dataset& d);
/// Inverse of dataset_csv ('#' lines ignored).
Dataset dataset_from_csv(const std::string& text, double parallel_tolerance = 1e-9);

/// Provenance sidecar for a generated dataset.
struct DatasetDescriptor {
  int n = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  bool has_bias = false;
  double bias = 0.0;
};
std::string descriptor_json(const DatasetDescriptor& desc);
DatasetDescriptor descriptor_from_json(const std::string& text);

/// Matrix rows under the one-line header `# n=<n> l=<l> m_l=<m>`.
std::string matrix_csv(const Eigen::MatrixXd& M, int n, int l, int m_l);
Eigen::MatrixXd matrix_from_csv(const std::string& text);

/// Full spectral report as a JSON object (fixed key order).
std::string report_json(const SpectralReport& rep);

/// Column header and one data row of the compact per-depth report table.
extern const char* const kReportCsvHeader;  // l,kappa,lambda1,lambda_bulk_max,lambda_min,xi,W,c
std::string report_csv_row(const SpectralReport& rep);

/// Whole-file text IO in binary mode; throws std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace ntkeoc
