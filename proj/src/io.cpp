#include "ntkeoc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace ntkeoc {

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string dataset_csv(const Dataset& d) {
  std::string out;
  for (int i = 0; i < d.n(); ++i) {
    for (int j = 0; j < d.dim(); ++j) {
      if (j > 0) out += ',';
      out += format_g12(d.points(i, j));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::vector<double>> parse_numeric_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      std::size_t pos = 0;
      const double v = std::stod(field, &pos);
      row.push_back(v);
    }
    if (row.empty()) throw std::runtime_error("csv: blank data row");
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("csv: no data rows");
  return rows;
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace

Dataset dataset_from_csv(const std::string& text, double parallel_tolerance) {
  return make_dataset(rows_to_matrix(parse_numeric_rows(text)), parallel_tolerance);
}

std::string descriptor_json(const DatasetDescriptor& desc) {
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(desc.n) + ",\n";
  out += "  \"dim\": " + std::to_string(desc.dim) + ",\n";
  out += "  \"seed\": " + std::to_string(desc.seed) + ",\n";
  if (desc.has_bias) {
    out += "  \"bias\": " + format_g12(desc.bias) + "\n";
  } else {
    out += "  \"bias\": null\n";
  }
  out += "}\n";
  return out;
}

DatasetDescriptor descriptor_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  DatasetDescriptor desc;
  desc.n = j.at("n").get<int>();
  desc.dim = j.at("dim").get<int>();
  desc.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("bias") && !j.at("bias").is_null()) {
    desc.has_bias = true;
    desc.bias = j.at("bias").get<double>();
  }
  return desc;
}

std::string matrix_csv(const Eigen::MatrixXd& M, int n, int l, int m_l) {
  std::string out = "# n=" + std::to_string(n) + " l=" + std::to_string(l) +
                    " m_l=" + std::to_string(m_l) + "\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_g12(M(i, j));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd matrix_from_csv(const std::string& text) {
  return rows_to_matrix(parse_numeric_rows(text));
}

namespace {

void json_field(std::string& out, const char* key, double v, bool last = false) {
  // JSON has no literal for non-finite numbers (e.g. the condition number of
  // a singular block); null keeps the document parseable
  const std::string text = std::isfinite(v) ? format_g12(v) : std::string("null");
  out += std::string("    \"") + key + "\": " + text + (last ? "\n" : ",\n");
}

}  // namespace

std::string report_json(const SpectralReport& rep) {
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(rep.n) + ",\n";
  out += "  \"depth\": " + std::to_string(rep.depth) + ",\n";
  out += "  \"multiplicity\": " + std::to_string(rep.multiplicity) + ",\n";
  out += "  \"eigenvalues\": [";
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_g12(rep.eigenvalues[i]);
  }
  out += "],\n";
  out += "  \"kappa\": " + format_g12(rep.kappa) + ",\n";
  out += "  \"generator\": {\n";
  json_field(out, "lo", rep.gen_lo);
  json_field(out, "hi", rep.gen_hi);
  json_field(out, "subspace_floor", rep.subspace_floor);
  json_field(out, "subspace_spread", rep.subspace_spread);
  json_field(out, "W", rep.W, true);
  out += "  },\n";
  out += "  \"xi\": " + format_g12(rep.xi) + ",\n";
  out += "  \"c\": " + format_g12(rep.c) + ",\n";
  out += std::string("  \"out_of_regime\": ") + (rep.out_of_regime ? "true" : "false") + ",\n";
  out += "  \"distance_matrix\": {\n";
  json_field(out, "lambda1", rep.dist_lambda1);
  json_field(out, "lambda2", rep.dist_lambda2);
  json_field(out, "perron_lo", rep.perron_lo);
  json_field(out, "perron_hi", rep.perron_hi);
  json_field(out, "lambda2_bound", rep.lambda2_bound);
  out += std::string("    \"perron_ok\": ") + (rep.perron_ok ? "true" : "false") + ",\n";
  out += std::string("    \"lambda2_ok\": ") + (rep.lambda2_ok ? "true" : "false") + "\n";
  out += "  },\n";
  out += "  \"reference\": {\n";
  json_field(out, "top_lo", rep.reference.top_lo);
  json_field(out, "top_hi", rep.reference.top_hi);
  json_field(out, "bulk_lo", rep.reference.bulk_lo);
  json_field(out, "bulk_hi", rep.reference.bulk_hi, true);
  out += "  },\n";
  out += "  \"predictions\": {\n";
  json_field(out, "top", rep.pred_top);
  json_field(out, "bulk", rep.pred_bulk);
  json_field(out, "kappa", rep.pred_kappa, true);
  out += "  },\n";
  out += "  \"residuals\": {\n";
  json_field(out, "top", rep.res_top);
  json_field(out, "bulk", rep.res_bulk);
  json_field(out, "kappa", rep.res_kappa, true);
  out += "  }\n";
  out += "}\n";
  return out;
}

const char* const kReportCsvHeader = "l,kappa,lambda1,lambda_bulk_max,lambda_min,xi,W,c";

std::string report_csv_row(const SpectralReport& rep) {
  std::string out = std::to_string(rep.depth);
  out += ',' + format_g12(rep.kappa);
  out += ',' + format_g12(rep.eigenvalues.front());
  out += ',' + format_g12(rep.eigenvalues.size() > 1 ? rep.eigenvalues[1] : rep.eigenvalues[0]);
  out += ',' + format_g12(rep.eigenvalues.back());
  out += ',' + format_g12(rep.xi);
  out += ',' + format_g12(rep.W);
  out += ',' + format_g12(rep.c);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace ntkeoc
