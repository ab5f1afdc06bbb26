#include "lbspec/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lbspec {

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "index,eigenvalue\n";
  for (int i = 0; i < spectrum.count(); ++i)
    out << (i + 1) << ',' << format_full(spectrum.eigenvalues[i]) << '\n';
  if (!out) throw ParseError("write failed for " + path.string());
}

namespace {

bool parse_double(const std::string& field, double& value) {
  const char* begin = field.c_str();
  char* end = nullptr;
  value = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ls(line);
  while (std::getline(ls, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

VecX read_spectrum_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const auto fields = split_fields(line);
    double v = 0.0;
    if (first && (fields.empty() || !parse_double(fields.back(), v))) {
      first = false;  // header row
      continue;
    }
    first = false;
    if (fields.empty() || !parse_double(fields.back(), v))
      throw ParseError(path.string() + ": malformed row '" + line + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ParseError(path.string() + ": no eigenvalues found");
  return Eigen::Map<VecX>(values.data(), static_cast<int>(values.size()));
}

MatX read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool ok = !fields.empty();
    for (const auto& f : fields) {
      double v = 0.0;
      if (!parse_double(f, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw ParseError(path.string() + ": malformed row '" + line + "'");
    }
    first = false;
    if (!rows.empty() && rows.front().size() != row.size())
      throw ParseError(path.string() + ": inconsistent column count at row " +
                       std::to_string(rows.size() + 1));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path.string() + ": no data rows");
  MatX out(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out(i, j) = rows[i][j];
  return out;
}

void write_matrix_csv(const MatX& rows, const std::filesystem::path& path,
                      const std::string& header) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  if (!header.empty()) out << header << '\n';
  for (int i = 0; i < rows.rows(); ++i) {
    for (int j = 0; j < rows.cols(); ++j) {
      if (j) out << ',';
      out << format_full(rows(i, j));
    }
    out << '\n';
  }
  if (!out) throw ParseError("write failed for " + path.string());
}

}  // namespace lbspec
