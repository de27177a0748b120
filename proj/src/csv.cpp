#include "magkit/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "magkit/errors.hpp"

namespace magkit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

Eigen::MatrixXd read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("FileNotFound", "cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    std::vector<double> row;
    row.reserve(cells.size());
    bool bad = false;
    for (const auto& c : cells) {
      double v;
      if (!parse_double(c, v)) {
        bad = true;
        break;
      }
      row.push_back(v);
    }
    if (bad) {
      if (first_data_row) {
        first_data_row = false;  // header row
        continue;
      }
      throw_input("InvalidCsv", path + ": non-numeric value on line " + std::to_string(line_no));
    }
    first_data_row = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw_input("InvalidCsv", path + ": line " + std::to_string(line_no) + " has " +
                                    std::to_string(row.size()) + " columns, expected " +
                                    std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw_input("EmptyInput", path + ": no data rows");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

}  // namespace

Eigen::MatrixXd read_points_csv(const std::string& path) {
  return read_numeric_csv(path);
}

Eigen::MatrixXd read_dist_csv(const std::string& path) {
  Eigen::MatrixXd m = read_numeric_csv(path);
  if (m.rows() != m.cols())
    throw_input("NotSquare", path + ": distance matrix must be square, got " +
                                 std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  return m;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("FileNotFound", "cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a:") + hex;
}

}  // namespace magkit
