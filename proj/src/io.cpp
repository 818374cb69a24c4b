#include "acca/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "acca/errors.hpp"

namespace acca {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("rename " + tmp.string() + " -> " + path.string() + ": " +
                  ec.message());
  }
}

std::string format_csv_matrix(const Mat& m) {
  std::string out;
  out.reserve(m.size() * 20);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_csv_matrix(const std::filesystem::path& path, const Mat& m) {
  atomic_write(path, format_csv_matrix(m));
}

Mat read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const char* first = line.data() + pos;
      const char* last = line.data() + comma;
      while (first < last && (*first == ' ' || *first == '\t')) ++first;
      double value = 0.0;
      const auto res = std::from_chars(first, last, value);
      if (res.ec != std::errc{} || !std::isfinite(value)) {
        throw IoError("bad number in " + path.string() + ": '" +
                      std::string(line.data() + pos, comma - pos) + "'");
      }
      row.push_back(value);
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError("ragged CSV: " + path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty matrix file: " + path.string());
  Mat m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_pgm(const std::filesystem::path& path, const Mat& m) {
  std::ostringstream out;
  out << "P2\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double clamped = std::min(1.0, std::max(0.0, m(i, j)));
      const int pixel = static_cast<int>(std::lround(255.0 * (1.0 - clamped)));
      if (j) out << ' ';
      out << pixel;
    }
    out << '\n';
  }
  atomic_write(path, out.str());
}

}  // namespace acca
