#include "geostoch/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "geostoch/errors.hpp"

namespace geostoch {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && *first == ' ') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw InputError("CSV line " + std::to_string(line_no) + ": cannot parse number '" + s + "'");
  }
  return v;
}

void write_row(std::ostream& os, const Eigen::VectorXd& coords) {
  for (Eigen::Index i = 0; i < coords.size(); ++i) os << ',' << format_double(coords(i));
}

void write_coord_header(std::ostream& os, Eigen::Index k) {
  for (Eigen::Index i = 1; i <= k; ++i) os << ",c" << i;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

void write_path_csv(std::ostream& os, const Path& path) {
  os << 't';
  write_coord_header(os, path.manifold.ambient_size());
  os << '\n';
  for (std::size_t k = 0; k < path.size(); ++k) {
    os << format_double(path.times[k]);
    write_row(os, path.points[k]);
    os << '\n';
  }
}

void write_paths_long_csv(std::ostream& os, const std::vector<Path>& paths) {
  if (paths.empty()) return;
  os << "path_id,t";
  write_coord_header(os, paths.front().manifold.ambient_size());
  os << '\n';
  for (std::size_t id = 0; id < paths.size(); ++id) {
    const Path& path = paths[id];
    for (std::size_t k = 0; k < path.size(); ++k) {
      os << id << ',' << format_double(path.times[k]);
      write_row(os, path.points[k]);
      os << '\n';
    }
  }
}

Path read_path_csv(std::istream& is, const ManifoldSpec& m) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("path CSV is empty");
  const auto header = split_csv_line(line);
  const auto k = static_cast<std::size_t>(m.ambient_size());
  if (header.size() != k + 1 || header.front() != "t") {
    throw InputError("path CSV header must be t,c1,...,c" + std::to_string(k) + " for " + m.to_string());
  }
  Path path{m, {}, {}};
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != k + 1) throw InputError("CSV line " + std::to_string(line_no) + ": wrong column count");
    path.times.push_back(parse_double(cells[0], line_no));
    Point p(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) p(static_cast<Eigen::Index>(i)) = parse_double(cells[i + 1], line_no);
    path.points.push_back(std::move(p));
  }
  if (path.size() == 0) throw InputError("path CSV has no rows");
  return path;
}

void write_matrix_samples_csv(std::ostream& os, const std::vector<Eigen::MatrixXd>& samples) {
  if (samples.empty()) return;
  const auto n = samples.front().rows();
  bool first = true;
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      os << (first ? "" : ",") << 'm' << r + 1 << c + 1;
      first = false;
    }
  }
  os << '\n';
  for (const auto& s : samples) {
    for (Eigen::Index i = 0; i < s.size(); ++i) os << (i ? "," : "") << format_double(s.data()[i]);
    os << '\n';
  }
}

std::vector<Eigen::MatrixXd> read_matrix_samples_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("sample CSV is empty");
  const auto header = split_csv_line(line);
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(header.size()))));
  if (n < 1 || static_cast<std::size_t>(n * n) != header.size() || header.front() != "m11") {
    throw InputError("sample CSV header must be m11,m21,...,mnn");
  }
  std::vector<Eigen::MatrixXd> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw InputError("CSV line " + std::to_string(line_no) + ": wrong column count");
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n * n; ++i) m.data()[i] = parse_double(cells[static_cast<std::size_t>(i)], line_no);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace geostoch
