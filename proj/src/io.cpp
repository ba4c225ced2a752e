#include "porocomb/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#ifndef POROCOMB_VERSION
#define POROCOMB_VERSION "unknown"
#endif

namespace porocomb {

namespace fs = std::filesystem;

std::string version() { return POROCOMB_VERSION; }

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::size_t> snapshot_indices(std::size_t size, int count) {
  std::vector<std::size_t> idx;
  if (size == 0) return idx;
  if (count <= 0 || static_cast<std::size_t>(count) >= size) {
    for (std::size_t k = 0; k < size; ++k) idx.push_back(k);
    return idx;
  }
  if (count == 1) return {size - 1};
  for (int k = 0; k < count; ++k) {
    const std::size_t j = static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * static_cast<double>(size - 1) / (count - 1)));
    if (idx.empty() || j != idx.back()) idx.push_back(j);
  }
  return idx;
}

namespace {

void ensure_parent(const fs::path& p) {
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "'");
}

std::ofstream open_out(const fs::path& p) {
  ensure_parent(p);
  std::ofstream out(p);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

double parse_cell(const std::string& s, const std::string& file) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw IoError("malformed number '" + s + "' in '" + file + "'");
  return v;
}

}  // namespace

void write_trajectory(const Trajectory<double>& u, const Grid<double>& grid,
                      const std::string& prefix, const Trajectory<double>* fuel,
                      const std::vector<std::size_t>* select) {
  if (fuel && fuel->times != u.times)
    throw InvalidArgument("write_trajectory: fuel nodes differ from temperature nodes");
  const fs::path base(prefix);
  const std::string stem = base.filename().string();
  const Index n = u.empty() ? 0 : u.states[0].rows();

  std::vector<std::size_t> all;
  if (!select) {
    for (std::size_t k = 0; k < u.size(); ++k) all.push_back(k);
    select = &all;
  }

  std::ofstream index = open_out(fs::path(prefix + "_index.csv"));
  index << "time,file";
  for (Index i = 0; i < n; ++i) index << ",l2_" << i + 1;
  index << "\n";

  for (std::size_t k : *select) {
    if (k >= u.size()) throw InvalidArgument("write_trajectory: snapshot index out of range");
    char name[32];
    std::snprintf(name, sizeof name, "_%05zu.csv", k);
    const fs::path file = base.parent_path() / (stem + name);
    std::ofstream out = open_out(file);
    const Field<double>& s = u.states[k];
    if (s.cols() != grid.m) throw InvalidArgument("write_trajectory: grid mismatch");
    out << "x";
    for (Index i = 0; i < n; ++i) out << ",u_" << i + 1;
    if (fuel)
      for (Index i = 0; i < n; ++i) out << ",y_" << i + 1;
    out << "\n";
    for (Index j = 0; j < grid.m; ++j) {
      out << format_number(grid.node(j));
      for (Index i = 0; i < n; ++i) out << ',' << format_number(s(i, j));
      if (fuel)
        for (Index i = 0; i < n; ++i) out << ',' << format_number(fuel->states[k](i, j));
      out << "\n";
    }
    if (!out) throw IoError("failed writing '" + file.string() + "'");
    const Profile<double> norms = layer_l2_norms(s, grid.dx);
    index << format_number(u.times[k]) << ',' << file.filename().string();
    for (Index i = 0; i < n; ++i) index << ',' << format_number(norms(i));
    index << "\n";
  }
  if (!index) throw IoError("failed writing '" + prefix + "_index.csv'");
}

TrajectoryFiles read_trajectory(const std::string& index_path) {
  std::ifstream index(index_path);
  if (!index) throw IoError("cannot read '" + index_path + "'");
  const fs::path dir = fs::path(index_path).parent_path();
  TrajectoryFiles r;
  std::string line;
  if (!std::getline(index, line)) throw IoError("empty index '" + index_path + "'");
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() < 2) throw IoError("malformed index line in '" + index_path + "'");
    const double t = parse_cell(cells[0], index_path);
    std::vector<double> norms;
    for (std::size_t c = 2; c < cells.size(); ++c) norms.push_back(parse_cell(cells[c], index_path));
    r.index_norms.push_back(norms);

    const fs::path file = dir / cells[1];
    std::ifstream in(file);
    if (!in) throw IoError("cannot read '" + file.string() + "'");
    std::string header;
    std::getline(in, header);
    const auto cols = split(header);
    Index n = 0, ny = 0;
    for (const auto& c : cols) {
      if (c.rfind("u_", 0) == 0) ++n;
      if (c.rfind("y_", 0) == 0) ++ny;
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      for (const auto& c : split(line)) row.push_back(parse_cell(c, file.string()));
      if (row.size() != cols.size()) throw IoError("ragged row in '" + file.string() + "'");
      rows.push_back(std::move(row));
    }
    const Index m = static_cast<Index>(rows.size());
    Field<double> u(n, m), y(ny, m);
    std::vector<double> x(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) {
      const auto& row = rows[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(j)] = row[0];
      for (Index i = 0; i < n; ++i) u(i, j) = row[static_cast<std::size_t>(1 + i)];
      for (Index i = 0; i < ny; ++i) y(i, j) = row[static_cast<std::size_t>(1 + n + i)];
    }
    if (r.x.empty()) r.x = x;
    r.u.push_back(t, std::move(u));
    if (ny > 0) r.y.push_back(t, std::move(y));
  }
  return r;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_out(fs::path(path));
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out = open_out(fs::path(path));
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

double front_position(const Eigen::Ref<const Eigen::Array<double, 1, Eigen::Dynamic>>& profile,
                      const Grid<double>& grid, double threshold) {
  for (Index j = 0; j + 1 < profile.size(); ++j) {
    const double a = profile(j), b = profile(j + 1);
    if (a >= threshold && b < threshold) return grid.node(j) + grid.dx * (a - threshold) / (a - b);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace porocomb
