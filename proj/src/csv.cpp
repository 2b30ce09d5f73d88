#include "gkdv/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gkdv/errors.hpp"

namespace gkdv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  throw std::out_of_range("no column '" + name + "'");
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (table.header.size() != table.columns.size()) throw std::invalid_argument("header/column count mismatch");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << format_double(table.columns[i][r]);
    os << "\n";
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError(path.string() + ": empty CSV");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  t.columns.resize(t.header.size());
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(ss, cell, ',')) {
      if (i >= t.columns.size()) throw ConfigError(path.string() + ": too many cells in row " + std::to_string(row));
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw ConfigError(path.string() + ": bad number '" + cell + "' in row " + std::to_string(row));
      }
      t.columns[i++].push_back(v);
    }
    if (i != t.columns.size()) throw ConfigError(path.string() + ": too few cells in row " + std::to_string(row));
  }
  return t;
}

CsvTable trajectory_table(const Trajectory& tr) {
  CsvTable t;
  t.header = trajectory_header();
  t.columns.resize(8);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const CoordSample& c = tr.coords[i];
    const double vals[8] = {tr.times[i], c.y, c.a_plus, c.a_minus, c.ve_h1, tr.dist[i], tr.energy[i], tr.momentum[i]};
    for (int j = 0; j < 8; ++j) t.columns[j].push_back(vals[j]);
  }
  return t;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
  write_csv(path, trajectory_table(tr));
}

void write_state_csv(const std::filesystem::path& path, const Field& u) {
  CsvTable t;
  t.header = {"x", "u"};
  t.columns = {u.grid().nodes(), u.values()};
  write_csv(path, t);
}

Field read_state_csv(const std::filesystem::path& path, const GridPtr& grid) {
  const CsvTable t = read_csv(path);
  if (t.header != std::vector<std::string>{"x", "u"}) throw ConfigError(path.string() + ": expected header x,u");
  if (t.rows() != grid->size()) {
    throw ConfigError(path.string() + ": " + std::to_string(t.rows()) + " rows, grid has " +
                      std::to_string(grid->size()) + " nodes");
  }
  const auto& x = t.column("x");
  for (std::size_t j = 0; j < grid->size(); ++j) {
    if (std::abs(x[j] - grid->x(j)) > 1e-9 * grid->half_length()) {
      throw ConfigError(path.string() + ": node " + std::to_string(j) + " does not match the configured grid");
    }
  }
  return Field(grid, t.column("u"));
}

}  // namespace gkdv
