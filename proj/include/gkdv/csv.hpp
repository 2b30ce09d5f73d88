#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gkdv/dynamics.hpp"

namespace gkdv {

// 17 significant digits; parses back to the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  const std::vector<double>& column(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

inline const std::vector<std::string>& trajectory_header() {
  static const std::vector<std::string> h{"t", "y", "a_plus", "a_minus", "ve_h1", "dist", "E", "P"};
  return h;
}

CsvTable trajectory_table(const Trajectory& tr);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr);

// State files: columns x,u on the run grid.
void write_state_csv(const std::filesystem::path& path, const Field& u);
Field read_state_csv(const std::filesystem::path& path, const GridPtr& grid);

}  // namespace gkdv
