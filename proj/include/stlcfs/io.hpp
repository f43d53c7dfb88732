#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlcfs/dynamics.hpp"

namespace stlcfs {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Schema or value error in a CSV file. Row is the 1-based line number,
/// column the 1-based field index (0 when the whole line is at fault).
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& message, int row, int column);
  int row() const { return row_; }
  int column() const { return column_; }

 private:
  int row_;
  int column_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // rows[i] is file line i + 2
};

/// Reads comma-separated text; the first line must equal `expected_header`
/// and every row must have that many fields.
CsvTable read_csv(std::istream& in, const std::vector<std::string>& expected_header);
CsvTable read_csv_file(const std::filesystem::path& path, const std::vector<std::string>& expected_header);

/// Parses a full-precision double; throws CsvError at (row, column).
double parse_csv_double(const std::string& cell, int row, int column);

const std::vector<std::string>& trajectory_csv_header();

/// t,x,y,z,vx,vy,vz,ax,ay,az with accelerations blank on the last row.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);
Trajectory read_trajectory_csv_file(const std::filesystem::path& path);

}  // namespace stlcfs
