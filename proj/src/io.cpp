#include "stlcfs/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace stlcfs {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvError::CsvError(const std::string& message, int row, int column)
    : std::runtime_error("line " + std::to_string(row) + (column > 0 ? ", column " + std::to_string(column) : "") +
                         ": " + message),
      row_(row),
      column_(column) {}

CsvTable read_csv(std::istream& in, const std::vector<std::string>& expected_header) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty file, expected a header", 1, 0);
  for (auto& c : split(strip(line))) table.header.push_back(strip(c));
  if (table.header != expected_header) {
    std::string want;
    for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
    throw CsvError("header mismatch, expected '" + want + "'", 1, 0);
  }
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip(line);
    if (line.empty()) continue;
    std::vector<std::string> cells = split(line);
    if (cells.size() != expected_header.size()) {
      throw CsvError("expected " + std::to_string(expected_header.size()) + " fields, found " +
                         std::to_string(cells.size()),
                     row, 0);
    }
    for (auto& c : cells) c = strip(c);
    table.rows.push_back(std::move(cells));
  }
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path, const std::vector<std::string>& expected_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_csv(in, expected_header);
}

double parse_csv_double(const std::string& cell, int row, int column) {
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto res = std::from_chars(cell.data(), end, v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != end) {
    throw CsvError("not a number: '" + cell + "'", row, column);
  }
  return v;
}

const std::vector<std::string>& trajectory_csv_header() {
  static const std::vector<std::string> h{"t", "x", "y", "z", "vx", "vy", "vz", "ax", "ay", "az"};
  return h;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto& h = trajectory_csv_header();
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << "\n";
  const int T = traj.T();
  for (int t = 1; t <= T; ++t) {
    out << t;
    for (int i = 0; i < 3; ++i) out << "," << format_double(traj.positions(t - 1, i));
    for (int i = 0; i < 3; ++i) out << "," << format_double(traj.velocities(t - 1, i));
    for (int i = 0; i < 3; ++i) out << "," << (t < T ? format_double(traj.accelerations(t - 1, i)) : "");
    out << "\n";
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  const CsvTable table = read_csv(in, trajectory_csv_header());
  const int T = static_cast<int>(table.rows.size());
  if (T < 2) throw CsvError("need at least 2 data rows, found " + std::to_string(T), T + 1, 0);
  Trajectory traj;
  traj.positions.resize(T, 3);
  traj.velocities.resize(T, 3);
  traj.accelerations.resize(T - 1, 3);
  for (int i = 0; i < T; ++i) {
    const auto& r = table.rows[i];
    const int line = i + 2;
    const double t = parse_csv_double(r[0], line, 1);
    if (t != i + 1) throw CsvError("expected t = " + std::to_string(i + 1), line, 1);
    for (int c = 0; c < 3; ++c) {
      traj.positions(i, c) = parse_csv_double(r[1 + c], line, 2 + c);
      traj.velocities(i, c) = parse_csv_double(r[4 + c], line, 5 + c);
    }
    for (int c = 0; c < 3; ++c) {
      const std::string& cell = r[7 + c];
      if (i == T - 1) {
        if (!cell.empty()) throw CsvError("accelerations must be blank on the last row", line, 8 + c);
      } else {
        if (cell.empty()) throw CsvError("missing acceleration", line, 8 + c);
        traj.accelerations(i, c) = parse_csv_double(cell, line, 8 + c);
      }
    }
  }
  return traj;
}

Trajectory read_trajectory_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trajectory_csv(in);
}

}  // namespace stlcfs
