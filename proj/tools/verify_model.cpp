// Standalone checker linked against the model library only (no solver,
// assembly or planner). Same output and exit codes as `stlcfs verify`.

#include <iostream>

#include "stlcfs/io.hpp"
#include "stlcfs/verify.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: stlcfs_verify_model <scenario.json> <trajectory.csv>\n";
    return 1;
  }
  try {
    const stlcfs::Scenario s = stlcfs::load_scenario(argv[1]);
    const stlcfs::Trajectory traj = stlcfs::read_trajectory_csv_file(argv[2]);
    if (traj.T() != s.T) {
      std::cerr << "error: trajectory length " << traj.T() << " differs from horizon " << s.T << "\n";
      return 1;
    }
    const stlcfs::VerificationReport report = stlcfs::verify(s, traj);
    std::cout << stlcfs::report_to_json(report).dump(2) << "\n";
    return report.pass ? 0 : 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
