// Regenerates the two-node golden fixture used by the test suite.
//
//   make_two_mode_fixture <output-dir>
//
// The system and its componentwise equations of motion live in
// include/hfb/two_mode_reference.hpp. The trajectory is integrated with RK4 at
// dt = 1e-6 up to T = 1 and written as snapshots plus a CSV of the particle
// number and energy every 1e-2. The manifest records the hash of the
// generator sources, which the tests compare against the current build.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hfb/observables.hpp"
#include "hfb/snapshot.hpp"
#include "hfb/two_mode_reference.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_two_mode_fixture <output-dir>\n";
    return 2;
  }
  namespace fs = std::filesystem;
  const fs::path dir = argv[1];
  fs::create_directories(dir);

  const double dt = 1e-6;
  const double final_time = 1.0;
  const long stride = 10000;
  const auto sys = hfb::oracle::two_mode_system();
  const auto traj = hfb::oracle::integrate_two_mode(sys, final_time, dt, stride);

  hfb::write_snapshot((dir / "two_mode_initial.hfb").string(), hfb::oracle::to_state(sys, traj.values.front()));
  hfb::write_snapshot((dir / "two_mode_final.hfb").string(), hfb::oracle::to_state(sys, traj.values.back()));
  {
    const long mid = static_cast<long>(traj.values.size() / 2);
    hfb::write_snapshot((dir / "two_mode_half.hfb").string(), hfb::oracle::to_state(sys, traj.values[mid]));
  }

  std::ofstream csv(dir / "two_mode_diagnostics.csv");
  csv << "t,N_total,energy\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    csv << hfb::format_double(traj.times[i]) << ',' << hfb::format_double(hfb::oracle::two_mode_particle_number(traj.values[i]))
        << ',' << hfb::format_double(hfb::oracle::two_mode_energy(sys, traj.values[i])) << '\n';

  std::ofstream manifest(dir / "two_mode_manifest.txt");
  manifest << "generator = tools/make_two_mode_fixture.cpp\n"
           << "system = include/hfb/two_mode_reference.hpp\n"
           << "generator_sha256 = " << HFB_FIXTURE_GENERATOR_SHA256 << '\n'
           << "scheme = rk4\n"
           << "dt = " << hfb::format_double(dt) << '\n'
           << "T = " << hfb::format_double(final_time) << '\n'
           << "csv_stride_steps = " << stride << '\n'
           << "half_time = " << hfb::format_double(traj.times[traj.values.size() / 2]) << '\n';
  std::cout << "wrote fixture to " << dir << '\n';
  return 0;
}
