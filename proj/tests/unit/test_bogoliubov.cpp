#include <gtest/gtest.h>

#include "hfb/bogoliubov.hpp"
#include "hfb/oracle.hpp"
#include "hfb/snapshot.hpp"
#include "support/helpers.hpp"

using namespace hfb;
using namespace testing_support;

namespace {

Trajectory stored_run(const HfbState& s, const HfbModel& m, double t, double dt, int stride) {
  EvolveOptions opt;
  opt.final_time = t;
  opt.dt = dt;
  opt.store_stride = stride;
  return evolve(s, m, opt);
}

}  // namespace

TEST(Bogoliubov, FreeGeneratorIsBlockDiagonalPhase) {
  const HfbModel m = free_model(8, 0.4);
  const HfbState vac = vacuum_state(m.grid);
  const Kernel w_t = constant_propagator(m.grid.weight() * hfb_generator(vac, m).block, 0.7);
  const HfbState probe = random_band_limited_state(m.grid, 1, 3, 0.3, 0.3, 0.0);
  // Gamma_t = W Gamma_0 W^dagger with W = diag(U, conj U) is the free flow.
  const HfbState flowed = oracle::free_flow(probe, 0.7, m.one_body);
  const Kernel predicted = w_t * generalized_density_matrix(probe).matrix * w_t.adjoint();
  EXPECT_LT(max_abs(predicted - generalized_density_matrix(flowed).matrix), 1e-10);
  EXPECT_LT(max_abs(w_t.topRightCorner(8, 8)), 1e-14);
}

TEST(Bogoliubov, FrozenGeneratorExponentialIsSymplectic) {
  const HfbModel m = gaussian_model(8, 0.8, 0.4, 0.3);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const HfbState s = random_band_limited_state(m.grid, seed, 3, 0.5, 0.6, 1.5);
    const Kernel w_t = constant_propagator(m.grid.weight() * hfb_generator(s, m).block, 0.4);
    EXPECT_LT(symplectic_defect(w_t), 1e-10);
  }
}

TEST(Bogoliubov, FreeTrajectoryIsReconstructed) {
  const HfbModel m = free_model(8, 0.4);
  const HfbState s = random_band_limited_state(m.grid, 3, 3, 0.4, 0.5, 0.0);
  const BogoliubovReport r = bogoliubov_check(stored_run(s, m, 0.5, 1e-3, 10), m);
  EXPECT_LT(r.max_symplectic_defect(), 1e-10);
  EXPECT_LT(r.max_reconstruction_defect(), 1e-8);
  EXPECT_EQ(r.times.size(), 51u);
}

TEST(Bogoliubov, InteractingTrajectoryIsReconstructed) {
  const HfbModel m = gaussian_model(8);
  const HfbState s = random_band_limited_state(m.grid, 3, 3, 0.4, 0.5, 1.5);
  const BogoliubovReport r = bogoliubov_check(stored_run(s, m, 0.3, 5e-4, 1), m);
  EXPECT_LT(r.max_symplectic_defect(), 1e-9);
  EXPECT_LT(r.max_reconstruction_defect(), 1e-6);
}

// On the two-node fixture, a short frozen-generator step with the library's
// phase convention tracks one RK4 step to second order; the opposite sign
// misses by a first-order amount.
TEST(Bogoliubov, PhaseConventionMatchesFixtureDynamics) {
  const auto sys = oracle::two_mode_system();
  const HfbModel m = oracle::two_mode_model(sys);
  const HfbState s0 = read_snapshot(std::string(HFB_FIXTURE_DIR) + "/two_mode_initial.hfb");
  const double tau = 1e-3;
  const Kernel a = m.grid.weight() * hfb_generator(s0, m).block;
  const Kernel gamma0 = generalized_density_matrix(s0).matrix;
  const Kernel gamma1 = generalized_density_matrix(step_rk4(s0, m, tau)).matrix;
  const Kernel w_ok = constant_propagator(a, tau);
  const Kernel w_flip = constant_propagator(a, -tau);
  const double ok = max_abs(w_ok * gamma0 * w_ok.adjoint() - gamma1);
  const double flip = max_abs(w_flip * gamma0 * w_flip.adjoint() - gamma1);
  EXPECT_LT(ok, 1e-5);
  EXPECT_GT(flip, 1e-4);
  EXPECT_GT(flip, 100.0 * ok);
}

TEST(Bogoliubov, RejectsEmptyTrajectory) {
  EXPECT_THROW(bogoliubov_check(Trajectory{}, gaussian_model(8)), InvalidArgument);
}
