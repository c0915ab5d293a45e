#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "core/errors.hpp"
#include "core/gaussian.hpp"
#include "doctest.h"

using namespace chiralq;

namespace {
constexpr double pi = std::numbers::pi;

Eigen::Matrix4d omega4() {
  Eigen::Matrix4d W = Eigen::Matrix4d::Zero();
  W(0, 1) = 1.0; W(1, 0) = -1.0;
  W(2, 3) = 1.0; W(3, 2) = -1.0;
  return W;
}

// Covariance of a synthetic pair with given (eta, band E).
Eigen::Matrix4d pair_cov(double eta, double E) {
  const double u = 1.0 - eta * eta;
  const double D = E * E + u * u;
  CorrelatorState s;
  s.aa = -eta * std::complex<double>(u, -E) / D;
  s.nk = s.nkp = eta * eta / u;
  return state_covariance(s);
}

double min_phys_eig(const Eigen::Matrix4d& g) {
  Eigen::Matrix4cd H =
      g.cast<std::complex<double>>() +
      std::complex<double>(0.0, 0.5) * omega4().cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}
} // namespace

TEST_CASE("steady pair moments") {
  const EffectiveModel m = from_couplings(0.1, 0.05, 0.0, 0.0, 10);
  const CorrelatorState s = steady_correlators(m, 0.0, 1.0, 2.0 * pi / 10);
  CHECK(s.nk == doctest::Approx(0.25 / 0.75).epsilon(1e-14));
  CHECK(s.aa.real() == doctest::Approx(-0.5 / 0.75).epsilon(1e-14));
  CHECK(s.aa.imag() == 0.0);
  s.validate();

  const PairCovariance pc = steady_covariance(m, 0.0, 1.0, 2.0 * pi / 10);
  CHECK(pc.gamma(0, 0) == doctest::Approx((1.0 + 0.25) / (2.0 * 0.75)).epsilon(1e-14));
  CHECK(pc.gamma(0, 2) == doctest::Approx(-0.5 / 0.75).epsilon(1e-14));
  CHECK(pc.gamma(1, 3) == doctest::Approx(0.5 / 0.75).epsilon(1e-14));
  CHECK(pc.k_partner == doctest::Approx(2.0 * pi - 2.0 * pi / 10).epsilon(1e-12));
}

TEST_CASE("steady state is the fixed point of the correlator flow") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double eta = 0.9 * u01(rng);
    const double g1 = 0.05 + 0.2 * u01(rng);
    const double Delta = 0.5 * (u01(rng) - 0.5);
    const double J = 0.2 * u01(rng);
    const double Gamma = 0.5 + u01(rng);
    const EffectiveModel m = from_couplings(g1, eta * g1, 0.0, Delta, 8);
    const double k = 2.0 * pi / 8;

    const CorrelatorState st = steady_correlators(m, J, Gamma, k);
    const CorrelatorState d = correlator_rhs(st, m, J, Gamma, k);
    CHECK(std::abs(d.aa) < 1e-12);
    CHECK(std::abs(d.nk) < 1e-12);
    CHECK(std::abs(d.nkp) < 1e-12);

    // And the flow from vacuum reaches it.
    const double r = 4.0 * g1 * g1 * (1.0 - eta * eta) / Gamma;
    const EvolveResult traj =
        evolve(CorrelatorState{}, m, J, Gamma, k, 25.0 / r, 0.0);
    CHECK(!traj.divergent);
    const CorrelatorState& fin = traj.samples.back();
    CHECK(std::abs(fin.aa - st.aa) <= 1e-9);
    CHECK(std::abs(fin.nk - st.nk) <= 1e-9);
  }
}

TEST_CASE("closed-form log negativity reference values") {
  CHECK(log_negativity_closed(1.0 / 3.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(log_negativity_closed(0.5, 0.0) ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-14));
  CHECK(log_negativity_closed(0.5, 0.2) ==
        doctest::Approx(1.40219363232917).epsilon(1e-13));
  CHECK(log_negativity_closed(0.5, 0.4) ==
        doctest::Approx(1.0285691521967708).epsilon(1e-13));
  CHECK(log_negativity_closed(0.9, 0.1) == 0.0);
  CHECK(log_negativity_closed(0.0, 0.7) == 0.0);
  CHECK(separability_band(0.6) == doctest::Approx(0.8533333333333334).epsilon(1e-14));
}

TEST_CASE("threshold is exact and E_N is even and monotone in the band parameter") {
  for (double eta : {0.2, 0.5, 0.8}) {
    const double thr = separability_band(eta);
    CHECK(log_negativity_closed(eta, thr) == 0.0);
    CHECK(log_negativity_closed(eta, thr * 1.0001) == 0.0);
    CHECK(log_negativity_closed(eta, thr * 0.999) > 0.0);
    CHECK(log_negativity_closed(eta, -0.3) ==
          doctest::Approx(log_negativity_closed(eta, 0.3)).epsilon(1e-15));
    double prev = log_negativity_closed(eta, 0.0);
    for (double E = 0.05; E < 1.5 * thr; E += 0.05) {
      const double cur = log_negativity_closed(eta, E);
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
  }
  CHECK_THROWS_AS(log_negativity_closed(1.0, 0.0), Unstable);
  CHECK_THROWS_AS(log_negativity_closed(-0.2, 0.0), ValidationError);
}

TEST_CASE("symplectic route agrees with the closed form") {
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) {
      const double eta = 0.95 * i / 29.0;
      const double E = 1.0 * j / 29.0;
      const double closed = log_negativity_closed(eta, E);
      const double sympl = log_negativity_sympl(pair_cov(eta, E));
      CHECK(std::abs(closed - sympl) <= 1e-10);
    }
}

TEST_CASE("log negativity is invariant under local phase-space rotations") {
  std::mt19937 rng(4321);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double eta = 0.05 + 0.85 * u01(rng);
    const double E = 2.0 * u01(rng) - 1.0;
    const Eigen::Matrix4d g = pair_cov(eta, E);

    Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
    for (int mode = 0; mode < 2; ++mode) {
      const double th = 2.0 * pi * u01(rng);
      S(2 * mode, 2 * mode) = std::cos(th);
      S(2 * mode, 2 * mode + 1) = std::sin(th);
      S(2 * mode + 1, 2 * mode) = -std::sin(th);
      S(2 * mode + 1, 2 * mode + 1) = std::cos(th);
    }
    const Eigen::Matrix4d rotated = S * g * S.transpose();
    CHECK(std::abs(log_negativity_sympl(rotated) - log_negativity_sympl(g)) <= 1e-9);
  }
}

TEST_CASE("symplectic route rejects broken covariances") {
  Eigen::Matrix4d asym = pair_cov(0.4, 0.0);
  asym(0, 2) += 1e-6;
  CHECK_THROWS_AS(log_negativity_sympl(asym), NonPhysical);
  CHECK_THROWS_AS(log_negativity_sympl(Eigen::Matrix4d::Identity() * 0.1),
                  NonPhysical);
}

TEST_CASE("self-paired and unstable guards") {
  const EffectiveModel m = from_couplings(0.1, 0.05, 0.0, 0.0, 10);
  CHECK_THROWS_AS(steady_covariance(m, 0.0, 1.0, 0.0), SelfPaired);
  CHECK_THROWS_AS(steady_covariance(m, 0.0, 1.0, pi), SelfPaired);

  const EffectiveModel bad = from_couplings(0.1, 0.12, 0.0, 0.0, 10);
  CHECK(bad.unstable);
  CHECK_THROWS_AS(steady_covariance(bad, 0.0, 1.0, 2.0 * pi / 10), Unstable);
  CHECK_THROWS_AS(steady_correlators(bad, 0.0, 1.0, 2.0 * pi / 10), Unstable);
  CHECK_THROWS_AS(lattice_steady(bad, 0.0, 1.0), Unstable);

  const EvolveResult traj =
      evolve(CorrelatorState{}, bad, 0.0, 1.0, 2.0 * pi / 10, 5.0, 0.0);
  CHECK(traj.divergent);
  CHECK(traj.samples.back().nk > 0.0);
}

TEST_CASE("transient closed forms match the integrator") {
  const double g1 = 0.1, Gamma = 1.0;
  for (double eta : {0.3, 0.5, 0.7}) {
    const EffectiveModel m = from_couplings(g1, eta * g1, 0.0, 0.0, 10);
    const double r = 4.0 * g1 * g1 * (1.0 - eta * eta) / Gamma;
    const EvolveResult traj =
        evolve(CorrelatorState{}, m, 0.0, Gamma, 2.0 * pi / 10, 5.0 / r, 0.25);
    for (size_t i = 0; i < traj.samples.size(); i += 7) {
      const CorrelatorState& s = traj.samples[i];
      CHECK(s.nk == doctest::Approx(transient_number(eta, r, s.t))
                        .epsilon(1e-9).scale(1.0));
      CHECK(std::abs(s.aa) == doctest::Approx(transient_pair(eta, r, s.t))
                                  .epsilon(1e-9).scale(1.0));
      const double en = log_negativity_sympl(state_covariance(s));
      CHECK(en == doctest::Approx(transient_log_negativity(eta, r, s.t))
                      .epsilon(1e-9).scale(1.0));
    }
  }
  CHECK(transient_log_negativity(0.5, 1.0, 1.0) ==
        doctest::Approx(0.7893959466069528).epsilon(1e-13));
  CHECK(transient_log_negativity(0.5, 1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(transient_number(0.5, 0.0, 1.0), Unstable);
}

TEST_CASE("correlator validation catches impossible moments") {
  CorrelatorState s;
  s.aa = 2.0;
  s.nk = s.nkp = 0.1;
  CHECK_THROWS_AS(s.validate(), NonPhysical);
  s.aa = 0.0;
  s.nk = -0.1;
  CHECK_THROWS_AS(s.validate(), NonPhysical);
}

TEST_CASE("evolve input validation") {
  const EffectiveModel m = from_couplings(0.1, 0.05, 0.0, 0.0, 10);
  CHECK_THROWS_AS(evolve(CorrelatorState{}, m, 0.0, 1.0, 0.0, -1.0, 0.0),
                  ValidationError);
  const EvolveResult none = evolve(CorrelatorState{}, m, 0.0, 1.0, 0.0, 0.0, 0.0);
  CHECK(none.samples.size() == 1);
  CHECK_THROWS_AS(evolve(CorrelatorState{}, m, 0.0, 1.0, 0.0, 1e6, 1e-3),
                  ValidationError); // step-count cap
}

TEST_CASE("criticality report tracks the generator spectrum") {
  const double g1 = 0.1, Gamma = 1.0;
  double prev_err = 1e9;
  for (int n = 2; n <= 10; ++n) {
    const double eta = 1.0 - std::pow(2.0, -n);
    const EffectiveModel m = from_couplings(g1, eta * g1, 0.0, 0.0, 4);
    const CriticalityReport rep = criticality(m, Gamma, 0.7);
    CHECK(rep.stable);
    CHECK(rep.eta == doctest::Approx(eta).epsilon(1e-14));
    const double r = 4.0 * g1 * g1 * (1.0 - eta * eta) / Gamma;
    CHECK(rep.relax_rate == doctest::Approx(r).epsilon(1e-9));
    const double limit = Gamma / (8.0 * g1 * g1);
    const double err = std::abs(rep.T1 * (1.0 - eta) - limit) / limit;
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err <= 0.01);

  const EffectiveModel crit = from_couplings(0.1, 0.1, 0.0, 0.0, 4);
  const CriticalityReport rep = criticality(crit, Gamma);
  CHECK(!rep.stable);
  CHECK(std::isinf(rep.T1));
}

TEST_CASE("lattice steady state covers every mode exactly once") {
  const double J = 0.06, Gamma = 1.0;

  const EffectiveModel q0 = from_couplings(0.1, 0.05, 0.0, 0.1, 10);
  const LatticeSteady s0 = lattice_steady(q0, J, Gamma);
  CHECK(s0.gamma.rows() == 20);
  CHECK(s0.pairs.size() == 4);
  CHECK(s0.self_paired == std::vector<int>{0, 5});

  const EffectiveModel q1 = from_couplings(0.1, 0.05, 2.0 * pi / 10, 0.1, 10);
  const LatticeSteady s1 = lattice_steady(q1, J, Gamma);
  CHECK(s1.pairs.size() == 5);
  CHECK(s1.self_paired.empty());
  CHECK(s1.pair_log_negativity.size() == 5);

  std::vector<int> hits(10, 0);
  for (auto [a, b] : s1.pairs) {
    ++hits[a];
    ++hits[b];
    CHECK(a < b);
  }
  for (int h : hits) CHECK(h == 1);

  // Self-paired blocks never dip below the minimum-uncertainty determinant.
  const Eigen::Matrix2d blk = s0.gamma.block<2, 2>(0, 0);
  const double det = blk.determinant();
  CHECK(det >= 0.25 - 1e-12);
  Eigen::Matrix4d embed = Eigen::Matrix4d::Identity() * 0.5;
  embed.block<2, 2>(0, 0) = blk;
  CHECK(min_phys_eig(embed) >= -1e-10);

  // Stitch a full pair back out of the lattice matrix and verify physicality.
  const auto [a, b] = s1.pairs[0];
  Eigen::Matrix4d g;
  g.block<2, 2>(0, 0) = s1.gamma.block<2, 2>(2 * a, 2 * a);
  g.block<2, 2>(0, 2) = s1.gamma.block<2, 2>(2 * a, 2 * b);
  g.block<2, 2>(2, 0) = s1.gamma.block<2, 2>(2 * b, 2 * a);
  g.block<2, 2>(2, 2) = s1.gamma.block<2, 2>(2 * b, 2 * b);
  CHECK(min_phys_eig(g) >= -1e-10);
  CHECK(log_negativity_sympl(g) ==
        doctest::Approx(s1.pair_log_negativity[0]).epsilon(1e-10));
}
