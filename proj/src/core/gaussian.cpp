#include "core/gaussian.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "core/errors.hpp"

namespace chiralq {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
using cd = std::complex<double>;

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d W = Eigen::Matrix4d::Zero();
  W(0, 1) = 1.0; W(1, 0) = -1.0;
  W(2, 3) = 1.0; W(3, 2) = -1.0;
  return W;
}

void check_physical(const Eigen::Matrix4d& gamma) {
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw NonPhysical("covariance matrix is not symmetric");
  Eigen::Matrix4cd H = gamma.cast<cd>() + cd(0.0, 0.5) * symplectic_form().cast<cd>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(H, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw NonPhysical("covariance violates the uncertainty bound");
}

double relax_rate_of(const EffectiveModel& m, double Gamma) {
  return 4.0 * (m.g1 * m.g1 - m.g2 * m.g2) / Gamma;
}

// Steady moments of a single self-paired mode k = q - k (mod 2pi): the jump
// operator squeezes the mode against itself.
void self_paired_block(const EffectiveModel& m, double E, Eigen::Matrix2d& block) {
  const double eta = m.eta;
  const double u = 1.0 - eta * eta;
  const double D = E * E + u * u;
  const cd aa = -eta * std::exp(cd(0.0, m.q)) * cd(u, -E) / D;
  const double a = eta * eta / u + 0.5;
  block << a + aa.real(), -aa.imag(),
           -aa.imag(),    a - aa.real();
}
} // namespace

void PairCovariance::validate() const { check_physical(gamma); }

void CorrelatorState::validate() const {
  if (nk < -1e-12 || nkp < -1e-12)
    throw NonPhysical("negative occupation");
  const double cap = (nk + 0.5) * (nkp + 0.5) - 0.25;
  if (std::norm(aa) > cap + 1e-9)
    throw NonPhysical("pair correlator exceeds the Cauchy-Schwarz bound");
}

CorrelatorState steady_correlators(const EffectiveModel& m, double J, double Gamma,
                                   double k) {
  if (m.unstable) throw Unstable("eta >= 1: no steady state");
  const double eta = m.eta;
  const double E = band_parameter(m, J, Gamma, k);
  const double u = 1.0 - eta * eta;
  const double D = E * E + u * u;
  CorrelatorState s;
  s.aa = -eta * cd(u, -E) / D;
  s.nk = eta * eta / u;
  s.nkp = s.nk;
  s.t = 0.0;
  return s;
}

PairCovariance steady_covariance(const EffectiveModel& m, double J, double Gamma,
                                 double k) {
  if (m.unstable) throw Unstable("eta >= 1: no steady state");
  const double p = pairing(m, k);
  double km = std::fmod(k, two_pi);
  if (km < 0.0) km += two_pi;
  const double gap = std::min(std::abs(p - km), two_pi - std::abs(p - km));
  if (gap <= 1e-9)
    throw SelfPaired("k coincides with its partner; use the single-mode block");

  PairCovariance pc;
  pc.k = km;
  pc.k_partner = p;
  pc.band = band_parameter(m, J, Gamma, k);
  pc.gamma = state_covariance(steady_correlators(m, J, Gamma, k));
  pc.validate();
  return pc;
}

Eigen::Matrix4d state_covariance(const CorrelatorState& s) {
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  g(0, 0) = g(1, 1) = s.nk + 0.5;
  g(2, 2) = g(3, 3) = s.nkp + 0.5;
  const double re = s.aa.real(), im = s.aa.imag();
  Eigen::Matrix2d B;
  B << re, -im,
      -im, -re;
  g.block<2, 2>(0, 2) = B;
  g.block<2, 2>(2, 0) = B.transpose();
  return g;
}

CorrelatorState correlator_rhs(const CorrelatorState& s, const EffectiveModel& m,
                               double J, double Gamma, double k) {
  const double r = relax_rate_of(m, Gamma);
  const double wsum = dispersion(m, J, k) + dispersion(m, J, m.q - k);
  const double c = 4.0 / Gamma;
  CorrelatorState d;
  d.aa = cd(-r, -wsum) * s.aa - c * m.g1 * m.g2;
  d.nk = -r * s.nk + c * m.g2 * m.g2;
  d.nkp = -r * s.nkp + c * m.g2 * m.g2;
  d.t = 1.0;
  return d;
}

EvolveResult evolve(const CorrelatorState& s0, const EffectiveModel& m, double J,
                    double Gamma, double k, double t_final, double dt) {
  if (t_final < 0.0) throw ValidationError("t_final must be >= 0");
  s0.validate();

  EvolveResult out;
  out.divergent = m.unstable;
  out.samples.push_back(s0);
  if (t_final == 0.0) return out;

  if (dt <= 0.0) {
    const double wsum = dispersion(m, J, k) + dispersion(m, J, m.q - k);
    dt = Gamma / (40.0 * m.g1 * m.g1);
    if (wsum != 0.0) dt = std::min(dt, 0.1 / std::abs(wsum));
    // The rate-based step targets the default 10/r horizon; a horizon shorter
    // than that would otherwise collapse to a handful of samples.
    dt = std::min(dt, t_final / 50.0);
  }
  const double nsteps = std::ceil(t_final / dt - 1e-12);
  if (nsteps > 1e8) throw ValidationError("step count exceeds 1e8; raise dt");
  const long steps = static_cast<long>(nsteps);
  dt = t_final / steps;
  const long stride = std::max(1L, steps / 100000);

  auto add = [&](const CorrelatorState& a, const CorrelatorState& b, double w) {
    CorrelatorState r;
    r.aa = a.aa + w * b.aa;
    r.nk = a.nk + w * b.nk;
    r.nkp = a.nkp + w * b.nkp;
    r.t = a.t + w * b.t;
    return r;
  };

  CorrelatorState s = s0;
  for (long i = 0; i < steps; ++i) {
    const CorrelatorState k1 = correlator_rhs(s, m, J, Gamma, k);
    const CorrelatorState k2 = correlator_rhs(add(s, k1, 0.5 * dt), m, J, Gamma, k);
    const CorrelatorState k3 = correlator_rhs(add(s, k2, 0.5 * dt), m, J, Gamma, k);
    const CorrelatorState k4 = correlator_rhs(add(s, k3, dt), m, J, Gamma, k);
    s = add(s, add(add(k1, k4, 1.0), add(k2, k3, 1.0), 2.0), dt / 6.0);
    s.t = s0.t + (i + 1) * dt;
    if ((i + 1) % stride == 0 || i + 1 == steps) out.samples.push_back(s);
  }
  if (!out.divergent) out.samples.back().validate();
  return out;
}

double separability_band(double eta) {
  if (eta <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(1.0 - eta * eta, 1.5) / eta;
}

double log_negativity_closed(double eta, double E) {
  if (eta < 0.0) throw ValidationError("eta must be >= 0");
  if (eta >= 1.0) throw Unstable("eta >= 1: no steady state");
  if (eta == 0.0) return 0.0;
  if (std::abs(E) >= separability_band(eta)) return 0.0;
  const double u = 1.0 - eta * eta;
  const double D = E * E + u * u;
  const double arg = (1.0 + eta * eta) / u - 2.0 * eta / std::sqrt(D);
  const double en = -std::log2(arg);
  return en < 1e-12 ? 0.0 : en;
}

double log_negativity_sympl(const Eigen::Matrix4d& gamma) {
  check_physical(gamma);
  const Eigen::Matrix4d W = symplectic_form();

  Eigen::Matrix4d gt = gamma;
  // Partial transpose of mode two flips the sign of its momentum quadrature.
  gt.row(3) *= -1.0;
  gt.col(3) *= -1.0;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(gt);
  Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0);
  const Eigen::Matrix4d root =
      es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();

  Eigen::JacobiSVD<Eigen::Matrix4d> svd(root * W * root);
  Eigen::Vector4d sv = svd.singularValues(); // each symplectic eigenvalue twice

  const double scale = std::max(sv(0), 1e-300);
  if (std::abs(sv(0) - sv(1)) > 1e-8 * scale || std::abs(sv(2) - sv(3)) > 1e-8 * scale) {
    // Degenerate square root; fall back to the spectrum of i W gt.
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> ces(cd(0.0, 1.0) *
                                                    (W * gt).cast<cd>());
    Eigen::Vector4d v = ces.eigenvalues().real().cwiseAbs();
    std::sort(v.data(), v.data() + 4);
    sv = v;
  }

  double en = 0.0;
  for (int i = 0; i < 4; ++i) en -= 0.5 * std::log2(std::min(1.0, 2.0 * sv(i)));
  return en < 1e-12 ? 0.0 : en;
}

CriticalityReport criticality(const EffectiveModel& m, double Gamma, double omega_sum) {
  const double r = relax_rate_of(m, Gamma);

  // Linear generator on (Re aa, Im aa, nk, nkp).
  Eigen::Matrix4d G = Eigen::Matrix4d::Zero();
  G(0, 0) = -r; G(0, 1) = omega_sum;
  G(1, 0) = -omega_sum; G(1, 1) = -r;
  G(2, 2) = -r;
  G(3, 3) = -r;

  Eigen::EigenSolver<Eigen::Matrix4d> es(G);
  const double slowest = es.eigenvalues().real().maxCoeff();

  CriticalityReport rep;
  rep.relax_rate = -slowest;
  rep.eta = m.eta;
  rep.stable = rep.relax_rate > 0.0;
  if (std::abs(rep.relax_rate - r) > 1e-9 * std::max(1.0, std::abs(r)))
    throw NumericalError("generator spectrum disagrees with the closed rate");
  rep.T1 = rep.stable ? 1.0 / rep.relax_rate : std::numeric_limits<double>::infinity();
  return rep;
}

LatticeSteady lattice_steady(const EffectiveModel& m, double J, double Gamma) {
  if (m.unstable) throw Unstable("eta >= 1: no steady state");
  const int N = m.N;
  LatticeSteady out;
  out.gamma = Eigen::MatrixXd::Zero(2 * N, 2 * N);

  std::vector<bool> seen(N, false);
  for (int i = 0; i < N; ++i) {
    if (seen[i]) continue;
    const int j = pairing_index(m, i);
    if (j == i) {
      Eigen::Matrix2d blk;
      self_paired_block(m, band_parameter(m, J, Gamma, m.k_grid[i]), blk);
      out.gamma.block<2, 2>(2 * i, 2 * i) = blk;
      out.self_paired.push_back(i);
      seen[i] = true;
      continue;
    }
    const PairCovariance pc = steady_covariance(m, J, Gamma, m.k_grid[i]);
    out.gamma.block<2, 2>(2 * i, 2 * i) = pc.gamma.block<2, 2>(0, 0);
    out.gamma.block<2, 2>(2 * j, 2 * j) = pc.gamma.block<2, 2>(2, 2);
    out.gamma.block<2, 2>(2 * i, 2 * j) = pc.gamma.block<2, 2>(0, 2);
    out.gamma.block<2, 2>(2 * j, 2 * i) = pc.gamma.block<2, 2>(2, 0);
    out.pairs.emplace_back(i, j);
    out.pair_log_negativity.push_back(
        log_negativity_closed(std::abs(m.eta), pc.band));
    seen[i] = seen[j] = true;
  }
  return out;
}

double transient_number(double eta, double r, double t) {
  if (r <= 0.0) throw Unstable("relaxation rate must be positive");
  const double F = 1.0 - std::exp(-r * t);
  return eta * eta / (1.0 - eta * eta) * F;
}

double transient_pair(double eta, double r, double t) {
  if (r <= 0.0) throw Unstable("relaxation rate must be positive");
  const double F = 1.0 - std::exp(-r * t);
  return eta / (1.0 - eta * eta) * F;
}

double transient_log_negativity(double eta, double r, double t) {
  if (r <= 0.0) throw Unstable("relaxation rate must be positive");
  const double F = 1.0 - std::exp(-r * t);
  const double arg = (1.0 - eta) / (1.0 + eta) * F + (1.0 - F);
  const double en = -std::log2(arg);
  return en < 1e-12 ? 0.0 : en;
}

} // namespace chiralq
