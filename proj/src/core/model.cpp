#include "core/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace chiralq {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

// Snap a raw momentum to the grid 2*pi*m/N. Off-grid by more than snap_tol
// is a hard error: pair bookkeeping needs exact index arithmetic.
int snap_to_grid(double q_raw, int N, const char* what) {
  const double m_real = q_raw * N / two_pi;
  const double m_round = std::round(m_real);
  if (std::abs(m_real - m_round) * two_pi / N > 1e-9)
    throw IncommensurateQ(std::string(what) + " = " + std::to_string(q_raw) +
                          " is not a multiple of 2*pi/" + std::to_string(N));
  int m = static_cast<int>(std::llround(m_round)) % N;
  return m < 0 ? m + N : m;
}
} // namespace

void ModelParams::validate() const {
  if (N < 1) throw ValidationError("N must be >= 1");
  if (!(Gamma > 0.0)) throw ValidationError("Gamma must be > 0");
  if (g < 0.0) throw ValidationError("g must be >= 0");
  if (J < 0.0) throw ValidationError("J must be >= 0");
  if (!(omega_r >= 0.0)) throw ValidationError("omega_r must be >= 0");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
}

bool ModelParams::regime_valid(double factor) const {
  const double slow = std::max({omega_r, g, J, std::abs(detuning())});
  // Relative slack keeps the flag deterministic when a ratio sits exactly on
  // the boundary and rounding of the inputs could tip it either way.
  const double slack = 1.0 - 1e-9;
  return epsilon >= factor * Gamma * slack && Gamma >= factor * slow * slack;
}

double bessel_j(int n, double x) {
  // std::cyl_bessel_j wants x >= 0; integer orders extend by parity.
  const double v = std::cyl_bessel_j(static_cast<double>(std::abs(n)), std::abs(x));
  double s = 1.0;
  if (x < 0.0 && (n & 1)) s = -s;
  if (n < 0 && (n & 1)) s = -s;
  return s * v;
}

double sideband_weight(int n1, int n2, double x1, double x2) {
  return bessel_j(n1, x1) * bessel_j(n2, x2);
}

EffectiveModel effective_couplings(const ModelParams& p, BesselArgument convention) {
  p.validate();

  double d1, d2;
  if (convention == BesselArgument::frequency) {
    d1 = p.Omega1;
    d2 = p.Omega2;
  } else {
    d1 = p.epsilon - p.Omega1;
    d2 = p.epsilon + p.Omega2;
  }
  if (d1 == 0.0 || d2 == 0.0)
    throw DegenerateDrive("zero denominator in drive argument");

  const double x1 = 2.0 * p.lambda1 / d1;
  const double x2 = 2.0 * p.lambda2 / d2;

  EffectiveModel m;
  m.N = p.N;
  if (std::abs(x1) > 1.0)
    m.warnings.push_back("drive argument 2*lambda1/denom exceeds 1; sideband hierarchy is weak");
  if (std::abs(x2) > 1.0)
    m.warnings.push_back("drive argument 2*lambda2/denom exceeds 1; sideband hierarchy is weak");

  m.g1 = p.g * bessel_j(1, x1) * bessel_j(0, x2);
  m.g2 = p.g * bessel_j(0, x1) * bessel_j(1, x2);
  if (m.g1 == 0.0)
    throw DegenerateDrive("g1 vanishes for these drive amplitudes");
  if (m.g1 < 0.0)
    throw ValidationError("g1 must be positive; flip the drive phase");
  m.gbar_mag = m.g1;
  m.eta = m.g2 / m.g1;
  if (m.eta < 0.0)
    m.warnings.push_back("g2 is negative; eta carries its sign");
  m.unstable = m.eta >= 1.0;

  m.m_q = snap_to_grid(p.phi1 - p.phi2, p.N, "phi1 - phi2");
  m.q = two_pi * m.m_q / p.N;
  m.Delta = p.detuning();
  m.k_grid.resize(p.N);
  for (int i = 0; i < p.N; ++i) m.k_grid[i] = two_pi * i / p.N;
  return m;
}

EffectiveModel from_couplings(double g1, double g2, double q_raw, double Delta, int N) {
  if (N < 1) throw ValidationError("N must be >= 1");
  if (!(g1 > 0.0)) throw ValidationError("g1 must be positive");
  EffectiveModel m;
  m.g1 = g1;
  m.g2 = g2;
  m.gbar_mag = g1;
  m.eta = g2 / g1;
  m.unstable = m.eta >= 1.0;
  m.m_q = snap_to_grid(q_raw, N, "q");
  m.q = two_pi * m.m_q / N;
  m.Delta = Delta;
  m.N = N;
  m.k_grid.resize(N);
  for (int i = 0; i < N; ++i) m.k_grid[i] = two_pi * i / N;
  return m;
}

double dispersion(const EffectiveModel& m, double J, double k) {
  return m.Delta + 2.0 * J * std::cos(k);
}

double band_parameter(const EffectiveModel& m, double J, double Gamma, double k) {
  const double sum = dispersion(m, J, k) + dispersion(m, J, m.q - k);
  return Gamma * sum / (4.0 * m.g1 * m.g1);
}

double band_parameter_cos(const EffectiveModel& m, double J, double Gamma, double k) {
  const double half = m.Delta + 2.0 * J * std::cos(0.5 * m.q) * std::cos(k - 0.5 * m.q);
  return Gamma * half / (2.0 * m.g1 * m.g1);
}

bool band_zero_exists(const EffectiveModel& m, double J) {
  // E(k) = 0 needs cos(q/2)cos(k - q/2) = -Delta/(2J), solvable iff the
  // rhs magnitude fits inside |cos(q/2)|.
  const double amp = 2.0 * J * std::abs(std::cos(0.5 * m.q));
  return amp > std::abs(m.Delta);
}

double pairing(const EffectiveModel& m, double k) {
  double p = std::fmod(m.q - k, two_pi);
  if (p < 0.0) p += two_pi;
  return p;
}

int pairing_index(const EffectiveModel& m, int idx) {
  int p = (m.m_q - idx) % m.N;
  return p < 0 ? p + m.N : p;
}

bool is_self_paired(const EffectiveModel& m, int idx) {
  return pairing_index(m, idx) == idx % m.N;
}

std::vector<int> self_paired_indices(const EffectiveModel& m) {
  std::vector<int> out;
  for (int i = 0; i < m.N; ++i)
    if (is_self_paired(m, i)) out.push_back(i);
  return out;
}

int grid_index(const EffectiveModel& m, double k) {
  return snap_to_grid(k, m.N, "k");
}

} // namespace chiralq
