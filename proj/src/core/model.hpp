#pragma once

#include <string>
#include <vector>

namespace chiralq {

// Which denominators feed the Bessel arguments of the sideband weights.
enum class BesselArgument { frequency, detuning };

// Bare lattice + drive parameters. Site-dependent drive phases grow linearly
// along the chain, phi_{alpha,j} = phi_alpha * j.
struct ModelParams {
  double omega_r = 0.1;
  double epsilon = 50.0;
  double g = 0.1;
  double J = 0.06;
  double Gamma = 1.0;
  int N = 10;
  double lambda1 = 5.0;
  double lambda2 = 2.52;
  double Omega1 = 50.0;
  double Omega2 = 50.2;
  double phi1 = 0.0;
  double phi2 = 0.0;

  void validate() const; // throws ValidationError naming the offending field
  double detuning() const { return 0.5 * (Omega1 + Omega2 - 2.0 * epsilon); }
  bool regime_valid(double factor = 10.0) const;
  bool operator==(const ModelParams&) const = default;
};

// Parameters of the adiabatically reduced cavity-only model.
struct EffectiveModel {
  double g1 = 0.0;       // cooling-channel coupling (includes the bare g)
  double g2 = 0.0;       // heating-channel coupling
  double gbar_mag = 0.0; // = g1
  double eta = 0.0;      // g2 / g1
  double q = 0.0;        // pair-center momentum, snapped to the grid
  int m_q = 0;           // q = 2*pi*m_q / N
  double Delta = 0.0;
  int N = 1;
  std::vector<double> k_grid; // 2*pi*m/N, m = 0..N-1
  bool unstable = false;      // eta >= 1
  std::vector<std::string> warnings;
};

double bessel_j(int n, double x); // integer order, any real argument
double sideband_weight(int n1, int n2, double x1, double x2);

EffectiveModel effective_couplings(const ModelParams& p,
                                   BesselArgument convention = BesselArgument::frequency);

// Assemble an EffectiveModel from already-reduced couplings (sweep entry point).
EffectiveModel from_couplings(double g1, double g2, double q_raw, double Delta, int N);

double dispersion(const EffectiveModel& m, double J, double k);
double band_parameter(const EffectiveModel& m, double J, double Gamma, double k);
// Same quantity through the half-sum identity; agrees with band_parameter to
// machine precision and makes the zero locus explicit.
double band_parameter_cos(const EffectiveModel& m, double J, double Gamma, double k);
bool band_zero_exists(const EffectiveModel& m, double J);

double pairing(const EffectiveModel& m, double k);      // (q - k) mod 2*pi
int pairing_index(const EffectiveModel& m, int idx);    // (m_q - idx) mod N
bool is_self_paired(const EffectiveModel& m, int idx);  // 2*idx == m_q (mod N)
std::vector<int> self_paired_indices(const EffectiveModel& m);

int grid_index(const EffectiveModel& m, double k); // nearest grid index, tol 1e-9

} // namespace chiralq
