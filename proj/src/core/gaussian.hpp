#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "core/model.hpp"

namespace chiralq {

// Covariance of one momentum pair (k, q-k), quadrature order (Q_k, P_k, Q_p, P_p),
// convention gamma_ij = <{dx_i, dx_j}>/2 so vacuum is I/2.
struct PairCovariance {
  Eigen::Matrix4d gamma = Eigen::Matrix4d::Zero();
  double k = 0.0;
  double k_partner = 0.0;
  double band = 0.0; // dimensionless detuning parameter of the pair
  void validate() const; // symmetry 1e-12, gamma + (i/2)Omega >= -1e-10
};

// Second moments of one pair: aa = <a_k a_p>, occupations, elapsed time.
struct CorrelatorState {
  std::complex<double> aa{0.0, 0.0};
  double nk = 0.0;
  double nkp = 0.0;
  double t = 0.0;
  void validate() const; // |aa|^2 <= (nk+1/2)(nkp+1/2) - 1/4 + 1e-9
};

struct EvolveResult {
  std::vector<CorrelatorState> samples; // includes t = 0 and t = t_final
  bool divergent = false;               // eta >= 1: moments grow without bound
};

struct CriticalityReport {
  double relax_rate = 0.0; // slowest decay rate of the pair generator
  double T1 = 0.0;         // 1 / relax_rate
  double eta = 0.0;
  bool stable = false;
};

// Full-chain steady state, block diagonal over momentum pairs.
struct LatticeSteady {
  Eigen::MatrixXd gamma; // 2N x 2N, modes in grid order (Q_0, P_0, ..., P_{N-1})
  std::vector<std::pair<int, int>> pairs; // genuine (m, partner) with m < partner
  std::vector<int> self_paired;           // single-mode squeezed, E_N defined as 0
  std::vector<double> pair_log_negativity;
};

PairCovariance steady_covariance(const EffectiveModel& m, double J, double Gamma, double k);
CorrelatorState steady_correlators(const EffectiveModel& m, double J, double Gamma, double k);

CorrelatorState correlator_rhs(const CorrelatorState& s, const EffectiveModel& m,
                               double J, double Gamma, double k);
// RK4; dt <= 0 picks min(Gamma/(40 g1^2), 0.1/|w_k + w_p|).
EvolveResult evolve(const CorrelatorState& s0, const EffectiveModel& m, double J,
                    double Gamma, double k, double t_final, double dt = 0.0);

Eigen::Matrix4d state_covariance(const CorrelatorState& s);

double log_negativity_sympl(const Eigen::Matrix4d& gamma);
double log_negativity_closed(double eta, double E);
double separability_band(double eta); // |E| below this is entangled, (1-eta^2)^{3/2}/eta

CriticalityReport criticality(const EffectiveModel& m, double Gamma, double omega_sum = 0.0);

LatticeSteady lattice_steady(const EffectiveModel& m, double J, double Gamma);

// Closed forms for the resonant pair (band parameter 0) from vacuum.
double transient_number(double eta, double r, double t);          // n_k(t)
double transient_pair(double eta, double r, double t);            // |<a_k a_p>|(t)
double transient_log_negativity(double eta, double r, double t);

} // namespace chiralq
