#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <vector>

#include "core/model.hpp"

namespace chiralq {

// Truncated number-basis integrator used to validate the Gaussian results.
struct FockConfig {
  int n_max = 12;     // Fock levels kept per cavity mode
  int sites = 1;      // 1 or 2 cavity modes
  double dt = 0.0;    // 0 = choose from the fastest scale
  double t_final = 0.0;
  bool include_qubit = false;
  bool qubit_excited = false;
  double leak_tol = 1e-4; // max tolerated population of the top Fock level
  void validate() const;
  bool operator==(const FockConfig&) const = default;
};

struct FockState {
  Eigen::MatrixXcd rho;
  std::vector<int> dims; // leading 2 when the qubit is kept
  bool has_qubit = false;
  double t = 0.0;
  void validate() const; // trace 1e-9, hermiticity 1e-12, eigenvalues >= -1e-9
};

struct FullEvolvePoint {
  double t = 0.0;
  double n_cavity = 0.0;
  double qubit_pop = 0.0;
};

struct FullEvolveResult {
  FockState final;
  std::vector<FullEvolvePoint> samples;
};

// Steady state of d(rho)/dt = (4/Gamma) sum_i D[b_i] rho from vacuum, where
// sites=1 uses b = g1 a + g2 e^{iq} a^dag and sites=2 the two cross-squeezing
// jump operators. Stops at ||L rho||_F < 1e-10, capped at 50 relaxation times.
FockState effective_lindblad_steady(double g1, double g2, double q, double Gamma,
                                    const FockConfig& cfg);

// Laboratory-frame run of the driven qubit-cavity site (sites = 1 only).
FullEvolveResult full_model_evolve(const ModelParams& p, const FockConfig& cfg);

double number_expectation(const FockState& s, int mode);
std::complex<double> anomalous_expectation(const FockState& s, int mode);
std::complex<double> pair_expectation(const FockState& s); // <a_0 a_1>, sites = 2
double qubit_population(const FockState& s);
double top_level_population(const FockState& s, int mode);

// Quadrature covariance of the cavity mode(s), qubit traced out, first
// moments subtracted. 2x2 for one site, 4x4 for two.
Eigen::MatrixXd reduced_covariance(const FockState& s);

} // namespace chiralq
