#pragma once

#include <complex>
#include <vector>

#include "core/gaussian.hpp"

namespace chiralq {

// Weak-coupling map from intracavity momentum modes onto the transmission
// line; each lattice momentum is smeared over a filter of half-width pi/N.
struct LineParams {
  double gamma_line = 1.0;
  int N = 1;
  double delta = 0.0;           // pi / N, set by line_params()
  double amplitude_scale = 1.0; // exposed normalization of the in/out map
  void validate() const;
};

LineParams line_params(double gamma_line, int N, double amplitude_scale = 1.0);

struct OutputPairRow {
  double k = 0.0;
  double k_partner = 0.0;
  double out_nk = 0.0;
  double out_nkp = 0.0;
  std::complex<double> out_aa{0.0, 0.0};
  double coupling_coefficient = 0.0; // |c|^2 applied to the correlators
  double bandwidth = 0.0;            // 2*delta
  double en_upper_bound = 0.0;       // intracavity E_N, upper bound for the beams
};

struct OutputModeCorrelators {
  std::vector<OutputPairRow> rows;
};

// |c|^2 = amplitude_scale^2 * gamma_line / (N pi^2)
double coupling_coefficient_sq(const LineParams& lp);
double frequency_resolution(const LineParams& lp); // 2*pi/N

OutputModeCorrelators output_correlators(const std::vector<PairCovariance>& lattice,
                                         const LineParams& lp);

// Covariance of the filtered line modes: |c|^2 gamma + (1-|c|^2) I/2.
// Physical only for |c|^2 <= 1.
Eigen::Matrix4d output_covariance(const Eigen::Matrix4d& gamma, const LineParams& lp);

} // namespace chiralq
