#include "core/lineout.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace chiralq {

namespace {
constexpr double pi = std::numbers::pi;
}

void LineParams::validate() const {
  if (gamma_line < 0.0) throw ValidationError("gamma_line must be >= 0");
  if (N < 1) throw ValidationError("N must be >= 1");
  if (std::abs(delta - pi / N) > 1e-15)
    throw ValidationError("delta must equal pi/N");
  if (amplitude_scale < 0.0) throw ValidationError("amplitude_scale must be >= 0");
}

LineParams line_params(double gamma_line, int N, double amplitude_scale) {
  LineParams lp;
  lp.gamma_line = gamma_line;
  lp.N = N;
  lp.delta = pi / N;
  lp.amplitude_scale = amplitude_scale;
  lp.validate();
  return lp;
}

double coupling_coefficient_sq(const LineParams& lp) {
  return lp.amplitude_scale * lp.amplitude_scale * lp.gamma_line / (lp.N * pi * pi);
}

double frequency_resolution(const LineParams& lp) { return 2.0 * pi / lp.N; }

OutputModeCorrelators output_correlators(const std::vector<PairCovariance>& lattice,
                                         const LineParams& lp) {
  lp.validate();
  const double c2 = coupling_coefficient_sq(lp);
  const double bw = frequency_resolution(lp);

  OutputModeCorrelators out;
  out.rows.reserve(lattice.size());
  for (const auto& pc : lattice) {
    // Invert the quadrature bridge to recover the intracavity moments.
    const double nk = 0.5 * (pc.gamma(0, 0) + pc.gamma(1, 1)) - 0.5;
    const double nkp = 0.5 * (pc.gamma(2, 2) + pc.gamma(3, 3)) - 0.5;
    const double re = 0.5 * (pc.gamma(0, 2) - pc.gamma(1, 3));
    const double im = -0.5 * (pc.gamma(0, 3) + pc.gamma(1, 2));

    OutputPairRow row;
    row.k = pc.k;
    row.k_partner = pc.k_partner;
    row.out_nk = c2 * nk;
    row.out_nkp = c2 * nkp;
    row.out_aa = c2 * std::complex<double>(re, im);
    row.coupling_coefficient = c2;
    row.bandwidth = bw;
    row.en_upper_bound = log_negativity_sympl(pc.gamma);
    out.rows.push_back(row);
  }
  return out;
}

Eigen::Matrix4d output_covariance(const Eigen::Matrix4d& gamma, const LineParams& lp) {
  lp.validate();
  const double c2 = coupling_coefficient_sq(lp);
  if (c2 > 1.0)
    throw NonPhysical("coupling coefficient exceeds 1; filtered modes undefined");
  return c2 * gamma + (1.0 - c2) * 0.5 * Eigen::Matrix4d::Identity();
}

} // namespace chiralq
