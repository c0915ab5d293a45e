#include "core/fock.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "core/errors.hpp"

namespace chiralq {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd>;
using Dense = Eigen::MatrixXcd;

SpMat sp_destroy(int n) {
  SpMat a(n, n);
  a.reserve(Eigen::VectorXi::Constant(n, 1));
  for (int i = 1; i < n; ++i) a.insert(i - 1, i) = std::sqrt(double(i));
  a.makeCompressed();
  return a;
}

SpMat sp_identity(int n) {
  SpMat I(n, n);
  I.setIdentity();
  return I;
}

// Operator acting on tensor slot `pos` of the space with dimensions `dims`.
SpMat embed(const SpMat& op, const std::vector<int>& dims, int pos) {
  SpMat out = op;
  for (int i = pos - 1; i >= 0; --i)
    out = Eigen::kroneckerProduct(sp_identity(dims[i]), out).eval();
  for (size_t i = pos + 1; i < dims.size(); ++i)
    out = Eigen::kroneckerProduct(out, sp_identity(dims[i])).eval();
  return out;
}

cd trace_with(const Dense& rho, const SpMat& op) {
  cd s = 0.0;
  for (int c = 0; c < op.outerSize(); ++c)
    for (SpMat::InnerIterator it(op, c); it; ++it)
      s += rho(it.col(), it.row()) * it.value();
  return s;
}

double level_weight(const Dense& rho, const std::vector<int>& dims, int pos,
                    bool top_only) {
  int stride = 1;
  for (size_t i = pos + 1; i < dims.size(); ++i) stride *= dims[i];
  double s = 0.0;
  for (int i = 0; i < rho.rows(); ++i) {
    const int lvl = (i / stride) % dims[pos];
    if (top_only)
      s += (lvl == dims[pos] - 1) ? rho(i, i).real() : 0.0;
    else
      s += lvl * rho(i, i).real();
  }
  return s;
}

double op_norm(const SpMat& s) {
  const Dense d(s);
  Eigen::JacobiSVD<Dense> svd(d);
  return svd.singularValues()(0);
}

void check_state(const FockState& s) { s.validate(); }

void check_leak(const FockState& s, const FockConfig& cfg) {
  const int first_cavity = s.has_qubit ? 1 : 0;
  for (size_t p = first_cavity; p < s.dims.size(); ++p) {
    const double top = level_weight(s.rho, s.dims, int(p), true);
    if (top > cfg.leak_tol)
      throw TruncationLeak("top Fock level holds " + std::to_string(top) +
                           "; raise n_max");
  }
}
} // namespace

void FockConfig::validate() const {
  if (n_max < 2) throw ValidationError("n_max must be >= 2");
  if (sites != 1 && sites != 2) throw ValidationError("sites must be 1 or 2");
  if (dt < 0.0) throw ValidationError("dt must be >= 0");
  if (t_final < 0.0) throw ValidationError("t_final must be >= 0");
  if (!(leak_tol > 0.0)) throw ValidationError("leak_tol must be > 0");
}

void FockState::validate() const {
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9)
    throw NonPhysical("density matrix trace drifted from 1");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw NonPhysical("density matrix lost hermiticity");
  Eigen::SelfAdjointEigenSolver<Dense> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw NonPhysical("density matrix has a negative eigenvalue");
}

FockState effective_lindblad_steady(double g1, double g2, double q, double Gamma,
                                    const FockConfig& cfg) {
  cfg.validate();
  if (!(Gamma > 0.0)) throw ValidationError("Gamma must be > 0");
  if (!(g1 > 0.0)) throw ValidationError("g1 must be positive");
  if (cfg.include_qubit)
    throw ValidationError("the reduced model carries no qubit");
  if (std::abs(g2) >= g1) throw Unstable("eta >= 1: no steady state");

  const double c = 4.0 / Gamma;
  const cd phase = std::exp(cd(0.0, q));
  std::vector<int> dims(cfg.sites, cfg.n_max);

  std::vector<SpMat> jumps;
  if (cfg.sites == 1) {
    const SpMat a = sp_destroy(cfg.n_max);
    jumps.push_back(g1 * a + g2 * phase * SpMat(a.adjoint()));
  } else {
    const SpMat a1 = embed(sp_destroy(cfg.n_max), dims, 0);
    const SpMat a2 = embed(sp_destroy(cfg.n_max), dims, 1);
    jumps.push_back(g1 * a1 + g2 * phase * SpMat(a2.adjoint()));
    jumps.push_back(g1 * a2 + g2 * phase * SpMat(a1.adjoint()));
  }

  const int dim = cfg.sites == 1 ? cfg.n_max : cfg.n_max * cfg.n_max;
  SpMat K(dim, dim);
  std::vector<SpMat> adj;
  double scale = 0.0;
  for (const auto& b : jumps) {
    adj.emplace_back(b.adjoint());
    K = K + SpMat(0.5 * c * (adj.back() * b));
    const double nb = op_norm(b);
    scale += 2.0 * c * nb * nb;
  }
  K.makeCompressed();

  double dt = cfg.dt > 0.0 ? cfg.dt : 1.2 / scale;
  if (dt > 2.6 / scale)
    throw StepTooLarge("dt exceeds the stability limit of the dissipator");

  const double r = c * (g1 * g1 - g2 * g2);
  const double t_cap = 50.0 / r;

  auto lind = [&](const Dense& rho) {
    Dense L = -(K * rho) - (rho * K);
    for (size_t i = 0; i < jumps.size(); ++i) {
      Dense t = jumps[i] * rho;
      L += c * (t * adj[i]);
    }
    return L;
  };

  FockState s;
  s.dims = dims;
  s.has_qubit = false;
  s.rho = Dense::Zero(dim, dim);
  s.rho(0, 0) = 1.0;

  long step = 0;
  for (;;) {
    const Dense k1 = lind(s.rho);
    if (k1.norm() < 1e-10) break;
    if (s.t > t_cap)
      throw NumericalError("no steady state within 50 relaxation times");
    const Dense k2 = lind(s.rho + 0.5 * dt * k1);
    const Dense k3 = lind(s.rho + 0.5 * dt * k2);
    const Dense k4 = lind(s.rho + dt * k3);
    s.rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s.t += dt;
    if (++step % 100 == 0) {
      check_state(s);
      check_leak(s, cfg);
    }
  }
  check_state(s);
  check_leak(s, cfg);
  return s;
}

FullEvolveResult full_model_evolve(const ModelParams& p, const FockConfig& cfg) {
  p.validate();
  cfg.validate();
  if (cfg.sites != 1) throw ValidationError("the full model runs a single site");
  if (!cfg.include_qubit) throw ValidationError("the full model requires the qubit");
  if (!(cfg.t_final > 0.0)) throw ValidationError("t_final must be > 0");

  const int n = cfg.n_max;
  const std::vector<int> dims{2, n};
  const int dim = 2 * n;

  const double f_max =
      std::max({p.epsilon, p.Omega1, p.Omega2, p.omega_r, p.Gamma, p.g,
                std::abs(p.lambda1), std::abs(p.lambda2)});
  double dt = cfg.dt > 0.0 ? cfg.dt : two_pi / (40.0 * f_max);
  if (dt > two_pi / (20.0 * f_max))
    throw StepTooLarge("dt does not resolve the fastest drive period");

  Dense qI = Dense::Identity(2, 2);
  Dense sz(2, 2), sx(2, 2), sm(2, 2);
  sz << -1, 0, 0, 1; // basis order (ground, excited)
  sx << 0, 1, 1, 0;
  sm << 0, 1, 0, 0;

  Dense af = Dense(sp_destroy(n));
  Dense a = Eigen::kroneckerProduct(qI, af).eval();
  Dense ad = a.adjoint();
  Dense num = ad * a;
  Dense Sz = Eigen::kroneckerProduct(sz, Dense::Identity(n, n)).eval();
  Dense Sx = Eigen::kroneckerProduct(sx, Dense::Identity(n, n)).eval();
  Dense Sm = Eigen::kroneckerProduct(sm, Dense::Identity(n, n)).eval();
  Dense Sp = Sm.adjoint();

  Dense H0 = p.omega_r * num + 0.5 * p.epsilon * Sz + p.g * (Sx * (a + ad));
  Dense K = 0.5 * p.Gamma * (Sp * Sm);

  auto lind = [&](const Dense& rho, double t) {
    const double f =
        p.lambda1 * std::cos(p.Omega1 * t + p.phi1) + p.lambda2 * std::cos(p.Omega2 * t + p.phi2);
    Dense H = H0 + f * Sz;
    Dense L = cd(0.0, -1.0) * (H * rho - rho * H);
    L += p.Gamma * (Sm * rho * Sp);
    L -= K * rho + rho * K;
    return L;
  };

  FockState s;
  s.dims = dims;
  s.has_qubit = true;
  s.rho = Dense::Zero(dim, dim);
  const int idx0 = (cfg.qubit_excited ? 1 : 0) * n;
  s.rho(idx0, idx0) = 1.0;

  const long steps = static_cast<long>(std::ceil(cfg.t_final / dt - 1e-12));
  dt = cfg.t_final / steps;
  const long stride = std::max(1L, steps / 2000);

  FullEvolveResult out;
  auto record = [&](const FockState& st) {
    out.samples.push_back({st.t, level_weight(st.rho, dims, 1, false),
                           level_weight(st.rho, dims, 0, false)});
  };
  record(s);

  for (long i = 0; i < steps; ++i) {
    const double t = i * dt;
    const Dense k1 = lind(s.rho, t);
    const Dense k2 = lind(s.rho + 0.5 * dt * k1, t + 0.5 * dt);
    const Dense k3 = lind(s.rho + 0.5 * dt * k2, t + 0.5 * dt);
    const Dense k4 = lind(s.rho + dt * k3, t + dt);
    s.rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s.t = (i + 1) * dt;
    if ((i + 1) % 100 == 0) {
      check_state(s);
      check_leak(s, cfg);
    }
    if ((i + 1) % stride == 0 || i + 1 == steps) record(s);
  }
  check_state(s);
  check_leak(s, cfg);
  out.final = std::move(s);
  return out;
}

double number_expectation(const FockState& s, int mode) {
  const int pos = (s.has_qubit ? 1 : 0) + mode;
  return level_weight(s.rho, s.dims, pos, false);
}

std::complex<double> anomalous_expectation(const FockState& s, int mode) {
  const int pos = (s.has_qubit ? 1 : 0) + mode;
  const SpMat a = embed(sp_destroy(s.dims[pos]), s.dims, pos);
  return trace_with(s.rho, SpMat(a * a));
}

std::complex<double> pair_expectation(const FockState& s) {
  const int off = s.has_qubit ? 1 : 0;
  if (s.dims.size() - off != 2)
    throw ValidationError("pair correlator needs two cavity modes");
  const SpMat a0 = embed(sp_destroy(s.dims[off]), s.dims, off);
  const SpMat a1 = embed(sp_destroy(s.dims[off + 1]), s.dims, off + 1);
  return trace_with(s.rho, SpMat(a0 * a1));
}

double qubit_population(const FockState& s) {
  if (!s.has_qubit) throw ValidationError("state has no qubit");
  return level_weight(s.rho, s.dims, 0, false);
}

double top_level_population(const FockState& s, int mode) {
  const int pos = (s.has_qubit ? 1 : 0) + mode;
  return level_weight(s.rho, s.dims, pos, true);
}

Eigen::MatrixXd reduced_covariance(const FockState& s) {
  Dense rho = s.rho;
  std::vector<int> dims = s.dims;
  if (s.has_qubit) {
    // Trace out the leading qubit slot.
    int rest = 1;
    for (size_t i = 1; i < dims.size(); ++i) rest *= dims[i];
    Dense rc = Dense::Zero(rest, rest);
    for (int q = 0; q < dims[0]; ++q)
      rc += rho.block(q * rest, q * rest, rest, rest);
    rho = rc;
    dims.erase(dims.begin());
  }

  // Assemble the covariance from normal-ordered mode moments through the
  // exact commutation relations. Moments of the truncated lowering operator
  // coincide with the untruncated ones on any state held inside the cutoff,
  // so the result is the covariance of a genuine state and respects the
  // uncertainty bound by construction; products of truncated quadrature
  // matrices would instead pick up a commutator defect ~ n_max * P(top).
  const int modes = int(dims.size());
  std::vector<Dense> a(modes);
  std::vector<cd> mu(modes);
  for (int m = 0; m < modes; ++m) {
    a[m] = Dense(embed(sp_destroy(dims[m]), dims, m));
    mu[m] = (rho * a[m]).trace();
  }

  Eigen::MatrixXd gamma(2 * modes, 2 * modes);
  for (int i = 0; i < modes; ++i)
    for (int j = i; j < modes; ++j) {
      const cd A = (rho * a[i] * a[j]).trace() - mu[i] * mu[j];
      const cd C = (rho * a[i].adjoint() * a[j]).trace() -
                   std::conj(mu[i]) * mu[j];
      Eigen::Matrix2d blk;
      blk << A.real() + C.real(), -A.imag() - C.imag(),
          -A.imag() + C.imag(), -A.real() + C.real();
      if (i == j) blk += 0.5 * Eigen::Matrix2d::Identity();
      gamma.block<2, 2>(2 * i, 2 * j) = blk;
      gamma.block<2, 2>(2 * j, 2 * i) = blk.transpose();
    }
  return gamma;
}

} // namespace chiralq
