#include "core/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "core/errors.hpp"
#include "core/gaussian.hpp"

namespace chiralq {

namespace {

void parallel_for(int n, int workers, const std::function<void(int)>& f) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    });
  for (auto& t : pool) t.join();
}

std::vector<double> default_eta_grid() {
  std::vector<double> v(50);
  for (int i = 0; i < 50; ++i) v[i] = 0.95 * i / 49.0;
  return v;
}

std::vector<double> default_E_grid() {
  std::vector<double> v(50);
  for (int i = 0; i < 50; ++i) v[i] = 1.0 * i / 49.0;
  return v;
}

void echo_params(Csv& csv, const RunConfig& cfg, const EffectiveModel& em,
                 const RunOptions& opt) {
  csv.comments.push_back("chiralq " + std::string(run_mode_name(cfg.mode)));
  std::stringstream ss(render(cfg));
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) csv.comments.push_back(line);
  csv.comments.push_back("g1 = " + Csv::cell(em.g1));
  csv.comments.push_back("g2 = " + Csv::cell(em.g2));
  csv.comments.push_back("eta = " + Csv::cell(em.eta));
  csv.comments.push_back("q = " + Csv::cell(em.q));
  csv.comments.push_back("Delta = " + Csv::cell(em.Delta));
  csv.comments.push_back(std::string("regime_valid = ") +
                         (cfg.model.regime_valid(cfg.regime_ratio) ? "true" : "false"));
  if (opt.have_seed)
    csv.comments.push_back("seed = " + std::to_string(opt.seed));
  for (const auto& w : em.warnings) csv.comments.push_back("warning: " + w);
}

// Recover (n, Re aa, Im aa) of the 2x2 block starting at row b of a lattice
// covariance; sign convention matches state_covariance.
void block_moments(const Eigen::MatrixXd& g, int b, double& n, double& re, double& im) {
  n = 0.5 * (g(b, b) + g(b + 1, b + 1)) - 0.5;
  re = 0.5 * (g(b, b) - g(b + 1, b + 1));
  im = -g(b, b + 1);
}

void cross_moments(const Eigen::MatrixXd& g, int bi, int bj, double& re, double& im) {
  re = 0.5 * (g(bi, bj) - g(bi + 1, bj + 1));
  im = -0.5 * (g(bi, bj + 1) + g(bi + 1, bj));
}

Csv run_effective(const RunConfig& cfg, const EffectiveModel& em) {
  Csv csv;
  csv.header = {"m", "k", "omega_k", "m_partner", "k_partner", "self_paired", "band_E"};
  for (int m = 0; m < em.N; ++m) {
    const double k = em.k_grid[m];
    csv.rows.push_back({Csv::cell(m), Csv::cell(k),
                        Csv::cell(dispersion(em, cfg.model.J, k)),
                        Csv::cell(pairing_index(em, m)), Csv::cell(pairing(em, k)),
                        Csv::cell(is_self_paired(em, m) ? 1 : 0),
                        Csv::cell(band_parameter(em, cfg.model.J, cfg.model.Gamma, k))});
  }
  return csv;
}

Csv run_steady(const RunConfig& cfg, const EffectiveModel& em) {
  const LatticeSteady ls = lattice_steady(em, cfg.model.J, cfg.model.Gamma);
  Csv csv;
  csv.header = {"k",  "k_partner", "nk",     "nkp",  "re_aa",
                "im_aa", "band_E",  "log_neg", "self_paired"};
  for (size_t i = 0; i < ls.pairs.size(); ++i) {
    const auto [a, b] = ls.pairs[i];
    double nk, nkp, re, im, sre, sim;
    block_moments(ls.gamma, 2 * a, nk, sre, sim);
    block_moments(ls.gamma, 2 * b, nkp, sre, sim);
    cross_moments(ls.gamma, 2 * a, 2 * b, re, im);
    csv.rows.push_back({Csv::cell(em.k_grid[a]), Csv::cell(em.k_grid[b]),
                        Csv::cell(nk), Csv::cell(nkp), Csv::cell(re), Csv::cell(im),
                        Csv::cell(band_parameter(em, cfg.model.J, cfg.model.Gamma,
                                                 em.k_grid[a])),
                        Csv::cell(ls.pair_log_negativity[i]), Csv::cell(0)});
  }
  for (int m : ls.self_paired) {
    double n, re, im;
    block_moments(ls.gamma, 2 * m, n, re, im);
    csv.rows.push_back({Csv::cell(em.k_grid[m]), Csv::cell(em.k_grid[m]), Csv::cell(n),
                        Csv::cell(n), Csv::cell(re), Csv::cell(im),
                        Csv::cell(band_parameter(em, cfg.model.J, cfg.model.Gamma,
                                                 em.k_grid[m])),
                        Csv::cell(0.0), Csv::cell(1)});
  }
  return csv;
}

Csv run_phase(const RunConfig& cfg, const EffectiveModel& em, const RunOptions& opt) {
  const std::vector<double> etas =
      cfg.sweep_eta.empty() ? default_eta_grid() : cfg.sweep_eta;
  const std::vector<double> Es = cfg.sweep_E.empty() ? default_E_grid() : cfg.sweep_E;
  (void)em;

  struct Point {
    std::string series;
    double eta, E;
  };
  std::vector<Point> pts;
  for (double e : etas)
    for (double E : Es) pts.push_back({"grid", e, E});
  for (double E : {0.0, 0.2, 0.4}) {
    const std::string name = "cut_E=" + Csv::cell(E);
    for (double e : etas) pts.push_back({name, e, E});
  }

  std::vector<double> en(pts.size());
  parallel_for(int(pts.size()), opt.workers,
               [&](int i) { en[i] = log_negativity_closed(pts[i].eta, pts[i].E); });

  Csv csv;
  csv.header = {"series", "eta", "E", "log_neg"};
  for (size_t i = 0; i < pts.size(); ++i)
    csv.rows.push_back({pts[i].series, Csv::cell(pts[i].eta), Csv::cell(pts[i].E),
                        Csv::cell(en[i])});
  return csv;
}

Csv run_bandmap(const RunConfig& cfg, const EffectiveModel& em, const RunOptions& opt) {
  const int N = em.N;
  std::vector<double> E(N * N); // q-major
  parallel_for(N, opt.workers, [&](int mq) {
    const EffectiveModel emq =
        from_couplings(em.g1, em.g2, em.k_grid[mq], em.Delta, N);
    for (int mk = 0; mk < N; ++mk)
      E[mq * N + mk] =
          band_parameter(emq, cfg.model.J, cfg.model.Gamma, em.k_grid[mk]);
  });

  Csv csv;
  csv.header = {"k", "q", "band_E", "saturated", "zero_crossing"};
  for (int mq = 0; mq < N; ++mq)
    for (int mk = 0; mk < N; ++mk) {
      const double here = E[mq * N + mk];
      const double next = E[mq * N + (mk + 1) % N];
      csv.rows.push_back({Csv::cell(em.k_grid[mk]), Csv::cell(em.k_grid[mq]),
                          Csv::cell(here), Csv::cell(here >= 1.0 ? 1 : 0),
                          Csv::cell(here * next < 0.0 ? 1 : 0)});
    }
  return csv;
}

Csv run_evolve(const RunConfig& cfg, const EffectiveModel& em, const RunOptions& opt) {
  const std::vector<double> etas =
      cfg.sweep_eta.empty() ? std::vector<double>{0.3, 0.5, 0.7, 0.9} : cfg.sweep_eta;
  const std::vector<double> Es =
      cfg.sweep_E.empty() ? std::vector<double>{0.0} : cfg.sweep_E;
  const double Gamma = cfg.model.Gamma;

  struct Series {
    double eta, E;
    EvolveResult traj;
  };
  std::vector<Series> series(etas.size() * Es.size());
  parallel_for(int(series.size()), opt.workers, [&](int i) {
    const double eta = etas[i / Es.size()];
    const double E = Es[i % Es.size()];
    // Synthesize a pair with this (eta, E) at the drive-derived g1.
    const double Delta = 2.0 * em.g1 * em.g1 * E / Gamma;
    const EffectiveModel m = from_couplings(em.g1, eta * em.g1, 0.0, Delta, em.N);
    const double r = 4.0 * em.g1 * em.g1 * (1.0 - eta * eta) / Gamma;
    const double t_final = cfg.t_final > 0.0 ? cfg.t_final : 10.0 / r;
    series[i] = {eta, E, evolve(CorrelatorState{}, m, 0.0, Gamma, 0.0, t_final, cfg.dt)};
  });

  Csv csv;
  csv.header = {"t", "eta", "E", "log_neg_rk4", "log_neg_closed"};
  for (const auto& s : series) {
    const double r = 4.0 * em.g1 * em.g1 * (1.0 - s.eta * s.eta) / Gamma;
    for (const auto& st : s.traj.samples) {
      const double en = log_negativity_sympl(state_covariance(st));
      const double closed = s.E == 0.0 ? transient_log_negativity(s.eta, r, st.t)
                                       : std::nan("");
      csv.rows.push_back({Csv::cell(st.t), Csv::cell(s.eta), Csv::cell(s.E),
                          Csv::cell(en), Csv::cell(closed)});
    }
  }
  return csv;
}

Csv run_oracle_mode(const RunConfig& cfg, const EffectiveModel& em) {
  Csv csv;
  if (cfg.oracle.include_qubit) {
    // Laboratory-frame trajectory against the reduced-model target.
    const FullEvolveResult r = full_model_evolve(cfg.model, cfg.oracle);
    const double n_target = em.eta * em.eta / (1.0 - em.eta * em.eta);
    csv.header = {"t", "n_cavity", "qubit_pop", "n_target"};
    for (const auto& p : r.samples)
      csv.rows.push_back({Csv::cell(p.t), Csv::cell(p.n_cavity),
                          Csv::cell(p.qubit_pop), Csv::cell(n_target)});
    return csv;
  }

  const FockState s = effective_lindblad_steady(em.g1, em.g2, em.q, cfg.model.Gamma,
                                                cfg.oracle);
  const double eta = em.eta;
  const double u = 1.0 - eta * eta;
  const double n_exact = eta * eta / u;
  const std::complex<double> phase = std::exp(std::complex<double>(0.0, em.q));

  csv.header = {"observable", "oracle", "target", "abs_err"};
  auto row = [&](const std::string& name, double got, double want) {
    csv.rows.push_back(
        {name, Csv::cell(got), Csv::cell(want), Csv::cell(std::abs(got - want))});
  };
  row("n_0", number_expectation(s, 0), n_exact);
  if (cfg.oracle.sites == 2) {
    row("n_1", number_expectation(s, 1), n_exact);
    const std::complex<double> aa = pair_expectation(s);
    const std::complex<double> want = -eta * phase / u;
    row("re_aa", aa.real(), want.real());
    row("im_aa", aa.imag(), want.imag());
    const Eigen::MatrixXd cov = reduced_covariance(s);
    row("log_neg", log_negativity_sympl(cov), log_negativity_closed(eta, 0.0));
  } else {
    const std::complex<double> aa = anomalous_expectation(s, 0);
    const std::complex<double> want = -eta * phase / u;
    row("re_aa", aa.real(), want.real());
    row("im_aa", aa.imag(), want.imag());
  }
  return csv;
}

Csv run_emit(const RunConfig& cfg, const EffectiveModel& em) {
  const LineParams lp =
      line_params(cfg.gamma_line, cfg.model.N, cfg.amplitude_scale);
  const LatticeSteady ls = lattice_steady(em, cfg.model.J, cfg.model.Gamma);

  std::vector<PairCovariance> pcs;
  for (auto [a, b] : ls.pairs)
    pcs.push_back(steady_covariance(em, cfg.model.J, cfg.model.Gamma, em.k_grid[a]));
  const OutputModeCorrelators out = output_correlators(pcs, lp);

  Csv csv;
  csv.header = {"k",      "k_partner", "out_nk",   "out_nkp",
                "re_out_aa", "im_out_aa", "bandwidth", "log_neg_upper"};
  for (const auto& r : out.rows)
    csv.rows.push_back({Csv::cell(r.k), Csv::cell(r.k_partner), Csv::cell(r.out_nk),
                        Csv::cell(r.out_nkp), Csv::cell(r.out_aa.real()),
                        Csv::cell(r.out_aa.imag()), Csv::cell(r.bandwidth),
                        Csv::cell(r.en_upper_bound)});
  const double c2 = coupling_coefficient_sq(lp);
  for (int m : ls.self_paired) {
    double n, re, im;
    block_moments(ls.gamma, 2 * m, n, re, im);
    csv.rows.push_back({Csv::cell(em.k_grid[m]), Csv::cell(em.k_grid[m]),
                        Csv::cell(c2 * n), Csv::cell(c2 * n), Csv::cell(c2 * re),
                        Csv::cell(c2 * im), Csv::cell(frequency_resolution(lp)),
                        Csv::cell(0.0)});
  }
  return csv;
}

std::string gnuplot_stub(const RunConfig& cfg) {
  std::string s = "set datafile commentschars '#'\nset datafile separator ','\n";
  s += "set key autotitle columnhead\n";
  const std::string f = "'" + cfg.output_path + "'";
  switch (cfg.mode) {
    case RunMode::phase:
      s += "set xlabel 'eta'\nset ylabel 'E'\nset view map\n";
      s += "splot " + f + " using 2:3:4 with points palette\n";
      break;
    case RunMode::bandmap:
      s += "set xlabel 'k'\nset ylabel 'q'\nset view map\n";
      s += "splot " + f + " using 1:2:3 with points palette\n";
      break;
    case RunMode::evolve:
      s += "set xlabel 't'\nset ylabel 'E_N'\n";
      s += "plot " + f + " using 1:4 with lines, " + f + " using 1:5 with points\n";
      break;
    case RunMode::oracle:
      s += "plot " + f + " using 1:2 with lines\n";
      break;
    default:
      s += "plot " + f + " using 1:2 with points\n";
      break;
  }
  return s;
}

} // namespace

std::string Csv::cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Csv::cell(int v) { return std::to_string(v); }

std::string Csv::text() const {
  std::string s;
  for (const auto& c : comments) s += "# " + c + "\n";
  for (size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
  s += "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
    s += "\n";
  }
  return s;
}

void Csv::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<std::string> run(const RunConfig& cfg, const RunOptions& opt) {
  const EffectiveModel em = effective_couplings(cfg.model, cfg.bessel);

  Csv csv;
  switch (cfg.mode) {
    case RunMode::effective: csv = run_effective(cfg, em); break;
    case RunMode::steady: csv = run_steady(cfg, em); break;
    case RunMode::evolve: csv = run_evolve(cfg, em, opt); break;
    case RunMode::phase: csv = run_phase(cfg, em, opt); break;
    case RunMode::bandmap: csv = run_bandmap(cfg, em, opt); break;
    case RunMode::oracle: csv = run_oracle_mode(cfg, em); break;
    case RunMode::emit: csv = run_emit(cfg, em); break;
  }

  Csv full;
  echo_params(full, cfg, em, opt);
  full.header = csv.header;
  full.rows = std::move(csv.rows);
  full.write(cfg.output_path);

  if (opt.gnuplot_stub) {
    std::ofstream gp(cfg.output_path + ".gp", std::ios::binary);
    if (!gp) throw IoError("cannot open '" + cfg.output_path + ".gp' for writing");
    gp << gnuplot_stub(cfg);
  }
  return em.warnings;
}

} // namespace chiralq
