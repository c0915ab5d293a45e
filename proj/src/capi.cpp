#include "chiralq.h"

#include <cstring>
#include <exception>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/gaussian.hpp"
#include "core/model.hpp"
#include "core/runner.hpp"

using namespace chiralq;

struct cq_config {
  RunConfig cfg;
};

struct cq_model {
  EffectiveModel em;
  double J = 0.0;
  double Gamma = 1.0;
};

namespace {

thread_local std::string g_last_error = "ok";

cq_status fail(cq_status st, const char* what) {
  g_last_error = what;
  return st;
}

template <typename F>
cq_status guarded(F&& f) {
  try {
    f();
    return CQ_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<cq_status>(static_cast<int>(e.error_class()));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CQ_ERROR_NUMERICAL;
  }
}

cq_status require(bool ok, const char* what) {
  return ok ? CQ_OK : fail(CQ_ERROR_VALIDATION, what);
}

} // namespace

extern "C" {

const char* cq_version(void) { return "1.0.0"; }

const char* cq_last_error(void) { return g_last_error.c_str(); }

cq_status cq_config_parse(const char* text, cq_config** out) {
  if (cq_status st = require(text && out, "null argument")) return st;
  return guarded([&] { *out = new cq_config{parse_config(text)}; });
}

cq_status cq_config_parse_file(const char* path, cq_config** out) {
  if (cq_status st = require(path && out, "null argument")) return st;
  return guarded([&] { *out = new cq_config{parse_config_file(path)}; });
}

cq_status cq_config_render(const cq_config* cfg, char** text) {
  if (cq_status st = require(cfg && text, "null argument")) return st;
  return guarded([&] {
    const std::string s = render(cfg->cfg);
    *text = new char[s.size() + 1];
    std::memcpy(*text, s.c_str(), s.size() + 1);
  });
}

cq_status cq_config_set_mode(cq_config* cfg, const char* mode) {
  if (cq_status st = require(cfg && mode, "null argument")) return st;
  return guarded([&] { cfg->cfg.mode = run_mode_from(mode); });
}

cq_status cq_config_set_output(cq_config* cfg, const char* path) {
  if (cq_status st = require(cfg && path && path[0], "empty output path")) return st;
  return guarded([&] { cfg->cfg.output_path = path; });
}

void cq_config_free(cq_config* cfg) { delete cfg; }

void cq_string_free(char* text) { delete[] text; }

cq_status cq_model_derive(const cq_config* cfg, cq_model** out) {
  if (cq_status st = require(cfg && out, "null argument")) return st;
  return guarded([&] {
    auto* m = new cq_model;
    m->em = effective_couplings(cfg->cfg.model, cfg->cfg.bessel);
    m->J = cfg->cfg.model.J;
    m->Gamma = cfg->cfg.model.Gamma;
    *out = m;
  });
}

cq_status cq_model_get(const cq_model* m, const char* name, double* out) {
  if (cq_status st = require(m && name && out, "null argument")) return st;
  const std::string n = name;
  if (n == "g1") *out = m->em.g1;
  else if (n == "g2") *out = m->em.g2;
  else if (n == "gbar_mag") *out = m->em.gbar_mag;
  else if (n == "eta") *out = m->em.eta;
  else if (n == "q") *out = m->em.q;
  else if (n == "Delta") *out = m->em.Delta;
  else if (n == "N") *out = m->em.N;
  else return fail(CQ_ERROR_VALIDATION, "unknown scalar name");
  return CQ_OK;
}

cq_status cq_model_dispersion(const cq_model* m, double k, double* out) {
  if (cq_status st = require(m && out, "null argument")) return st;
  return guarded([&] { *out = dispersion(m->em, m->J, k); });
}

cq_status cq_model_band_parameter(const cq_model* m, double k, double* out) {
  if (cq_status st = require(m && out, "null argument")) return st;
  return guarded([&] { *out = band_parameter(m->em, m->J, m->Gamma, k); });
}

cq_status cq_model_pairing(const cq_model* m, double k, double* out) {
  if (cq_status st = require(m && out, "null argument")) return st;
  return guarded([&] { *out = pairing(m->em, k); });
}

cq_status cq_model_pairing_index(const cq_model* m, int idx, int* out) {
  if (cq_status st = require(m && out, "null argument")) return st;
  if (cq_status st = require(idx >= 0 && idx < m->em.N, "index out of range"))
    return st;
  return guarded([&] { *out = pairing_index(m->em, idx); });
}

void cq_model_free(cq_model* m) { delete m; }

cq_status cq_log_negativity_closed(double eta, double band_E, double* out) {
  if (cq_status st = require(out != nullptr, "null argument")) return st;
  return guarded([&] { *out = log_negativity_closed(eta, band_E); });
}

cq_status cq_log_negativity_sympl(const double gamma[16], double* out) {
  if (cq_status st = require(gamma && out, "null argument")) return st;
  return guarded([&] {
    Eigen::Matrix4d g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) = gamma[4 * i + j];
    *out = log_negativity_sympl(g);
  });
}

cq_status cq_steady_covariance(const cq_model* m, double k, double gamma[16]) {
  if (cq_status st = require(m && gamma, "null argument")) return st;
  return guarded([&] {
    const PairCovariance pc = steady_covariance(m->em, m->J, m->Gamma, k);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) gamma[4 * i + j] = pc.gamma(i, j);
  });
}

cq_status cq_evolve_pair(double g1, double g2, double Gamma, double band_E,
                         double t_final, double dt, size_t n_samples,
                         double* t_out, double* en_out) {
  if (cq_status st = require(t_out && en_out, "null argument")) return st;
  if (cq_status st = require(n_samples >= 2, "need at least two samples")) return st;
  return guarded([&] {
    if (!(Gamma > 0.0)) throw ValidationError("Gamma must be > 0");
    const double Delta = 2.0 * g1 * g1 * band_E / Gamma;
    const EffectiveModel m = from_couplings(g1, g2, 0.0, Delta, 1);
    const EvolveResult r =
        evolve(CorrelatorState{}, m, 0.0, Gamma, 0.0, t_final, dt);
    const size_t have = r.samples.size();
    for (size_t i = 0; i < n_samples; ++i) {
      const size_t j = (i * (have - 1)) / (n_samples - 1);
      t_out[i] = r.samples[j].t;
      en_out[i] = log_negativity_sympl(state_covariance(r.samples[j]));
    }
  });
}

cq_status cq_criticality(const cq_model* m, double* relax_rate, double* T1,
                         int* stable) {
  if (cq_status st = require(m && relax_rate && T1 && stable, "null argument"))
    return st;
  return guarded([&] {
    const CriticalityReport rep = criticality(m->em, m->Gamma);
    *relax_rate = rep.relax_rate;
    *T1 = rep.T1;
    *stable = rep.stable ? 1 : 0;
  });
}

cq_status cq_run(const cq_config* cfg, int workers, int gnuplot_stub,
                 int have_seed, unsigned long seed) {
  if (cq_status st = require(cfg != nullptr, "null argument")) return st;
  if (cq_status st = require(workers >= 1, "workers must be >= 1")) return st;
  return guarded([&] {
    RunOptions opt;
    opt.workers = workers;
    opt.gnuplot_stub = gnuplot_stub != 0;
    opt.have_seed = have_seed != 0;
    opt.seed = seed;
    run(cfg->cfg, opt);
  });
}

} // extern "C"
