// Exercises the shared library exactly as an external consumer would:
// only the installed C header, no internal includes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "chiralq.h"
#include "doctest.h"

namespace {
struct ConfigHandle {
  cq_config* c = nullptr;
  ~ConfigHandle() { cq_config_free(c); }
};
struct ModelHandle {
  cq_model* m = nullptr;
  ~ModelHandle() { cq_model_free(m); }
};

double get(const cq_model* m, const char* name) {
  double v = 0.0;
  REQUIRE(cq_model_get(m, name, &v) == CQ_OK);
  return v;
}
} // namespace

TEST_CASE("version and error channel") {
  CHECK(std::string(cq_version()) == "1.0.0");
  CHECK(cq_last_error() != nullptr);
}

TEST_CASE("null arguments are validation failures with a message") {
  ConfigHandle cfg;
  CHECK(cq_config_parse(nullptr, &cfg.c) == CQ_ERROR_VALIDATION);
  CHECK(std::string(cq_last_error()) == "null argument");
  CHECK(cq_config_parse("", nullptr) == CQ_ERROR_VALIDATION);
  double v;
  CHECK(cq_log_negativity_closed(0.5, 0.0, nullptr) == CQ_ERROR_VALIDATION);
  CHECK(cq_log_negativity_sympl(nullptr, &v) == CQ_ERROR_VALIDATION);
}

TEST_CASE("parse failures carry the line number") {
  ConfigHandle cfg;
  CHECK(cq_config_parse("[model]\ng = confused\n", &cfg.c) == CQ_ERROR_VALIDATION);
  CHECK(std::string(cq_last_error()).find("line 2") != std::string::npos);
  CHECK(cq_config_parse_file("/nonexistent/never.cfg", &cfg.c) == CQ_ERROR_IO);
}

TEST_CASE("stock configuration derives the documented working point") {
  ConfigHandle cfg;
  REQUIRE(cq_config_parse("", &cfg.c) == CQ_OK);
  ModelHandle m;
  REQUIRE(cq_model_derive(cfg.c, &m.m) == CQ_OK);

  CHECK(get(m.m, "N") == 10.0);
  CHECK(get(m.m, "eta") == doctest::Approx(0.50010827).epsilon(1e-6));
  CHECK(get(m.m, "gbar_mag") == get(m.m, "g1"));
  CHECK(get(m.m, "q") == 0.0);
  CHECK(get(m.m, "Delta") == doctest::Approx(0.1).epsilon(1e-12));

  double v;
  CHECK(cq_model_get(m.m, "flux", &v) == CQ_ERROR_VALIDATION);
  CHECK(std::string(cq_last_error()) == "unknown scalar name");

  // Dispersion and pairing against their definitions.
  const double pi = 3.14159265358979323846;
  double w0;
  REQUIRE(cq_model_dispersion(m.m, 0.0, &w0) == CQ_OK);
  CHECK(w0 == doctest::Approx(get(m.m, "Delta") + 0.12).epsilon(1e-12));
  double band;
  REQUIRE(cq_model_band_parameter(m.m, 0.0, &band) == CQ_OK);
  const double g1 = get(m.m, "g1");
  CHECK(band == doctest::Approx((get(m.m, "Delta") + 0.12) / (2.0 * g1 * g1))
                    .epsilon(1e-10));
  double partner;
  REQUIRE(cq_model_pairing(m.m, 2.0 * pi / 10, &partner) == CQ_OK);
  CHECK(partner == doctest::Approx(2.0 * pi - 2.0 * pi / 10).epsilon(1e-12));
  int pidx;
  REQUIRE(cq_model_pairing_index(m.m, 3, &pidx) == CQ_OK);
  CHECK(pidx == 7);
  CHECK(cq_model_pairing_index(m.m, -1, &pidx) == CQ_ERROR_VALIDATION);
  CHECK(cq_model_pairing_index(m.m, 10, &pidx) == CQ_ERROR_VALIDATION);
}

TEST_CASE("closed-form entanglement and failure classes") {
  double en;
  REQUIRE(cq_log_negativity_closed(1.0 / 3.0, 0.0, &en) == CQ_OK);
  CHECK(std::abs(en - 1.0) <= 1e-12);
  CHECK(cq_log_negativity_closed(1.0, 0.0, &en) == CQ_ERROR_NUMERICAL);
  CHECK(cq_log_negativity_closed(-0.1, 0.0, &en) == CQ_ERROR_VALIDATION);
}

TEST_CASE("symplectic entanglement from a raw covariance") {
  double vac[16] = {0};
  for (int i = 0; i < 4; ++i) vac[4 * i + i] = 0.5;
  double en;
  REQUIRE(cq_log_negativity_sympl(vac, &en) == CQ_OK);
  CHECK(en == 0.0);

  double skew[16] = {0};
  for (int i = 0; i < 4; ++i) skew[4 * i + i] = 0.5;
  skew[2] = 1e-3; // (0,2) without its mirror
  CHECK(cq_log_negativity_sympl(skew, &en) == CQ_ERROR_NUMERICAL);

  double tight[16] = {0};
  for (int i = 0; i < 4; ++i) tight[4 * i + i] = 0.1; // below vacuum noise
  CHECK(cq_log_negativity_sympl(tight, &en) == CQ_ERROR_NUMERICAL);
}

TEST_CASE("steady covariance feeds the symplectic route") {
  ConfigHandle cfg;
  REQUIRE(cq_config_parse("", &cfg.c) == CQ_OK);
  ModelHandle m;
  REQUIRE(cq_model_derive(cfg.c, &m.m) == CQ_OK);

  const double pi = 3.14159265358979323846;
  const double k = 2.0 * pi / 10;
  double gamma[16];
  REQUIRE(cq_steady_covariance(m.m, k, gamma) == CQ_OK);
  double en_s;
  REQUIRE(cq_log_negativity_sympl(gamma, &en_s) == CQ_OK);
  double band;
  REQUIRE(cq_model_band_parameter(m.m, k, &band) == CQ_OK);
  double en_c;
  REQUIRE(cq_log_negativity_closed(get(m.m, "eta"), band, &en_c) == CQ_OK);
  CHECK(std::abs(en_s - en_c) <= 1e-10);

  // The zero-momentum mode pairs with itself: not a two-mode covariance.
  CHECK(cq_steady_covariance(m.m, 0.0, gamma) == CQ_ERROR_VALIDATION);
}

TEST_CASE("pair evolution matches the closed transient") {
  const double g1 = 0.1, g2 = 0.05, Gamma = 1.0, eta = 0.5;
  const double r = 4.0 * (g1 * g1 - g2 * g2) / Gamma;
  const double t_final = 30.0 / r;

  std::vector<double> t(50), en(50);
  REQUIRE(cq_evolve_pair(g1, g2, Gamma, 0.0, t_final, 0.0, t.size(), t.data(),
                         en.data()) == CQ_OK);
  CHECK(t.front() == 0.0);
  CHECK(en.front() == 0.0);
  CHECK(t.back() == doctest::Approx(t_final).epsilon(1e-12));

  for (size_t i = 0; i < t.size(); ++i) {
    const double F = 1.0 - std::exp(-r * t[i]);
    const double arg = (1.0 - eta) / (1.0 + eta) * F + (1.0 - F);
    const double want = std::max(0.0, -std::log2(arg));
    CHECK(std::abs(en[i] - want) <= 1e-6);
  }
  CHECK(std::abs(en.back() - std::log2(3.0)) <= 1e-6);

  CHECK(cq_evolve_pair(g1, g2, Gamma, 0.0, 1.0, 0.0, 1, t.data(), en.data()) ==
        CQ_ERROR_VALIDATION);
  CHECK(cq_evolve_pair(g1, g2, 0.0, 0.0, 1.0, 0.0, 2, t.data(), en.data()) ==
        CQ_ERROR_VALIDATION);
  // Heating above cooling is fine transiently: the state stays physical and
  // thermal occupation outpaces squeezing, so no entanglement appears.
  REQUIRE(cq_evolve_pair(0.1, 0.2, 1.0, 0.0, 1.0, 0.0, 2, t.data(), en.data()) ==
          CQ_OK);
  CHECK(std::isfinite(t[1]));
  CHECK(en[1] == 0.0);
}

TEST_CASE("criticality through the C surface") {
  ConfigHandle cfg;
  REQUIRE(cq_config_parse("", &cfg.c) == CQ_OK);
  ModelHandle m;
  REQUIRE(cq_model_derive(cfg.c, &m.m) == CQ_OK);

  double rate, T1;
  int stable;
  REQUIRE(cq_criticality(m.m, &rate, &T1, &stable) == CQ_OK);
  CHECK(stable == 1);
  const double g1 = get(m.m, "g1"), g2 = get(m.m, "g2");
  CHECK(rate == doctest::Approx(4.0 * (g1 * g1 - g2 * g2)).epsilon(1e-12));
  CHECK(T1 * rate == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("render round-trips to the identical canonical text") {
  ConfigHandle cfg;
  REQUIRE(cq_config_parse("[sweep]\nmode = steady\neta = 0.2,0.4\n", &cfg.c) == CQ_OK);
  char* text1 = nullptr;
  REQUIRE(cq_config_render(cfg.c, &text1) == CQ_OK);

  ConfigHandle again;
  REQUIRE(cq_config_parse(text1, &again.c) == CQ_OK);
  char* text2 = nullptr;
  REQUIRE(cq_config_render(again.c, &text2) == CQ_OK);
  CHECK(std::string(text1) == std::string(text2));
  cq_string_free(text1);
  cq_string_free(text2);

  CHECK(cq_config_set_mode(cfg.c, "warp") == CQ_ERROR_VALIDATION);
  CHECK(cq_config_set_mode(cfg.c, "bandmap") == CQ_OK);
  CHECK(cq_config_set_output(cfg.c, "") == CQ_ERROR_VALIDATION);
}

TEST_CASE("cq_run writes the requested file and maps io failures") {
  ConfigHandle cfg;
  REQUIRE(cq_config_parse("", &cfg.c) == CQ_OK);
  const char* path = "chiralq_capi_smoke.csv";
  REQUIRE(cq_config_set_output(cfg.c, path) == CQ_OK);
  REQUIRE(cq_run(cfg.c, 1, 0, 0, 0) == CQ_OK);
  std::FILE* f = std::fopen(path, "r");
  REQUIRE(f != nullptr);
  std::fclose(f);
  std::remove(path);

  REQUIRE(cq_config_set_output(cfg.c, "/nonexistent/dir/out.csv") == CQ_OK);
  CHECK(cq_run(cfg.c, 1, 0, 0, 0) == CQ_ERROR_IO);
  CHECK(cq_run(cfg.c, 0, 0, 0, 0) == CQ_ERROR_VALIDATION);
}
