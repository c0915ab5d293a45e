#pragma once

#include <string>
#include <vector>

#include "core/fock.hpp"
#include "core/lineout.hpp"
#include "core/model.hpp"

namespace chiralq {

enum class RunMode { effective, steady, evolve, phase, bandmap, oracle, emit };

const char* run_mode_name(RunMode m);
RunMode run_mode_from(const std::string& name); // throws ValidationError

struct RunConfig {
  ModelParams model;
  BesselArgument bessel = BesselArgument::frequency;
  std::string units = "Gamma"; // or "absolute"
  double regime_ratio = 10.0;

  std::vector<double> sweep_eta; // empty = documented default grid
  std::vector<double> sweep_E;
  double t_final = 0.0; // 0 = ten relaxation times
  double dt = 0.0;      // 0 = integrator rule

  RunMode mode = RunMode::effective;
  std::string output_path = "out.csv";

  double gamma_line = 1.0;
  double amplitude_scale = 1.0;

  FockConfig oracle;

  bool operator==(const RunConfig&) const = default;
};

// Line-oriented `key = value` under [model] [drive] [sweep] [line] [oracle].
// Unknown sections, unknown keys, duplicates and malformed numbers are
// ParseError with the line number; semantic problems are ValidationError.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

std::string render(const RunConfig& cfg);

} // namespace chiralq
