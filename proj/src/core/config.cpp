#include "core/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "core/errors.hpp"

namespace chiralq {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad_line(int line, const std::string& why) {
  throw ParseError("line " + std::to_string(line) + ": " + why);
}

double parse_double(const std::string& v, int line) {
  try {
    size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) bad_line(line, "trailing characters in number '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    bad_line(line, "expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, int line) {
  try {
    size_t used = 0;
    int x = std::stoi(v, &used);
    if (used != v.size()) bad_line(line, "trailing characters in integer '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    bad_line(line, "expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad_line(line, "expected true or false, got '" + v + "'");
}

// "start:stop:count" or a comma-separated list.
std::vector<double> parse_axis(const std::string& v, int line) {
  std::vector<double> out;
  if (v.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(trim(tok));
    if (parts.size() != 3) bad_line(line, "range must be start:stop:count");
    const double a = parse_double(parts[0], line);
    const double b = parse_double(parts[1], line);
    const int n = parse_int(parts[2], line);
    if (n < 1) bad_line(line, "range count must be >= 1");
    if (n == 1) {
      out.push_back(a);
    } else {
      for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    }
    return out;
  }
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) bad_line(line, "empty entry in value list");
    out.push_back(parse_double(tok, line));
  }
  if (out.empty()) bad_line(line, "empty value list");
  return out;
}

std::string axis_text(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += num(v[i]);
  }
  return s;
}

} // namespace

const char* run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::effective: return "effective";
    case RunMode::steady: return "steady";
    case RunMode::evolve: return "evolve";
    case RunMode::phase: return "phase";
    case RunMode::bandmap: return "bandmap";
    case RunMode::oracle: return "oracle";
    case RunMode::emit: return "emit";
  }
  return "effective";
}

RunMode run_mode_from(const std::string& name) {
  for (RunMode m : {RunMode::effective, RunMode::steady, RunMode::evolve,
                    RunMode::phase, RunMode::bandmap, RunMode::oracle, RunMode::emit})
    if (name == run_mode_name(m)) return m;
  throw ValidationError("unknown mode '" + name + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string section;

  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') bad_line(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "drive" && section != "sweep" &&
          section != "line" && section != "oracle")
        bad_line(lineno, "unknown section [" + section + "]");
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) bad_line(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) bad_line(lineno, "empty key");
    if (val.empty()) bad_line(lineno, "empty value for '" + key + "'");
    if (section.empty()) bad_line(lineno, "key '" + key + "' before any [section]");
    if (!seen.insert(section + "." + key).second)
      bad_line(lineno, "duplicate key '" + key + "' in [" + section + "]");

    if (section == "model") {
      if (key == "units") {
        if (val != "Gamma" && val != "absolute")
          bad_line(lineno, "units must be Gamma or absolute");
        cfg.units = val;
      } else if (key == "omega_r") cfg.model.omega_r = parse_double(val, lineno);
      else if (key == "epsilon") cfg.model.epsilon = parse_double(val, lineno);
      else if (key == "g") cfg.model.g = parse_double(val, lineno);
      else if (key == "J") cfg.model.J = parse_double(val, lineno);
      else if (key == "Gamma") cfg.model.Gamma = parse_double(val, lineno);
      else if (key == "N") cfg.model.N = parse_int(val, lineno);
      else if (key == "regime_ratio") cfg.regime_ratio = parse_double(val, lineno);
      else bad_line(lineno, "unknown key '" + key + "' in [model]");
    } else if (section == "drive") {
      if (key == "lambda1") cfg.model.lambda1 = parse_double(val, lineno);
      else if (key == "lambda2") cfg.model.lambda2 = parse_double(val, lineno);
      else if (key == "Omega1") cfg.model.Omega1 = parse_double(val, lineno);
      else if (key == "Omega2") cfg.model.Omega2 = parse_double(val, lineno);
      else if (key == "phi1") cfg.model.phi1 = parse_double(val, lineno);
      else if (key == "phi2") cfg.model.phi2 = parse_double(val, lineno);
      else if (key == "bessel_argument") {
        if (val == "frequency") cfg.bessel = BesselArgument::frequency;
        else if (val == "detuning") cfg.bessel = BesselArgument::detuning;
        else bad_line(lineno, "bessel_argument must be frequency or detuning");
      } else bad_line(lineno, "unknown key '" + key + "' in [drive]");
    } else if (section == "sweep") {
      if (key == "eta") cfg.sweep_eta = parse_axis(val, lineno);
      else if (key == "E") cfg.sweep_E = parse_axis(val, lineno);
      else if (key == "t_final") cfg.t_final = parse_double(val, lineno);
      else if (key == "dt") cfg.dt = parse_double(val, lineno);
      else if (key == "mode") {
        try {
          cfg.mode = run_mode_from(val);
        } catch (const ValidationError& e) {
          bad_line(lineno, e.what());
        }
      } else if (key == "out") cfg.output_path = val;
      else bad_line(lineno, "unknown key '" + key + "' in [sweep]");
    } else if (section == "line") {
      if (key == "gamma_line") cfg.gamma_line = parse_double(val, lineno);
      else if (key == "amplitude_scale") cfg.amplitude_scale = parse_double(val, lineno);
      else bad_line(lineno, "unknown key '" + key + "' in [line]");
    } else { // oracle
      if (key == "n_max") cfg.oracle.n_max = parse_int(val, lineno);
      else if (key == "sites") cfg.oracle.sites = parse_int(val, lineno);
      else if (key == "dt") cfg.oracle.dt = parse_double(val, lineno);
      else if (key == "t_final") cfg.oracle.t_final = parse_double(val, lineno);
      else if (key == "include_qubit") cfg.oracle.include_qubit = parse_bool(val, lineno);
      else if (key == "qubit_excited") cfg.oracle.qubit_excited = parse_bool(val, lineno);
      else if (key == "leak_tol") cfg.oracle.leak_tol = parse_double(val, lineno);
      else bad_line(lineno, "unknown key '" + key + "' in [oracle]");
    }
  }

  // Semantic validation.
  cfg.model.validate();
  if (cfg.units == "Gamma" && cfg.model.Gamma != 1.0)
    throw ValidationError("Gamma must be 1 when units = Gamma");
  if (cfg.regime_ratio <= 0.0) throw ValidationError("regime_ratio must be > 0");
  if (cfg.t_final < 0.0) throw ValidationError("t_final must be >= 0");
  if (cfg.dt < 0.0) throw ValidationError("dt must be >= 0");
  cfg.oracle.validate();
  line_params(cfg.gamma_line, cfg.model.N, cfg.amplitude_scale);

  EffectiveModel em;
  try {
    em = effective_couplings(cfg.model, cfg.bessel);
  } catch (const IncommensurateQ&) {
    throw ValidationError("incommensurate q");
  }
  if (em.unstable) throw ValidationError("unstable: eta >= 1");
  for (double e : cfg.sweep_eta) {
    if (e < 0.0) throw ValidationError("eta must be >= 0");
    if (e >= 1.0) throw ValidationError("unstable: eta >= 1");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render(const RunConfig& cfg) {
  std::string s;
  s += "[model]\n";
  s += "units = " + cfg.units + "\n";
  s += "omega_r = " + num(cfg.model.omega_r) + "\n";
  s += "epsilon = " + num(cfg.model.epsilon) + "\n";
  s += "g = " + num(cfg.model.g) + "\n";
  s += "J = " + num(cfg.model.J) + "\n";
  s += "Gamma = " + num(cfg.model.Gamma) + "\n";
  s += "N = " + std::to_string(cfg.model.N) + "\n";
  s += "regime_ratio = " + num(cfg.regime_ratio) + "\n";
  s += "\n[drive]\n";
  s += "lambda1 = " + num(cfg.model.lambda1) + "\n";
  s += "lambda2 = " + num(cfg.model.lambda2) + "\n";
  s += "Omega1 = " + num(cfg.model.Omega1) + "\n";
  s += "Omega2 = " + num(cfg.model.Omega2) + "\n";
  s += "phi1 = " + num(cfg.model.phi1) + "\n";
  s += "phi2 = " + num(cfg.model.phi2) + "\n";
  s += std::string("bessel_argument = ") +
       (cfg.bessel == BesselArgument::frequency ? "frequency" : "detuning") + "\n";
  s += "\n[sweep]\n";
  s += std::string("mode = ") + run_mode_name(cfg.mode) + "\n";
  s += "out = " + cfg.output_path + "\n";
  if (!cfg.sweep_eta.empty()) s += "eta = " + axis_text(cfg.sweep_eta) + "\n";
  if (!cfg.sweep_E.empty()) s += "E = " + axis_text(cfg.sweep_E) + "\n";
  s += "t_final = " + num(cfg.t_final) + "\n";
  s += "dt = " + num(cfg.dt) + "\n";
  s += "\n[line]\n";
  s += "gamma_line = " + num(cfg.gamma_line) + "\n";
  s += "amplitude_scale = " + num(cfg.amplitude_scale) + "\n";
  s += "\n[oracle]\n";
  s += "n_max = " + std::to_string(cfg.oracle.n_max) + "\n";
  s += "sites = " + std::to_string(cfg.oracle.sites) + "\n";
  s += "dt = " + num(cfg.oracle.dt) + "\n";
  s += "t_final = " + num(cfg.oracle.t_final) + "\n";
  s += std::string("include_qubit = ") + (cfg.oracle.include_qubit ? "true" : "false") + "\n";
  s += std::string("qubit_excited = ") + (cfg.oracle.qubit_excited ? "true" : "false") + "\n";
  s += "leak_tol = " + num(cfg.oracle.leak_tol) + "\n";
  return s;
}

} // namespace chiralq
