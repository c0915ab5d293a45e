#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"

namespace chiralq {

struct RunOptions {
  int workers = 1;
  bool gnuplot_stub = false;
  bool have_seed = false;
  unsigned long seed = 0; // reserved: echoed into output, never consumed
};

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  static std::string cell(double v);
  static std::string cell(int v);
  std::string text() const;
  void write(const std::string& path) const;
};

// Dispatch cfg.mode, write the CSV (and optional plot stub) to cfg.output_path.
// Returns the warnings produced while deriving the effective model.
std::vector<std::string> run(const RunConfig& cfg, const RunOptions& opt);

} // namespace chiralq
