#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "degenlab/analytic.hpp"
#include "degenlab/solver.hpp"

namespace degenlab {

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
KeyValues parse_key_values(std::istream& in, const std::string& origin = "config");
KeyValues read_config_file(const std::string& path);

enum class SourceKind { one, dbeta, custom_poly };

struct RunConfig {
  std::string command;
  std::vector<std::string> domains{"interval"};
  int ball_dimension = 2;
  double radius = 1.0;
  double lx = 1.0;
  double ly = 1.0;
  std::vector<double> betas;
  SourceKind source = SourceKind::one;
  std::vector<double> coeffs;
  int n = 4096;
  bool n_set = false;
  std::optional<double> gamma;
  std::optional<double> sigma;
  double eta1 = 0.5;
  double eta2 = 0.5;
  int jobs = 1;
  std::uint64_t seed = 42;
  std::string out;
  // verify
  std::string oracle = "source_one";
  double eta = 0.0;
  double perturb = 0.0;
  // a2
  int depth = 12;

  Domain domain(const std::string& name) const;
  Source make_source(double beta) const;
};

inline constexpr int kMinCells = 16;
inline constexpr int kMaxCells = 1 << 22;

const std::vector<double>& default_theorem_betas();
const std::vector<double>& default_a2_betas();

/// File entries overlaid by flag entries; `env_out` (DEGENLAB_OUT) is the output-directory
/// fallback. Throws ConfigurationError on unknown keys or invalid values.
RunConfig make_config(const std::string& command, const KeyValues& file, const KeyValues& flags,
                      const char* env_out = nullptr);

/// Creates the output directory and checks that it can be written to.
void ensure_writable(const std::string& dir);

std::vector<double> parse_list(const std::string& text, const std::string& key);

}  // namespace degenlab
