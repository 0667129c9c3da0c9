#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "degenlab/analysis.hpp"
#include "degenlab/config.hpp"
#include "degenlab/report.hpp"

namespace degenlab {

/// Tolerances the theorem verdicts are judged with.
inline constexpr double kRateTolerance = 0.03;
inline constexpr double kHolderTolerance = 0.03;
inline constexpr double kSobolevSlopeTolerance = 0.05;
inline constexpr double kVerifyOrder = 1.8;
inline constexpr double kBarrierDeviation = 1e-8;
inline constexpr double kDirectResidual = 1e-12;

struct TheoremCase {
  std::string domain;
  double beta = 0.0;
  std::string label;  // subdirectory name
  bool ok = false;    // all three verdicts match
  std::string error;  // set when the case could not be evaluated

  RateReport rate;
  BracketCheck bracket;
  bool rate_pass = false;
  double sigma_pass = 0.0;  // largest tube depth where rate and bracket still pass; 0 if none
  HolderReport holder;
  bool holder_sharp = false;  // sharpness is required as well as the cap
  bool holder_pass = false;
  SobolevReport sobolev;
  SobolevVerdict expected_sobolev = SobolevVerdict::finite;
  bool sobolev_pass = false;
};

/// Solves one (domain, beta) case of the sweep, runs the estimators and writes its files
/// under `<label>/` in the bundle.
TheoremCase evaluate_case(const RunConfig& cfg, const std::string& domain, double beta, OutputBundle* bundle);

SobolevVerdict expected_sobolev_verdict(double beta);

struct VerifyLevel {
  double h = 0.0;
  double max_residual = 0.0;
  double max_reference = 0.0;
};

struct VerifyOutcome {
  std::vector<VerifyLevel> levels;
  double order = 0.0;
  bool at_roundoff = false;
  double finest_deviation = 0.0;  // relative to max(1, |reference|)
  bool pass = false;
};

VerifyOutcome run_verify(const RunConfig& cfg);

struct A2Row {
  double beta = 0.0;
  A2Scan scan;
  bool expected_divergent = false;
  bool match = false;
};

std::vector<A2Row> run_a2(const RunConfig& cfg);

/// Each command writes its files under cfg.out, messages to `log`, and returns the exit status.
int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_theorems(const RunConfig& cfg, std::ostream& log);
int cmd_a2(const RunConfig& cfg, std::ostream& log);

int run_command(const RunConfig& cfg, std::ostream& log);

}  // namespace degenlab
