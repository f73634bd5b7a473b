// Command implementations behind the `entcheck` executable. The executable
// only parses flags into a RunConfig, calls one of these and serializes the
// result; everything numeric lives here or below.

#pragma once

#include "entcheck/channels.hpp"
#include "entcheck/correlations.hpp"
#include "entcheck/sampling.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace entcheck {

/// Bad flags or parameter values; the executable maps this to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Json, Csv };

struct RunConfig {
  std::string command;
  // State / instance selection: qubit | photon | tmss | multimode | cfrd | product
  std::string system = "qubit";
  double theta = 0.7853981633974483;  // π/4
  double phi = 0.7853981633974483;
  double r = 0.5;
  double p = 1.0;
  double eta = 1.0;
  std::size_t n = 3;
  std::size_t split_r = 1;
  std::optional<std::size_t> cutoff;
  std::size_t shots = 100000;
  std::uint64_t seed = 1;
  double k_sigma = 5.0;
  // sweep
  std::string param;
  double from = 0.0;
  double to = 1.0;
  std::size_t steps = 11;
  OutputFormat format = OutputFormat::Json;
  std::string out;
};

struct Claim {
  std::string id;
  std::string paper_anchor;
  double expected;
  double computed;
  double abs_diff;
  double tolerance;
  bool pass;
};

struct ClaimBundle {
  std::vector<Claim> claims;
  std::size_t cutoff;  // Fock cutoff used for the few-photon results
  bool all_pass;
};

/// Evaluates every reproduced closed-form result and records pass/fail.
ClaimBundle reproduce_all(const RunConfig& config);

/// The equality (or CFRD) instance selected by config.system, exactly evaluated.
EqualityReport evaluate_instance(const RunConfig& config);

struct SweepRow {
  double value;
  EqualityReport report;
};

struct SweepTable {
  std::string param;
  std::string system;
  std::vector<SweepRow> rows;  // ordered by parameter value
};

SweepTable sweep(const RunConfig& config);

struct SampledRun {
  std::string system;
  std::size_t shots;
  std::uint64_t seed;
  EqualityReport exact;
  SampledEqualityReport sampled;
  std::vector<std::pair<SettingChoice, double>> exact_correlations;
};

SampledRun sampled_run(const RunConfig& config);

struct CfrdRun {
  std::size_t n;
  std::size_t split_r;
  std::size_t cutoff;
  CfrdDecomposition decomposition;
  EqualityReport report;
};

CfrdRun cfrd_run(const RunConfig& config);

// Serialization. Floats use the shortest representation that round-trips.

std::string format_double(double v);
std::string to_json(const ClaimBundle& bundle);
std::string to_csv(const ClaimBundle& bundle);
std::string to_json(const EqualityReport& report);
std::string to_csv(const EqualityReport& report);
std::string to_json(const SweepTable& table);
std::string to_csv(const SweepTable& table);
std::string to_json(const SampledRun& run);
std::string to_csv(const SampledRun& run);
std::string to_json(const CfrdRun& run);
std::string to_csv(const CfrdRun& run);

}  // namespace entcheck
