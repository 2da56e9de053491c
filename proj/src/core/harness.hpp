#pragma once

// Reproducible generators and the batch campaign runner.

#include "io.hpp"

#include <cstdint>

namespace sparsedom {

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of trial i under a master seed.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t i);

struct SignalKind {
  enum class Type { GaussianNoise, SparseHaar, Step, SingleMode };
  Type type = Type::GaussianNoise;
  int modes = 1;     ///< SparseHaar
  Interval interval; ///< SingleMode

  /// "gaussian_noise", "sparse_haar:K", "step", "single_mode:DEPTH:INDEX"
  static SignalKind parse(const std::string& s);
  std::string str() const;
};

Signal generate_signal(const SignalKind& kind, int J, std::uint64_t seed);

struct WeightKind {
  enum class Type { Constant, TwoLevel, DyadicDoubling, PowerLike };
  Type type = Type::Constant;
  double param = 1.0;

  /// "constant", "two_level:T", "dyadic_doubling:DELTA", "power_like:A"
  static WeightKind parse(const std::string& s);
  std::string str() const;
};

Weight generate_weight(const WeightKind& kind, int J, std::uint64_t seed);

/// A weight of a randomly chosen kind with dyadic [w]_{A_2} <= max_a2.
Weight random_weight(int J, std::uint64_t seed, double max_a2, WeightKind* chosen = nullptr);

/// A weight of the given kind whose dyadic [w]_{A_2} is close to `target`
/// (found by bisection on the kind's parameter; exact for two_level). A
/// power_like weight saturates a little above 4 at J = 10; larger targets
/// give the saturated weight. A constant weight is always returned as is.
Weight weight_with_a2(WeightKind::Type type, int J, std::uint64_t seed, double target, WeightKind* chosen = nullptr);

/// Each interval of depth < J joins with probability `density`; eps uniform in [-1,1].
HaarMultiplier random_multiplier(int J, std::uint64_t seed, double density = 1.0);

/// Principal intervals of a heavy-tailed random signal: a stopping-time
/// family whose children occupy at most half of each parent.
SparseCollection random_sparse_collection(int J, std::uint64_t seed);

struct CampaignConfig {
  int depth = 10;
  int trials = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> modes;
  double p = 1.0, q = 1.0, r = 0.5;
  int M = 8;
  double C = 4.0;
  double lambda = 0.125;
  double K = 4.0;
  std::string signal = "gaussian_noise";
  int threads = 0;
  std::string certificates_path; ///< JSON lines
  std::string summary_path;      ///< CSV
  std::string series_path;       ///< CSV (x, y) series

  static const std::vector<std::string>& known_modes();
};

/// Rejects invalid configurations with a diagnostic naming the field.
CampaignConfig parse_campaign_config(const Json& j);

struct ModeSummary {
  std::string mode;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double max_constant = 0.0;
  double median_constant = 0.0;
};

struct CampaignResult {
  std::vector<std::string> lines; ///< one JSON document per trial and mode
  std::vector<ModeSummary> summary;
  std::vector<std::string> series; ///< "mode,x,y" rows
  std::vector<std::string> failures;

  bool hard_failure() const { return !failures.empty(); }
  std::string summary_csv() const;
  std::string series_csv() const;
  Json summary_json() const;
};

CampaignResult run_campaign(const CampaignConfig& cfg);
/// Writes whichever output paths are set.
void write_campaign_outputs(const CampaignConfig& cfg, const CampaignResult& res);

} // namespace sparsedom
