#pragma once

#include <string>
#include <vector>

#include "opca/learners.hpp"
#include "opca/streams.hpp"

namespace opca {

struct ExperimentConfig {
  std::string learner_id = "fpl";
  int n = 0;
  int k = 0;
  double sigma2 = -1.0;  // < 0: regime default from the stream kind
  NoiseMode noise_mode = NoiseMode::FixedScaled;
  EigenConfig eigen_cfg;
  double eta = -1.0;  // < 0: sqrt(8 ln(n/k) / T), MEG baseline tuning
  StreamSpec stream;
  int num_seeds = 20;
  std::uint64_t seed_base = 1;
  int report_every = 0;  // 0: max(1, T/100)
};

/// Per-report-point accounting. Gains and regrets are means over seeds with
/// the standard error alongside; the comparator is the seed-mean of
/// lambda_{1:k}(X_{<=t}).
struct RegretRecord {
  long t = 0;
  double cumulative_gain_mean = 0.0;
  double cumulative_gain_stderr = 0.0;
  double comparator = 0.0;
  double regret_mean = 0.0;
  double regret_stderr = 0.0;
  double wall_ms_per_trial = 0.0;
};

struct ResolvedParams {
  double sigma2 = 0.0;
  double eta = 0.0;
  int report_every = 1;
};

ResolvedParams resolve_params(const ExperimentConfig& cfg);

/// Drives predict -> score -> update over the stream for every seed and
/// aggregates at report points. Seeds run in parallel on independent
/// learner instances.
std::vector<RegretRecord> run(const ExperimentConfig& cfg);

struct SweepRow {
  double axis_value = 0.0;
  RegretRecord final_record;
};

/// axis is one of "T", "n", "sigma2".
std::vector<SweepRow> sweep(const ExperimentConfig& base,
                            const std::string& axis,
                            const std::vector<double>& values);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& xs,
                    const std::vector<double>& ys);

void write_csv(const std::string& path,
               const std::vector<RegretRecord>& records);

/// key=value sidecar mirroring every flag plus resolved defaults, written
/// to path + ".manifest".
void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    const ResolvedParams& resolved);

}  // namespace opca
