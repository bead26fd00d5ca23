// Copyright 2026 The osaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osaudit/dataset.hpp"
#include "osaudit/distance.hpp"
#include "osaudit/oversamplers.hpp"

namespace osaudit {

/// How many synthetic samples a trial asks for.
enum class TargetRule {
  FullBalance,  ///< |visible majority| - |minority|
};

struct TrialConfig {
  double hidden_ratio = 0.10;
  std::size_t trials = 5;
  std::uint64_t base_seed = 0;
  MetricKind attribution_metric = MetricKind::Hassanat;
  /// Neighbours voting in attribution; 1 is plain nearest-neighbour.
  std::size_t attribution_k = 1;
  TargetRule target_rule = TargetRule::FullBalance;
  OversamplerConfig oversampler;

  void validate() const;
};

struct TrialResult {
  std::size_t ne = 0;  ///< synthetics attributed to the majority
  std::size_t se = 0;  ///< synthetics produced
  double er = 0.0;     ///< ne / se; NaN when se == 0
  std::vector<std::string> warnings;
};

struct MethodReport {
  OversamplerId method = OversamplerId::ROS;
  std::string dataset;
  double hidden_ratio = 0.0;
  double mean_ne = 0.0;
  double mean_se = 0.0;
  double mean_er = 0.0;
  std::vector<TrialResult> per_trial;
};

struct RankingRow {
  OversamplerId method = OversamplerId::ROS;
  std::map<std::string, double> dataset_er;  ///< mean ER per dataset present
  double avg_er = 0.0;
  std::size_t rank = 0;
};

struct RankingTable {
  std::vector<RankingRow> rows;  ///< ascending rank
};

/// Class of the nearest reference sample; exact distance ties resolve to
/// Minority. With k > 1 the k nearest vote and a Majority label needs a
/// strict majority of the votes.
Label attribute(const Sample& synthetic, std::span<const Sample> reference, MetricKind metric,
                std::size_t k = 1);

/// cm / ss. Throws InvalidArgument when ss == 0 or cm > ss.
double error_rate(std::size_t cm, std::size_t ss);

/// Everything a trial produced, for plotting and inspection.
struct TrialArtifacts {
  HiddenSplit split;
  SyntheticSet synthetic;
  std::vector<Label> attribution;  ///< parallel to synthetic.samples
  TrialResult result;
};

/// Hide, oversample, restore, attribute and score one seeded trial.
TrialArtifacts run_trial_detailed(const LabeledDataset& ds, OversamplerId method,
                                  const TrialConfig& cfg, std::size_t trial_idx);

TrialResult run_trial(const LabeledDataset& ds, OversamplerId method, const TrialConfig& cfg,
                      std::size_t trial_idx);

/// Runs trials 0..cfg.trials-1 and averages them. A trial that produced no
/// synthetic samples aborts the report with ValidationError.
MethodReport run_validation(const LabeledDataset& ds, OversamplerId method,
                            const TrialConfig& cfg);

/// Rank methods by mean ER over the datasets they have reports for.
/// Lower average ER ranks first; ties fall back to method id order.
RankingTable rank_methods(std::span<const MethodReport> reports);

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace osaudit
