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

#include "osaudit/validator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "osaudit/error.hpp"
#include "osaudit/random.hpp"

namespace osaudit {

void TrialConfig::validate() const {
  if (!(hidden_ratio > 0.0 && hidden_ratio < 1.0))
    throw InvalidArgument("hidden ratio must lie in (0, 1)");
  if (trials == 0) throw InvalidArgument("at least one trial is required");
  if (attribution_k == 0) throw InvalidArgument("attribution k must be at least 1");
  oversampler.validate();
}

Label attribute(const Sample& synthetic, std::span<const Sample> reference, MetricKind metric,
                std::size_t k) {
  if (k <= 1) return nearest(synthetic.features, reference, metric).label;
  const auto hits = k_nearest(synthetic.features, reference, k, metric);
  const auto majority = std::count_if(hits.begin(), hits.end(),
                                      [](const NeighborHit& h) { return h.label == Label::Majority; });
  return 2 * static_cast<std::size_t>(majority) > hits.size() ? Label::Majority : Label::Minority;
}

double error_rate(std::size_t cm, std::size_t ss) {
  if (ss == 0) throw InvalidArgument("error rate undefined: no synthetic samples");
  if (cm > ss) throw InvalidArgument("error rate: more erroneous than synthetic samples");
  return static_cast<double>(cm) / static_cast<double>(ss);
}

TrialArtifacts run_trial_detailed(const LabeledDataset& ds, OversamplerId method,
                                  const TrialConfig& cfg, std::size_t trial_idx) {
  cfg.validate();
  if (trial_idx >= cfg.trials)
    throw InvalidArgument("trial index " + std::to_string(trial_idx) + " out of range");

  Rng rng(trial_seed(cfg.base_seed, ds.name(), to_string(method), trial_idx));
  TrialArtifacts out;
  out.split = hide_majority(ds, cfg.hidden_ratio, rng);
  const std::size_t target = balancing_target(out.split);
  out.synthetic = generate(method, out.split.minority, out.split.visible_majority, target,
                           cfg.oversampler, rng);

  // The hidden samples go back in: attribution sees the full original set.
  const std::span<const Sample> reference(ds.samples());
  out.attribution.reserve(out.synthetic.produced());
  for (const Sample& s : out.synthetic.samples)
    out.attribution.push_back(attribute(s, reference, cfg.attribution_metric, cfg.attribution_k));

  TrialResult& r = out.result;
  r.se = out.synthetic.produced();
  r.ne = static_cast<std::size_t>(
      std::count(out.attribution.begin(), out.attribution.end(), Label::Majority));
  r.warnings = out.synthetic.warnings;
  if (r.se > 0) {
    r.er = error_rate(r.ne, r.se);
  } else {
    r.er = std::numeric_limits<double>::quiet_NaN();
    r.warnings.push_back("no synthetic samples produced; error rate undefined");
  }
  return out;
}

TrialResult run_trial(const LabeledDataset& ds, OversamplerId method, const TrialConfig& cfg,
                      std::size_t trial_idx) {
  return run_trial_detailed(ds, method, cfg, trial_idx).result;
}

MethodReport run_validation(const LabeledDataset& ds, OversamplerId method,
                            const TrialConfig& cfg) {
  cfg.validate();
  MethodReport report;
  report.method = method;
  report.dataset = ds.name();
  report.hidden_ratio = cfg.hidden_ratio;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    TrialResult r = run_trial(ds, method, cfg, t);
    if (r.se == 0)
      throw ValidationError(std::string(to_string(method)) + " on " + ds.name() + ", trial " +
                            std::to_string(t) + ": no synthetic samples produced");
    report.per_trial.push_back(std::move(r));
  }
  const double n = static_cast<double>(report.per_trial.size());
  for (const TrialResult& r : report.per_trial) {
    report.mean_ne += static_cast<double>(r.ne);
    report.mean_se += static_cast<double>(r.se);
    report.mean_er += r.er;
  }
  report.mean_ne /= n;
  report.mean_se /= n;
  report.mean_er /= n;
  return report;
}

RankingTable rank_methods(std::span<const MethodReport> reports) {
  if (reports.empty()) throw InvalidArgument("rank_methods: no reports");
  std::map<OversamplerId, RankingRow> rows;
  for (const MethodReport& r : reports) {
    RankingRow& row = rows[r.method];
    row.method = r.method;
    if (!row.dataset_er.emplace(r.dataset, r.mean_er).second)
      throw InvalidArgument("rank_methods: duplicate report for " + std::string(to_string(r.method)) +
                            " on " + r.dataset);
  }
  RankingTable table;
  for (auto& [id, row] : rows) {
    double sum = 0.0;
    for (const auto& [name, er] : row.dataset_er) sum += er;
    row.avg_er = sum / static_cast<double>(row.dataset_er.size());
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const RankingRow& a, const RankingRow& b) {
    return a.avg_er < b.avg_er || (a.avg_er == b.avg_er && a.method < b.method);
  });
  for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].rank = i + 1;
  return table;
}

}  // namespace osaudit
