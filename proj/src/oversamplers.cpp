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

#include "osaudit/oversamplers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>

#include "osaudit/clustering.hpp"
#include "osaudit/error.hpp"

namespace osaudit {

std::string_view to_string(OversamplerId id) {
  switch (id) {
    case OversamplerId::ROS: return "ROS";
    case OversamplerId::SMOTE: return "SMOTE";
    case OversamplerId::BSMOTE1: return "BSMOTE1";
    case OversamplerId::BSMOTE2: return "BSMOTE2";
    case OversamplerId::ADASYN: return "ADASYN";
    case OversamplerId::SMOTEFUNA: return "SMOTEFUNA";
    case OversamplerId::MWMOTE: return "MWMOTE";
    case OversamplerId::SWIM: return "SWIM";
  }
  return "UNKNOWN";
}

std::optional<OversamplerId> parse_oversampler(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (OversamplerId id : kAllOversamplers)
    if (to_string(id) == upper) return id;
  return std::nullopt;
}

void OversamplerConfig::validate() const {
  if (k_smote == 0 || k_danger == 0 || k_adasyn == 0 || mwmote_k1 == 0 || mwmote_k2 == 0 ||
      (mwmote_k3 && *mwmote_k3 == 0))
    throw InvalidArgument("oversampler neighbour counts must be at least 1");
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(mwmote_cth) || !positive(mwmote_cmax) || !positive(mwmote_cp))
    throw InvalidArgument("MWMOTE cth, cmax and cp must be positive");
  if (!std::isfinite(swim_sigma) || swim_sigma < 0.0)
    throw InvalidArgument("SWIM sigma must be non-negative");
  if (!positive(swim_ridge)) throw InvalidArgument("SWIM ridge must be positive");
}

namespace {

Sample synthetic(Eigen::VectorXd features) {
  return Sample{std::move(features), Label::Minority, Origin::Synthetic};
}

// x + gap * (y - x), kept inside the per-coordinate hull of x and y.
Eigen::VectorXd interpolate(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double gap) {
  Eigen::VectorXd out = x + gap * (y - x);
  for (Eigen::Index j = 0; j < out.size(); ++j)
    out[j] = std::clamp(out[j], std::min(x[j], y[j]), std::max(x[j], y[j]));
  return out;
}

SyntheticSet empty_set(OversamplerId method, std::size_t target) {
  SyntheticSet set;
  set.method = method;
  set.requested = target;
  set.samples.reserve(target);
  set.provenance.reserve(target);
  return set;
}

void require_minority(std::span<const Sample> minority, std::size_t at_least, OversamplerId id) {
  if (minority.size() < at_least)
    throw GenerationError(std::string(to_string(id)) + " needs at least " +
                          std::to_string(at_least) + " minority samples, got " +
                          std::to_string(minority.size()));
}

std::size_t clamp_k(std::size_t k, std::size_t available, std::string_view what,
                    std::vector<std::string>& warnings) {
  if (k <= available) return k;
  warnings.push_back(std::string(what) + " clamped from " + std::to_string(k) + " to " +
                     std::to_string(available));
  return available;
}

// k nearest minority neighbours of every minority member, self excluded.
std::vector<std::vector<std::size_t>> minority_neighbours(std::span<const Sample> minority,
                                                          std::size_t k, MetricKind metric) {
  std::vector<std::vector<std::size_t>> out(minority.size());
  for (std::size_t i = 0; i < minority.size(); ++i) {
    for (const NeighborHit& h : k_nearest(minority[i].features, minority, k, metric, i))
      out[i].push_back(h.index);
  }
  return out;
}

std::vector<Sample> concat(std::span<const Sample> a, std::span<const Sample> b) {
  std::vector<Sample> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

template <typename T>
std::vector<T> sorted_unique(std::set<T> s) {
  return {s.begin(), s.end()};
}

}  // namespace

SyntheticSet ros(std::span<const Sample> minority, std::size_t target, Rng& rng) {
  require_minority(minority, 1, OversamplerId::ROS);
  SyntheticSet set = empty_set(OversamplerId::ROS, target);
  for (std::size_t t = 0; t < target; ++t) {
    const std::size_t i = rng.index(minority.size());
    set.samples.push_back(synthetic(minority[i].features));
    set.provenance.push_back({i, std::nullopt, false, std::nullopt});
  }
  return set;
}

SyntheticSet smote(std::span<const Sample> minority, std::size_t target,
                   const OversamplerConfig& cfg, Rng& rng) {
  require_minority(minority, 2, OversamplerId::SMOTE);
  SyntheticSet set = empty_set(OversamplerId::SMOTE, target);
  const std::size_t k = clamp_k(cfg.k_smote, minority.size() - 1, "k_smote", set.warnings);
  const auto neighbours = minority_neighbours(minority, k, cfg.gen_metric);
  for (std::size_t t = 0; t < target; ++t) {
    const std::size_t i = rng.index(minority.size());
    const std::size_t j = neighbours[i][rng.index(neighbours[i].size())];
    const double gap = rng.uniform();
    set.samples.push_back(synthetic(interpolate(minority[i].features, minority[j].features, gap)));
    set.provenance.push_back({i, j, false, gap});
  }
  return set;
}

std::vector<std::size_t> danger_set(std::span<const Sample> minority,
                                    std::span<const Sample> visible_majority, std::size_t k,
                                    MetricKind metric) {
  const std::vector<Sample> all = concat(minority, visible_majority);
  k = std::min(k, all.size() - 1);
  std::vector<std::size_t> danger;
  for (std::size_t i = 0; i < minority.size(); ++i) {
    const auto hits = k_nearest(minority[i].features, std::span<const Sample>(all), k, metric, i);
    const auto m = static_cast<std::size_t>(std::count_if(
        hits.begin(), hits.end(), [](const NeighborHit& h) { return h.label == Label::Majority; }));
    if (2 * m >= k && m < k) danger.push_back(i);
  }
  return danger;
}

SyntheticSet borderline_smote(std::span<const Sample> minority,
                              std::span<const Sample> visible_majority, std::size_t target,
                              int variant, const OversamplerConfig& cfg, Rng& rng) {
  if (variant != 1 && variant != 2)
    throw InvalidArgument("borderline_smote variant must be 1 or 2");
  const OversamplerId id = variant == 1 ? OversamplerId::BSMOTE1 : OversamplerId::BSMOTE2;
  require_minority(minority, 2, id);
  SyntheticSet set = empty_set(id, target);

  const std::size_t total = minority.size() + visible_majority.size();
  const std::size_t k_danger = clamp_k(cfg.k_danger, total - 1, "k_danger", set.warnings);
  const auto danger = danger_set(minority, visible_majority, k_danger, cfg.gen_metric);
  if (danger.empty()) {
    set.warnings.push_back("DANGER set is empty; no samples generated");
    return set;
  }

  const std::size_t k = clamp_k(cfg.k_smote, minority.size() - 1, "k_smote", set.warnings);
  const auto neighbours = minority_neighbours(minority, k, cfg.gen_metric);
  std::vector<std::vector<std::size_t>> majority_neighbours(minority.size());
  if (variant == 2 && !visible_majority.empty()) {
    for (std::size_t i : danger)
      for (const NeighborHit& h : k_nearest(minority[i].features, visible_majority, cfg.k_smote,
                                            cfg.gen_metric))
        majority_neighbours[i].push_back(h.index);
  }

  for (std::size_t t = 0; t < target; ++t) {
    const std::size_t i = danger[rng.index(danger.size())];
    const std::size_t pool = neighbours[i].size() + majority_neighbours[i].size();
    const std::size_t pick = rng.index(pool);
    if (pick < neighbours[i].size()) {
      const std::size_t j = neighbours[i][pick];
      const double gap = rng.uniform();
      set.samples.push_back(
          synthetic(interpolate(minority[i].features, minority[j].features, gap)));
      set.provenance.push_back({i, j, false, gap});
    } else {
      const std::size_t j = majority_neighbours[i][pick - neighbours[i].size()];
      const double gap = rng.uniform(0.0, 0.5);
      set.samples.push_back(
          synthetic(interpolate(minority[i].features, visible_majority[j].features, gap)));
      set.provenance.push_back({i, j, true, gap});
    }
  }
  return set;
}

std::vector<std::size_t> largest_remainder(std::span<const double> weights, std::size_t total) {
  if (weights.empty()) throw InvalidArgument("largest_remainder: no weights");
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) throw InvalidArgument("largest_remainder: weights must have positive sum");

  std::vector<std::size_t> shares(weights.size());
  std::vector<double> remainder(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = weights[i] / sum * static_cast<double>(total);
    const double whole = std::floor(quota);
    shares[i] = static_cast<std::size_t>(whole);
    remainder[i] = quota - whole;
    assigned += shares[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  // Rounding in the quotas can leave |total - assigned| at most n either way.
  for (std::size_t p = 0; assigned < total; p = (p + 1) % order.size()) {
    ++shares[order[p]];
    ++assigned;
  }
  for (std::size_t p = order.size(); assigned > total;) {
    p = (p == 0 ? order.size() : p) - 1;
    if (shares[order[p]] > 0) {
      --shares[order[p]];
      --assigned;
    }
  }
  return shares;
}

SyntheticSet adasyn(std::span<const Sample> minority, std::span<const Sample> visible_majority,
                    std::size_t target, const OversamplerConfig& cfg, Rng& rng) {
  require_minority(minority, 2, OversamplerId::ADASYN);
  SyntheticSet set = empty_set(OversamplerId::ADASYN, target);

  const std::vector<Sample> all = concat(minority, visible_majority);
  const std::size_t k_ratio = clamp_k(cfg.k_adasyn, all.size() - 1, "k_adasyn", set.warnings);
  std::vector<double> ratio(minority.size());
  for (std::size_t i = 0; i < minority.size(); ++i) {
    const auto hits =
        k_nearest(minority[i].features, std::span<const Sample>(all), k_ratio, cfg.gen_metric, i);
    const auto m = std::count_if(hits.begin(), hits.end(),
                                 [](const NeighborHit& h) { return h.label == Label::Majority; });
    ratio[i] = static_cast<double>(m) / static_cast<double>(k_ratio);
  }
  if (std::accumulate(ratio.begin(), ratio.end(), 0.0) == 0.0) {
    set.warnings.push_back("no minority sample has majority neighbours; uniform allocation used");
    std::fill(ratio.begin(), ratio.end(), 1.0);
  }
  const auto shares = largest_remainder(ratio, target);

  const std::size_t k = clamp_k(cfg.k_adasyn, minority.size() - 1, "k_adasyn (minority)",
                                set.warnings);
  const auto neighbours = minority_neighbours(minority, k, cfg.gen_metric);
  for (std::size_t i = 0; i < minority.size(); ++i) {
    for (std::size_t g = 0; g < shares[i]; ++g) {
      const std::size_t j = neighbours[i][rng.index(neighbours[i].size())];
      const double gap = rng.uniform();
      set.samples.push_back(
          synthetic(interpolate(minority[i].features, minority[j].features, gap)));
      set.provenance.push_back({i, j, false, gap});
    }
  }
  return set;
}

std::size_t farthest_member(std::span<const Sample> minority, std::size_t seed,
                            MetricKind metric) {
  if (minority.size() < 2) throw InvalidArgument("farthest_member: need at least two samples");
  std::size_t best = seed == 0 ? 1 : 0;
  double best_d = -1.0;
  for (std::size_t i = 0; i < minority.size(); ++i) {
    if (i == seed) continue;
    const double d = distance(minority[seed].features, minority[i].features, metric);
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

SyntheticSet smotefuna(std::span<const Sample> minority, std::size_t target,
                       const OversamplerConfig& cfg, Rng& rng) {
  require_minority(minority, 2, OversamplerId::SMOTEFUNA);
  SyntheticSet set = empty_set(OversamplerId::SMOTEFUNA, target);
  std::vector<std::size_t> farthest(minority.size());
  for (std::size_t i = 0; i < minority.size(); ++i)
    farthest[i] = farthest_member(minority, i, cfg.gen_metric);

  for (std::size_t t = 0; t < target; ++t) {
    const std::size_t a = rng.index(minority.size());
    const std::size_t f = farthest[a];
    const Eigen::VectorXd& x = minority[a].features;
    const Eigen::VectorXd& y = minority[f].features;
    Eigen::VectorXd out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double lo = std::min(x[j], y[j]);
      const double hi = std::max(x[j], y[j]);
      out[j] = std::clamp(rng.uniform(lo, hi), lo, hi);
    }
    set.samples.push_back(synthetic(std::move(out)));
    set.provenance.push_back({a, f, false, std::nullopt});
  }
  return set;
}

MwmoteSelection mwmote_select(std::span<const Sample> minority,
                              std::span<const Sample> visible_majority,
                              const OversamplerConfig& cfg, std::vector<std::string>* warnings) {
  std::vector<std::string> scratch;
  std::vector<std::string>& warn = warnings ? *warnings : scratch;
  const MetricKind metric = cfg.gen_metric;
  MwmoteSelection sel;
  if (minority.empty() || visible_majority.empty()) return sel;

  // Step 1: drop minority members whose k1 neighbourhood is all majority.
  const std::vector<Sample> all = concat(minority, visible_majority);
  const std::size_t k1 = clamp_k(cfg.mwmote_k1, all.size() - 1, "mwmote_k1", warn);
  for (std::size_t i = 0; i < minority.size(); ++i) {
    const auto hits = k_nearest(minority[i].features, std::span<const Sample>(all), k1, metric, i);
    if (std::any_of(hits.begin(), hits.end(),
                    [](const NeighborHit& h) { return h.label == Label::Minority; }))
      sel.filtered_minority.push_back(i);
  }

  // Step 2: majority samples bordering the filtered minority.
  std::set<std::size_t> border;
  for (std::size_t i : sel.filtered_minority)
    for (const NeighborHit& h : k_nearest(minority[i].features, visible_majority, cfg.mwmote_k2, metric))
      border.insert(h.index);
  sel.border_majority = sorted_unique(std::move(border));

  // Step 3: minority samples nearest to the border.
  const std::size_t k3 = cfg.mwmote_k3.value_or(std::max<std::size_t>(1, minority.size() / 2));
  std::set<std::size_t> informative;
  for (std::size_t y : sel.border_majority)
    for (const NeighborHit& h : k_nearest(visible_majority[y].features, minority, k3, metric))
      informative.insert(h.index);
  sel.informative_minority = sorted_unique(std::move(informative));
  if (sel.informative_minority.empty()) return sel;

  // Step 4: selection weights from closeness and density factors.
  const auto n_features = static_cast<double>(minority.front().features.size());
  const std::size_t n_inf = sel.informative_minority.size();
  sel.weights.assign(n_inf, 0.0);
  std::vector<double> closeness(n_inf);
  for (std::size_t y : sel.border_majority) {
    double row_sum = 0.0;
    for (std::size_t c = 0; c < n_inf; ++c) {
      const double dn = distance(visible_majority[y].features,
                                 minority[sel.informative_minority[c]].features, metric) /
                        n_features;
      const double f = dn > 0.0 ? std::min(cfg.mwmote_cth, 1.0 / dn) : cfg.mwmote_cth;
      closeness[c] = f / cfg.mwmote_cth * cfg.mwmote_cmax;
      row_sum += closeness[c];
    }
    for (std::size_t c = 0; c < n_inf; ++c)
      sel.weights[c] += closeness[c] * (closeness[c] / row_sum);
  }

  // Step 5: cluster the informative set; cutoff from the filtered set's
  // mean nearest-neighbour distance.
  double d_avg = 0.0;
  if (sel.filtered_minority.size() >= 2) {
    for (std::size_t a : sel.filtered_minority) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t b : sel.filtered_minority)
        if (a != b) best = std::min(best, distance(minority[a].features, minority[b].features, metric));
      d_avg += best;
    }
    d_avg /= static_cast<double>(sel.filtered_minority.size());
  }
  Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_inf),
                                             static_cast<Eigen::Index>(n_inf));
  for (std::size_t a = 0; a < n_inf; ++a)
    for (std::size_t b = a + 1; b < n_inf; ++b) {
      const double d = distance(minority[sel.informative_minority[a]].features,
                                minority[sel.informative_minority[b]].features, metric);
      dm(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = d;
      dm(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = d;
    }
  sel.clusters = average_linkage(dm, cfg.mwmote_cp * d_avg);
  return sel;
}

SyntheticSet mwmote(std::span<const Sample> minority, std::span<const Sample> visible_majority,
                    std::size_t target, const OversamplerConfig& cfg, Rng& rng) {
  require_minority(minority, 2, OversamplerId::MWMOTE);
  SyntheticSet set = empty_set(OversamplerId::MWMOTE, target);
  const MwmoteSelection sel = mwmote_select(minority, visible_majority, cfg, &set.warnings);
  if (sel.informative_minority.empty()) {
    set.warnings.push_back("informative minority set is empty; no samples generated");
    return set;
  }

  std::vector<double> cumulative(sel.weights.size());
  std::partial_sum(sel.weights.begin(), sel.weights.end(), cumulative.begin());
  const double total = cumulative.back();
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t c = 0; c < sel.clusters.size(); ++c) {
    if (sel.clusters[c] >= members.size()) members.resize(sel.clusters[c] + 1);
    members[sel.clusters[c]].push_back(c);
  }

  for (std::size_t t = 0; t < target; ++t) {
    const double u = rng.uniform() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t pick = std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
    const auto& cluster = members[sel.clusters[pick]];
    const std::size_t other = cluster[rng.index(cluster.size())];
    const std::size_t i = sel.informative_minority[pick];
    const std::size_t j = sel.informative_minority[other];
    const double gap = rng.uniform();
    set.samples.push_back(synthetic(interpolate(minority[i].features, minority[j].features, gap)));
    set.provenance.push_back({i, j, false, gap});
  }
  return set;
}

Whitening swim_whitening(std::span<const Sample> majority, double ridge) {
  if (majority.size() < 2) throw GenerationError("SWIM needs at least two majority samples");
  const Eigen::Index n_features = majority.front().features.size();
  const auto n = static_cast<Eigen::Index>(majority.size());
  Eigen::MatrixXd x(n, n_features);
  for (Eigen::Index r = 0; r < n; ++r) x.row(r) = majority[static_cast<std::size_t>(r)].features.transpose();

  Whitening w;
  w.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centred = x.rowwise() - w.mean.transpose();
  Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(n - 1);
  const double trace = cov.trace();
  if (!(std::isfinite(trace) && trace > 0.0))
    throw GenerationError("SWIM: majority covariance is degenerate (zero trace)");
  cov.diagonal().array() += ridge * trace / static_cast<double>(n_features);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw GenerationError("SWIM: covariance eigendecomposition failed");
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  if (!(lambda.minCoeff() > 0.0))
    throw GenerationError("SWIM: covariance not positive definite after regularisation");
  const Eigen::MatrixXd& v = eig.eigenvectors();
  w.root = v * lambda.cwiseSqrt().asDiagonal() * v.transpose();
  w.inv_root = v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  return w;
}

SyntheticSet swim(std::span<const Sample> minority, std::span<const Sample> visible_majority,
                  std::size_t target, const OversamplerConfig& cfg, Rng& rng) {
  require_minority(minority, 1, OversamplerId::SWIM);
  SyntheticSet set = empty_set(OversamplerId::SWIM, target);
  const Whitening wt = swim_whitening(visible_majority, cfg.swim_ridge);

  for (std::size_t t = 0; t < target; ++t) {
    const std::size_t i = rng.index(minority.size());
    const Eigen::VectorXd& seed = minority[i].features;
    if (cfg.swim_sigma == 0.0) {
      set.samples.push_back(synthetic(seed));
      set.provenance.push_back({i, std::nullopt, false, std::nullopt});
      continue;
    }
    const Eigen::VectorXd w = wt.inv_root * (seed - wt.mean);
    Eigen::VectorXd v = w;
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] += cfg.swim_sigma * rng.normal();
    const double norm = v.norm();
    if (norm > 0.0) v *= w.norm() / norm;
    set.samples.push_back(synthetic(wt.mean + wt.root * v));
    set.provenance.push_back({i, std::nullopt, false, std::nullopt});
  }
  return set;
}

SyntheticSet generate(OversamplerId method, std::span<const Sample> minority,
                      std::span<const Sample> visible_majority, std::size_t target,
                      const OversamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  if (target == 0) throw InvalidArgument("generation target must be at least 1");
  switch (method) {
    case OversamplerId::ROS: return ros(minority, target, rng);
    case OversamplerId::SMOTE: return smote(minority, target, cfg, rng);
    case OversamplerId::BSMOTE1: return borderline_smote(minority, visible_majority, target, 1, cfg, rng);
    case OversamplerId::BSMOTE2: return borderline_smote(minority, visible_majority, target, 2, cfg, rng);
    case OversamplerId::ADASYN: return adasyn(minority, visible_majority, target, cfg, rng);
    case OversamplerId::SMOTEFUNA: return smotefuna(minority, target, cfg, rng);
    case OversamplerId::MWMOTE: return mwmote(minority, visible_majority, target, cfg, rng);
    case OversamplerId::SWIM: return swim(minority, visible_majority, target, cfg, rng);
  }
  throw InvalidArgument("unknown oversampler");
}

}  // namespace osaudit
