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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osaudit/dataset.hpp"
#include "osaudit/distance.hpp"
#include "osaudit/random.hpp"

namespace osaudit {

enum class OversamplerId { ROS, SMOTE, BSMOTE1, BSMOTE2, ADASYN, SMOTEFUNA, MWMOTE, SWIM };

inline constexpr std::array<OversamplerId, 8> kAllOversamplers = {
    OversamplerId::ROS,    OversamplerId::SMOTE,     OversamplerId::BSMOTE1, OversamplerId::BSMOTE2,
    OversamplerId::ADASYN, OversamplerId::SMOTEFUNA, OversamplerId::MWMOTE,  OversamplerId::SWIM};

std::string_view to_string(OversamplerId id);

/// Case-insensitive lookup by name ("smote", "BSMOTE1", ...).
std::optional<OversamplerId> parse_oversampler(std::string_view name);

struct OversamplerConfig {
  std::size_t k_smote = 5;
  std::size_t k_danger = 5;
  std::size_t k_adasyn = 5;
  std::size_t mwmote_k1 = 5;
  std::size_t mwmote_k2 = 3;
  std::optional<std::size_t> mwmote_k3;  ///< default floor(|minority| / 2), at least 1
  double mwmote_cth = 5.0;
  double mwmote_cmax = 2.0;
  double mwmote_cp = 3.0;
  double swim_sigma = 0.25;
  double swim_ridge = 1e-6;
  MetricKind gen_metric = MetricKind::Euclidean;

  /// Throws InvalidArgument when a count is zero or a real is out of range.
  void validate() const;
};

/// How one synthetic sample was built. `seed` indexes the minority input;
/// `partner` indexes the minority, or the visible majority when
/// `partner_is_majority` is set. `gap` is the interpolation step, when the
/// method interpolates.
struct Provenance {
  std::size_t seed = 0;
  std::optional<std::size_t> partner;
  bool partner_is_majority = false;
  std::optional<double> gap;
};

struct SyntheticSet {
  OversamplerId method = OversamplerId::ROS;
  std::size_t requested = 0;
  std::vector<Sample> samples;         ///< label Minority, origin Synthetic
  std::vector<Provenance> provenance;  ///< parallel to samples
  std::vector<std::string> warnings;   ///< k clamps, empty seed sets, fallbacks

  std::size_t produced() const noexcept { return samples.size(); }
};

/// Run `method` on the visible data and return `target` synthetic minority
/// samples (fewer only for BSMOTE1/2 and MWMOTE when their seed set is
/// empty). Deterministic in (inputs, cfg, rng state).
SyntheticSet generate(OversamplerId method, std::span<const Sample> minority,
                      std::span<const Sample> visible_majority, std::size_t target,
                      const OversamplerConfig& cfg, Rng& rng);

SyntheticSet ros(std::span<const Sample> minority, std::size_t target, Rng& rng);

SyntheticSet smote(std::span<const Sample> minority, std::size_t target,
                   const OversamplerConfig& cfg, Rng& rng);

/// `variant` is 1 or 2.
SyntheticSet borderline_smote(std::span<const Sample> minority,
                              std::span<const Sample> visible_majority, std::size_t target,
                              int variant, const OversamplerConfig& cfg, Rng& rng);

SyntheticSet adasyn(std::span<const Sample> minority, std::span<const Sample> visible_majority,
                    std::size_t target, const OversamplerConfig& cfg, Rng& rng);

SyntheticSet smotefuna(std::span<const Sample> minority, std::size_t target,
                       const OversamplerConfig& cfg, Rng& rng);

SyntheticSet mwmote(std::span<const Sample> minority, std::span<const Sample> visible_majority,
                    std::size_t target, const OversamplerConfig& cfg, Rng& rng);

SyntheticSet swim(std::span<const Sample> minority, std::span<const Sample> visible_majority,
                  std::size_t target, const OversamplerConfig& cfg, Rng& rng);

// Building blocks exposed for testing.

/// Borderline-SMOTE seed set: minority indices whose k_danger neighbourhood
/// in minority + majority holds m majority members with k/2 <= m < k.
std::vector<std::size_t> danger_set(std::span<const Sample> minority,
                                    std::span<const Sample> visible_majority, std::size_t k,
                                    MetricKind metric);

/// Split `total` into integer shares proportional to `weights` by the
/// largest-remainder method. Ties in remainder go to the lower index.
std::vector<std::size_t> largest_remainder(std::span<const double> weights, std::size_t total);

/// Index of the minority member farthest from minority[seed]; lowest index
/// on ties.
std::size_t farthest_member(std::span<const Sample> minority, std::size_t seed,
                            MetricKind metric);

/// Intermediate sets of the weighting stage, all as sorted index lists.
struct MwmoteSelection {
  std::vector<std::size_t> filtered_minority;   ///< into minority
  std::vector<std::size_t> border_majority;     ///< into visible_majority
  std::vector<std::size_t> informative_minority;  ///< into minority
  std::vector<double> weights;                  ///< parallel to informative_minority
  std::vector<std::size_t> clusters;            ///< parallel to informative_minority
};

MwmoteSelection mwmote_select(std::span<const Sample> minority,
                              std::span<const Sample> visible_majority,
                              const OversamplerConfig& cfg, std::vector<std::string>* warnings);

/// Symmetric square root and inverse square root of a covariance matrix.
struct Whitening {
  Eigen::VectorXd mean;
  Eigen::MatrixXd root;      ///< C^(1/2)
  Eigen::MatrixXd inv_root;  ///< C^(-1/2)
};

/// Mean and regularised covariance square roots of `majority`.
Whitening swim_whitening(std::span<const Sample> majority, double ridge);

}  // namespace osaudit
