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
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include "osaudit/error.hpp"
#include "test_util.hpp"

namespace osaudit {
namespace {

using testing::make_sample;
using testing::random_samples;

std::vector<Sample> cluster(std::mt19937_64& gen, std::size_t n, std::vector<double> centre,
                            double radius, Label label) {
  auto pts = random_samples(gen, n, centre.size(), -radius, radius, label);
  for (Sample& s : pts)
    for (std::size_t j = 0; j < centre.size(); ++j) s.features[static_cast<Eigen::Index>(j)] += centre[j];
  return pts;
}

// Minority cloud overlapping a majority cloud: every method has a seed set.
struct Overlap {
  std::vector<Sample> minority, majority;
};

Overlap overlapping(std::uint64_t seed, std::size_t n_min = 30, std::size_t n_maj = 150) {
  std::mt19937_64 gen(seed);
  Overlap o;
  o.minority = cluster(gen, n_min, {0.0, 0.0, 0.0}, 1.0, Label::Minority);
  o.majority = cluster(gen, n_maj, {0.8, 0.8, 0.8}, 1.5, Label::Majority);
  return o;
}

bool is_k_neighbour(std::span<const Sample> minority, std::size_t i, std::size_t j, std::size_t k) {
  for (const auto& h : k_nearest(minority[i].features, minority, k, MetricKind::Euclidean, i))
    if (h.index == j) return true;
  return false;
}

TEST(Oversamplers, NamesRoundTrip) {
  for (OversamplerId id : kAllOversamplers) EXPECT_EQ(parse_oversampler(to_string(id)), id);
  EXPECT_EQ(parse_oversampler("bsmote2"), OversamplerId::BSMOTE2);
  EXPECT_FALSE(parse_oversampler("nope"));
}

TEST(Oversamplers, ConfigValidation) {
  OversamplerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.k_smote = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.swim_sigma = -1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.mwmote_cp = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Oversamplers, EveryMethodHonoursOutputInvariants) {
  const Overlap o = overlapping(1);
  for (OversamplerId id : kAllOversamplers) {
    Rng rng(7);
    const auto set = generate(id, o.minority, o.majority, 120, {}, rng);
    EXPECT_EQ(set.method, id);
    EXPECT_EQ(set.requested, 120u);
    EXPECT_EQ(set.produced(), 120u) << to_string(id);
    ASSERT_EQ(set.provenance.size(), set.samples.size());
    for (const Sample& s : set.samples) {
      EXPECT_EQ(s.label, Label::Minority);
      EXPECT_EQ(s.origin, Origin::Synthetic);
      ASSERT_EQ(s.features.size(), 3);
      EXPECT_TRUE(s.features.allFinite());
    }
  }
}

TEST(Oversamplers, DeterministicForEqualSeeds) {
  const Overlap o = overlapping(2);
  for (OversamplerId id : kAllOversamplers) {
    Rng a(99), b(99);
    const auto x = generate(id, o.minority, o.majority, 50, {}, a);
    const auto y = generate(id, o.minority, o.majority, 50, {}, b);
    ASSERT_EQ(x.produced(), y.produced());
    for (std::size_t i = 0; i < x.produced(); ++i)
      EXPECT_EQ(x.samples[i].features, y.samples[i].features) << to_string(id);
  }
}

TEST(Oversamplers, ZeroTargetRejected) {
  const Overlap o = overlapping(3);
  Rng rng(1);
  EXPECT_THROW(generate(OversamplerId::SMOTE, o.minority, o.majority, 0, {}, rng), InvalidArgument);
}

TEST(Ros, EmitsExactCopies) {
  const Overlap o = overlapping(4);
  Rng rng(3);
  const auto set = ros(o.minority, 500, rng);
  ASSERT_EQ(set.produced(), 500u);
  for (std::size_t t = 0; t < set.produced(); ++t)
    EXPECT_EQ(set.samples[t].features, o.minority[set.provenance[t].seed].features);
}

TEST(Smote, SamplesLieOnSegmentToANeighbour) {
  const Overlap o = overlapping(5);
  Rng rng(4);
  const auto set = smote(o.minority, 300, {}, rng);
  for (std::size_t t = 0; t < set.produced(); ++t) {
    const Provenance& p = set.provenance[t];
    ASSERT_TRUE(p.partner && p.gap);
    EXPECT_FALSE(p.partner_is_majority);
    EXPECT_TRUE(is_k_neighbour(o.minority, p.seed, *p.partner, 5));
    EXPECT_GE(*p.gap, 0.0);
    EXPECT_LT(*p.gap, 1.0);
    const Eigen::VectorXd& x = o.minority[p.seed].features;
    const Eigen::VectorXd& y = o.minority[*p.partner].features;
    EXPECT_LE((set.samples[t].features - (x + *p.gap * (y - x))).norm(), 1e-12);
  }
}

TEST(Smote, TwoPointsStayOnTheirSegment) {
  const std::vector<Sample> minority = {make_sample({0.0, 0.0}), make_sample({2.0, 4.0})};
  Rng rng(5);
  const auto set = smote(minority, 200, {}, rng);
  EXPECT_FALSE(set.warnings.empty());  // k clamped to 1
  for (const Sample& s : set.samples) {
    EXPECT_NEAR(s.features[1], 2.0 * s.features[0], 1e-12);
    EXPECT_GE(s.features[0], 0.0);
    EXPECT_LE(s.features[0], 2.0);
  }
}

TEST(Smote, StaysInsideMinorityBoundingBox) {
  std::mt19937_64 gen(6);
  const auto minority = random_samples(gen, 40, 6, -3.0, 7.0, Label::Minority);
  Eigen::VectorXd lo = minority[0].features, hi = minority[0].features;
  for (const Sample& s : minority) lo = lo.cwiseMin(s.features), hi = hi.cwiseMax(s.features);
  Rng rng(6);
  const auto set = smote(minority, 10000, {}, rng);
  for (const Sample& s : set.samples) {
    ASSERT_TRUE((s.features.array() >= lo.array()).all());
    ASSERT_TRUE((s.features.array() <= hi.array()).all());
  }
}

TEST(Smote, SinglePointIsAnError) {
  const std::vector<Sample> minority = {make_sample({1.0, 1.0})};
  Rng rng(1);
  EXPECT_THROW(smote(minority, 10, {}, rng), GenerationError);
}

// Brute-force DANGER oracle: full sort of the pooled set per minority point.
std::vector<std::size_t> danger_oracle(const std::vector<Sample>& minority,
                                       const std::vector<Sample>& majority, std::size_t k) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < minority.size(); ++i) {
    std::vector<std::tuple<double, std::size_t, bool>> d;
    for (std::size_t j = 0; j < minority.size(); ++j)
      if (j != i) d.emplace_back((minority[i].features - minority[j].features).norm(), j, false);
    for (std::size_t j = 0; j < majority.size(); ++j)
      d.emplace_back((minority[i].features - majority[j].features).norm(), minority.size() + j, true);
    std::sort(d.begin(), d.end());
    std::size_t m = 0;
    for (std::size_t r = 0; r < k; ++r) m += std::get<2>(d[r]);
    if (2 * m >= k && m < k) out.push_back(i);
  }
  return out;
}

TEST(BorderlineSmote, DangerSetMatchesOracle) {
  for (std::uint64_t s = 10; s < 20; ++s) {
    const Overlap o = overlapping(s, 25, 80);
    for (std::size_t k : {3u, 5u, 8u})
      EXPECT_EQ(danger_set(o.minority, o.majority, k, MetricKind::Euclidean),
                danger_oracle(o.minority, o.majority, k));
  }
}

TEST(BorderlineSmote, SeedsComeOnlyFromDangerSet) {
  const Overlap o = overlapping(21);
  const auto danger = danger_set(o.minority, o.majority, 5, MetricKind::Euclidean);
  ASSERT_FALSE(danger.empty());
  const std::set<std::size_t> allowed(danger.begin(), danger.end());
  for (int variant : {1, 2}) {
    Rng rng(8);
    const auto set = borderline_smote(o.minority, o.majority, 400, variant, {}, rng);
    for (const Provenance& p : set.provenance) EXPECT_TRUE(allowed.count(p.seed));
  }
}

TEST(BorderlineSmote, NoiseAndSafePointsAreNotSeeds) {
  // Index 0 is noise (inside the majority); indices 1..6 are safe (far away);
  // 7..9 sit on the border.
  std::vector<Sample> minority = {make_sample({10.0, 10.0})};
  for (int i = 0; i < 6; ++i) minority.push_back(make_sample({-10.0 + 0.1 * i, -10.0}));
  for (int i = 0; i < 3; ++i) minority.push_back(make_sample({4.0 + 0.1 * i, 4.0}));
  std::vector<Sample> majority;
  for (int i = 0; i < 8; ++i) majority.push_back(make_sample({10.0 + 0.05 * (i + 1), 10.0}, Label::Majority));
  for (int i = 0; i < 3; ++i) majority.push_back(make_sample({4.0 + 0.1 * i, 4.05}, Label::Majority));
  const auto danger = danger_set(minority, majority, 5, MetricKind::Euclidean);
  EXPECT_EQ(danger, (std::vector<std::size_t>{7, 8, 9}));
}

TEST(BorderlineSmote, SeparatedBlobsProduceNothing) {
  std::mt19937_64 gen(22);
  const auto minority = cluster(gen, 20, {0.0, 0.0}, 1.0, Label::Minority);
  const auto majority = cluster(gen, 60, {100.0, 100.0}, 1.0, Label::Majority);
  for (int variant : {1, 2}) {
    Rng rng(1);
    const auto set = borderline_smote(minority, majority, 40, variant, {}, rng);
    EXPECT_EQ(set.produced(), 0u);
    EXPECT_EQ(set.requested, 40u);
    EXPECT_FALSE(set.warnings.empty());
  }
}

TEST(BorderlineSmote, VariantTwoMajorityStepsAreShort) {
  const Overlap o = overlapping(23);
  Rng rng(9);
  const auto set = borderline_smote(o.minority, o.majority, 2000, 2, {}, rng);
  std::size_t toward_majority = 0;
  for (std::size_t t = 0; t < set.produced(); ++t) {
    const Provenance& p = set.provenance[t];
    if (!p.partner_is_majority) continue;
    ++toward_majority;
    EXPECT_GE(*p.gap, 0.0);
    EXPECT_LT(*p.gap, 0.5);
    const Eigen::VectorXd& x = o.minority[p.seed].features;
    const Eigen::VectorXd& y = o.majority[*p.partner].features;
    EXPECT_LE((set.samples[t].features - (x + *p.gap * (y - x))).norm(), 1e-12);
  }
  EXPECT_GT(toward_majority, 0u);
  EXPECT_LT(toward_majority, set.produced());
}

TEST(BorderlineSmote, VariantOneNeverUsesMajorityPartners) {
  const Overlap o = overlapping(24);
  Rng rng(9);
  const auto set = borderline_smote(o.minority, o.majority, 500, 1, {}, rng);
  for (const Provenance& p : set.provenance) EXPECT_FALSE(p.partner_is_majority);
}

TEST(LargestRemainder, MatchesOracle) {
  std::mt19937_64 gen(30);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> nd(1, 20), td(0, 2000);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> w(nd(gen));
    for (double& x : w) x = u(gen);
    w[0] += 1e-3;
    const std::size_t total = td(gen);
    const auto shares = largest_remainder(w, total);
    EXPECT_EQ(std::accumulate(shares.begin(), shares.end(), std::size_t{0}), total);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double quota = w[i] / sum * static_cast<double>(total);
      EXPECT_LE(std::abs(static_cast<double>(shares[i]) - quota), 1.0 + 1e-9);
    }
  }
  EXPECT_EQ(largest_remainder(std::vector<double>{1, 1, 1}, 10), (std::vector<std::size_t>{4, 3, 3}));
  EXPECT_EQ(largest_remainder(std::vector<double>{0.5, 0.25, 0.25}, 8), (std::vector<std::size_t>{4, 2, 2}));
  EXPECT_THROW(largest_remainder(std::vector<double>{0, 0}, 3), InvalidArgument);
}

TEST(Adasyn, SharesSumToTarget) {
  const Overlap o = overlapping(31);
  Rng rng(2);
  const auto set = adasyn(o.minority, o.majority, 777, {}, rng);
  EXPECT_EQ(set.produced(), 777u);
}

TEST(Adasyn, EmbeddedPointReceivesEverything) {
  // Seven tight minority points far from everything, one minority point
  // buried in majority: only the buried point has a non-zero ratio.
  std::vector<Sample> minority;
  for (int i = 0; i < 7; ++i) minority.push_back(make_sample({0.01 * i, 0.0}));
  minority.push_back(make_sample({50.0, 50.0}));
  std::vector<Sample> majority;
  for (int i = 0; i < 10; ++i) majority.push_back(make_sample({50.0 + 0.01 * (i + 1), 50.0}, Label::Majority));
  Rng rng(3);
  const auto set = adasyn(minority, majority, 100, {}, rng);
  ASSERT_EQ(set.produced(), 100u);
  for (const Provenance& p : set.provenance) EXPECT_EQ(p.seed, 7u);
}

TEST(Adasyn, NoMajorityNeighboursFallsBackToUniform) {
  std::mt19937_64 gen(32);
  const auto minority = cluster(gen, 10, {0.0, 0.0}, 1.0, Label::Minority);
  const auto majority = cluster(gen, 30, {100.0, 100.0}, 1.0, Label::Majority);
  Rng rng(4);
  const auto set = adasyn(minority, majority, 53, {}, rng);
  EXPECT_FALSE(set.warnings.empty());
  std::vector<std::size_t> per_seed(minority.size());
  for (const Provenance& p : set.provenance) ++per_seed[p.seed];
  for (std::size_t c : per_seed) {
    EXPECT_GE(c, 5u);
    EXPECT_LE(c, 6u);
  }
}

TEST(SmoteFuna, FarthestMemberMatchesBruteForce) {
  std::mt19937_64 gen(40);
  for (int rep = 0; rep < 30; ++rep) {
    const auto minority = random_samples(gen, 20, 4, -1.0, 1.0, Label::Minority);
    for (std::size_t i = 0; i < minority.size(); ++i) {
      std::size_t best = 0;
      double best_d = -1;
      for (std::size_t j = 0; j < minority.size(); ++j) {
        if (j == i) continue;
        const double d = (minority[i].features - minority[j].features).norm();
        if (d > best_d) best_d = d, best = j;
      }
      EXPECT_EQ(farthest_member(minority, i, MetricKind::Euclidean), best);
    }
  }
}

TEST(SmoteFuna, FarthestMemberTieTakesLowestIndex) {
  const std::vector<Sample> minority = {make_sample({0.0}), make_sample({-1.0}), make_sample({1.0})};
  EXPECT_EQ(farthest_member(minority, 0, MetricKind::Euclidean), 1u);
}

TEST(SmoteFuna, SamplesStayInPairBox) {
  const Overlap o = overlapping(41);
  Rng rng(5);
  const auto set = smotefuna(o.minority, 2000, {}, rng);
  for (std::size_t t = 0; t < set.produced(); ++t) {
    const Provenance& p = set.provenance[t];
    ASSERT_TRUE(p.partner);
    EXPECT_EQ(*p.partner, farthest_member(o.minority, p.seed, MetricKind::Euclidean));
    const Eigen::VectorXd& x = o.minority[p.seed].features;
    const Eigen::VectorXd& y = o.minority[*p.partner].features;
    EXPECT_TRUE((set.samples[t].features.array() >= x.cwiseMin(y).array()).all());
    EXPECT_TRUE((set.samples[t].features.array() <= x.cwiseMax(y).array()).all());
  }
}

TEST(SmoteFuna, SharedCoordinateIsCopied) {
  const std::vector<Sample> minority = {make_sample({0.0, 3.0}), make_sample({1.0, 3.0}),
                                        make_sample({5.0, 3.0})};
  Rng rng(6);
  const auto set = smotefuna(minority, 100, {}, rng);
  for (const Sample& s : set.samples) EXPECT_EQ(s.features[1], 3.0);
}

TEST(Mwmote, IsolatedMinorityPointIsFiltered) {
  const Overlap o = overlapping(50);
  auto minority = o.minority;
  minority.push_back(make_sample({30.0, 30.0, 30.0}));
  auto majority = o.majority;
  for (int i = 0; i < 6; ++i)
    majority.push_back(make_sample({30.0 + 0.1 * (i + 1), 30.0, 30.0}, Label::Majority));
  const auto sel = mwmote_select(minority, majority, {}, nullptr);
  const std::size_t isolated = minority.size() - 1;
  EXPECT_FALSE(std::binary_search(sel.filtered_minority.begin(), sel.filtered_minority.end(), isolated));
  EXPECT_FALSE(sel.informative_minority.empty());
  EXPECT_EQ(sel.weights.size(), sel.informative_minority.size());
  EXPECT_EQ(sel.clusters.size(), sel.informative_minority.size());
  for (double w : sel.weights) EXPECT_GT(w, 0.0);
}

TEST(Mwmote, TinyCutoffMakesSingletonClusters) {
  const Overlap o = overlapping(51);
  OversamplerConfig cfg;
  cfg.mwmote_cp = 1e-9;
  const auto sel = mwmote_select(o.minority, o.majority, cfg, nullptr);
  std::set<std::size_t> distinct(sel.clusters.begin(), sel.clusters.end());
  EXPECT_EQ(distinct.size(), sel.clusters.size());
  Rng rng(7);
  const auto set = mwmote(o.minority, o.majority, 200, cfg, rng);
  ASSERT_EQ(set.produced(), 200u);
  for (std::size_t t = 0; t < set.produced(); ++t)
    EXPECT_LE((set.samples[t].features - o.minority[set.provenance[t].seed].features).norm(), 1e-12);
}

TEST(Mwmote, PartnersShareACluster) {
  const Overlap o = overlapping(52);
  const auto sel = mwmote_select(o.minority, o.majority, {}, nullptr);
  std::vector<std::size_t> cluster_of(o.minority.size(), SIZE_MAX);
  for (std::size_t c = 0; c < sel.informative_minority.size(); ++c)
    cluster_of[sel.informative_minority[c]] = sel.clusters[c];
  Rng rng(8);
  const auto set = mwmote(o.minority, o.majority, 300, {}, rng);
  for (const Provenance& p : set.provenance) {
    ASSERT_NE(cluster_of[p.seed], SIZE_MAX);
    EXPECT_EQ(cluster_of[p.seed], cluster_of[*p.partner]);
  }
}

TEST(Swim, ZeroSigmaCopiesSeeds) {
  const Overlap o = overlapping(60);
  OversamplerConfig cfg;
  cfg.swim_sigma = 0.0;
  Rng rng(1);
  const auto set = swim(o.minority, o.majority, 100, cfg, rng);
  for (std::size_t t = 0; t < set.produced(); ++t)
    EXPECT_EQ(set.samples[t].features, o.minority[set.provenance[t].seed].features);
}

TEST(Swim, PreservesMahalanobisDistanceOfSeed) {
  const Overlap o = overlapping(61);
  OversamplerConfig cfg;
  const Whitening w = swim_whitening(o.majority, cfg.swim_ridge);
  // Rebuild the regularised covariance directly and measure with a solve.
  Eigen::MatrixXd x(o.majority.size(), 3);
  for (std::size_t r = 0; r < o.majority.size(); ++r) x.row(static_cast<Eigen::Index>(r)) = o.majority[r].features.transpose();
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(x.rows() - 1);
  cov.diagonal().array() += cfg.swim_ridge * cov.trace() / 3.0;
  const auto ldlt = cov.ldlt();
  const auto maha = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXd d = v - w.mean;
    return std::sqrt(d.dot(ldlt.solve(d)));
  };
  EXPECT_LE((w.root * w.root - cov).norm(), 1e-9);
  Rng rng(2);
  const auto set = swim(o.minority, o.majority, 500, cfg, rng);
  for (std::size_t t = 0; t < set.produced(); ++t)
    EXPECT_NEAR(maha(set.samples[t].features), maha(o.minority[set.provenance[t].seed].features), 1e-9);
}

TEST(Swim, IsotropicMajorityGivesSphere) {
  // Majority at the 2d corners of a cube: mean 0, covariance a multiple of I.
  std::vector<Sample> majority;
  for (double a : {-1.0, 1.0})
    for (double b : {-1.0, 1.0})
      for (double c : {-1.0, 1.0}) majority.push_back(make_sample({a, b, c}, Label::Majority));
  const std::vector<Sample> minority = {make_sample({0.5, 0.0, 0.0})};
  OversamplerConfig cfg;
  cfg.swim_sigma = 1.0;
  Rng rng(3);
  const auto set = swim(minority, majority, 300, cfg, rng);
  for (const Sample& s : set.samples) EXPECT_NEAR(s.features.norm(), 0.5, 1e-12);
  const double spread = (set.samples.front().features - set.samples.back().features).norm();
  EXPECT_GT(spread, 0.0);
}

TEST(Swim, DegenerateMajorityThrows) {
  const std::vector<Sample> minority = {make_sample({0.0, 0.0})};
  const std::vector<Sample> same = {make_sample({1.0, 1.0}, Label::Majority),
                                    make_sample({1.0, 1.0}, Label::Majority)};
  Rng rng(4);
  EXPECT_THROW(swim(minority, same, 5, {}, rng), GenerationError);
  const std::vector<Sample> one = {make_sample({1.0, 1.0}, Label::Majority)};
  EXPECT_THROW(swim(minority, one, 5, {}, rng), GenerationError);
}

}  // namespace
}  // namespace osaudit
