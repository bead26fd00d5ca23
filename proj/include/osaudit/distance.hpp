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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "osaudit/dataset.hpp"
#include "osaudit/error.hpp"

namespace osaudit {

enum class MetricKind { Hassanat, Euclidean, Manhattan };

inline std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Hassanat: return "hassanat";
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::Manhattan: return "manhattan";
  }
  return "unknown";
}

inline std::optional<MetricKind> parse_metric(std::string_view text) {
  if (text == "hassanat") return MetricKind::Hassanat;
  if (text == "euclidean") return MetricKind::Euclidean;
  if (text == "manhattan") return MetricKind::Manhattan;
  return std::nullopt;
}

namespace detail {

// Both branches are written as (max - min) / (1 + shifted max), the same
// quantity as 1 - (1 + min') / (1 + max'), which keeps the result exactly
// zero iff a == b and avoids cancellation for nearby values.
template <typename Scalar>
inline Scalar hassanat_component_unchecked(Scalar a, Scalar b) {
  const Scalar lo = std::min(a, b);
  const Scalar hi = std::max(a, b);
  if (lo >= Scalar(0)) return (hi - lo) / (Scalar(1) + hi);
  return (hi - lo) / (Scalar(1) + hi - lo);
}

template <typename DerivedA, typename DerivedB>
inline typename DerivedA::Scalar distance_unchecked(const Eigen::MatrixBase<DerivedA>& p,
                                                    const Eigen::MatrixBase<DerivedB>& q,
                                                    MetricKind metric) {
  using Scalar = typename DerivedA::Scalar;
  switch (metric) {
    case MetricKind::Hassanat: {
      Scalar sum(0);
      for (Eigen::Index i = 0; i < p.size(); ++i)
        sum += hassanat_component_unchecked<Scalar>(p[i], q[i]);
      return sum;
    }
    case MetricKind::Euclidean:
      return (p - q).norm();
    case MetricKind::Manhattan:
      return (p - q).template lpNorm<1>();
  }
  return Scalar(0);
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& v) {
  if (!v.allFinite()) throw InvalidArgument("feature vector contains non-finite values");
}

}  // namespace detail

/// Per-feature Hassanat term, in [0, 1) and symmetric.
template <typename Scalar>
Scalar hassanat_component(Scalar a, Scalar b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw InvalidArgument("hassanat_component: non-finite input");
  return detail::hassanat_component_unchecked(a, b);
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar distance(const Eigen::MatrixBase<DerivedA>& p,
                                   const Eigen::MatrixBase<DerivedB>& q, MetricKind metric) {
  if (p.size() != q.size()) throw InvalidArgument("distance: feature vectors differ in length");
  if (p.size() == 0) throw InvalidArgument("distance: empty feature vectors");
  detail::require_finite(p);
  detail::require_finite(q);
  return detail::distance_unchecked(p, q, metric);
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar hassanat_distance(const Eigen::MatrixBase<DerivedA>& p,
                                            const Eigen::MatrixBase<DerivedB>& q) {
  return distance(p, q, MetricKind::Hassanat);
}

template <typename Scalar>
struct BasicNeighborHit {
  std::size_t index = 0;
  Scalar distance = 0;
  Label label = Label::Majority;

  friend bool operator==(const BasicNeighborHit&, const BasicNeighborHit&) = default;
};

using NeighborHit = BasicNeighborHit<double>;

namespace detail {

template <typename Derived>
void check_query(const Eigen::MatrixBase<Derived>& query,
                 std::span<const BasicSample<typename Derived::Scalar>> refs) {
  require_finite(query);
  for (const auto& r : refs)
    if (r.features.size() != query.size())
      throw InvalidArgument("nearest-neighbour query and reference differ in length");
}

}  // namespace detail

/// Exhaustive 1-NN. Among equal minimal distances a Minority hit wins,
/// then the lowest index.
template <typename Derived>
BasicNeighborHit<typename Derived::Scalar> nearest(
    const Eigen::MatrixBase<Derived>& query,
    std::span<const BasicSample<typename Derived::Scalar>> refs, MetricKind metric) {
  if (refs.empty()) throw InvalidArgument("nearest: empty reference set");
  detail::check_query(query, refs);
  BasicNeighborHit<typename Derived::Scalar> best{0, detail::distance_unchecked(query, refs[0].features, metric),
                                                  refs[0].label};
  for (std::size_t i = 1; i < refs.size(); ++i) {
    const auto d = detail::distance_unchecked(query, refs[i].features, metric);
    if (d < best.distance ||
        (d == best.distance && refs[i].label == Label::Minority && best.label == Label::Majority)) {
      best = {i, d, refs[i].label};
    }
  }
  return best;
}

/// The min(k, available) nearest references in ascending (distance, index)
/// order. `exclude` drops one reference, normally the query itself.
template <typename Derived>
std::vector<BasicNeighborHit<typename Derived::Scalar>> k_nearest(
    const Eigen::MatrixBase<Derived>& query,
    std::span<const BasicSample<typename Derived::Scalar>> refs, std::size_t k, MetricKind metric,
    std::optional<std::size_t> exclude = std::nullopt) {
  using Hit = BasicNeighborHit<typename Derived::Scalar>;
  if (k == 0) throw InvalidArgument("k_nearest: k must be at least 1");
  detail::check_query(query, refs);
  std::vector<Hit> hits;
  hits.reserve(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (exclude && *exclude == i) continue;
    hits.push_back({i, detail::distance_unchecked(query, refs[i].features, metric), refs[i].label});
  }
  if (hits.empty()) throw InvalidArgument("k_nearest: empty reference set after exclusion");
  const auto take = std::min(k, hits.size());
  const auto by_distance = [](const Hit& a, const Hit& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(take), hits.end(),
                    by_distance);
  hits.resize(take);
  return hits;
}

}  // namespace osaudit
