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

#include "osaudit/clustering.hpp"

#include <limits>
#include <map>

#include "osaudit/error.hpp"

namespace osaudit {

std::vector<std::size_t> canonical_labels(const std::vector<std::size_t>& assignment) {
  std::map<std::size_t, std::size_t> remap;
  std::vector<std::size_t> out(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(assignment[i], remap.size());
    out[i] = it->second;
  }
  return out;
}

std::vector<std::size_t> average_linkage(const Eigen::MatrixXd& distances, double cutoff) {
  if (distances.rows() != distances.cols())
    throw InvalidArgument("average_linkage: distance matrix must be square");
  const auto n = static_cast<std::size_t>(distances.rows());

  // Lance-Williams update for average linkage:
  //   d(k, i+j) = (n_i d(k, i) + n_j d(k, j)) / (n_i + n_j)
  Eigen::MatrixXd d = distances;
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[i] = i;
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;

  while (active.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double v = d(static_cast<Eigen::Index>(active[a]), static_cast<Eigen::Index>(active[b]));
        if (v < best) {
          best = v;
          bi = a;
          bj = b;
        }
      }
    }
    if (!(best <= cutoff)) break;

    const auto i = static_cast<Eigen::Index>(active[bi]);
    const auto j = static_cast<Eigen::Index>(active[bj]);
    const double ni = static_cast<double>(size[active[bi]]);
    const double nj = static_cast<double>(size[active[bj]]);
    for (std::size_t c : active) {
      const auto k = static_cast<Eigen::Index>(c);
      if (k == i || k == j) continue;
      const double merged = (ni * d(k, i) + nj * d(k, j)) / (ni + nj);
      d(k, i) = merged;
      d(i, k) = merged;
    }
    size[active[bi]] += size[active[bj]];
    for (std::size_t p = 0; p < n; ++p)
      if (owner[p] == active[bj]) owner[p] = active[bi];
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return canonical_labels(owner);
}

}  // namespace osaudit
