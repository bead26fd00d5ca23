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
#include <vector>

#include <Eigen/Core>

namespace osaudit {

/// Average-linkage agglomerative clustering over a symmetric distance
/// matrix. The two closest clusters are merged while their mean pairwise
/// distance is <= `cutoff`; ties go to the lowest cluster pair.
///
/// Returns one cluster id per point, ids numbered in order of first
/// appearance so equal partitions compare equal.
std::vector<std::size_t> average_linkage(const Eigen::MatrixXd& distances, double cutoff);

/// Relabel an arbitrary cluster assignment into first-appearance order.
std::vector<std::size_t> canonical_labels(const std::vector<std::size_t>& assignment);

}  // namespace osaudit
