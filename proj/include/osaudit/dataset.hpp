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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "osaudit/random.hpp"

namespace osaudit {

enum class Label { Minority, Majority };

/// Where a sample came from. Reporting colours points by this tag.
enum class Origin { Original, Hidden, Synthetic };

std::string_view to_string(Label label);
std::string_view to_string(Origin origin);

template <typename Scalar>
struct BasicSample {
  Eigen::VectorX<Scalar> features;
  Label label = Label::Majority;
  Origin origin = Origin::Original;
};

using Sample = BasicSample<double>;

enum class DatasetFormat { KeelDat, Csv };

std::optional<DatasetFormat> parse_dataset_format(std::string_view text);

/// Binary, imbalanced, numeric dataset. Immutable once built.
class LabeledDataset {
 public:
  /// Validates the invariants: non-empty, equal feature counts, finite
  /// values, both labels present and strictly fewer minority samples.
  LabeledDataset(std::string name, std::vector<Sample> samples,
                 std::string minority_label = "minority",
                 std::string majority_label = "majority");

  const std::string& name() const noexcept { return name_; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }
  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t size() const noexcept { return samples_.size(); }

  std::size_t minority_count() const noexcept { return minority_count_; }
  std::size_t majority_count() const noexcept { return samples_.size() - minority_count_; }

  /// Original class names as they appeared in the source file.
  const std::string& minority_label() const noexcept { return minority_label_; }
  const std::string& majority_label() const noexcept { return majority_label_; }

  std::vector<Sample> minority() const;
  std::vector<Sample> majority() const;

 private:
  std::string name_;
  std::vector<Sample> samples_;
  std::string minority_label_;
  std::string majority_label_;
  std::size_t n_features_ = 0;
  std::size_t minority_count_ = 0;
};

/// Parse a dataset from a stream.
///
/// KEEL: lines starting with '@' are header lines; every other non-blank
/// line is a comma-separated row whose final field is the class label.
/// CSV: same row layout; the first row is a header when any of its feature
/// cells is not numeric. Without `minority_label` the less frequent class
/// becomes the minority and a frequency tie is an error.
LabeledDataset parse_dataset(std::istream& in, std::string name, DatasetFormat format,
                             const std::optional<std::string>& minority_label = std::nullopt);

/// Reads `path`; the dataset is named after the file stem.
LabeledDataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                            const std::optional<std::string>& minority_label = std::nullopt);

struct HiddenSplit {
  std::vector<Sample> minority;
  std::vector<Sample> visible_majority;
  std::vector<Sample> hidden_majority;  ///< origin == Origin::Hidden
  double hidden_ratio = 0.0;
};

/// Number of majority samples concealed at `ratio`: floor(ratio * count).
std::size_t hidden_count(std::size_t majority_count, double ratio);

/// Conceal floor(ratio * |majority|) majority samples chosen uniformly
/// without replacement. Both majority partitions keep dataset order.
HiddenSplit hide_majority(const LabeledDataset& ds, double ratio, Rng& rng);

/// Synthetic samples needed to equalise the visible classes.
std::size_t balancing_target(const HiddenSplit& split);

}  // namespace osaudit
