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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "osaudit/dataset.hpp"
#include "osaudit/distance.hpp"
#include "osaudit/oversamplers.hpp"

namespace osaudit::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kPartialFailure = 2 };

/// One full validation experiment, as given on the command line.
struct RunSpec {
  std::vector<std::filesystem::path> datasets;
  std::optional<DatasetFormat> format;  ///< inferred from the extension when unset
  std::optional<std::string> minority_label;
  std::vector<OversamplerId> methods;
  std::vector<double> hidden_ratios;
  std::size_t trials = 5;
  std::uint64_t seed = 42;
  MetricKind metric = MetricKind::Hassanat;
  std::size_t attribution_k = 1;
  OversamplerConfig oversampler;
  std::filesystem::path out_dir = "results";
  std::size_t jobs = 1;
  bool box_plots = true;
  std::optional<std::size_t> feat_x;  ///< scatter plots are emitted when both are set
  std::optional<std::size_t> feat_y;

  /// Throws InvalidArgument on an empty dataset/method list or a bad ratio.
  void validate() const;
};

/// Parse "smote,adasyn" or "all".
std::vector<OversamplerId> parse_method_list(const std::string& text);

/// Apply one "name=value" oversampler parameter (e.g. "k_smote=7").
void apply_parameter(OversamplerConfig& cfg, const std::string& assignment);

/// Read a key=value file into the equivalent flag list. Blank lines and
/// lines starting with '#' are skipped.
std::vector<std::string> config_file_args(const std::filesystem::path& path);

/// Format chosen for `path` when none is given: ".csv" means CSV,
/// everything else KEEL.
DatasetFormat infer_format(const std::filesystem::path& path);

int cmd_validate(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_list_methods(bool json, std::ostream& out);

/// Entry point. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace osaudit::cli
