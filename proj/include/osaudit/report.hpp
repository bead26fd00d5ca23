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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osaudit/dataset.hpp"
#include "osaudit/oversamplers.hpp"
#include "osaudit/validator.hpp"

namespace osaudit {

/// One (method, dataset) cell of a results table. Failed cells keep their
/// cause and carry no numbers.
struct ResultCell {
  std::string method;
  std::string dataset;
  double ne = 0.0;
  double se = 0.0;
  double er = 0.0;
  bool failed = false;
  std::string failure;
};

struct ResultRank {
  std::string method;
  double avg_er = 0.0;
  std::size_t rank = 0;
};

struct ResultsTable {
  double hidden_ratio = 0.0;
  std::vector<ResultCell> cells;
  std::vector<ResultRank> ranking;

  /// Cells sorted by method id, then dataset name.
  void sort();
};

/// A failed (method, dataset) cell for `make_results_table`.
struct CellFailure {
  OversamplerId method = OversamplerId::ROS;
  std::string dataset;
  std::string cause;
};

/// Assemble a table from one hidden ratio's reports, ranking included.
ResultsTable make_results_table(double hidden_ratio, std::span<const MethodReport> reports,
                                std::span<const CellFailure> failures = {});

enum class ResultsFormat { Csv, Json };

enum class WriteStatus { Ok, EmptyTable };

std::string results_csv(const ResultsTable& table);
std::string results_json(const ResultsTable& table);

/// Writes the table; an empty table produces a header-only CSV (or an
/// empty JSON document) and returns EmptyTable.
WriteStatus write_results(const ResultsTable& table, ResultsFormat format,
                          const std::filesystem::path& path);

ResultsTable parse_results_csv(std::string_view text);
ResultsTable parse_results_json(std::string_view text);
ResultsTable read_results(const std::filesystem::path& path);

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Five-number summary. Quartiles interpolate linearly between order
/// statistics at position p * (n - 1), the inclusive convention.
BoxStats box_stats(std::span<const double> values);

struct LabeledBox {
  std::string label;
  BoxStats stats;
};

std::string boxplot_svg(std::span<const LabeledBox> boxes, std::string_view title);
void render_boxplot(std::span<const LabeledBox> boxes, const std::filesystem::path& path,
                    std::string_view title = "");

/// One box per dataset over the per-method mean error rates.
std::vector<LabeledBox> dataset_boxes(const ResultsTable& table);

std::string scatter_svg(const LabeledDataset& ds, const HiddenSplit& split,
                        const SyntheticSet& synth, std::size_t feat_x, std::size_t feat_y);
void render_scatter(const LabeledDataset& ds, const HiddenSplit& split, const SyntheticSet& synth,
                    std::size_t feat_x, std::size_t feat_y, const std::filesystem::path& path);

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_real(double value);

/// Fixed-point with `digits` decimals, independent of the C locale.
std::string format_fixed(double value, int digits);

}  // namespace osaudit
