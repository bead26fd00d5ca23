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

#include "osaudit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "osaudit/error.hpp"

namespace osaudit {

std::string_view to_string(Label label) {
  return label == Label::Minority ? "minority" : "majority";
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::Original: return "original";
    case Origin::Hidden: return "hidden";
    case Origin::Synthetic: return "synthetic";
  }
  return "unknown";
}

std::optional<DatasetFormat> parse_dataset_format(std::string_view text) {
  if (text == "keel-dat" || text == "keel" || text == "dat") return DatasetFormat::KeelDat;
  if (text == "csv") return DatasetFormat::Csv;
  return std::nullopt;
}

LabeledDataset::LabeledDataset(std::string name, std::vector<Sample> samples,
                               std::string minority_label, std::string majority_label)
    : name_(std::move(name)),
      samples_(std::move(samples)),
      minority_label_(std::move(minority_label)),
      majority_label_(std::move(majority_label)) {
  if (samples_.empty()) throw InvalidArgument("dataset '" + name_ + "' is empty");
  n_features_ = static_cast<std::size_t>(samples_.front().features.size());
  if (n_features_ == 0) throw InvalidArgument("dataset '" + name_ + "' has no features");
  for (const Sample& s : samples_) {
    if (static_cast<std::size_t>(s.features.size()) != n_features_)
      throw InvalidArgument("dataset '" + name_ + "' has ragged feature rows");
    if (!s.features.allFinite())
      throw InvalidArgument("dataset '" + name_ + "' contains non-finite features");
    if (s.label == Label::Minority) ++minority_count_;
  }
  if (minority_count_ == 0 || minority_count_ == samples_.size())
    throw InvalidArgument("dataset '" + name_ + "' must contain exactly two classes");
  if (minority_count_ >= majority_count())
    throw InvalidArgument("dataset '" + name_ + "' is not imbalanced: minority count " +
                          std::to_string(minority_count_) + " >= majority count " +
                          std::to_string(majority_count()));
}

std::vector<Sample> LabeledDataset::minority() const {
  std::vector<Sample> out;
  out.reserve(minority_count_);
  std::copy_if(samples_.begin(), samples_.end(), std::back_inserter(out),
               [](const Sample& s) { return s.label == Label::Minority; });
  return out;
}

std::vector<Sample> LabeledDataset::majority() const {
  std::vector<Sample> out;
  out.reserve(majority_count());
  std::copy_if(samples_.begin(), samples_.end(), std::back_inserter(out),
               [](const Sample& s) { return s.label == Label::Majority; });
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_real(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

struct RawRow {
  std::vector<double> features;
  std::string label;
};

}  // namespace

LabeledDataset parse_dataset(std::istream& in, std::string name, DatasetFormat format,
                             const std::optional<std::string>& minority_label) {
  std::vector<RawRow> rows;
  std::size_t width = 0;
  bool first_row = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (format == DatasetFormat::KeelDat && text.front() == '@') continue;

    const auto fields = split_fields(text);
    if (fields.size() < 2) throw ParseError("expected at least one feature and a label", line_no);

    if (first_row && format == DatasetFormat::Csv) {
      const bool header = std::any_of(fields.begin(), fields.end() - 1,
                                      [](std::string_view f) { return !parse_real(f); });
      first_row = false;
      if (header) {
        width = fields.size();
        continue;
      }
    }
    first_row = false;

    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw ParseError("ragged row: expected " + std::to_string(width) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);

    RawRow row;
    row.features.reserve(width - 1);
    for (std::size_t c = 0; c + 1 < width; ++c) {
      const auto value = parse_real(fields[c]);
      if (!value)
        throw ParseError("cannot parse '" + std::string(fields[c]) + "' as a real number",
                         line_no, c + 1);
      row.features.push_back(*value);
    }
    row.label = std::string(fields.back());
    if (row.label.empty()) throw ParseError("empty class label", line_no, width);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("dataset '" + name + "' has no data rows");

  // Distinct labels in first-appearance order.
  std::vector<std::pair<std::string, std::size_t>> counts;
  for (const RawRow& row : rows) {
    auto it = std::find_if(counts.begin(), counts.end(),
                           [&](const auto& c) { return c.first == row.label; });
    if (it == counts.end())
      counts.emplace_back(row.label, 1);
    else
      ++it->second;
  }
  if (counts.size() != 2)
    throw ParseError("expected exactly two class labels, found " + std::to_string(counts.size()));

  std::size_t minority_slot = 0;
  if (minority_label) {
    if (counts[0].first == *minority_label)
      minority_slot = 0;
    else if (counts[1].first == *minority_label)
      minority_slot = 1;
    else
      throw InvalidArgument("minority label '" + *minority_label + "' not present in dataset");
  } else {
    if (counts[0].second == counts[1].second)
      throw InvalidArgument("class frequencies tie; no strict minority in '" + name + "'");
    minority_slot = counts[0].second < counts[1].second ? 0 : 1;
  }
  const std::string& minority_name = counts[minority_slot].first;
  const std::string& majority_name = counts[1 - minority_slot].first;

  std::vector<Sample> samples;
  samples.reserve(rows.size());
  for (RawRow& row : rows) {
    Sample s;
    s.features = Eigen::Map<const Eigen::VectorXd>(row.features.data(),
                                                   static_cast<Eigen::Index>(row.features.size()));
    s.label = row.label == minority_name ? Label::Minority : Label::Majority;
    samples.push_back(std::move(s));
  }
  return LabeledDataset(std::move(name), std::move(samples), minority_name, majority_name);
}

LabeledDataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                            const std::optional<std::string>& minority_label) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file '" + path.string() + "'");
  return parse_dataset(in, path.stem().string(), format, minority_label);
}

std::size_t hidden_count(std::size_t majority_count, double ratio) {
  // The small relative slack absorbs representation error of decimal ratios
  // (e.g. 0.29 * 100 evaluating to 28.999...).
  const double exact = ratio * static_cast<double>(majority_count);
  return static_cast<std::size_t>(std::floor(exact * (1.0 + 1e-12)));
}

HiddenSplit hide_majority(const LabeledDataset& ds, double ratio, Rng& rng) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw InvalidArgument("hidden ratio must lie in (0, 1), got " + std::to_string(ratio));
  const std::size_t n_major = ds.majority_count();
  const std::size_t n_hidden = hidden_count(n_major, ratio);
  if (n_hidden == 0)
    throw InvalidArgument("hidden ratio " + std::to_string(ratio) + " hides no majority sample");
  if (n_major - n_hidden <= ds.minority_count())
    throw InvalidArgument("hiding " + std::to_string(n_hidden) + " of " + std::to_string(n_major) +
                          " majority samples leaves no class imbalance");

  // Partial Fisher-Yates over majority positions.
  std::vector<std::size_t> order(n_major);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < n_hidden; ++i) {
    const std::size_t j = i + rng.index(n_major - i);
    std::swap(order[i], order[j]);
  }
  std::vector<bool> hidden(n_major, false);
  for (std::size_t i = 0; i < n_hidden; ++i) hidden[order[i]] = true;

  HiddenSplit split;
  split.hidden_ratio = ratio;
  split.minority.reserve(ds.minority_count());
  split.visible_majority.reserve(n_major - n_hidden);
  split.hidden_majority.reserve(n_hidden);
  std::size_t major_pos = 0;
  for (const Sample& s : ds.samples()) {
    if (s.label == Label::Minority) {
      split.minority.push_back(s);
    } else if (hidden[major_pos++]) {
      Sample h = s;
      h.origin = Origin::Hidden;
      split.hidden_majority.push_back(std::move(h));
    } else {
      split.visible_majority.push_back(s);
    }
  }
  return split;
}

std::size_t balancing_target(const HiddenSplit& split) {
  if (split.visible_majority.size() <= split.minority.size())
    throw InvalidArgument("split has no class imbalance");
  return split.visible_majority.size() - split.minority.size();
}

}  // namespace osaudit
