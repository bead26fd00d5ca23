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

#include "osaudit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "osaudit/error.hpp"

namespace osaudit {

std::string format_real(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("format_real: conversion failed");
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, digits);
  if (ec != std::errc()) throw Error("format_fixed: conversion failed");
  std::string out(buf, ptr);
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

namespace {

std::size_t method_order(const std::string& name) {
  if (const auto id = parse_oversampler(name)) return static_cast<std::size_t>(*id);
  return kAllOversamplers.size();
}

bool method_less(const std::string& a, const std::string& b) {
  const auto oa = method_order(a), ob = method_order(b);
  return oa != ob ? oa < ob : a < b;
}

void require_plain(const std::string& field) {
  if (field.find_first_of(",\"\n\r") != std::string::npos)
    throw InvalidArgument("results field '" + field + "' contains a CSV delimiter");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double parse_number(std::string_view cell) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw ParseError("cannot parse '" + std::string(cell) + "' as a number");
  return v;
}

}  // namespace

void ResultsTable::sort() {
  std::stable_sort(cells.begin(), cells.end(), [](const ResultCell& a, const ResultCell& b) {
    if (a.method != b.method) return method_less(a.method, b.method);
    return a.dataset < b.dataset;
  });
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const ResultRank& a, const ResultRank& b) { return a.rank < b.rank; });
}

ResultsTable make_results_table(double hidden_ratio, std::span<const MethodReport> reports,
                                std::span<const CellFailure> failures) {
  ResultsTable table;
  table.hidden_ratio = hidden_ratio;
  for (const MethodReport& r : reports)
    table.cells.push_back({std::string(to_string(r.method)), r.dataset, r.mean_ne, r.mean_se,
                           r.mean_er, false, {}});
  for (const CellFailure& f : failures)
    table.cells.push_back({std::string(to_string(f.method)), f.dataset, 0.0, 0.0, 0.0, true, f.cause});
  if (!reports.empty()) {
    for (const RankingRow& row : rank_methods(reports).rows)
      table.ranking.push_back({std::string(to_string(row.method)), row.avg_er, row.rank});
  }
  table.sort();
  return table;
}

std::string results_csv(const ResultsTable& table) {
  std::map<std::string, const ResultRank*> rank_of;
  for (const ResultRank& r : table.ranking) rank_of[r.method] = &r;

  std::string out = "method,dataset,ne,se,er,avg_er,rank\n";
  for (const ResultCell& c : table.cells) {
    require_plain(c.method);
    require_plain(c.dataset);
    out += c.method + ',' + c.dataset + ',';
    if (c.failed)
      out += "NA,NA,NA,";
    else
      out += format_real(c.ne) + ',' + format_real(c.se) + ',' + format_real(c.er) + ',';
    const auto it = rank_of.find(c.method);
    if (it == rank_of.end())
      out += "NA,NA";
    else
      out += format_real(it->second->avg_er) + ',' + std::to_string(it->second->rank);
    out += '\n';
  }
  return out;
}

std::string results_json(const ResultsTable& table) {
  nlohmann::ordered_json doc;
  doc["hidden_ratio"] = table.hidden_ratio;
  doc["results"] = nlohmann::ordered_json::object();
  for (const ResultCell& c : table.cells) {
    auto& cell = doc["results"][c.method][c.dataset];
    if (c.failed) {
      cell["failed"] = c.failure;
    } else {
      cell["ne"] = c.ne;
      cell["se"] = c.se;
      cell["er"] = c.er;
    }
  }
  doc["ranking"] = nlohmann::ordered_json::array();
  for (const ResultRank& r : table.ranking)
    doc["ranking"].push_back({{"method", r.method}, {"avg_er", r.avg_er}, {"rank", r.rank}});
  return doc.dump(2) + "\n";
}

WriteStatus write_results(const ResultsTable& table, ResultsFormat format,
                          const std::filesystem::path& path) {
  write_file(path, format == ResultsFormat::Csv ? results_csv(table) : results_json(table));
  return table.cells.empty() ? WriteStatus::EmptyTable : WriteStatus::Ok;
}

ResultsTable parse_results_csv(std::string_view text) {
  ResultsTable table;
  std::map<std::string, ResultRank> ranks;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "method,dataset,ne,se,er,avg_er,rank")
        throw ParseError("unexpected results header", line_no);
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> f;
    for (std::size_t start = 0;;) {
      const std::size_t comma = line.find(',', start);
      f.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 7) throw ParseError("expected 7 fields", line_no);
    ResultCell c;
    c.method = std::string(f[0]);
    c.dataset = std::string(f[1]);
    if (f[2] == "NA") {
      c.failed = true;
      c.failure = "failed";
    } else {
      c.ne = parse_number(f[2]);
      c.se = parse_number(f[3]);
      c.er = parse_number(f[4]);
    }
    if (f[5] != "NA")
      ranks[c.method] = {c.method, parse_number(f[5]),
                         static_cast<std::size_t>(parse_number(f[6]))};
    table.cells.push_back(std::move(c));
  }
  if (!header_seen) throw ParseError("results file has no header");
  for (auto& [name, r] : ranks) table.ranking.push_back(r);
  table.sort();
  return table;
}

ResultsTable parse_results_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid results JSON: ") + e.what());
  }
  ResultsTable table;
  try {
    table.hidden_ratio = doc.at("hidden_ratio").get<double>();
    for (const auto& [method, datasets] : doc.at("results").items()) {
      for (const auto& [dataset, cell] : datasets.items()) {
        ResultCell c;
        c.method = method;
        c.dataset = dataset;
        if (cell.contains("failed")) {
          c.failed = true;
          c.failure = cell.at("failed").get<std::string>();
        } else {
          c.ne = cell.at("ne").get<double>();
          c.se = cell.at("se").get<double>();
          c.er = cell.at("er").get<double>();
        }
        table.cells.push_back(std::move(c));
      }
    }
    for (const auto& r : doc.at("ranking"))
      table.ranking.push_back(
          {r.at("method").get<std::string>(), r.at("avg_er").get<double>(), r.at("rank").get<std::size_t>()});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed results JSON: ") + e.what());
  }
  table.sort();
  return table;
}

ResultsTable read_results(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".csv") return parse_results_csv(text);
  return parse_results_json(text);
}

BoxStats box_stats(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("box_stats: empty input");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return frac == 0.0 ? v[lo] : v[lo] + frac * (v[hi] - v[lo]);
  };
  return {v.front(), quantile(0.25), quantile(0.5), quantile(0.75), v.back()};
}

std::vector<LabeledBox> dataset_boxes(const ResultsTable& table) {
  std::map<std::string, std::vector<double>> per_dataset;
  for (const ResultCell& c : table.cells)
    if (!c.failed) per_dataset[c.dataset].push_back(c.er);
  std::vector<LabeledBox> boxes;
  for (const auto& [name, values] : per_dataset) boxes.push_back({name, box_stats(values)});
  return boxes;
}

std::string boxplot_svg(std::span<const LabeledBox> boxes, std::string_view title) {
  if (boxes.empty()) throw InvalidArgument("boxplot: no boxes");
  const double left = 60, top = 40, plot_h = 270, slot = 100;
  const double width = left + slot * static_cast<double>(boxes.size()) + 40;
  const double height = top + plot_h + 50;
  const auto y = [&](double v) { return top + (1.0 - std::clamp(v, 0.0, 1.0)) * plot_h; };
  const auto f = [](double v) { return format_fixed(v, 2); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + f(width) +
       "\" height=\"" + f(height) + "\" viewBox=\"0 0 " + f(width) + ' ' + f(height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + f(width) + "\" height=\"" + f(height) +
       "\" fill=\"white\"/>\n";
  if (!title.empty())
    s += "<text x=\"" + f(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + xml_escape(title) + "</text>\n";

  s += "<g id=\"axis\" stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + f(left) + "\" y1=\"" + f(top) + "\" x2=\"" + f(left) + "\" y2=\"" +
       f(top + plot_h) + "\"/>\n";
  s += "<line x1=\"" + f(left) + "\" y1=\"" + f(top + plot_h) + "\" x2=\"" + f(width - 20) +
       "\" y2=\"" + f(top + plot_h) + "\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = t * 0.2;
    s += "<line x1=\"" + f(left - 5) + "\" y1=\"" + f(y(v)) + "\" x2=\"" + f(left) + "\" y2=\"" +
         f(y(v)) + "\"/>\n";
  }
  s += "</g>\n<g id=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = t * 0.2;
    s += "<text x=\"" + f(left - 8) + "\" y=\"" + f(y(v) + 4) + "\">" + format_fixed(v, 1) + "</text>\n";
  }
  s += "</g>\n";
  s += "<text x=\"16\" y=\"" + f(top + plot_h / 2) + "\" font-family=\"sans-serif\" font-size=\"12\" "
       "text-anchor=\"middle\" transform=\"rotate(-90 16 " + f(top + plot_h / 2) + ")\">error rate</text>\n";

  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const BoxStats& b = boxes[i].stats;
    const double cx = left + slot * (static_cast<double>(i) + 0.5);
    const double half = 25;
    s += "<g class=\"box\" stroke=\"black\" stroke-width=\"1\">\n";
    s += "<line x1=\"" + f(cx) + "\" y1=\"" + f(y(b.max)) + "\" x2=\"" + f(cx) + "\" y2=\"" +
         f(y(b.min)) + "\"/>\n";
    s += "<line x1=\"" + f(cx - half / 2) + "\" y1=\"" + f(y(b.max)) + "\" x2=\"" + f(cx + half / 2) +
         "\" y2=\"" + f(y(b.max)) + "\"/>\n";
    s += "<line x1=\"" + f(cx - half / 2) + "\" y1=\"" + f(y(b.min)) + "\" x2=\"" + f(cx + half / 2) +
         "\" y2=\"" + f(y(b.min)) + "\"/>\n";
    s += "<rect x=\"" + f(cx - half) + "\" y=\"" + f(y(b.q3)) + "\" width=\"" + f(2 * half) +
         "\" height=\"" + f(y(b.q1) - y(b.q3)) + "\" fill=\"#9ecae1\"/>\n";
    s += "<line x1=\"" + f(cx - half) + "\" y1=\"" + f(y(b.median)) + "\" x2=\"" + f(cx + half) +
         "\" y2=\"" + f(y(b.median)) + "\" stroke-width=\"2\"/>\n";
    s += "</g>\n";
    s += "<text x=\"" + f(cx) + "\" y=\"" + f(top + plot_h + 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         xml_escape(boxes[i].label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void render_boxplot(std::span<const LabeledBox> boxes, const std::filesystem::path& path,
                    std::string_view title) {
  write_file(path, boxplot_svg(boxes, title));
}

std::string scatter_svg(const LabeledDataset& ds, const HiddenSplit& split,
                        const SyntheticSet& synth, std::size_t feat_x, std::size_t feat_y) {
  if (feat_x >= ds.n_features() || feat_y >= ds.n_features())
    throw InvalidArgument("scatter: feature index out of range (dataset has " +
                          std::to_string(ds.n_features()) + " features)");
  if (feat_x == feat_y) throw InvalidArgument("scatter: feature indices must differ");

  struct Series {
    const char* id;
    const char* name;
    const char* colour;
    double radius;
    std::span<const Sample> points;
  };
  const Series series[] = {
      {"visible-majority", "majority", "#9e9e9e", 2.5, split.visible_majority},
      {"hidden-majority", "hidden majority", "#d62728", 3.0, split.hidden_majority},
      {"minority", "minority", "#1f77b4", 3.0, split.minority},
      {"synthetic", "synthetic", "#2ca02c", 2.0, synth.samples},
  };

  const auto fx = static_cast<Eigen::Index>(feat_x);
  const auto fy = static_cast<Eigen::Index>(feat_y);
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const Series& se : series)
    for (const Sample& p : se.points) {
      x_lo = std::min(x_lo, p.features[fx]);
      x_hi = std::max(x_hi, p.features[fx]);
      y_lo = std::min(y_lo, p.features[fy]);
      y_hi = std::max(y_hi, p.features[fy]);
    }
  if (!std::isfinite(x_lo)) {  // nothing to plot
    x_lo = y_lo = 0.0;
    x_hi = y_hi = 1.0;
  }
  const auto pad = [](double& lo, double& hi) {
    const double span = hi - lo;
    const double m = span > 0.0 ? 0.05 * span : (lo == 0.0 ? 0.5 : 0.05 * std::abs(lo));
    lo -= m;
    hi += m;
  };
  pad(x_lo, x_hi);
  pad(y_lo, y_hi);

  const double left = 60, top = 40, plot_w = 420, plot_h = 360;
  const double width = left + plot_w + 180, height = top + plot_h + 50;
  const auto px = [&](double v) { return left + (v - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double v) { return top + (1.0 - (v - y_lo) / (y_hi - y_lo)) * plot_h; };
  const auto f = [](double v) { return format_fixed(v, 2); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + f(width) +
       "\" height=\"" + f(height) + "\" viewBox=\"0 0 " + f(width) + ' ' + f(height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + f(width) + "\" height=\"" + f(height) +
       "\" fill=\"white\"/>\n";
  s += "<text x=\"" + f(left + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"14\">" +
       xml_escape(ds.name() + " / " + std::string(to_string(synth.method))) + "</text>\n";
  s += "<rect id=\"frame\" x=\"" + f(left) + "\" y=\"" + f(top) + "\" width=\"" + f(plot_w) +
       "\" height=\"" + f(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<text x=\"" + f(left) + "\" y=\"" + f(top + plot_h + 16) + "\">" + format_real(x_lo) + "</text>\n";
  s += "<text x=\"" + f(left + plot_w) + "\" y=\"" + f(top + plot_h + 16) + "\" text-anchor=\"end\">" +
       format_real(x_hi) + "</text>\n";
  s += "<text x=\"" + f(left + plot_w / 2) + "\" y=\"" + f(top + plot_h + 36) +
       "\" text-anchor=\"middle\">feature " + std::to_string(feat_x) + "</text>\n";
  s += "<text x=\"" + f(left - 6) + "\" y=\"" + f(top + plot_h) + "\" text-anchor=\"end\">" +
       format_real(y_lo) + "</text>\n";
  s += "<text x=\"" + f(left - 6) + "\" y=\"" + f(top + 10) + "\" text-anchor=\"end\">" +
       format_real(y_hi) + "</text>\n";
  s += "<text x=\"16\" y=\"" + f(top + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       f(top + plot_h / 2) + ")\">feature " + std::to_string(feat_y) + "</text>\n";
  s += "</g>\n";

  for (const Series& se : series) {
    if (se.points.empty()) continue;
    s += std::string("<g id=\"series-") + se.id + "\" fill=\"" + se.colour + "\" fill-opacity=\"0.7\">\n";
    for (const Sample& p : se.points)
      s += "<circle cx=\"" + f(px(p.features[fx])) + "\" cy=\"" + f(py(p.features[fy])) + "\" r=\"" +
           f(se.radius) + "\"/>\n";
    s += "</g>\n";
  }

  s += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = top + 10;
  for (const Series& se : series) {
    if (se.points.empty()) continue;
    s += "<circle cx=\"" + f(left + plot_w + 20) + "\" cy=\"" + f(ly) + "\" r=\"5\" fill=\"" +
         se.colour + "\"/>\n";
    s += "<text x=\"" + f(left + plot_w + 32) + "\" y=\"" + f(ly + 4) + "\">" + se.name + " (" +
         std::to_string(se.points.size()) + ")</text>\n";
    ly += 20;
  }
  s += "</g>\n</svg>\n";
  return s;
}

void render_scatter(const LabeledDataset& ds, const HiddenSplit& split, const SyntheticSet& synth,
                    std::size_t feat_x, std::size_t feat_y, const std::filesystem::path& path) {
  write_file(path, scatter_svg(ds, split, synth, feat_x, feat_y));
}

}  // namespace osaudit
