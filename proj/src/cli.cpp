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

#include "osaudit/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "osaudit/error.hpp"
#include "osaudit/report.hpp"
#include "osaudit/validator.hpp"

namespace osaudit::cli {

void RunSpec::validate() const {
  if (datasets.empty()) throw InvalidArgument("at least one --dataset is required");
  if (methods.empty()) throw InvalidArgument("at least one method is required");
  if (hidden_ratios.empty()) throw InvalidArgument("at least one --hidden ratio is required");
  for (double r : hidden_ratios)
    if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("hidden ratio " + format_real(r) + " not in (0, 1)");
  if (trials == 0) throw InvalidArgument("--trials must be at least 1");
  if (jobs == 0) throw InvalidArgument("--jobs must be at least 1");
  if (attribution_k == 0) throw InvalidArgument("--attribution-k must be at least 1");
  if (feat_x.has_value() != feat_y.has_value())
    throw InvalidArgument("--feat-x and --feat-y must be given together");
  oversampler.validate();
}

std::vector<OversamplerId> parse_method_list(const std::string& text) {
  if (text == "all" || text == "ALL") return {kAllOversamplers.begin(), kAllOversamplers.end()};
  std::vector<OversamplerId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (item.empty()) throw InvalidArgument("empty entry in method list '" + text + "'");
    const auto id = parse_oversampler(item);
    if (!id) throw InvalidArgument("unknown method '" + item + "'");
    if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
  }
  if (out.empty()) throw InvalidArgument("empty method list");
  return out;
}

namespace {

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InvalidArgument("bad value '" + text + "' for parameter " + key);
  return v;
}

}  // namespace

void apply_parameter(OversamplerConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InvalidArgument("parameter must look like name=value");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  const auto count = [&] { return parse_value<std::size_t>(key, value); };
  const auto real = [&] { return parse_value<double>(key, value); };
  if (key == "k_smote") cfg.k_smote = count();
  else if (key == "k_danger") cfg.k_danger = count();
  else if (key == "k_adasyn") cfg.k_adasyn = count();
  else if (key == "mwmote_k1") cfg.mwmote_k1 = count();
  else if (key == "mwmote_k2") cfg.mwmote_k2 = count();
  else if (key == "mwmote_k3") cfg.mwmote_k3 = count();
  else if (key == "mwmote_cth") cfg.mwmote_cth = real();
  else if (key == "mwmote_cmax") cfg.mwmote_cmax = real();
  else if (key == "mwmote_cp") cfg.mwmote_cp = real();
  else if (key == "swim_sigma") cfg.swim_sigma = real();
  else if (key == "swim_ridge") cfg.swim_ridge = real();
  else if (key == "gen_metric") {
    const auto m = parse_metric(value);
    if (!m) throw InvalidArgument("unknown metric '" + value + "'");
    cfg.gen_metric = *m;
  } else {
    throw InvalidArgument("unknown oversampler parameter '" + key + "'");
  }
}

std::vector<std::string> config_file_args(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
    std::string key = line.substr(first, eq - first);
    std::string value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r") + 1);
    // One token, so flags such as no-plots = true parse like options.
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

DatasetFormat infer_format(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? DatasetFormat::Csv : DatasetFormat::KeelDat;
}

namespace {

std::string ratio_tag(double ratio) { return "h" + format_real(ratio); }

TrialConfig trial_config(const RunSpec& spec, double ratio) {
  TrialConfig cfg;
  cfg.hidden_ratio = ratio;
  cfg.trials = spec.trials;
  cfg.base_seed = spec.seed;
  cfg.attribution_metric = spec.metric;
  cfg.attribution_k = spec.attribution_k;
  cfg.oversampler = spec.oversampler;
  return cfg;
}

struct Cell {
  std::size_t ratio;
  std::size_t dataset;
  OversamplerId method;
};

struct CellOutcome {
  std::optional<MethodReport> report;
  std::string failure;
};

void print_ranking(std::ostream& out, const ResultsTable& table,
                   const std::vector<std::string>& dataset_names) {
  out << "hidden ratio " << format_real(table.hidden_ratio) << '\n';
  out << std::left << std::setw(6) << "rank" << std::setw(11) << "method" << std::setw(8) << "avg_er";
  for (const auto& name : dataset_names) out << ' ' << std::setw(10) << name;
  out << '\n';
  std::map<std::pair<std::string, std::string>, const ResultCell*> cells;
  for (const ResultCell& c : table.cells) cells[{c.method, c.dataset}] = &c;
  for (const ResultRank& r : table.ranking) {
    out << std::setw(6) << r.rank << std::setw(11) << r.method << std::setw(8)
        << format_fixed(r.avg_er, 2);
    for (const auto& name : dataset_names) {
      const auto it = cells.find({r.method, name});
      std::string v = "-";
      if (it != cells.end()) v = it->second->failed ? "failed" : format_fixed(it->second->er, 2);
      out << ' ' << std::setw(10) << v;
    }
    out << '\n';
  }
  for (const ResultCell& c : table.cells)
    if (c.failed) out << "failed: " << c.method << " on " << c.dataset << ": " << c.failure << '\n';
  out << std::right;
}

}  // namespace

int cmd_validate(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  spec.validate();

  std::vector<LabeledDataset> datasets;
  std::set<std::string> names;
  for (const auto& path : spec.datasets) {
    datasets.push_back(load_dataset(path, spec.format.value_or(infer_format(path)), spec.minority_label));
    if (!names.insert(datasets.back().name()).second)
      throw InvalidArgument("duplicate dataset name '" + datasets.back().name() + "'");
    if (spec.feat_x && (*spec.feat_x >= datasets.back().n_features() ||
                        *spec.feat_y >= datasets.back().n_features() || *spec.feat_x == *spec.feat_y))
      throw InvalidArgument("--feat-x/--feat-y invalid for dataset '" + datasets.back().name() + "'");
  }
  std::filesystem::create_directories(spec.out_dir);

  std::vector<Cell> cells;
  for (std::size_t r = 0; r < spec.hidden_ratios.size(); ++r)
    for (std::size_t d = 0; d < datasets.size(); ++d)
      for (OversamplerId m : spec.methods) cells.push_back({r, d, m});

  std::vector<CellOutcome> outcomes(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex err_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      const TrialConfig cfg = trial_config(spec, spec.hidden_ratios[c.ratio]);
      std::string line;
      try {
        outcomes[i].report = run_validation(datasets[c.dataset], c.method, cfg);
        line = "ER " + format_fixed(outcomes[i].report->mean_er, 4);
      } catch (const std::exception& e) {
        outcomes[i].failure = e.what();
        line = std::string("FAILED: ") + e.what();
      }
      std::lock_guard lock(err_mutex);
      err << '[' << ++done << '/' << cells.size() << "] " << to_string(c.method) << ' '
          << datasets[c.dataset].name() << " hidden=" << format_real(cfg.hidden_ratio) << ' '
          << line << '\n';
    }
  };
  const std::size_t n_workers = std::min(spec.jobs, cells.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<std::string> dataset_names;
  for (const auto& ds : datasets) dataset_names.push_back(ds.name());

  bool any_failed = false;
  for (std::size_t r = 0; r < spec.hidden_ratios.size(); ++r) {
    std::vector<MethodReport> reports;
    std::vector<CellFailure> failures;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].ratio != r) continue;
      if (outcomes[i].report)
        reports.push_back(*outcomes[i].report);
      else
        failures.push_back({cells[i].method, datasets[cells[i].dataset].name(), outcomes[i].failure});
    }
    any_failed = any_failed || !failures.empty();
    const double ratio = spec.hidden_ratios[r];
    const ResultsTable table = make_results_table(ratio, reports, failures);
    const std::string tag = ratio_tag(ratio);
    write_results(table, ResultsFormat::Csv, spec.out_dir / ("results_" + tag + ".csv"));
    write_results(table, ResultsFormat::Json, spec.out_dir / ("results_" + tag + ".json"));
    if (spec.box_plots && !reports.empty()) {
      const auto boxes = dataset_boxes(table);
      render_boxplot(boxes, spec.out_dir / ("boxplot_" + tag + ".svg"),
                     "mean error rate per method, hidden " + format_real(ratio * 100) + "%");
    }
    print_ranking(out, table, dataset_names);
    if (r + 1 < spec.hidden_ratios.size()) out << '\n';
  }

  if (spec.feat_x) {
    for (std::size_t r = 0; r < spec.hidden_ratios.size(); ++r)
      for (const LabeledDataset& ds : datasets)
        for (OversamplerId m : spec.methods) {
          const TrialConfig cfg = trial_config(spec, spec.hidden_ratios[r]);
          try {
            const TrialArtifacts art = run_trial_detailed(ds, m, cfg, 0);
            render_scatter(ds, art.split, art.synthetic, *spec.feat_x, *spec.feat_y,
                           spec.out_dir / ("scatter_" + ds.name() + "_" + std::string(to_string(m)) +
                                           "_" + ratio_tag(cfg.hidden_ratio) + ".svg"));
          } catch (const std::exception& e) {
            any_failed = true;
            err << "scatter " << to_string(m) << ' ' << ds.name() << " failed: " << e.what() << '\n';
          }
        }
  }
  return any_failed ? kPartialFailure : kSuccess;
}

namespace {

struct MethodInfo {
  OversamplerId id;
  const char* full_name;
  const char* summary;
  std::vector<std::pair<const char*, std::string>> parameters;
};

std::vector<MethodInfo> method_catalogue() {
  const OversamplerConfig d;
  const std::string metric(to_string(d.gen_metric));
  const auto n = [](double v) { return format_real(v); };
  return {
      {OversamplerId::ROS, "Random OverSampling",
       "duplicates minority samples drawn uniformly with replacement (control method)", {}},
      {OversamplerId::SMOTE, "Synthetic Minority Oversampling TEchnique",
       "interpolates between a minority seed and one of its k nearest minority neighbours",
       {{"k_smote", n(5)}, {"gen_metric", metric}}},
      {OversamplerId::BSMOTE1, "Borderline-SMOTE 1",
       "SMOTE restricted to borderline (DANGER) minority seeds",
       {{"k_danger", n(5)}, {"k_smote", n(5)}, {"gen_metric", metric}}},
      {OversamplerId::BSMOTE2, "Borderline-SMOTE 2",
       "borderline seeds, also interpolating toward majority neighbours with step below 0.5",
       {{"k_danger", n(5)}, {"k_smote", n(5)}, {"gen_metric", metric}}},
      {OversamplerId::ADASYN, "ADAptive SYNthetic sampling",
       "allocates more synthetic samples to minority seeds with more majority neighbours",
       {{"k_adasyn", n(5)}, {"gen_metric", metric}}},
      {OversamplerId::SMOTEFUNA, "SMOTE based on the FUrthest Neighbour Algorithm",
       "samples uniformly in the box spanned by a minority seed and its farthest minority member; "
       "no tuning parameters",
       {}},
      {OversamplerId::MWMOTE, "Majority Weighted Minority Oversampling TEchnique",
       "weights informative minority samples near the majority border and interpolates within "
       "average-linkage clusters",
       {{"mwmote_k1", n(5)},
        {"mwmote_k2", n(3)},
        {"mwmote_k3", "floor(|minority|/2)"},
        {"mwmote_cth", n(d.mwmote_cth)},
        {"mwmote_cmax", n(d.mwmote_cmax)},
        {"mwmote_cp", n(d.mwmote_cp)},
        {"gen_metric", metric}}},
      {OversamplerId::SWIM, "Sampling WIth the Majority (Mahalanobis)",
       "jitters minority seeds along their Mahalanobis contour of the majority distribution",
       {{"swim_sigma", n(d.swim_sigma)}, {"swim_ridge", n(d.swim_ridge)}}},
  };
}

}  // namespace

int cmd_list_methods(bool json, std::ostream& out) {
  const auto catalogue = method_catalogue();
  if (json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const MethodInfo& m : catalogue) {
      nlohmann::ordered_json params = nlohmann::ordered_json::object();
      for (const auto& [k, v] : m.parameters) params[k] = v;
      arr.push_back({{"id", std::string(to_string(m.id))},
                     {"name", m.full_name},
                     {"description", m.summary},
                     {"parameters", params}});
    }
    out << arr.dump(2) << '\n';
    return kSuccess;
  }
  for (const MethodInfo& m : catalogue) {
    out << std::left << std::setw(10) << to_string(m.id) << std::right << ' ' << m.full_name << '\n';
    out << "           " << m.summary << '\n';
    out << "           parameters: ";
    if (m.parameters.empty()) {
      out << (m.id == OversamplerId::SMOTEFUNA ? "no tuning parameters" : "none");
    } else {
      for (std::size_t i = 0; i < m.parameters.size(); ++i)
        out << (i ? ", " : "") << m.parameters[i].first << '=' << m.parameters[i].second;
    }
    out << '\n';
  }
  return kSuccess;
}

namespace {

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      const auto extra = config_file_args(args[++i]);
      out.insert(out.end(), extra.begin(), extra.end());
    } else if (args[i].rfind("--config=", 0) == 0) {
      const auto extra = config_file_args(args[i].substr(9));
      out.insert(out.end(), extra.begin(), extra.end());
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

MetricKind metric_from(const std::string& text) {
  const auto m = parse_metric(text);
  if (!m) throw InvalidArgument("unknown metric '" + text + "'");
  return *m;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hidden-majority validation of minority oversampling methods", "osaudit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "osaudit 1.0.0");

  // validate
  RunSpec spec;
  std::string format_text, methods_text = "all", metric_text = "hassanat";
  std::vector<std::string> params;
  auto* validate = app.add_subcommand("validate", "run hide/oversample/attribute trials and rank methods");
  validate->add_option("--dataset", spec.datasets, "dataset file (repeatable)")->required();
  validate->add_option("--format", format_text, "keel-dat or csv (default: by extension)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  validate->add_option("--minority-label", spec.minority_label, "class label treated as minority")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  validate->add_option("--methods", methods_text, "comma-separated method ids or 'all'")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  validate->add_option("--hidden", spec.hidden_ratios, "hidden majority ratio (repeatable, default 0.1)");
  validate->add_option("--trials", spec.trials, "trials per cell")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  validate->add_option("--seed", spec.seed, "base seed")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  validate->add_option("--metric", metric_text, "attribution metric: hassanat, euclidean, manhattan")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  validate->add_option("--attribution-k", spec.attribution_k, "neighbours voting in attribution (default 1)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  validate->add_option("--out", spec.out_dir, "output directory")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  validate->add_option("--jobs", spec.jobs, "worker threads")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  validate->add_option("--param", params, "oversampler parameter name=value (repeatable)");
  validate->add_option("--feat-x", spec.feat_x, "x feature index for scatter plots")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  validate->add_option("--feat-y", spec.feat_y, "y feature index for scatter plots")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  bool no_plots = false;
  validate->add_flag("--no-plots", no_plots, "skip box plot SVGs");
  validate->add_option("--config", "key=value file of flags (expanded in place)");

  // list-methods
  bool list_json = false;
  auto* list = app.add_subcommand("list-methods", "describe the available oversamplers");
  list->add_flag("--json", list_json, "machine-readable output");

  // plot
  std::string plot_kind;
  std::vector<std::filesystem::path> plot_results;
  std::filesystem::path plot_out;
  std::filesystem::path scatter_dataset;
  std::string scatter_method = "smote", scatter_format, scatter_metric = "hassanat";
  std::optional<std::string> scatter_minority;
  double scatter_hidden = 0.10;
  std::uint64_t scatter_seed = 42;
  std::size_t scatter_trial = 0;
  std::size_t feat_x = 0, feat_y = 1;
  std::vector<std::string> scatter_params;
  auto* plot = app.add_subcommand("plot", "render box or scatter SVG plots");
  plot->add_option("kind", plot_kind, "box or scatter")->required()->check(CLI::IsMember({"box", "scatter"}));
  plot->add_option("--results", plot_results, "results JSON file(s) for box plots");
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_option("--dataset", scatter_dataset, "dataset for scatter plots");
  plot->add_option("--format", scatter_format, "keel-dat or csv");
  plot->add_option("--minority-label", scatter_minority, "class label treated as minority");
  plot->add_option("--method", scatter_method, "oversampler for scatter plots");
  plot->add_option("--hidden", scatter_hidden, "hidden ratio");
  plot->add_option("--seed", scatter_seed, "base seed");
  plot->add_option("--trial", scatter_trial, "trial index");
  plot->add_option("--metric", scatter_metric, "attribution metric");
  plot->add_option("--param", scatter_params, "oversampler parameter name=value");
  auto* fx_opt = plot->add_option("--feat-x", feat_x, "x feature index");
  auto* fy_opt = plot->add_option("--feat-y", feat_y, "y feature index");

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*validate) {
      if (!format_text.empty()) {
        spec.format = parse_dataset_format(format_text);
        if (!spec.format) throw InvalidArgument("unknown format '" + format_text + "'");
      }
      spec.methods = parse_method_list(methods_text);
      spec.metric = metric_from(metric_text);
      for (const auto& p : params) apply_parameter(spec.oversampler, p);
      if (spec.hidden_ratios.empty()) spec.hidden_ratios = {0.10};
      spec.box_plots = !no_plots;
      return cmd_validate(spec, out, err);
    }
    if (*list) return cmd_list_methods(list_json, out);
    if (*plot) {
      if (plot_kind == "box") {
        if (plot_results.empty()) throw InvalidArgument("plot box needs --results");
        std::vector<LabeledBox> boxes;
        for (const auto& path : plot_results) {
          const ResultsTable table = read_results(path);
          for (LabeledBox b : dataset_boxes(table)) {
            if (plot_results.size() > 1) b.label += " (" + format_real(table.hidden_ratio * 100) + "%)";
            boxes.push_back(std::move(b));
          }
        }
        if (boxes.empty()) throw InvalidArgument("results contain no successful cells");
        render_boxplot(boxes, plot_out, "mean error rate per method");
        return kSuccess;
      }
      if (scatter_dataset.empty()) throw InvalidArgument("plot scatter needs --dataset");
      if (fx_opt->count() == 0 || fy_opt->count() == 0)
        throw InvalidArgument("plot scatter needs --feat-x and --feat-y");
      DatasetFormat fmt = infer_format(scatter_dataset);
      if (!scatter_format.empty()) {
        const auto f = parse_dataset_format(scatter_format);
        if (!f) throw InvalidArgument("unknown format '" + scatter_format + "'");
        fmt = *f;
      }
      const auto method = parse_oversampler(scatter_method);
      if (!method) throw InvalidArgument("unknown method '" + scatter_method + "'");
      const LabeledDataset ds = load_dataset(scatter_dataset, fmt, scatter_minority);
      TrialConfig cfg;
      cfg.hidden_ratio = scatter_hidden;
      cfg.trials = scatter_trial + 1;
      cfg.base_seed = scatter_seed;
      cfg.attribution_metric = metric_from(scatter_metric);
      for (const auto& p : scatter_params) apply_parameter(cfg.oversampler, p);
      const TrialArtifacts art = run_trial_detailed(ds, *method, cfg, scatter_trial);
      render_scatter(ds, art.split, art.synthetic, feat_x, feat_y, plot_out);
      out << ds.name() << ' ' << to_string(*method) << ": NE " << art.result.ne << ", SE "
          << art.result.se << ", ER " << format_fixed(art.result.er, 4) << '\n';
      return kSuccess;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace osaudit::cli
