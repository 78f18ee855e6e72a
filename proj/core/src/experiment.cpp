#include "ips/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <initializer_list>
#include <set>
#include <thread>

#include "ips/gmms.hpp"
#include "ips/text.hpp"
#include "json.hpp"

namespace ips {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& context) {
  if (!obj.is_object()) throw ConfigError(context + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(context + ": unknown key '" + key + "'");
    }
  }
}

double get_number(const json& obj, const char* key, const std::string& context) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(context + ": '" + key + "' must be a number");
  return v.get<double>();
}

std::size_t get_count(const json& obj, const char* key, const std::string& context) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(context + ": '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& context) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(context + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const char* key, const std::string& context) {
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(context + ": '" + key + "' must be true or false");
  return v.get<bool>();
}

template <typename T, typename F>
void maybe(const json& obj, const char* key, T& target, F&& getter) {
  if (obj.contains(key)) target = getter(obj, key);
}

RepresentationParams parse_representation(const json& v, const std::string& context) {
  RepresentationParams p;
  if (v.is_string()) {
    p.kind = parse_representation_kind(v.get<std::string>());
    return p;
  }
  check_keys(v, {"kind", "min_rss", "alpha", "beta"}, context);
  p.kind = parse_representation_kind(get_string(v, "kind", context));
  maybe(v, "min_rss", p.min_rss, [&](const json& o, const char* k) { return get_number(o, k, context); });
  maybe(v, "alpha", p.alpha, [&](const json& o, const char* k) { return get_number(o, k, context); });
  maybe(v, "beta", p.beta, [&](const json& o, const char* k) { return get_number(o, k, context); });
  return p;
}

DistanceSpec parse_distance(const json& v, const std::string& context) {
  if (v.is_string()) return make_distance_spec(parse_distance_kind(v.get<std::string>()));
  check_keys(v, {"kind", "sigma", "penalty", "epsilon_guard"}, context);
  DistanceSpec d = make_distance_spec(parse_distance_kind(get_string(v, "kind", context)));
  maybe(v, "sigma", d.sigma, [&](const json& o, const char* k) { return get_number(o, k, context); });
  maybe(v, "penalty", d.penalty, [&](const json& o, const char* k) { return get_number(o, k, context); });
  maybe(v, "epsilon_guard", d.epsilon_guard, [&](const json& o, const char* k) { return get_number(o, k, context); });
  return d;
}

ClusterSpec parse_cluster(const json& v, const std::string& context) {
  check_keys(v, {"algo", "count_rule", "fuzz_m", "damping", "max_iter", "tol", "eps", "min_pts", "seed"}, context);
  ClusterSpec s;
  const auto num = [&](const json& o, const char* k) { return get_number(o, k, context); };
  const auto count = [&](const json& o, const char* k) { return get_count(o, k, context); };
  s.algo = parse_cluster_algorithm(get_string(v, "algo", context));
  if (v.contains("count_rule")) s.count_rule = parse_count_rule(get_string(v, "count_rule", context));
  maybe(v, "fuzz_m", s.fuzz_m, num);
  maybe(v, "damping", s.damping, num);
  if (v.contains("max_iter")) s.max_iter = get_count(v, "max_iter", context);
  maybe(v, "tol", s.tol, num);
  if (v.contains("eps")) s.eps = get_number(v, "eps", context);
  maybe(v, "min_pts", s.min_pts, count);
  if (v.contains("seed")) s.seed = get_count(v, "seed", context);
  return s;
}

MethodConfig parse_method(const json& v, std::size_t index) {
  std::string context = "methods[" + std::to_string(index) + "]";
  check_keys(v, {"id", "kind", "baseline", "k", "representation", "distance", "cluster", "akm"}, context);
  MethodConfig m;
  m.id = get_string(v, "id", context);
  context = "method '" + m.id + "'";
  m.kind = parse_method_kind(get_string(v, "kind", context));
  if (v.contains("baseline")) m.is_baseline = get_bool(v, "baseline", context);
  if (v.contains("k")) m.knn.k = get_count(v, "k", context);
  if (v.contains("representation")) m.knn.representation = parse_representation(v.at("representation"), context);
  if (v.contains("distance")) m.knn.distance = parse_distance(v.at("distance"), context);
  if (v.contains("cluster")) m.cluster = parse_cluster(v.at("cluster"), context + " cluster");
  if (v.contains("akm")) {
    const auto& a = v.at("akm");
    check_keys(a, {"k", "original_bits"}, context + " akm");
    AkmConfig cfg;
    if (a.contains("k")) cfg.k_clusters = get_count(a, "k", context);
    if (a.contains("original_bits")) cfg.original_bits = static_cast<unsigned>(get_count(a, "original_bits", context));
    m.akm = cfg;
  }
  return m;
}

SyntheticConfig parse_synthetic(const json& v, const std::string& context) {
  check_keys(v,
             {"seed", "width", "height", "floors", "floor_height", "ap_count", "train", "test", "p0",
              "path_loss_exponent", "noise_sigma", "detection_threshold", "integer_rss"},
             context);
  SyntheticConfig c;
  const auto num = [&](const json& o, const char* k) { return get_number(o, k, context); };
  const auto count = [&](const json& o, const char* k) { return get_count(o, k, context); };
  if (v.contains("seed")) c.seed = get_count(v, "seed", context);
  maybe(v, "width", c.width, num);
  maybe(v, "height", c.height, num);
  if (v.contains("floors")) c.floors = static_cast<int>(get_count(v, "floors", context));
  maybe(v, "floor_height", c.floor_height, num);
  maybe(v, "ap_count", c.ap_count, count);
  maybe(v, "train", c.train_count, count);
  maybe(v, "test", c.test_count, count);
  maybe(v, "p0", c.p0, num);
  maybe(v, "path_loss_exponent", c.path_loss_exponent, num);
  maybe(v, "noise_sigma", c.noise_sigma, num);
  maybe(v, "detection_threshold", c.detection_threshold, num);
  if (v.contains("integer_rss")) c.integer_rss = get_bool(v, "integer_rss", context);
  c.name = "synth" + std::to_string(c.seed);
  return c;
}

DatasetSource parse_dataset(const json& v, std::size_t index, const std::filesystem::path& base_dir) {
  const std::string context = "datasets[" + std::to_string(index) + "]";
  check_keys(v, {"name", "train", "test", "synthetic", "min_rss"}, context);
  DatasetSource s;
  if (v.contains("name")) s.name = get_string(v, "name", context);
  if (v.contains("min_rss")) s.min_rss = get_number(v, "min_rss", context);
  if (v.contains("synthetic")) {
    if (v.contains("train") || v.contains("test")) throw ConfigError(context + ": give either synthetic or train/test");
    s.synthetic = parse_synthetic(v.at("synthetic"), context + " synthetic");
    return s;
  }
  if (!v.contains("train") || !v.contains("test")) throw ConfigError(context + ": needs train and test paths");
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_relative() ? base_dir / path : path;
  };
  s.train = resolve(get_string(v, "train", context));
  s.test = resolve(get_string(v, "test", context));
  return s;
}

WeightedScore parse_weights(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "akm") return akm_weighted_score();
    throw ConfigError("weights: unknown preset '" + v.get<std::string>() + "' (expected akm or an object)");
  }
  if (!v.is_object()) throw ConfigError("weights: expected an object");
  WeightedScore score;
  for (const auto& [metric, w] : v.items()) {
    const std::string context = "weights." + metric;
    if (w.is_number()) {
      score.weights[metric] = w.get<double>();
      continue;
    }
    check_keys(w, {"weight", "transform"}, context);
    score.weights[metric] = get_number(w, "weight", context);
    if (w.contains("transform")) score.transforms[metric] = parse_transform(get_string(w, "transform", context));
  }
  validate(score);
  return score;
}

std::string source_name(const DatasetSource& s) {
  if (!s.name.empty()) return s.name;
  if (s.synthetic) return s.synthetic->name;
  if (s.train) {
    std::string stem = s.train->stem().string();
    constexpr std::string_view kSuffix = "_train";
    if (stem.size() > kSuffix.size() && stem.ends_with(kSuffix)) stem.resize(stem.size() - kSuffix.size());
    return stem;
  }
  return {};
}

void check_label(const std::string& label, const std::string& what) {
  if (label.empty()) throw ConfigError(what + " must not be empty");
  if (label.find_first_of(",\r\n") != std::string::npos) {
    throw ConfigError(what + " '" + label + "' must not contain commas or line breaks");
  }
}

bool wants(const ExperimentConfig& cfg, std::string_view metric) {
  return cfg.metrics.empty() || std::find(cfg.metrics.begin(), cfg.metrics.end(), metric) != cfg.metrics.end();
}

std::vector<TrialResult> run_pair(const ExperimentConfig& cfg, const MethodConfig& method, const Dataset& dataset) {
  std::vector<TrialResult> out;
  out.reserve(cfg.trials);
  for (std::size_t t = 1; t <= cfg.trials; ++t) {
    try {
      out.push_back(evaluate(dataset, method, t));
    } catch (const std::exception& e) {
      throw ExperimentError(method.id, dataset.name, t, e.what());
    }
  }
  return out;
}

}  // namespace

bool is_metric_name(std::string_view name) {
  return std::find(std::begin(kMetricNames), std::end(kMetricNames), name) != std::end(kMetricNames);
}

Dataset load_dataset(const DatasetSource& source) {
  Dataset ds;
  if (source.synthetic) {
    ds = generate_synthetic(*source.synthetic);
  } else {
    if (!source.train || !source.test) throw ConfigError("dataset source needs a train/test pair or a synthetic spec");
    ds = load_dataset(*source.train, *source.test);
  }
  ds.name = source_name(source);
  if (source.min_rss) ds.min_rss = *source.min_rss;
  validate(ds);
  return ds;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.datasets.empty()) throw ConfigError("experiment needs at least one dataset");
  if (cfg.methods.empty()) throw ConfigError("experiment needs at least one method");
  if (cfg.trials == 0) throw ConfigError("trials must be positive");

  std::size_t baselines = 0;
  std::set<std::string> ids;
  for (const auto& m : cfg.methods) {
    check_label(m.id, "method id");
    if (!ids.insert(m.id).second) throw ConfigError("duplicate method id '" + m.id + "'");
    validate(m);
    baselines += m.is_baseline ? 1 : 0;
  }
  if (baselines != 1) {
    throw ConfigError("exactly one method must be the baseline, found " + std::to_string(baselines));
  }

  std::set<std::string> names;
  for (const auto& d : cfg.datasets) {
    if (d.synthetic) validate(*d.synthetic);
    const auto name = source_name(d);
    check_label(name, "dataset name");
    if (!names.insert(name).second) throw ConfigError("duplicate dataset name '" + name + "'");
  }

  for (const auto& m : cfg.metrics) {
    if (!is_metric_name(m)) throw ConfigError("unknown metric '" + m + "'");
  }
  if (cfg.weights) validate(*cfg.weights);
  if (!is_metric_name(cfg.color_metric)) throw ConfigError("unknown plot color metric '" + cfg.color_metric + "'");
  if (!is_metric_name(cfg.shape_metric)) throw ConfigError("unknown plot shape metric '" + cfg.shape_metric + "'");
}

const MethodConfig& baseline_method(const ExperimentConfig& cfg) {
  const auto it = std::find_if(cfg.methods.begin(), cfg.methods.end(), [](const auto& m) { return m.is_baseline; });
  if (it == cfg.methods.end()) throw ConfigError("experiment has no baseline method");
  return *it;
}

ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    check_keys(doc,
               {"schema", "datasets", "methods", "trials", "metrics", "output_dir", "weights",
                "parallel_timing_unsafe", "plot"},
               "config");
    if (!doc.contains("schema") || !doc.at("schema").is_number_integer() || doc.at("schema").get<int>() != 1) {
      throw ConfigError("config: 'schema' must be 1");
    }
    ExperimentConfig cfg;
    if (!doc.contains("datasets") || !doc.at("datasets").is_array()) throw ConfigError("config: 'datasets' must be a list");
    if (!doc.contains("methods") || !doc.at("methods").is_array()) throw ConfigError("config: 'methods' must be a list");
    for (std::size_t i = 0; i < doc.at("datasets").size(); ++i) {
      cfg.datasets.push_back(parse_dataset(doc.at("datasets")[i], i, base_dir));
    }
    for (std::size_t i = 0; i < doc.at("methods").size(); ++i) cfg.methods.push_back(parse_method(doc.at("methods")[i], i));
    if (doc.contains("trials")) cfg.trials = get_count(doc, "trials", "config");
    if (doc.contains("metrics")) {
      if (!doc.at("metrics").is_array()) throw ConfigError("config: 'metrics' must be a list");
      for (const auto& m : doc.at("metrics")) {
        if (!m.is_string()) throw ConfigError("config: metric names must be strings");
        cfg.metrics.push_back(m.get<std::string>());
      }
    }
    if (doc.contains("output_dir")) {
      const std::filesystem::path out(get_string(doc, "output_dir", "config"));
      cfg.output_dir = (out.is_relative() ? base_dir / out : out).lexically_normal();
    } else {
      cfg.output_dir = base_dir / "results";
    }
    if (doc.contains("weights")) cfg.weights = parse_weights(doc.at("weights"));
    if (doc.contains("parallel_timing_unsafe")) {
      cfg.parallel_timing_unsafe = get_bool(doc, "parallel_timing_unsafe", "config");
    }
    if (doc.contains("plot")) {
      const auto& p = doc.at("plot");
      check_keys(p, {"color", "shape"}, "plot");
      if (p.contains("color")) cfg.color_metric = get_string(p, "color", "plot");
      if (p.contains("shape")) cfg.shape_metric = get_string(p, "shape", "plot");
    }
    validate(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(text::read_file(path), path.parent_path());
}

ExperimentError::ExperimentError(std::string method, std::string dataset, std::size_t trial, const std::string& what)
    : Error("method '" + method + "', dataset '" + dataset + "', trial " + std::to_string(trial) + ": " + what),
      method_(std::move(method)),
      dataset_(std::move(dataset)),
      trial_(trial) {}

std::size_t thread_cap() {
  const char* env = std::getenv("IPS_BENCH_THREADS");
  if (env == nullptr || *env == '\0') return std::max(1u, std::thread::hardware_concurrency());
  const auto n = text::parse_int(env);
  if (!n || *n < 1) throw ConfigError(std::string("IPS_BENCH_THREADS must be a positive integer, got '") + env + "'");
  return static_cast<std::size_t>(*n);
}

void record_trial(MetricTable& table, const ExperimentConfig& cfg, const MethodConfig& method,
                  const Dataset& dataset, const TrialResult& result) {
  const auto put = [&](std::string_view metric, double value) {
    if (wants(cfg, metric)) record(table, std::string(metric), method.id, dataset.name, result.trial_index, value);
  };
  const auto stats = error_stats(result.errors_3d, result.floor_hits);
  put("epsilon_3d", stats.mean);
  put("tau_db", result.elapsed_seconds);
  if (stats.floor_hit_rate) put("floor_hit_rate", *stats.floor_hit_rate);
  put("median", stats.median);
  put("p75", stats.p75);
  put("rmse", stats.rmse);
  for (const auto& [metric, value] : result.extra_metrics) put(metric, value);

  // Uncompressed methods have a compression ratio of 1 so AkM can be compared to them.
  const bool any_akm = std::any_of(cfg.methods.begin(), cfg.methods.end(),
                                   [](const MethodConfig& m) { return m.kind == MethodKind::Akm; });
  const bool cr_listed = std::find(cfg.metrics.begin(), cfg.metrics.end(), "cr") != cfg.metrics.end();
  if (method.kind != MethodKind::Akm && (any_akm || cr_listed)) put("cr", 1.0);
}

MetricTable run_trials(const ExperimentConfig& cfg, const std::vector<Dataset>& datasets) {
  struct Task {
    const MethodConfig* method;
    const Dataset* dataset;
    std::vector<TrialResult> results;
    std::exception_ptr error;
  };
  std::vector<Task> tasks;
  for (const auto& d : datasets) {
    for (const auto& m : cfg.methods) tasks.push_back({&m, &d, {}, nullptr});
  }
  const auto run = [&](Task& task) {
    try {
      task.results = run_pair(cfg, *task.method, *task.dataset);
    } catch (...) {
      task.error = std::current_exception();
    }
  };

  const std::size_t workers = cfg.parallel_timing_unsafe ? std::min(thread_cap(), tasks.size()) : 1;
  if (workers <= 1) {
    for (auto& task : tasks) {
      run(task);
      if (task.error) std::rethrow_exception(task.error);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) run(tasks[i]);
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& task : tasks) {
      if (task.error) std::rethrow_exception(task.error);
    }
  }

  MetricTable table;
  for (const auto& task : tasks) {
    for (const auto& r : task.results) record_trial(table, cfg, *task.method, *task.dataset, r);
  }
  return table;
}

ReportFiles make_reports(const MetricTable& table, const std::string& baseline,
                         const std::optional<WeightedScore>& weights, const std::string& color_metric,
                         const std::string& shape_metric) {
  ReportFiles files;
  files.report = build_report(table, baseline, weights);
  files.raw_csv = format_metric_csv(table);
  files.aggregate_csv = format_aggregate_csv(files.report);
  files.markdown = format_aggregate_markdown(files.report);
  files.warnings = files.report.warnings;
  try {
    const auto rows = parse_aggregate_csv(files.aggregate_csv);
    files.svg = render_gmms(grid_from_aggregate_rows(rows, color_metric, shape_metric));
  } catch (const ConfigError& e) {
    files.warnings.push_back(std::string("GMMS plot skipped: ") + e.what());
  }
  return files;
}

void write_reports(const ReportFiles& files, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  text::write_file_atomic(dir / "raw_metrics.csv", files.raw_csv);
  text::write_file_atomic(dir / "aggregate.csv", files.aggregate_csv);
  text::write_file_atomic(dir / "aggregate.md", files.markdown);
  if (!files.svg.empty()) text::write_file_atomic(dir / "gmms.svg", files.svg);
}

ReportFiles run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<Dataset> datasets;
  datasets.reserve(cfg.datasets.size());
  for (const auto& src : cfg.datasets) {
    try {
      datasets.push_back(load_dataset(src));
    } catch (const std::exception& e) {
      throw ConfigError("dataset '" + source_name(src) + "': " + e.what());
    }
  }
  const auto table = run_trials(cfg, datasets);
  auto files = make_reports(table, baseline_method(cfg).id, cfg.weights, cfg.color_metric, cfg.shape_metric);
  write_reports(files, cfg.output_dir);
  return files;
}

ReportFiles cmd_aggregate(const std::vector<std::filesystem::path>& raw_csvs, const std::string& baseline,
                          const std::filesystem::path& output_dir, const std::optional<WeightedScore>& weights) {
  if (raw_csvs.empty()) throw ConfigError("aggregate: no input files");
  MetricTable table;
  for (const auto& path : raw_csvs) parse_metric_csv(text::read_file(path), table, path.string());
  auto files = make_reports(table, baseline, weights, "tau_db", "epsilon_3d");
  write_reports(files, output_dir);
  return files;
}

void cmd_plot(const std::filesystem::path& aggregate_csv, const std::string& color_metric,
              const std::string& shape_metric, const std::filesystem::path& out_svg, int cell_px) {
  const auto rows = parse_aggregate_csv(text::read_file(aggregate_csv), aggregate_csv.string());
  const auto svg = render_gmms(grid_from_aggregate_rows(rows, color_metric, shape_metric), cell_px);
  if (out_svg.has_parent_path()) std::filesystem::create_directories(out_svg.parent_path());
  text::write_file_atomic(out_svg, svg);
}

ExperimentConfig make_akm_sweep(const ExperimentConfig& base, const std::vector<std::size_t>& ks) {
  if (ks.empty()) throw ConfigError("akm sweep: no K values");
  std::set<std::size_t> unique(ks.begin(), ks.end());
  if (unique.size() != ks.size()) throw ConfigError("akm sweep: repeated K value");

  KnnConfig knn;
  if (!base.methods.empty()) knn = baseline_method(base).knn;

  ExperimentConfig cfg;
  cfg.datasets = base.datasets;
  cfg.trials = base.trials;
  cfg.output_dir = base.output_dir;
  cfg.parallel_timing_unsafe = base.parallel_timing_unsafe;
  cfg.metrics = {"mse_s1", "mse_s2", "epsilon_3d", "cr"};
  cfg.weights = akm_weighted_score();
  cfg.color_metric = "cr";
  cfg.shape_metric = "epsilon_3d";
  const std::size_t smallest = *unique.begin();
  for (std::size_t k : ks) {
    MethodConfig m;
    m.id = "akm_" + std::to_string(k);
    m.kind = MethodKind::Akm;
    m.knn = knn;
    m.akm = AkmConfig{k, 7};
    m.is_baseline = k == smallest;
    cfg.methods.push_back(std::move(m));
  }
  validate(cfg);
  return cfg;
}

}  // namespace ips
