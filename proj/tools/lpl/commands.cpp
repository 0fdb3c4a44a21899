#include "commands.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "config.hpp"
#include "lpl/baselines.hpp"
#include "lpl/dataset_io.hpp"
#include "lpl/errors.hpp"
#include "lpl/sweep.hpp"
#include "lpl/trainer.hpp"

namespace lpl::cli {
namespace {

namespace fs = std::filesystem;

// Stream ids for the generated splits.
constexpr std::uint64_t kTrainStream = 100;
constexpr std::uint64_t kTestStream = 101;
constexpr std::uint64_t kSearchStream = 102;

void append(Schema& s, const Schema& more) { s.insert(s.end(), more.begin(), more.end()); }

Schema theory_schema() {
  return {{"theory.d", "2"},         {"theory.eta", "1"},       {"theory.sigma", "1"},       {"theory.gamma", "1"},
          {"theory.k", "1"},         {"theory.epsilon", "0"},   {"theory.rho_plus", "1"},    {"theory.rho_minus", "1"},
          {"theory.theorem", ""},    {"sweep.param", "rho_plus"}, {"sweep.lo", "0"},        {"sweep.hi", ""},
          {"sweep.points", "50"},    {"sweep.values", ""},      {"mc.enabled", "false"},     {"mc.samples", "1000000"},
          {"mc.shards", "1"},        {"run.seed", "0"},         {"run.out", ""}};
}

Schema data_schema() {
  return {{"data.generator", "gaussian_binary"},
          {"data.path", ""},
          {"data.test_path", ""},
          {"data.split", "train"},
          {"data.d", ""},
          {"data.eta", "1"},
          {"data.sigma", "1"},
          {"data.gamma", "10"},
          {"data.k", "1"},
          {"data.n_plus", "100"},
          {"data.test_gamma", "1"},
          {"data.test_n_plus", "1000"},
          {"data.classes", "10"},
          {"data.imbalance_ratio", "10"},
          {"data.n_head", "500"},
          {"data.test_imbalance_ratio", "1"},
          {"data.test_n_head", "200"},
          {"data.separation", "3"},
          {"data.n", "1000"},
          {"data.test_n", "500"},
          {"data.head_frac", "0.5"},
          {"data.label_density", "0.1"},
          {"data.prototype_scale", "2"},
          {"run.seed", "0"}};
}

Schema method_schema() {
  return {{"method.name", "none"},
          {"method.la_lambda", "1"},
          {"method.isda_strength", "0.5"},
          {"method.ldam_scale", "1"},
          {"method.ntr_lambda", "2"},
          {"method.ntr_psi", "1"},
          {"method.lc_mean_pos", "0"},
          {"method.lc_mean_neg", "0"},
          {"lpl.mode", "longtail_index"},
          {"lpl.tau", "0"},
          {"lpl.epsilon", "0"},
          {"lpl.delta_epsilon", "0"},
          {"lpl.alpha", "0.01"},
          {"lpl.tau_rule", "fixed"},
          {"lpl.confidence_momentum", "0.9"}};
}

Schema train_schema() {
  Schema s = data_schema();
  append(s, method_schema());
  append(s, {{"model.arch", "linear"},
             {"model.hidden", "16"},
             {"train.epochs", "20"},
             {"train.batch_size", "64"},
             {"train.lr", "0.1"},
             {"train.momentum", "0"},
             {"train.weight_decay", "0"},
             {"search.val_fraction", "0.2"},
             {"run.compare_baseline", "false"}});
  return s;
}

Schema analyze_schema() {
  Schema s = data_schema();
  append(s, method_schema());
  append(s, {{"analyze.model", ""}, {"analyze.methods", "la"}});
  return s;
}

std::uint64_t resolve_seed(Config& cfg) {
  if (const char* env = std::getenv("LPL_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || env[0] == '-') throw ConfigError(fmt::format("LPL_SEED must be an unsigned integer, got '{}'", env));
    cfg.set("run.seed", std::to_string(v));
  }
  const std::int64_t seed = cfg.integer("run.seed");
  if (seed < 0) throw ConfigError("run.seed must be non-negative");
  return static_cast<std::uint64_t>(seed);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(cell.substr(b, cell.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

template <class F>
auto config_value(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
  }
}

Dataset load_dataset_file(const std::string& key, const std::string& path) {
  if (path.empty()) throw ConfigError(fmt::format("config key '{}' is required", key));
  if (!fs::exists(path)) throw ConfigError(fmt::format("config key '{}': file '{}' does not exist", key, path));
  return load_csv(path);
}

struct DataSplits {
  Dataset train;
  std::optional<Dataset> test;
};

// Feature dimension; unset means the generator's default (0 = one per class).
std::size_t data_dim(const Config& cfg, std::size_t fallback) {
  return cfg.has("data.d") ? cfg.count("data.d") : fallback;
}

DataSplits make_datasets(const Config& cfg, std::uint64_t seed) {
  const std::string gen = cfg.str("data.generator");
  DataSplits out;
  RngStream train_rng(seed, kTrainStream);
  RngStream test_rng(seed, kTestStream);
  if (gen == "csv") {
    out.train = load_dataset_file("data.path", cfg.str("data.path"));
    if (cfg.has("data.test_path")) out.test = load_dataset_file("data.test_path", cfg.str("data.test_path"));
  } else if (gen == "gaussian_binary") {
    TheoryParams p;
    p.d = static_cast<int>(data_dim(cfg, 2));
    p.eta = cfg.num("data.eta");
    p.sigma = cfg.num("data.sigma");
    p.gamma = cfg.num("data.gamma");
    p.k = cfg.num("data.k");
    out.train = config_value("data", [&] { return gen_gaussian_binary(p, cfg.count("data.n_plus"), train_rng); });
    if (cfg.count("data.test_n_plus") > 0) {
      p.gamma = cfg.num("data.test_gamma");
      out.test = config_value("data", [&] { return gen_gaussian_binary(p, cfg.count("data.test_n_plus"), test_rng); });
    }
  } else if (gen == "longtail") {
    const std::size_t classes = cfg.count("data.classes");
    const std::size_t d = data_dim(cfg, classes);
    const double sep = cfg.num("data.separation");
    out.train = config_value("data", [&] {
      return gen_longtail_multiclass(classes, cfg.num("data.imbalance_ratio"), cfg.count("data.n_head"), d, sep,
                                     train_rng);
    });
    if (cfg.count("data.test_n_head") > 0) {
      out.test = config_value("data", [&] {
        return gen_longtail_multiclass(classes, cfg.num("data.test_imbalance_ratio"), cfg.count("data.test_n_head"), d,
                                       sep, test_rng);
      });
    }
  } else if (gen == "multilabel") {
    const std::size_t classes = cfg.count("data.classes");
    auto make = [&](std::size_t n, RngStream& rng) {
      return config_value("data", [&] {
        return gen_multilabel(classes, n, cfg.num("data.head_frac"), cfg.num("data.label_density"), rng,
                              data_dim(cfg, 0), cfg.num("data.prototype_scale"));
      });
    };
    out.train = make(cfg.count("data.n"), train_rng);
    if (cfg.count("data.test_n") > 0) out.test = make(cfg.count("data.test_n"), test_rng);
  } else {
    throw ConfigError("config key 'data.generator': expected csv, gaussian_binary, longtail or multilabel, got '" +
                      gen + "'");
  }
  return out;
}

RealVec per_class_values(const Config& cfg, const std::string& key, std::size_t classes) {
  std::vector<double> v = cfg.nums(key);
  if (v.size() == 1) v.assign(classes, v.front());
  if (v.size() != classes) throw ConfigError(fmt::format("config key '{}': expected 1 or {} values", key, classes));
  return v;
}

// Lists are allowed in the searched LPL keys; the first entry is the default.
constexpr const char* kSearchKeys[] = {"lpl.epsilon", "lpl.delta_epsilon", "lpl.alpha", "lpl.tau"};

double first_value(const Config& cfg, const std::string& key) {
  const std::vector<double> v = cfg.nums(key);
  if (v.empty()) throw ConfigError(fmt::format("config key '{}' is required", key));
  return v.front();
}

TrainConfig build_train_config(const Config& cfg, std::uint64_t seed, std::size_t classes) {
  TrainConfig t;
  t.seed = seed;
  t.method = config_value("method.name", [&] { return method_from_string(cfg.str("method.name")); });
  t.la_lambda = cfg.num("method.la_lambda");
  t.isda_strength = cfg.num("method.isda_strength");
  t.ldam_scale = cfg.num("method.ldam_scale");
  t.ntr_lambda = cfg.num("method.ntr_lambda");
  t.ntr_psi = cfg.num("method.ntr_psi");
  t.lc.mean_pos = per_class_values(cfg, "method.lc_mean_pos", classes);
  t.lc.mean_neg = per_class_values(cfg, "method.lc_mean_neg", classes);
  t.lpl.mode = config_value("lpl.mode", [&] { return split_mode_from_string(cfg.str("lpl.mode")); });
  t.lpl.tau = first_value(cfg, "lpl.tau");
  t.lpl.epsilon = first_value(cfg, "lpl.epsilon");
  t.lpl.delta_epsilon = first_value(cfg, "lpl.delta_epsilon");
  t.lpl.alpha = first_value(cfg, "lpl.alpha");
  t.tau_rule = config_value("lpl.tau_rule", [&] { return tau_rule_from_string(cfg.str("lpl.tau_rule")); });
  t.confidence_momentum = cfg.num("lpl.confidence_momentum");
  if (cfg.has("model.arch")) {
    t.arch = config_value("model.arch", [&] { return architecture_from_string(cfg.str("model.arch")); });
    t.hidden = cfg.count("model.hidden");
    t.epochs = cfg.count("train.epochs");
    t.batch_size = cfg.count("train.batch_size");
    t.learning_rate = cfg.num("train.lr");
    t.momentum = cfg.num("train.momentum");
    t.weight_decay = cfg.num("train.weight_decay");
  }
  return t;
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

/// Picks the searched LPL values by validation error on a held-out part of
/// the training set and writes them back into `cfg`.
void search_hyperparameters(Config& cfg, TrainConfig& t, const Dataset& train_set) {
  std::vector<std::vector<double>> grids;
  std::size_t combos = 1;
  for (const char* key : kSearchKeys) {
    grids.push_back(cfg.nums(key));
    combos *= grids.back().size();
  }
  if (combos <= 1 || !(t.method == Method::lpl || t.method == Method::la_lpl)) {
    for (std::size_t k = 0; k < grids.size(); ++k) {
      if (!grids[k].empty()) cfg.set(kSearchKeys[k], fmt_num(grids[k].front()));
    }
    return;
  }
  const double frac = cfg.num("search.val_fraction");
  if (!(frac > 0.0 && frac < 1.0)) throw ConfigError("config key 'search.val_fraction' must lie in (0, 1)");
  RngStream rng(t.seed, kSearchStream);
  std::vector<std::size_t> idx(train_set.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
  const auto n_val = static_cast<std::size_t>(std::llround(frac * static_cast<double>(idx.size())));
  if (n_val == 0 || n_val >= idx.size()) throw ConfigError("search.val_fraction leaves an empty split");
  const Dataset val = train_set.subset({idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val)});
  const Dataset fit = train_set.subset({idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end()});

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> chosen;
  for (std::size_t combo = 0; combo < combos; ++combo) {
    std::vector<double> pick(grids.size());
    std::size_t rest = combo;
    for (std::size_t k = grids.size(); k-- > 0;) {
      pick[k] = grids[k][rest % grids[k].size()];
      rest /= grids[k].size();
    }
    TrainConfig c = t;
    c.lpl.epsilon = pick[0];
    c.lpl.delta_epsilon = pick[1];
    c.lpl.alpha = pick[2];
    c.lpl.tau = pick[3];
    const TrainResult r = train(c, fit, &val);
    const EvalMetrics& m = *r.final_test;
    const double score = m.kind == TaskKind::multi_label ? 1.0 - m.map.value_or(0.0) : m.top1_error;
    std::cerr << fmt::format("search: epsilon={} delta_epsilon={} alpha={} tau={} validation_score={:.6f}\n", pick[0],
                             pick[1], pick[2], pick[3], score);
    if (score < best) {
      best = score;
      chosen = pick;
    }
  }
  t.lpl.epsilon = chosen[0];
  t.lpl.delta_epsilon = chosen[1];
  t.lpl.alpha = chosen[2];
  t.lpl.tau = chosen[3];
  for (std::size_t k = 0; k < grids.size(); ++k) cfg.set(kSearchKeys[k], fmt_num(chosen[k]));
}

std::string history_csv(const std::vector<HistoryRow>& rows) {
  std::ostringstream os;
  write_history_csv(os, rows);
  return os.str();
}

std::vector<HistoryRow> last_epoch(const TrainResult& r) {
  std::vector<HistoryRow> out;
  for (const HistoryRow& h : r.history) {
    if (h.epoch == r.variation.size()) out.push_back(h);
  }
  return out;
}

std::string trend_name(const std::vector<double>& v) {
  if (v.size() < 2) return "n/a";
  if (is_monotone(v, Trend::decreasing)) return "decreasing";
  if (is_monotone(v, Trend::increasing)) return "increasing";
  return "non-monotone";
}

}  // namespace

int cmd_theory_sweep(const SweepArgs& args) {
  Config cfg = Config::load(args.config, theory_schema());
  const std::uint64_t seed = resolve_seed(cfg);
  if (args.with_mc) cfg.set("mc.enabled", "true");
  if (args.out) cfg.set("run.out", args.out->string());

  TheoryParams p;
  p.d = static_cast<int>(cfg.count("theory.d"));
  p.eta = cfg.num("theory.eta");
  p.sigma = cfg.num("theory.sigma");
  p.gamma = cfg.num("theory.gamma");
  p.k = cfg.num("theory.k");
  p.epsilon = cfg.num("theory.epsilon");
  p.rho_plus = cfg.num("theory.rho_plus");
  p.rho_minus = cfg.num("theory.rho_minus");
  config_value("theory", [&] {
    p.validate();
    return 0;
  });
  const SweptParam swept = config_value("sweep.param", [&] { return swept_param_from_string(cfg.str("sweep.param")); });

  std::vector<double> grid = cfg.nums("sweep.values");
  if (grid.empty()) {
    const double hi = cfg.has("sweep.hi") ? cfg.num("sweep.hi") : (p.epsilon > 0.0 ? p.eta / p.epsilon : 1.0);
    if (!cfg.has("sweep.hi")) cfg.set("sweep.hi", fmt_num(hi));
    grid = half_open_grid(cfg.num("sweep.lo"), hi, cfg.count("sweep.points"));
  }

  SweepOptions opt;
  if (cfg.has("theory.theorem")) {
    opt.theorem = config_value("theory.theorem", [&] { return theorem_from_int(static_cast<int>(cfg.integer("theory.theorem"))); });
  }
  opt.with_mc = cfg.flag("mc.enabled");
  opt.mc_samples = cfg.count("mc.samples");
  opt.shards = cfg.count("mc.shards");
  opt.seed = seed;
  if (opt.with_mc && opt.mc_samples < 10000) throw ConfigError("config key 'mc.samples' must be at least 10000");
  if (opt.shards == 0) throw ConfigError("config key 'mc.shards' must be positive");

  const SweepTable table = sweep(p, swept, grid, opt);
  std::ostringstream csv;
  write_sweep_csv(csv, table);

  const CorollaryConditions cc = corollary_conditions(p);
  double mean_total = 0.0;
  std::size_t mc_ok = 0;
  for (const SweepRow& r : table.rows) {
    if (!r.feasible) continue;
    mean_total += r.closed_form.total_mean;
    if (r.monte_carlo && std::abs(r.monte_carlo->err_plus - r.closed_form.err_plus) <= 3.0 * r.mc_se &&
        std::abs(r.monte_carlo->err_minus - r.closed_form.err_minus) <= 3.0 * r.mc_se) {
      ++mc_ok;
    }
  }
  const std::size_t feasible = table.feasible_count();
  if (feasible > 0) mean_total /= static_cast<double>(feasible);
  std::string summary = fmt::format(
      "theory-sweep: theorem={} swept={} rows={} feasible={} err_plus={} err_minus={} mean_total_unweighted={:.6g} "
      "cor1={} cor2={} cor3_window={} cor3_variance={}",
      static_cast<int>(table.theorem), swept_param_name(swept), table.rows.size(), feasible,
      trend_name(table.err_plus()), trend_name(table.err_minus()), mean_total, cc.cor1_applies, cc.cor2_applies,
      cc.cor3_class_imbalance_window, cc.cor3_variance_dominant);
  if (opt.with_mc) summary += fmt::format(" mc_within_3se={}/{}", mc_ok, feasible);

  const std::string out = cfg.str("run.out");
  if (out.empty()) {
    std::cout << csv.str();
    std::cerr << summary << '\n';
  } else {
    write_text_atomic(out, csv.str());
    write_text_atomic(out + ".resolved.cfg", cfg.resolved());
    std::cout << summary << '\n';
  }
  if (!table.rows.empty() && feasible == 0) {
    std::cerr << "theory-sweep: every grid point is infeasible";
    if (!table.rows.front().note.empty()) std::cerr << " (" << table.rows.front().note << ")";
    std::cerr << '\n';
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_train(const RunArgs& args) {
  Config cfg = Config::load(args.config, train_schema());
  const std::uint64_t seed = resolve_seed(cfg);
  const DataSplits data = make_datasets(cfg, seed);
  TrainConfig t = build_train_config(cfg, seed, data.train.num_classes());
  config_value("train", [&] {
    t.validate(data.train.kind, data.train.num_classes());
    return 0;
  });
  search_hyperparameters(cfg, t, data.train);

  fs::create_directories(args.out);
  const Dataset* test = data.test ? &*data.test : nullptr;
  const TrainResult r = train(t, data.train, test);
  write_text_atomic(args.out / "resolved.cfg", cfg.resolved());
  write_text_atomic(args.out / "metrics.csv", history_csv(r.history));
  write_text_atomic(args.out / "final.csv", history_csv(last_epoch(r)));
  {
    std::ostringstream os;
    save_model(os, r.model);
    write_text_atomic(args.out / "model.txt", os.str());
  }

  const EvalMetrics& fin = test ? *r.final_test : r.final_train;
  const char* split = test ? "test" : "train";
  std::cout << fmt::format("train: method={} epochs={} {}_top1_error={:.6f}", method_name(t.method), t.epochs, split,
                           fin.top1_error);
  if (fin.map) std::cout << fmt::format(" {}_mAP={:.6f}", split, *fin.map);
  std::cout << '\n';

  if (cfg.flag("run.compare_baseline")) {
    TrainConfig base = t;
    base.method = Method::none;
    const TrainResult rb = train(base, data.train, test);
    write_text_atomic(args.out / "baseline_metrics.csv", history_csv(rb.history));
    const EvalMetrics& bfin = test ? *rb.final_test : rb.final_train;
    for (std::size_t c = 0; c < fin.class_error.size(); ++c) {
      if (!fin.class_error[c] || !bfin.class_error[c]) continue;
      std::cout << fmt::format("class {}: {}_error none={:.6f} {}={:.6f}\n", c, split, *bfin.class_error[c],
                               method_name(t.method), *fin.class_error[c]);
    }
  }
  return kExitOk;
}

int cmd_analyze(const RunArgs& args) {
  Config cfg = Config::load(args.config, analyze_schema());
  const std::uint64_t seed = resolve_seed(cfg);
  const std::string model_path = cfg.str("analyze.model");
  if (model_path.empty()) throw ConfigError("config key 'analyze.model' is required");
  if (!fs::exists(model_path)) throw ConfigError(fmt::format("model file '{}' does not exist", model_path));
  std::ifstream mf(model_path);
  const ModelParams model = load_model(mf);

  const DataSplits data = make_datasets(cfg, seed);
  const Dataset& ds = data.train;
  if (ds.dim() != model.input_dim || ds.num_classes() != model.classes) {
    throw ConfigError("model shape does not match the analysed dataset");
  }
  const Eigen::MatrixXd logits = predict_logits(model, ds.features);
  const std::vector<RealVec> rows = to_rows(logits);
  std::vector<std::size_t> labels;
  if (ds.kind == TaskKind::single_label) {
    for (std::size_t i = 0; i < ds.size(); ++i) labels.push_back(ds.label(i));
  }
  const LogitBatch batch = ds.kind == TaskKind::single_label ? LogitBatch::single_label(rows, labels)
                                                             : LogitBatch::multi_label(rows, ds.targets);
  const std::vector<int> buckets = tercile_buckets(ds.profile);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());
  const LossTable base = offset_loss_table(ds.kind, logits, ds.targets, zero);

  TrainConfig t = build_train_config(cfg, seed, ds.num_classes());
  std::vector<Eigen::MatrixXd> cov;
  std::ostringstream csv;
  csv << "method,class,bucket,sample_kind,count,variation\n";
  for (const std::string& name : split_list(cfg.str("analyze.methods"))) {
    TrainConfig m = t;
    m.method = config_value("analyze.methods", [&] { return method_from_string(name); });
    m.confidence_momentum = 0.0;
    config_value("analyze", [&] {
      m.validate(ds.kind, ds.num_classes());
      return 0;
    });
    if (m.method == Method::isda && cov.empty()) cov = class_feature_covariances(model, ds);
    LplState state;
    const BatchPerturbation pert = compute_perturbation(m, ds.profile, model, logits, ds.targets, ds.kind, state,
                                                        m.method == Method::isda ? &cov : nullptr);
    const LossTable perturbed = pert.ntr ? ntr_loss_table(logits, ds.targets, pert.ntr_shift, m.ntr_lambda)
                                         : offset_loss_table(ds.kind, logits, ds.targets, pert.offsets);
    const std::vector<ClassVariation> var = relative_loss_variation(batch, base, perturbed);
    auto cell = [](const std::optional<double>& v) { return v ? fmt::format("{:.12g}", *v) : std::string(); };
    for (std::size_t c = 0; c < var.size(); ++c) {
      const char* bucket = bucket_name(buckets[c]);
      csv << fmt::format("{},{},{},all,{},{}\n", name, c, bucket, var[c].n_all, cell(var[c].all));
      if (ds.kind == TaskKind::multi_label) {
        csv << fmt::format("{},{},{},positive,{},{}\n", name, c, bucket, var[c].n_positive, cell(var[c].positive));
        csv << fmt::format("{},{},{},negative,{},{}\n", name, c, bucket, var[c].n_negative, cell(var[c].negative));
      }
    }
  }
  fs::create_directories(args.out);
  write_text_atomic(args.out / "resolved.cfg", cfg.resolved());
  write_text_atomic(args.out / "variation.csv", csv.str());
  std::cout << fmt::format("analyze: {} samples, methods={}\n", ds.size(), cfg.str("analyze.methods"));
  return kExitOk;
}

int cmd_datagen(const RunArgs& args) {
  // Accepts a full training config so the same file can describe both.
  Config cfg = Config::load(args.config, train_schema());
  const std::uint64_t seed = resolve_seed(cfg);
  const std::string split = cfg.str("data.split");
  if (split != "train" && split != "test") throw ConfigError("config key 'data.split' must be train or test");
  DataSplits data = make_datasets(cfg, seed);
  if (split == "test" && !data.test) throw ConfigError("no test split configured");
  const Dataset& ds = split == "train" ? data.train : *data.test;
  if (args.out.has_parent_path()) fs::create_directories(args.out.parent_path());
  save_csv(ds, args.out);
  write_text_atomic(args.out.string() + ".resolved.cfg", cfg.resolved());
  std::cout << fmt::format("datagen: wrote {} rows, {} classes to {}\n", ds.size(), ds.num_classes(), args.out.string());
  return kExitOk;
}

int guarded(const char* command, const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace lpl::cli
