#include "vews/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "vews/evalharness.hpp"
#include "vews/rng.hpp"
#include "vews/simgen.hpp"
#include "vews/stats.hpp"

namespace vews::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonInputs {
  std::string edits, labels;
  std::string links, reverts;  // empty = absent

  void attach(CLI::App* cmd, bool required = true) {
    auto* e = cmd->add_option("--edits", edits, "edits file (JSON lines)");
    auto* l = cmd->add_option("--labels", labels, "labels file (CSV)");
    if (required) {
      e->required();
      l->required();
    }
    cmd->add_option("--links", links, "hyper-link graph (TSV src dst)");
    cmd->add_option("--reverts", reverts, "revert flags (CSV user,page,ts[,reverted_by_bot])");
  }

  Corpus load() const {
    return load_corpus(edits, labels,
                       links.empty() ? std::nullopt : std::optional<std::string>(links),
                       reverts.empty() ? std::nullopt : std::optional<std::string>(reverts));
  }

  void to_argv(std::vector<std::string>& argv) const {
    argv.insert(argv.end(), {"--edits", edits, "--labels", labels});
    if (!links.empty()) argv.insert(argv.end(), {"--links", links});
    if (!reverts.empty()) argv.insert(argv.end(), {"--reverts", reverts});
  }
};

std::string default_out_dir() {
  const char* env = std::getenv("VEWS_OUTPUT_DIR");
  return env && *env ? env : ".";
}

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return format_iso8601_utc(static_cast<Timestamp>(t));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

/// Every run drops a manifest echoing the fully resolved invocation; `rerun`
/// replays it.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::vector<std::string>& argv) {
  write_json(out_dir / "manifest.json", json{{"tool", "vews"},
                                             {"manifest_version", 1},
                                             {"created_at", now_utc()},
                                             {"command", command},
                                             {"argv", argv}});
}

json load_report_json(const Corpus& corpus) {
  return json{{"users", corpus.report.total_users},
              {"edits", corpus.report.total_edits},
              {"vandals", corpus.report.vandal_users},
              {"benign", corpus.report.benign_users},
              {"has_links", corpus.has_links},
              {"has_revert_data", corpus.has_revert_data},
              {"revert_rows_joined", corpus.report.revert_rows_joined},
              {"warnings", corpus.report.warnings}};
}

// -----------------------------------------------------------------------
// Subcommand configuration holders

struct EvalFlags {
  std::string features = "vews";
  std::string model = "svm";
  std::uint64_t seed = 1;
  int hidden = 400;
  int ae_epochs = 50;
  double ae_rate = 0.1;
  double ae_momentum = 0.9;
  int ae_batch = 32;
  double ae_decay = 0.0;
  double svm_lambda = 1e-4;
  int svm_epochs = 20;
  int forest_trees = 10;
  int knn_k = 3;
  int jobs = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--features", features, "wvb|wtpm|vews|wvb_wr|wtpm_wr|vews_wr")
        ->default_val(features);
    cmd->add_option("--model", model, "svm|dtree|rforest|knn")->default_val(model);
    cmd->add_option("--seed", seed, "run seed")->default_val(seed);
    cmd->add_option("--hidden", hidden, "autoencoder hidden units")->default_val(hidden);
    cmd->add_option("--ae-epochs", ae_epochs)->default_val(ae_epochs);
    cmd->add_option("--ae-rate", ae_rate)->default_val(ae_rate);
    cmd->add_option("--ae-momentum", ae_momentum)->default_val(ae_momentum);
    cmd->add_option("--ae-batch", ae_batch)->default_val(ae_batch);
    cmd->add_option("--ae-decay", ae_decay)->default_val(ae_decay);
    cmd->add_option("--svm-lambda", svm_lambda)->default_val(svm_lambda);
    cmd->add_option("--svm-epochs", svm_epochs)->default_val(svm_epochs);
    cmd->add_option("--forest-trees", forest_trees)->default_val(forest_trees);
    cmd->add_option("--knn-k", knn_k)->default_val(knn_k);
    cmd->add_option("--jobs", jobs, "worker threads (0 = all cores)")->default_val(jobs);
  }

  EvalConfig to_config() const {
    EvalConfig cfg;
    const auto mode = parse_feature_mode(features);
    if (!mode) throw DataError("unknown feature mode \"" + features + "\"");
    cfg.mode = *mode;
    const auto kind = parse_model_kind(model);
    if (!kind) throw DataError("unknown model kind \"" + model + "\"");
    cfg.model = *kind;
    cfg.seed = seed;
    cfg.ae.hidden = hidden;
    cfg.ae.epochs = ae_epochs;
    cfg.ae.rate = ae_rate;
    cfg.ae.momentum = ae_momentum;
    cfg.ae.batch = ae_batch;
    cfg.ae.rate_decay = ae_decay;
    cfg.svm.lambda = svm_lambda;
    cfg.svm.epochs = svm_epochs;
    cfg.forest.n_trees = forest_trees;
    cfg.knn_k = knn_k;
    cfg.jobs = jobs;
    return cfg;
  }

  void to_argv(std::vector<std::string>& argv) const {
    auto add = [&argv](const char* flag, auto v) {
      argv.emplace_back(flag);
      if constexpr (std::is_same_v<decltype(v), std::string>) {
        argv.push_back(v);
      } else {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        argv.push_back(os.str());
      }
    };
    add("--features", features);
    add("--model", model);
    add("--seed", seed);
    add("--hidden", hidden);
    add("--ae-epochs", ae_epochs);
    add("--ae-rate", ae_rate);
    add("--ae-momentum", ae_momentum);
    add("--ae-batch", ae_batch);
    add("--ae-decay", ae_decay);
    add("--svm-lambda", svm_lambda);
    add("--svm-epochs", svm_epochs);
    add("--forest-trees", forest_trees);
    add("--knn-k", knn_k);
    add("--jobs", jobs);
  }
};

int run_impl(const std::vector<std::string>& args);

// -----------------------------------------------------------------------

int cmd_validate(const CommonInputs& in, const std::string& out_dir,
                 std::vector<std::string> argv) {
  const Corpus corpus = in.load();
  const json j = load_report_json(corpus);
  fs::create_directories(out_dir);
  write_json(fs::path(out_dir) / "validate.json", j);
  write_manifest(out_dir, "validate", argv);
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_stats(const CommonInputs& in, const std::string& out_dir, std::vector<std::string> argv) {
  const Corpus corpus = in.load();
  const json j = stats_to_json(behavior_stats(corpus));
  fs::create_directories(out_dir);
  write_json(fs::path(out_dir) / "stats.json", j);
  write_manifest(out_dir, "stats", argv);
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_simulate(int users, std::uint64_t seed, const std::string& params_path, bool no_reverts,
                 const std::string& out_dir, std::vector<std::string> argv) {
  GeneratorParams params = default_params();
  if (!params_path.empty()) {
    std::ifstream in(params_path);
    if (!in) throw DataError("cannot open " + params_path);
    json j;
    in >> j;
    params = params_from_json(j);
  }
  if (users > 0) params.users_per_class = users;
  params.seed = seed;
  if (no_reverts) {
    params.vandal.p_revert.reset();
    params.benign.p_revert.reset();
  }
  const GeneratedCorpus files = generate(params, out_dir);
  write_manifest(out_dir, "simulate", argv);
  std::cout << "wrote " << files.edits_path << ", " << files.labels_path << ", "
            << files.links_path << ", " << files.params_path << std::endl;
  return 0;
}

int cmd_importance(const CommonInputs& in, int trees, std::uint64_t seed, std::optional<int> k,
                   const std::string& out_dir, std::vector<std::string> argv) {
  const Corpus corpus = in.load();
  const Dataset ds = Dataset::from_corpus(corpus);
  Eigen::MatrixXd X(ds.logs.size(), WvbVector::kDim);
  for (std::size_t i = 0; i < ds.logs.size(); ++i) {
    X.row(i) = wvb_features(ds.logs[i], k).numeric().transpose();
  }
  const auto ranking = feature_importance(X, ds.labels, trees, seed);

  json entries = json::array();
  for (const auto& e : ranking) {
    entries.push_back({{"feature", WvbVector::names()[e.feature]},
                       {"importance", e.mean},
                       {"stddev", e.stddev}});
  }
  const json j{{"n_trees", trees}, {"seed", seed}, {"ranking", entries}};
  fs::create_directories(out_dir);
  write_json(fs::path(out_dir) / "importance.json", j);
  write_manifest(out_dir, "importance", argv);
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_featurize(const CommonInputs& in, const std::string& features, std::optional<int> k,
                  const std::string& ae_path, bool train_ae, const EvalFlags& flags,
                  bool edit_pairs, const std::string& out_dir, std::vector<std::string> argv) {
  const Corpus corpus = in.load();
  const Dataset ds = Dataset::from_corpus(corpus);
  fs::create_directories(out_dir);

  if (edit_pairs) {
    std::ofstream out(fs::path(out_dir) / "edit_pairs.csv");
    write_edit_pair_csv(out, ds.logs);
  }

  const auto mode = parse_feature_mode(features);
  if (!mode) throw DataError("unknown feature mode \"" + features + "\"");
  const FeatureBundle fb = build_features(ds, *mode, k);

  std::optional<Autoencoder> ae;
  if (mode_uses_wtpm(*mode)) {
    if (!ae_path.empty()) {
      ae = load_autoencoder(ae_path);
    } else if (train_ae) {
      AutoencoderConfig cfg;
      cfg.hidden = flags.hidden;
      cfg.epochs = flags.ae_epochs;
      cfg.rate = flags.ae_rate;
      cfg.momentum = flags.ae_momentum;
      cfg.batch = flags.ae_batch;
      cfg.rate_decay = flags.ae_decay;
      cfg.seed = flags.seed;
      ae = train_autoencoder(fb.tvecs, cfg);
      save_autoencoder(*ae, (fs::path(out_dir) / "autoencoder.json").string());
    } else {
      throw DataError("feature mode " + features +
                      " needs --autoencoder MODEL or --train-autoencoder");
    }
  }

  std::ofstream out(fs::path(out_dir) / (features + ".csv"));
  // Header: crafted feature names, then code columns, label last.
  std::vector<std::string> names;
  switch (*mode) {
    case FeatureMode::wvb:
    case FeatureMode::vews:
      names.assign(WvbVector::names().begin(), WvbVector::names().end());
      break;
    case FeatureMode::wvb_wr:
    case FeatureMode::vews_wr:
      names.assign(WvbVectorWR::names().begin(), WvbVectorWR::names().end());
      break;
    case FeatureMode::wtpm_wr: {
      const auto& all = WvbVectorWR::names();
      for (int i = 0; i < WvbVectorWR::kDim; ++i) {
        const std::string n = all[i];
        if (n.size() > 2 && n.substr(n.size() - 2) == "_r") names.push_back(n);
      }
      break;
    }
    case FeatureMode::wtpm:
      break;
  }
  out << "user";
  for (const auto& n : names) out << ',' << n;
  if (ae) {
    for (int c = 0; c < ae->hidden(); ++c) out << ",code_" << c;
  }
  out << ",label\n";
  for (std::size_t i = 0; i < ds.users.size(); ++i) {
    out << ds.users[i];
    for (Eigen::Index j = 0; j < fb.crafted.cols(); ++j) out << ',' << fb.crafted(i, j);
    if (ae) {
      const Eigen::VectorXd code = ae->encode(fb.tvecs[i]);
      for (Eigen::Index j = 0; j < code.size(); ++j) out << ',' << code[j];
    }
    out << ',' << (ds.labels[i] > 0 ? "benign" : "vandal") << '\n';
  }
  write_manifest(out_dir, "featurize", argv);
  std::cout << "wrote " << (fs::path(out_dir) / (features + ".csv")).string() << std::endl;
  return 0;
}

int cmd_train(const CommonInputs& in, const EvalFlags& flags, std::optional<int> k,
              const std::string& out_dir, std::vector<std::string> argv) {
  const Corpus corpus = in.load();
  const Dataset ds = Dataset::from_corpus(corpus);
  const EvalConfig cfg = flags.to_config();
  const FeatureBundle fb = build_features(ds, cfg.mode, k);
  fs::create_directories(out_dir);

  std::optional<Autoencoder> ae;
  if (mode_uses_wtpm(cfg.mode)) {
    AutoencoderConfig ae_cfg = cfg.ae;
    ae_cfg.seed = derive_seed(cfg.seed, 0xae);
    ae = train_autoencoder(fb.tvecs, ae_cfg);
    save_autoencoder(*ae, (fs::path(out_dir) / "autoencoder.json").string());
  }

  Eigen::MatrixXd X(ds.users.size(), fb.crafted.cols() + (ae ? ae->hidden() : 0));
  for (std::size_t i = 0; i < ds.users.size(); ++i) {
    if (fb.crafted.cols() > 0) X.row(i).head(fb.crafted.cols()) = fb.crafted.row(i);
    if (ae) X.row(i).tail(ae->hidden()) = ae->encode(fb.tvecs[i]).transpose();
  }

  TrainedModel model;
  switch (cfg.model) {
    case ModelKind::svm: model = train_svm(X, ds.labels, cfg.svm, cfg.seed); break;
    case ModelKind::dtree: model = train_tree(X, ds.labels, 2, cfg.seed); break;
    case ModelKind::rforest: model = train_forest(X, ds.labels, cfg.forest, cfg.seed); break;
    case ModelKind::knn: model = train_knn(X, ds.labels, cfg.knn_k); break;
  }
  save_model(model, (fs::path(out_dir) / "model.json").string());

  const auto preds = predict(model, X);
  Confusion c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (ds.labels[i] > 0) {
      (preds[i] > 0 ? c.tp : c.fn)++;
    } else {
      (preds[i] > 0 ? c.fp : c.tn)++;
    }
  }
  write_json(fs::path(out_dir) / "train.json",
             json{{"training_accuracy", c.accuracy()},
                  {"users", ds.users.size()},
                  {"feature_mode", flags.features},
                  {"model", flags.model}});
  write_manifest(out_dir, "train", argv);
  std::cout << "wrote " << (fs::path(out_dir) / "model.json").string() << std::endl;
  return 0;
}

int cmd_evaluate(const CommonInputs& in, const EvalFlags& flags, const std::string& protocol,
                 std::optional<int> k, const std::string& ks_text,
                 const std::string& test_month_text, int window, int n_lo, int n_hi,
                 const std::string& compare_features, const std::string& out_dir,
                 std::vector<std::string> argv) {
  const Corpus corpus = in.load();
  const Dataset ds = Dataset::from_corpus(corpus);
  EvalConfig cfg = flags.to_config();
  cfg.k = k;
  cfg.window_months = window;
  fs::create_directories(out_dir);

  std::vector<EvalReport> reports;
  json metrics;

  if (protocol == "cv10") {
    reports.push_back(run_cv10(ds, cfg));
    metrics = report_to_json(reports.back());
    if (!compare_features.empty()) {
      EvalConfig other = cfg;
      const auto mode = parse_feature_mode(compare_features);
      if (!mode) throw DataError("unknown feature mode \"" + compare_features + "\"");
      other.mode = *mode;
      const EvalReport rb = run_cv10(ds, other);
      const McNemarResult mc =
          mcnemar(reports.back().pooled_predictions(ds.labels.size()),
                  rb.pooled_predictions(ds.labels.size()), ds.labels);
      metrics["mcnemar_vs"] = {
          {"features", compare_features},
          {"b", mc.b},
          {"c", mc.c},
          {"statistic", mc.statistic},
          {"p_value", mc.p_value},
          {"method",
           mc.method == McNemarResult::Method::chi_square_cc ? "chi_square_cc" : "exact_binomial"},
          {"other_aggregate_accuracy", rb.aggregate.accuracy()}};
      reports.push_back(rb);
    }
  } else if (protocol == "temporal") {
    reports.push_back(run_temporal(ds, cfg));
    metrics = report_to_json(reports.back());
  } else if (protocol == "window") {
    if (test_month_text.empty()) throw DataError("--test-month is required for protocol window");
    const auto m = parse_month(test_month_text);
    if (!m) throw DataError("--test-month must be YYYY-MM");
    reports.push_back(run_window_sweep(ds, cfg, *m, n_lo, n_hi));
    metrics = report_to_json(reports.back());
  } else if (protocol == "first_k") {
    std::vector<int> ks;
    if (ks_text.empty()) {
      ks = default_first_ks();
    } else {
      std::istringstream is(ks_text);
      std::string tok;
      while (std::getline(is, tok, ',')) ks.push_back(std::stoi(tok));
    }
    reports = run_first_k(ds, cfg, ks);
    metrics = json::array();
    for (const auto& r : reports) metrics.push_back(report_to_json(r));
  } else {
    throw DataError("unknown protocol \"" + protocol + "\"");
  }

  write_json(fs::path(out_dir) / "metrics.json", metrics);
  {
    std::ofstream csv(fs::path(out_dir) / "splits.csv");
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i == 0) {
        write_split_csv(csv, reports[i]);
      } else {
        std::ostringstream tmp;
        write_split_csv(tmp, reports[i]);
        const std::string text = tmp.str();
        csv << text.substr(text.find('\n') + 1);  // skip repeated header
      }
    }
  }
  write_text(fs::path(out_dir) / "summary.txt", summary_table(reports));
  write_manifest(out_dir, "evaluate", argv);
  std::cout << summary_table(reports) << std::endl;
  return 0;
}

int cmd_rerun(const std::string& manifest_path, const std::string& out_override) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open " + manifest_path);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw DataError(manifest_path + ": invalid JSON: " + e.what());
  }
  if (manifest.value("tool", "") != "vews" || !manifest.contains("argv")) {
    throw DataError(manifest_path + ": not a vews manifest");
  }
  std::vector<std::string> argv = manifest.at("argv").get<std::vector<std::string>>();
  if (!out_override.empty()) {
    for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
      if (argv[i] == "--out") argv[i + 1] = out_override;
    }
  }
  return run_impl(argv);
}

// -----------------------------------------------------------------------

int run_impl(const std::vector<std::string>& args) {
  CLI::App app{"VEWS vandal early-warning toolkit"};
  app.require_subcommand(1);

  // validate
  auto* validate = app.add_subcommand("validate", "load a corpus and report summary counts");
  CommonInputs validate_in;
  validate_in.attach(validate);
  std::string validate_out = default_out_dir();
  validate->add_option("--out", validate_out, "output directory");

  // stats
  auto* stats = app.add_subcommand("stats", "class-conditional behavior statistics");
  CommonInputs stats_in;
  stats_in.attach(stats);
  std::string stats_out = default_out_dir();
  stats->add_option("--out", stats_out, "output directory");

  // featurize
  auto* featurize = app.add_subcommand("featurize", "export per-user feature CSVs");
  CommonInputs feat_in;
  feat_in.attach(featurize);
  std::string feat_features = "wvb";
  int feat_k = 0;
  std::string feat_ae;
  bool feat_train_ae = false;
  bool feat_edit_pairs = false;
  std::string feat_out = default_out_dir();
  EvalFlags feat_flags;
  featurize->add_option("--features", feat_features, "wvb|wtpm|vews|wvb_wr|wtpm_wr|vews_wr");
  featurize->add_option("--k", feat_k, "first-k edit truncation (0 = full logs)");
  featurize->add_option("--autoencoder", feat_ae, "trained autoencoder for wtpm-backed modes");
  featurize->add_flag("--train-autoencoder", feat_train_ae,
                      "fit the autoencoder on this corpus instead");
  featurize->add_flag("--edit-pairs", feat_edit_pairs, "also export the edit_pair dataset CSV");
  featurize->add_option("--out", feat_out, "output directory");
  featurize->add_option("--seed", feat_flags.seed)->default_val(feat_flags.seed);
  featurize->add_option("--hidden", feat_flags.hidden)->default_val(feat_flags.hidden);
  featurize->add_option("--ae-epochs", feat_flags.ae_epochs)->default_val(feat_flags.ae_epochs);
  featurize->add_option("--ae-rate", feat_flags.ae_rate)->default_val(feat_flags.ae_rate);

  // train
  auto* train = app.add_subcommand("train", "train on the full corpus and save the model");
  CommonInputs train_in;
  train_in.attach(train);
  EvalFlags train_flags;
  train_flags.attach(train);
  int train_k = 0;
  std::string train_out = default_out_dir();
  train->add_option("--k", train_k, "first-k edit truncation (0 = full logs)");
  train->add_option("--out", train_out, "output directory");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "run an evaluation protocol");
  CommonInputs eval_in;
  eval_in.attach(evaluate);
  EvalFlags eval_flags;
  eval_flags.attach(evaluate);
  std::string protocol = "cv10";
  int eval_k = 0;
  std::string ks_text, test_month_text, compare_features;
  int window = 3, n_lo = 1, n_hi = 12;
  std::string eval_out = default_out_dir();
  evaluate->add_option("--protocol", protocol, "cv10|temporal|window|first_k")
      ->default_val(protocol);
  evaluate->add_option("--k", eval_k, "first-k edit truncation (0 = full logs)");
  evaluate->add_option("--ks", ks_text, "comma list of k values for first_k");
  evaluate->add_option("--test-month", test_month_text, "YYYY-MM test month (window protocol)");
  evaluate->add_option("--window", window, "training window in months (temporal)")
      ->default_val(window);
  evaluate->add_option("--n-lo", n_lo)->default_val(n_lo);
  evaluate->add_option("--n-hi", n_hi)->default_val(n_hi);
  evaluate->add_option("--compare-features", compare_features,
                       "second feature mode; McNemar-test against it (cv10)");
  evaluate->add_option("--out", eval_out, "output directory");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate a calibrated synthetic corpus");
  int sim_users = 0;
  std::uint64_t sim_seed = 1;
  std::string sim_params;
  bool sim_no_reverts = false;
  std::string sim_out = default_out_dir();
  simulate->add_option("--users", sim_users, "users per class");
  simulate->add_option("--seed", sim_seed)->default_val(sim_seed);
  simulate->add_option("--params", sim_params, "generator params JSON (params.json layout)");
  simulate->add_flag("--no-reverts", sim_no_reverts, "drop revert flags from the output");
  simulate->add_option("--out", sim_out, "output directory");

  // importance
  auto* importance = app.add_subcommand("importance", "randomized-forest feature importance");
  CommonInputs imp_in;
  imp_in.attach(importance);
  int imp_trees = 250;
  std::uint64_t imp_seed = 1;
  int imp_k = 0;
  std::string imp_out = default_out_dir();
  importance->add_option("--trees", imp_trees)->default_val(imp_trees);
  importance->add_option("--seed", imp_seed)->default_val(imp_seed);
  importance->add_option("--k", imp_k, "first-k edit truncation (0 = full logs)");
  importance->add_option("--out", imp_out, "output directory");

  // rerun
  auto* rerun = app.add_subcommand("rerun", "replay a manifest");
  std::string rerun_manifest, rerun_out;
  rerun->add_option("manifest", rerun_manifest, "manifest.json path")->required();
  rerun->add_option("--out", rerun_out, "override the output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto opt_k = [](int k) { return k > 0 ? std::optional<int>(k) : std::nullopt; };

  if (validate->parsed()) {
    std::vector<std::string> argv{"validate"};
    validate_in.to_argv(argv);
    argv.insert(argv.end(), {"--out", validate_out});
    return cmd_validate(validate_in, validate_out, std::move(argv));
  }
  if (stats->parsed()) {
    std::vector<std::string> argv{"stats"};
    stats_in.to_argv(argv);
    argv.insert(argv.end(), {"--out", stats_out});
    return cmd_stats(stats_in, stats_out, std::move(argv));
  }
  if (featurize->parsed()) {
    std::vector<std::string> argv{"featurize"};
    feat_in.to_argv(argv);
    argv.insert(argv.end(), {"--features", feat_features});
    if (feat_k > 0) argv.insert(argv.end(), {"--k", std::to_string(feat_k)});
    if (!feat_ae.empty()) argv.insert(argv.end(), {"--autoencoder", feat_ae});
    if (feat_train_ae) argv.push_back("--train-autoencoder");
    if (feat_edit_pairs) argv.push_back("--edit-pairs");
    argv.insert(argv.end(), {"--seed", std::to_string(feat_flags.seed)});
    argv.insert(argv.end(), {"--hidden", std::to_string(feat_flags.hidden)});
    argv.insert(argv.end(), {"--ae-epochs", std::to_string(feat_flags.ae_epochs)});
    argv.insert(argv.end(), {"--out", feat_out});
    return cmd_featurize(feat_in, feat_features, opt_k(feat_k), feat_ae, feat_train_ae,
                         feat_flags, feat_edit_pairs, feat_out, std::move(argv));
  }
  if (train->parsed()) {
    std::vector<std::string> argv{"train"};
    train_in.to_argv(argv);
    train_flags.to_argv(argv);
    if (train_k > 0) argv.insert(argv.end(), {"--k", std::to_string(train_k)});
    argv.insert(argv.end(), {"--out", train_out});
    return cmd_train(train_in, train_flags, opt_k(train_k), train_out, std::move(argv));
  }
  if (evaluate->parsed()) {
    std::vector<std::string> argv{"evaluate"};
    eval_in.to_argv(argv);
    eval_flags.to_argv(argv);
    argv.insert(argv.end(), {"--protocol", protocol});
    if (eval_k > 0) argv.insert(argv.end(), {"--k", std::to_string(eval_k)});
    if (!ks_text.empty()) argv.insert(argv.end(), {"--ks", ks_text});
    if (!test_month_text.empty()) argv.insert(argv.end(), {"--test-month", test_month_text});
    argv.insert(argv.end(), {"--window", std::to_string(window)});
    argv.insert(argv.end(), {"--n-lo", std::to_string(n_lo)});
    argv.insert(argv.end(), {"--n-hi", std::to_string(n_hi)});
    if (!compare_features.empty()) {
      argv.insert(argv.end(), {"--compare-features", compare_features});
    }
    argv.insert(argv.end(), {"--out", eval_out});
    return cmd_evaluate(eval_in, eval_flags, protocol, opt_k(eval_k), ks_text, test_month_text,
                        window, n_lo, n_hi, compare_features, eval_out, std::move(argv));
  }
  if (simulate->parsed()) {
    std::vector<std::string> argv{"simulate"};
    if (sim_users > 0) argv.insert(argv.end(), {"--users", std::to_string(sim_users)});
    argv.insert(argv.end(), {"--seed", std::to_string(sim_seed)});
    if (!sim_params.empty()) argv.insert(argv.end(), {"--params", sim_params});
    if (sim_no_reverts) argv.push_back("--no-reverts");
    argv.insert(argv.end(), {"--out", sim_out});
    return cmd_simulate(sim_users, sim_seed, sim_params, sim_no_reverts, sim_out,
                        std::move(argv));
  }
  if (importance->parsed()) {
    std::vector<std::string> argv{"importance"};
    imp_in.to_argv(argv);
    argv.insert(argv.end(), {"--trees", std::to_string(imp_trees)});
    argv.insert(argv.end(), {"--seed", std::to_string(imp_seed)});
    if (imp_k > 0) argv.insert(argv.end(), {"--k", std::to_string(imp_k)});
    argv.insert(argv.end(), {"--out", imp_out});
    return cmd_importance(imp_in, imp_trees, imp_seed, opt_k(imp_k), imp_out, std::move(argv));
  }
  if (rerun->parsed()) {
    return cmd_rerun(rerun_manifest, rerun_out);
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    return run_impl(args);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}

}  // namespace vews::cli
