#include "vews/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>
#include <thread>

#include "vews/rng.hpp"
#include "vews/timeutil.hpp"

namespace vews {

using nlohmann::json;

const char* feature_mode_name(FeatureMode m) {
  switch (m) {
    case FeatureMode::wvb: return "wvb";
    case FeatureMode::wtpm: return "wtpm";
    case FeatureMode::vews: return "vews";
    case FeatureMode::wvb_wr: return "wvb_wr";
    case FeatureMode::wtpm_wr: return "wtpm_wr";
    case FeatureMode::vews_wr: return "vews_wr";
  }
  return "?";
}

std::optional<FeatureMode> parse_feature_mode(const std::string& name) {
  for (FeatureMode m : {FeatureMode::wvb, FeatureMode::wtpm, FeatureMode::vews,
                        FeatureMode::wvb_wr, FeatureMode::wtpm_wr, FeatureMode::vews_wr}) {
    if (name == feature_mode_name(m)) return m;
  }
  return std::nullopt;
}

bool mode_uses_wtpm(FeatureMode m) {
  return m == FeatureMode::wtpm || m == FeatureMode::vews || m == FeatureMode::wtpm_wr ||
         m == FeatureMode::vews_wr;
}

bool mode_uses_reverts(FeatureMode m) {
  return m == FeatureMode::wvb_wr || m == FeatureMode::wtpm_wr || m == FeatureMode::vews_wr;
}

double Confusion::accuracy() const {
  return total() ? static_cast<double>(tp + tn) / static_cast<double>(total()) : 0.0;
}
double Confusion::tpr() const {
  return tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
}
double Confusion::tnr() const {
  return tn + fp ? static_cast<double>(tn) / static_cast<double>(tn + fp) : 0.0;
}
double Confusion::fpr() const { return tn + fp ? 1.0 - tnr() : 0.0; }
double Confusion::fnr() const { return tp + fn ? 1.0 - tpr() : 0.0; }

Confusion& Confusion::operator+=(const Confusion& o) {
  tp += o.tp;
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

Dataset Dataset::from_corpus(const Corpus& corpus) {
  Dataset ds;
  ds.has_reverts = corpus.has_revert_data;
  const HopGraph* graph = corpus.has_links ? &corpus.graph : nullptr;
  for (const auto& tl : corpus.timelines) {
    const UserLabel* label = corpus.label_of(tl.user);
    if (!label) {
      ds.notices.push_back("user \"" + tl.user + "\" has no label; excluded from evaluation");
      continue;
    }
    if (tl.edits.empty()) {
      ds.notices.push_back("user \"" + tl.user + "\" has no edits; excluded from evaluation");
      continue;
    }
    ds.users.push_back(tl.user);
    ds.labels.push_back(label_sign(label->label));
    ds.logs.push_back(
        build_user_log(tl, graph, corpus.has_revert_data, label->registration_ts));
    ds.first_month.push_back(month_index(tl.edits.front().ts));
  }
  return ds;
}

FeatureBundle build_features(const Dataset& ds, FeatureMode mode, std::optional<int> k) {
  if (mode_uses_reverts(mode) && !ds.has_reverts) {
    throw DataError("feature mode " + std::string(feature_mode_name(mode)) +
                    " needs revert data; load a reverts file or drop the _wr suffix");
  }
  const std::size_t n = ds.logs.size();
  FeatureBundle fb;
  switch (mode) {
    case FeatureMode::wvb:
    case FeatureMode::vews:
      fb.crafted.resize(n, WvbVector::kDim);
      for (std::size_t i = 0; i < n; ++i) {
        fb.crafted.row(i) = wvb_features(ds.logs[i], k).numeric().transpose();
      }
      break;
    case FeatureMode::wvb_wr:
    case FeatureMode::vews_wr:
      fb.crafted.resize(n, WvbVectorWR::kDim);
      for (std::size_t i = 0; i < n; ++i) {
        fb.crafted.row(i) = wvb_features_wr(ds.logs[i], k).numeric().transpose();
      }
      break;
    case FeatureMode::wtpm_wr:
      // WTPM keeps reversion out of its state space; the WR variant appends
      // the eight revert-driven re-edit flags to the code.
      fb.crafted.resize(n, WvbVectorWR::kRevertDim);
      for (std::size_t i = 0; i < n; ++i) {
        fb.crafted.row(i) = wvb_features_wr(ds.logs[i], k).revert_driven_numeric().transpose();
      }
      break;
    case FeatureMode::wtpm:
      fb.crafted.resize(n, 0);
      break;
  }
  if (mode_uses_wtpm(mode)) {
    fb.tvecs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      fb.tvecs[i] = TransitionMatrix::from_log(ds.logs[i], k).flat_probs();
    }
  }
  return fb;
}

Eigen::VectorXd vews_features(const UserLog& log, const Autoencoder& model, std::optional<int> k,
                              bool wr) {
  const Eigen::VectorXd crafted =
      wr ? wvb_features_wr(log, k).numeric() : wvb_features(log, k).numeric();
  const Eigen::VectorXd code = model.encode(TransitionMatrix::from_log(log, k).flat_probs());
  Eigen::VectorXd out(crafted.size() + code.size());
  out << crafted, code;
  return out;
}

// ---------------------------------------------------------------------------
// Split machinery

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string serialize_autoencoder_bytes(const Autoencoder& model) {
  std::string out;
  auto append = [&out](const double* data, std::size_t count) {
    out.append(reinterpret_cast<const char*>(data), count * sizeof(double));
  };
  append(model.W1.data(), model.W1.size());
  append(model.b1.data(), model.b1.size());
  append(model.W2.data(), model.W2.size());
  append(model.b2.data(), model.b2.size());
  return out;
}

namespace {

Eigen::MatrixXd assemble_rows(const FeatureBundle& fb, const std::optional<Autoencoder>& ae,
                              const std::vector<int>& rows) {
  const Eigen::Index crafted_dim = fb.crafted.cols();
  const Eigen::Index code_dim = ae ? ae->hidden() : 0;
  Eigen::MatrixXd X(rows.size(), crafted_dim + code_dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (crafted_dim > 0) X.row(r).head(crafted_dim) = fb.crafted.row(rows[r]);
    if (code_dim > 0) X.row(r).tail(code_dim) = ae->encode(fb.tvecs[rows[r]]).transpose();
  }
  return X;
}

TrainedModel train_classifier(const EvalConfig& cfg, const Eigen::MatrixXd& X,
                              const std::vector<int>& y, std::uint64_t seed) {
  switch (cfg.model) {
    case ModelKind::svm: return train_svm(X, y, cfg.svm, seed);
    case ModelKind::dtree: return train_tree(X, y, 2, seed);
    case ModelKind::rforest: return train_forest(X, y, cfg.forest, seed);
    case ModelKind::knn: return train_knn(X, y, cfg.knn_k);
  }
  throw DataError("unknown model kind");
}

}  // namespace

SplitOutcome run_single_split(const Dataset& ds, const FeatureBundle& features,
                              const EvalConfig& cfg, const std::vector<int>& train_idx,
                              const std::vector<int>& test_idx, const std::vector<int>& labels,
                              json key, std::uint64_t split_seed) {
  SplitOutcome out;
  out.key = std::move(key);

  std::optional<Autoencoder> ae;
  if (mode_uses_wtpm(cfg.mode)) {
    std::vector<SparseVec> train_vecs;
    train_vecs.reserve(train_idx.size());
    for (int i : train_idx) train_vecs.push_back(features.tvecs[i]);
    AutoencoderConfig ae_cfg = cfg.ae;
    ae_cfg.seed = derive_seed(split_seed, 0xae);
    ae = train_autoencoder(train_vecs, ae_cfg);
  }

  const Eigen::MatrixXd X_train = assemble_rows(features, ae, train_idx);
  std::vector<int> y_train(train_idx.size());
  for (std::size_t i = 0; i < train_idx.size(); ++i) y_train[i] = labels[train_idx[i]];

  const TrainedModel model = train_classifier(cfg, X_train, y_train, derive_seed(split_seed, 0x1));

  std::string artifact_bytes = serialize_model_bytes(model);
  if (ae) artifact_bytes += serialize_autoencoder_bytes(*ae);
  out.artifact_digest = fnv1a64(artifact_bytes);

  const Eigen::MatrixXd X_test = assemble_rows(features, ae, test_idx);
  out.predictions = predict(model, X_test);
  out.test_index = test_idx;
  for (std::size_t i = 0; i < test_idx.size(); ++i) {
    const int truth = labels[test_idx[i]];
    const int pred = out.predictions[i];
    if (truth > 0) {
      (pred > 0 ? out.confusion.tp : out.confusion.fn)++;
    } else {
      (pred > 0 ? out.confusion.fp : out.confusion.tn)++;
    }
  }
  return out;
}

std::vector<std::vector<int>> stratified_folds(const std::vector<int>& labels, int n_folds,
                                               std::uint64_t seed) {
  std::vector<int> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] > 0 ? pos : neg).push_back(static_cast<int>(i));
  }
  if (pos.size() < static_cast<std::size_t>(n_folds) ||
      neg.size() < static_cast<std::size_t>(n_folds)) {
    throw DataError("cannot stratify: a class has fewer than " + std::to_string(n_folds) +
                    " members");
  }
  Rng rng_pos(derive_seed(seed, 0xbe9));
  Rng rng_neg(derive_seed(seed, 0x7a9));
  rng_pos.shuffle(pos);
  rng_neg.shuffle(neg);
  std::vector<std::vector<int>> folds(n_folds);
  for (std::size_t i = 0; i < pos.size(); ++i) folds[i % n_folds].push_back(pos[i]);
  for (std::size_t i = 0; i < neg.size(); ++i) folds[i % n_folds].push_back(neg[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

namespace {

struct SplitJob {
  std::vector<int> train_idx, test_idx;
  json key;
  std::uint64_t seed = 0;
};

/// Runs jobs on a bounded pool; results land in job order, so parallel and
/// serial runs produce identical reports.
std::vector<SplitOutcome> run_jobs(const Dataset& ds, const FeatureBundle& fb,
                                   const EvalConfig& cfg, std::vector<SplitJob> jobs) {
  std::vector<SplitOutcome> results(jobs.size());
  unsigned workers = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, jobs.size() ? jobs.size() : 1);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
          results[j] = run_single_split(ds, fb, cfg, jobs[j].train_idx, jobs[j].test_idx,
                                        ds.labels, jobs[j].key, jobs[j].seed);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

EvalReport make_report(std::string protocol, const EvalConfig& cfg, json params,
                       std::vector<SplitOutcome> splits, std::vector<std::string> notices) {
  EvalReport report;
  report.protocol = std::move(protocol);
  report.mode = cfg.mode;
  report.model = cfg.model;
  report.seed = cfg.seed;
  report.params = std::move(params);
  report.splits = std::move(splits);
  report.notices = std::move(notices);
  for (const auto& s : report.splits) report.aggregate += s.confusion;
  return report;
}

json protocol_params(const EvalConfig& cfg) {
  json p{{"folds", cfg.folds}, {"window_months", cfg.window_months}};
  if (cfg.k) p["k"] = *cfg.k;
  if (mode_uses_wtpm(cfg.mode)) {
    p["autoencoder"] = {{"hidden", cfg.ae.hidden}, {"epochs", cfg.ae.epochs},
                        {"rate", cfg.ae.rate},     {"momentum", cfg.ae.momentum},
                        {"batch", cfg.ae.batch},   {"rate_decay", cfg.ae.rate_decay}};
  }
  if (cfg.model == ModelKind::svm) {
    p["svm"] = {{"lambda", cfg.svm.lambda}, {"epochs", cfg.svm.epochs}};
  }
  if (cfg.model == ModelKind::rforest) {
    p["forest"] = {{"n_trees", cfg.forest.n_trees}, {"bootstrap", cfg.forest.bootstrap}};
  }
  if (cfg.model == ModelKind::knn) p["knn_k"] = cfg.knn_k;
  return p;
}

}  // namespace

std::vector<int> EvalReport::pooled_predictions(std::size_t n) const {
  std::vector<int> preds(n, 0);
  for (const auto& s : splits) {
    for (std::size_t i = 0; i < s.test_index.size(); ++i) {
      preds[s.test_index[i]] = s.predictions[i];
    }
  }
  return preds;
}

EvalReport run_cv10(const Dataset& ds, const EvalConfig& cfg) {
  const FeatureBundle fb = build_features(ds, cfg.mode, cfg.k);
  const auto folds = stratified_folds(ds.labels, cfg.folds, cfg.seed);

  std::vector<SplitJob> jobs;
  for (int f = 0; f < cfg.folds; ++f) {
    SplitJob job;
    job.test_idx = folds[f];
    for (int g = 0; g < cfg.folds; ++g) {
      if (g == f) continue;
      job.train_idx.insert(job.train_idx.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(job.train_idx.begin(), job.train_idx.end());
    job.key = json{{"fold", f}};
    if (cfg.k) job.key["k"] = *cfg.k;
    job.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(f));
    jobs.push_back(std::move(job));
  }
  auto splits = run_jobs(ds, fb, cfg, std::move(jobs));
  return make_report("cv10", cfg, protocol_params(cfg), std::move(splits), {});
}

namespace {

std::vector<int> month_members(const Dataset& ds, int lo, int hi) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < ds.first_month.size(); ++i) {
    if (ds.first_month[i] >= lo && ds.first_month[i] <= hi) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

bool both_classes(const Dataset& ds, const std::vector<int>& idx) {
  bool pos = false, neg = false;
  for (int i : idx) (ds.labels[i] > 0 ? pos : neg) = true;
  return pos && neg;
}

}  // namespace

EvalReport run_temporal(const Dataset& ds, const EvalConfig& cfg) {
  if (ds.first_month.empty()) throw DataError("run_temporal: empty dataset");
  const FeatureBundle fb = build_features(ds, cfg.mode, cfg.k);
  const int lo = *std::min_element(ds.first_month.begin(), ds.first_month.end());
  const int hi = *std::max_element(ds.first_month.begin(), ds.first_month.end());

  std::vector<SplitJob> jobs;
  std::vector<std::string> notices;
  int job_no = 0;
  for (int m = lo + cfg.window_months; m <= hi; ++m) {
    SplitJob job;
    job.train_idx = month_members(ds, m - cfg.window_months, m - 1);
    job.test_idx = month_members(ds, m, m);
    const std::string month = format_month(m);
    if (job.train_idx.empty() || job.test_idx.empty()) {
      notices.push_back("month " + month + ": empty train or test side; skipped");
      continue;
    }
    if (!both_classes(ds, job.train_idx)) {
      notices.push_back("month " + month + ": training window has a single class; skipped");
      continue;
    }
    job.key = json{{"test_month", month}};
    job.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(job_no++));
    jobs.push_back(std::move(job));
  }
  auto splits = run_jobs(ds, fb, cfg, std::move(jobs));
  return make_report("temporal", cfg, protocol_params(cfg), std::move(splits), std::move(notices));
}

EvalReport run_window_sweep(const Dataset& ds, const EvalConfig& cfg, int test_month, int n_lo,
                            int n_hi) {
  const FeatureBundle fb = build_features(ds, cfg.mode, cfg.k);
  const std::vector<int> test_idx = month_members(ds, test_month, test_month);
  if (test_idx.empty()) {
    throw DataError("run_window_sweep: no users start in " + format_month(test_month));
  }

  std::vector<SplitJob> jobs;
  std::vector<std::string> notices;
  int job_no = 0;
  for (int n = n_lo; n <= n_hi; ++n) {
    SplitJob job;
    job.train_idx = month_members(ds, test_month - n, test_month - 1);
    job.test_idx = test_idx;
    if (job.train_idx.empty()) {
      notices.push_back("n=" + std::to_string(n) + ": no training users; skipped");
      continue;
    }
    if (!both_classes(ds, job.train_idx)) {
      notices.push_back("n=" + std::to_string(n) + ": single-class training window; skipped");
      continue;
    }
    job.key = json{{"n", n}, {"test_month", format_month(test_month)}};
    job.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(job_no++));
    jobs.push_back(std::move(job));
  }
  auto splits = run_jobs(ds, fb, cfg, std::move(jobs));
  json params = protocol_params(cfg);
  params["test_month"] = format_month(test_month);
  return make_report("window", cfg, std::move(params), std::move(splits), std::move(notices));
}

const std::vector<int>& default_first_ks() {
  static const std::vector<int> ks = [] {
    std::vector<int> v;
    for (int k = 1; k <= 20; ++k) v.push_back(k);
    for (int k : {50, 100, 200, 500}) v.push_back(k);
    return v;
  }();
  return ks;
}

std::vector<EvalReport> run_first_k(const Dataset& ds, const EvalConfig& cfg,
                                    const std::vector<int>& ks) {
  std::vector<EvalReport> reports;
  reports.reserve(ks.size());
  for (int k : ks) {
    EvalConfig kcfg = cfg;
    kcfg.k = k;
    EvalReport r = run_cv10(ds, kcfg);
    r.protocol = "first_k";
    reports.push_back(std::move(r));
  }
  return reports;
}

// ---------------------------------------------------------------------------
// McNemar

double chi_square1_sf(double x) { return std::erfc(std::sqrt(x / 2.0)); }

double mcnemar_chi_square_p(long b, long c) {
  const long n = b + c;
  if (n == 0) return 1.0;
  // Continuity correction clamped at zero so |b-c| <= 1 cannot over-correct.
  const double diff = std::max(std::abs(static_cast<double>(b - c)) - 1.0, 0.0);
  return chi_square1_sf(diff * diff / static_cast<double>(n));
}

double mcnemar_exact_p(long b, long c) {
  const long n = b + c;
  if (n == 0) return 1.0;
  const long m = std::min(b, c);
  // Two-sided exact binomial(n, 1/2): 2 * P(X <= min(b, c)), capped at 1.
  double term = std::pow(0.5, static_cast<double>(n));  // P(X = 0), n <= ~60 in practice
  if (term == 0.0) {
    // Very large n: accumulate in log space.
    double logterm = -static_cast<double>(n) * std::log(2.0);
    double cdf = 0.0;
    for (long i = 0; i <= m; ++i) {
      cdf += std::exp(logterm);
      logterm += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1));
    }
    return std::min(1.0, 2.0 * cdf);
  }
  double cdf = 0.0;
  for (long i = 0; i <= m; ++i) {
    cdf += term;
    term *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  return std::min(1.0, 2.0 * cdf);
}

McNemarResult mcnemar(const std::vector<int>& preds_a, const std::vector<int>& preds_b,
                      const std::vector<int>& truth) {
  if (preds_a.size() != truth.size() || preds_b.size() != truth.size()) {
    throw DataError("mcnemar: prediction and truth vectors must have equal length");
  }
  McNemarResult r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool a_ok = preds_a[i] == truth[i];
    const bool b_ok = preds_b[i] == truth[i];
    if (a_ok && !b_ok) ++r.b;
    if (!a_ok && b_ok) ++r.c;
  }
  const long n = r.b + r.c;
  if (n == 0) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.method = McNemarResult::Method::exact_binomial;
    return r;
  }
  const double diff = std::abs(static_cast<double>(r.b - r.c)) - 1.0;
  r.statistic = diff * diff / static_cast<double>(n);
  if (n >= 25) {
    r.method = McNemarResult::Method::chi_square_cc;
    r.p_value = mcnemar_chi_square_p(r.b, r.c);
  } else {
    r.method = McNemarResult::Method::exact_binomial;
    r.p_value = mcnemar_exact_p(r.b, r.c);
  }
  return r;
}

ComparisonReport compare_cv10(const Dataset& ds, const EvalConfig& cfg_a,
                              const EvalConfig& cfg_b) {
  if (cfg_a.seed != cfg_b.seed || cfg_a.folds != cfg_b.folds) {
    throw DataError("compare_cv10: both runs must share seed and fold count");
  }
  ComparisonReport cmp;
  cmp.a = run_cv10(ds, cfg_a);
  cmp.b = run_cv10(ds, cfg_b);
  cmp.test = mcnemar(cmp.a.pooled_predictions(ds.labels.size()),
                     cmp.b.pooled_predictions(ds.labels.size()), ds.labels);
  return cmp;
}

// ---------------------------------------------------------------------------
// Reporting

namespace {

json confusion_json(const Confusion& c) {
  return {{"tp", c.tp},     {"tn", c.tn},     {"fp", c.fp},     {"fn", c.fn},
          {"accuracy", c.accuracy()},        {"tpr", c.tpr()}, {"tnr", c.tnr()},
          {"fpr", c.fpr()}, {"fnr", c.fnr()}};
}

}  // namespace

json report_to_json(const EvalReport& report) {
  json splits = json::array();
  double acc_sum = 0;
  for (const auto& s : report.splits) {
    splits.push_back({{"key", s.key},
                      {"confusion", confusion_json(s.confusion)},
                      {"artifact_digest", s.artifact_digest}});
    acc_sum += s.confusion.accuracy();
  }
  return {
      {"protocol", report.protocol},
      {"feature_mode", feature_mode_name(report.mode)},
      {"model", model_kind_name(report.model)},
      {"seed", report.seed},
      {"params", report.params},
      {"splits", splits},
      {"aggregate", confusion_json(report.aggregate)},
      {"mean_split_accuracy",
       report.splits.empty() ? 0.0 : acc_sum / static_cast<double>(report.splits.size())},
      {"notices", report.notices},
  };
}

void write_split_csv(std::ostream& out, const EvalReport& report) {
  out << "protocol,feature_mode,model,seed,split_key,tp,tn,fp,fn,accuracy,tpr,tnr,fpr,fnr\n";
  for (const auto& s : report.splits) {
    out << report.protocol << ',' << feature_mode_name(report.mode) << ','
        << model_kind_name(report.model) << ',' << report.seed << ','
        << '"' << s.key.dump() << '"' << ',' << s.confusion.tp << ',' << s.confusion.tn << ','
        << s.confusion.fp << ',' << s.confusion.fn << ',' << s.confusion.accuracy() << ','
        << s.confusion.tpr() << ',' << s.confusion.tnr() << ',' << s.confusion.fpr() << ','
        << s.confusion.fnr() << '\n';
  }
}

std::string summary_table(const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  out << "approach        model     accuracy   TPR     TNR     FPR     FNR\n";
  char line[160];
  for (const auto& r : reports) {
    const Confusion& c = r.aggregate;
    std::snprintf(line, sizeof(line), "%-15s %-9s %7.2f%%  %6.3f  %6.3f  %6.3f  %6.3f\n",
                  feature_mode_name(r.mode), model_kind_name(r.model), 100.0 * c.accuracy(),
                  c.tpr(), c.tnr(), c.fpr(), c.fnr());
    out << line;
  }
  return out.str();
}

}  // namespace vews
