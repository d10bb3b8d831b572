#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vews/models.hpp"
#include "vews/wtpm.hpp"
#include "vews/wvb.hpp"

namespace vews {

enum class FeatureMode { wvb, wtpm, vews, wvb_wr, wtpm_wr, vews_wr };

const char* feature_mode_name(FeatureMode m);
std::optional<FeatureMode> parse_feature_mode(const std::string& name);
bool mode_uses_wtpm(FeatureMode m);
bool mode_uses_reverts(FeatureMode m);

struct Confusion {
  long tp = 0, tn = 0, fp = 0, fn = 0;

  long total() const { return tp + tn + fp + fn; }
  double accuracy() const;
  double tpr() const;  // TP / (TP + FN)
  double tnr() const;  // TN / (TN + FP)
  double fpr() const;
  double fnr() const;
  Confusion& operator+=(const Confusion& o);
};

/// Evaluation rows: labeled users with at least one edit, in corpus order.
struct Dataset {
  std::vector<std::string> users;
  std::vector<int> labels;          // +1 benign, -1 vandal
  std::vector<UserLog> logs;        // aligned with users
  std::vector<int> first_month;     // calendar month of the user's first edit
  bool has_reverts = false;
  std::vector<std::string> notices; // rows dropped at construction

  static Dataset from_corpus(const Corpus& corpus);
};

struct EvalConfig {
  FeatureMode mode = FeatureMode::vews;
  ModelKind model = ModelKind::svm;
  std::uint64_t seed = 1;
  std::optional<int> k;  // first-k truncation of every user log
  AutoencoderConfig ae;  // used by wtpm-backed modes; seed is derived per split
  SvmOptions svm;
  ForestOptions forest;
  int knn_k = 3;
  int folds = 10;
  int window_months = 3;
  int jobs = 0;  // worker threads; 0 = hardware concurrency
};

/// Label-independent per-user features for one (dataset, mode, k): the
/// hand-crafted block and, for wtpm-backed modes, the flattened transition
/// matrices awaiting a per-split autoencoder.
struct FeatureBundle {
  Eigen::MatrixXd crafted;       // n x {11, 19, 8, 0} depending on mode
  std::vector<SparseVec> tvecs;  // empty unless the mode uses wtpm
};

FeatureBundle build_features(const Dataset& ds, FeatureMode mode,
                             std::optional<int> k = std::nullopt);

/// WVB ++ autoencoder code of the user's transition matrix (the merged
/// feature vector; 11 + hidden dims, or 19 + hidden in WR mode).
Eigen::VectorXd vews_features(const UserLog& log, const Autoencoder& model,
                              std::optional<int> k = std::nullopt, bool wr = false);

struct SplitOutcome {
  nlohmann::json key;  // {"fold": i} | {"test_month": "YYYY-MM"} | {"n": n} | {"k": k}
  Confusion confusion;
  std::uint64_t artifact_digest = 0;  // trained AE + model + standardizer bytes
  std::vector<int> test_index;        // dataset row indices
  std::vector<int> predictions;       // aligned with test_index
};

struct EvalReport {
  std::string protocol;  // cv10 | temporal | window | first_k
  FeatureMode mode = FeatureMode::vews;
  ModelKind model = ModelKind::svm;
  std::uint64_t seed = 0;
  nlohmann::json params;  // resolved protocol parameters
  std::vector<SplitOutcome> splits;
  Confusion aggregate;  // pooled over splits (micro-average)
  std::vector<std::string> notices;

  /// Test predictions folded back to dataset rows (or 0 where never tested).
  std::vector<int> pooled_predictions(std::size_t n) const;
};

/// Trains every per-split artifact on the train rows only (autoencoder for
/// wtpm-backed modes, standardizer, classifier) and evaluates the test rows.
/// `labels` usually aliases ds.labels; the no-leakage audit passes a copy
/// with test labels permuted and expects an identical digest.
SplitOutcome run_single_split(const Dataset& ds, const FeatureBundle& features,
                              const EvalConfig& cfg, const std::vector<int>& train_idx,
                              const std::vector<int>& test_idx, const std::vector<int>& labels,
                              nlohmann::json key, std::uint64_t split_seed);

/// Stratified fold assignment: per-class seeded shuffle, round-robin folds
/// (sizes differ by at most one per class). Throws when a class has fewer
/// members than folds.
std::vector<std::vector<int>> stratified_folds(const std::vector<int>& labels, int n_folds,
                                               std::uint64_t seed);

/// Experiment 1: stratified 10-fold cross-validation.
EvalReport run_cv10(const Dataset& ds, const EvalConfig& cfg);

/// Experiment 2: for each month m in the corpus span, train on users whose
/// first edit falls in the previous `window_months` months, test on month m.
EvalReport run_temporal(const Dataset& ds, const EvalConfig& cfg);

/// Experiment 3: train on users starting in the n months before test_month,
/// n over [n_lo, n_hi].
EvalReport run_window_sweep(const Dataset& ds, const EvalConfig& cfg, int test_month,
                            int n_lo = 1, int n_hi = 12);

const std::vector<int>& default_first_ks();  // {1..20, 50, 100, 200, 500}

/// Experiment 4: the 10-fold protocol on k-truncated logs, one report per k.
std::vector<EvalReport> run_first_k(const Dataset& ds, const EvalConfig& cfg,
                                    const std::vector<int>& ks = default_first_ks());

// ---------------------------------------------------------------------------
// McNemar's paired test

struct McNemarResult {
  long b = 0;  // A correct, B wrong
  long c = 0;  // B correct, A wrong
  double statistic = 0;  // continuity-corrected chi-square value
  double p_value = 1.0;
  enum class Method { chi_square_cc, exact_binomial } method = Method::exact_binomial;
};

/// b, c as above; chi-square with continuity correction when b + c >= 25,
/// exact two-sided binomial otherwise. b + c = 0 gives p = 1, statistic 0.
McNemarResult mcnemar(const std::vector<int>& preds_a, const std::vector<int>& preds_b,
                      const std::vector<int>& truth);

double chi_square1_sf(double x);            // upper tail of chi-square(1)
double mcnemar_chi_square_p(long b, long c);  // correction clamped at zero
double mcnemar_exact_p(long b, long c);

/// Runs cv10 for two feature modes over identical folds and McNemar-tests
/// the pooled predictions.
struct ComparisonReport {
  EvalReport a, b;
  McNemarResult test;
};
ComparisonReport compare_cv10(const Dataset& ds, const EvalConfig& cfg_a, const EvalConfig& cfg_b);

// ---------------------------------------------------------------------------
// Reporting

nlohmann::json report_to_json(const EvalReport& report);
void write_split_csv(std::ostream& out, const EvalReport& report);
/// Plain-text accuracy/TPR/TNR/FPR/FNR table, one row per report.
std::string summary_table(const std::vector<EvalReport>& reports);

std::uint64_t fnv1a64(const std::string& bytes);
std::string serialize_autoencoder_bytes(const Autoencoder& model);

}  // namespace vews
