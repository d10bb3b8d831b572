#include "vews/wvb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vews/error.hpp"
#include "vews/rng.hpp"

namespace vews {

const std::array<const char*, WvbVector::kDim>& WvbVector::names() {
  static const std::array<const char*, kDim> n = {"crs",  "crv",  "crm",     "crn",
                                                  "crmv", "crmf", "crms",    "crf_crv",
                                                  "fm",   "ntus", "nts_nts"};
  return n;
}

Eigen::VectorXd WvbVector::numeric() const {
  Eigen::VectorXd v(kDim);
  v << crs, crv, static_cast<double>(crm), crn, crmv, crmf, crms, crf_crv, fm, ntus, nts_nts;
  return v;
}

const std::array<const char*, WvbVectorWR::kDim>& WvbVectorWR::names() {
  static const std::array<const char*, kDim> n = {
      "crs_r",  "crs_nr",  "crv_r",  "crv_nr",  "crm_r",      "crm_nr",     "crn_r",
      "crn_nr", "crmv_r",  "crmv_nr", "crmf_r", "crmf_nr",    "crms_r",     "crms_nr",
      "crf_crv_r", "crf_crv_nr", "fm", "ntus",  "nts_nts"};
  return n;
}

Eigen::VectorXd WvbVectorWR::numeric() const {
  Eigen::VectorXd v(kDim);
  v << crs_r, crs_nr, crv_r, crv_nr, static_cast<double>(crm_r), static_cast<double>(crm_nr),
      crn_r, crn_nr, crmv_r, crmv_nr, crmf_r, crmf_nr, crms_r, crms_nr, crf_crv_r, crf_crv_nr,
      fm, ntus, nts_nts;
  return v;
}

Eigen::VectorXd WvbVectorWR::revert_driven_numeric() const {
  Eigen::VectorXd v(kRevertDim);
  v << crs_r, crv_r, static_cast<double>(crm_r), crn_r, crmv_r, crmf_r, crms_r, crf_crv_r;
  return v;
}

namespace {

std::size_t effective_rows(const UserLog& log, std::optional<int> k) {
  if (!k) return log.rows.size();
  return std::min<std::size_t>(log.rows.size(), *k < 0 ? 0 : static_cast<std::size_t>(*k));
}

bool is_nts(const PairFeatures& r) {
  return r.is_new_page() && r.hop == HopBucket::within_3 && r.time == TimeBucket::slow;
}

bool is_ntus(const PairFeatures& r) {
  return is_nts(r) && r.common_cats == CommonCats::null_info;
}

}  // namespace

WvbVector wvb_features(const UserLog& log, std::optional<int> k) {
  WvbVector f;
  const std::size_t n = effective_rows(log, k);
  int nts_count = 0;
  bool seen_fast_spc = false;  // earlier same-page-consecutive row within 15 min
  for (std::size_t i = 0; i < n; ++i) {
    const PairFeatures& r = log.rows[i];
    if (r.is_first) {
      f.fm = r.is_meta2;
      continue;
    }
    if (r.same_page_consecutive) {
      if (r.time == TimeBucket::slow) f.crs = true;
      if (r.time == TimeBucket::very_fast) f.crv = true;
      if (r.is_meta2) {
        ++f.crm;
        if (r.time == TimeBucket::very_fast) f.crmv = true;
        if (r.time == TimeBucket::fast) f.crmf = true;
        if (r.time == TimeBucket::slow) f.crms = true;
      } else {
        f.crn = true;
      }
      if (r.time == TimeBucket::very_fast && seen_fast_spc) f.crf_crv = true;
      if (r.time != TimeBucket::slow) seen_fast_spc = true;
    }
    if (is_ntus(r)) f.ntus = true;
    if (is_nts(r)) ++nts_count;
  }
  f.nts_nts = nts_count >= 2;
  return f;
}

WvbVectorWR wvb_features_wr(const UserLog& log, std::optional<int> k) {
  const std::size_t n = effective_rows(log, k);
  for (std::size_t i = 0; i < n; ++i) {
    if (!log.rows[i].prev_reverted.has_value()) {
      throw DataError("revert data not loaded; use the plain WVB features");
    }
  }

  WvbVectorWR f;
  int nts_count = 0;
  bool seen_fast_spc = false;
  for (std::size_t i = 0; i < n; ++i) {
    const PairFeatures& r = log.rows[i];
    if (r.is_first) {
      f.fm = r.is_meta2;
      continue;
    }
    if (r.same_page_consecutive) {
      // Each qualifying row routes to the revert-driven variant iff the
      // user's earlier edit of this page was reverted.
      const bool rd = r.prev_reverted.value_or(false);
      auto route = [rd](bool& revert_driven, bool& not_revert_driven) {
        (rd ? revert_driven : not_revert_driven) = true;
      };
      if (r.time == TimeBucket::slow) route(f.crs_r, f.crs_nr);
      if (r.time == TimeBucket::very_fast) route(f.crv_r, f.crv_nr);
      if (r.is_meta2) {
        (rd ? f.crm_r : f.crm_nr)++;
        if (r.time == TimeBucket::very_fast) route(f.crmv_r, f.crmv_nr);
        if (r.time == TimeBucket::fast) route(f.crmf_r, f.crmf_nr);
        if (r.time == TimeBucket::slow) route(f.crms_r, f.crms_nr);
      } else {
        route(f.crn_r, f.crn_nr);
      }
      // The pattern is routed by the culminating very-fast row, which keeps
      // (r or nr) equivalent to the unsplit feature.
      if (r.time == TimeBucket::very_fast && seen_fast_spc) route(f.crf_crv_r, f.crf_crv_nr);
      if (r.time != TimeBucket::slow) seen_fast_spc = true;
    }
    if (is_ntus(r)) f.ntus = true;
    if (is_nts(r)) ++nts_count;
  }
  f.nts_nts = nts_count >= 2;
  return f;
}

// ---------------------------------------------------------------------------
// Feature importance: forest of fully randomized trees.

namespace {

double gini(std::size_t pos, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(pos) / static_cast<double>(total);
  return 2.0 * p * (1.0 - p);
}

struct RandomTreeRun {
  const Eigen::MatrixXd& X;
  const std::vector<int>& y;
  Rng rng;
  Eigen::VectorXd importance;

  RandomTreeRun(const Eigen::MatrixXd& X_, const std::vector<int>& y_, std::uint64_t seed)
      : X(X_), y(y_), rng(seed), importance(Eigen::VectorXd::Zero(X_.cols())) {}

  void grow() {
    std::vector<int> all(X.rows());
    std::iota(all.begin(), all.end(), 0);
    // Explicit stack: fully random thresholds can chain deep on count features.
    std::vector<std::vector<int>> stack{std::move(all)};
    while (!stack.empty()) {
      std::vector<int> idx = std::move(stack.back());
      stack.pop_back();
      split_node(std::move(idx), stack);
    }
  }

  void split_node(std::vector<int> idx, std::vector<std::vector<int>>& stack) {
    const std::size_t n = idx.size();
    if (n < 2) return;
    std::size_t pos = 0;
    for (int i : idx) pos += y[i] > 0;
    if (pos == 0 || pos == n) return;

    // Features with any spread at this node.
    std::vector<int> splittable;
    for (int j = 0; j < X.cols(); ++j) {
      double lo = X(idx[0], j), hi = lo;
      for (int i : idx) {
        lo = std::min(lo, X(i, j));
        hi = std::max(hi, X(i, j));
      }
      if (hi > lo) splittable.push_back(j);
    }
    if (splittable.empty()) return;

    const int j = splittable[rng.below(splittable.size())];
    double lo = X(idx[0], j), hi = lo;
    for (int i : idx) {
      lo = std::min(lo, X(i, j));
      hi = std::max(hi, X(i, j));
    }
    double thr = lo + rng.uniform01() * (hi - lo);
    if (thr <= lo) thr = std::nextafter(lo, hi);

    std::vector<int> left, right;
    std::size_t left_pos = 0, right_pos = 0;
    for (int i : idx) {
      if (X(i, j) < thr) {
        left.push_back(i);
        left_pos += y[i] > 0;
      } else {
        right.push_back(i);
        right_pos += y[i] > 0;
      }
    }
    const double nl = static_cast<double>(left.size());
    const double nr = static_cast<double>(right.size());
    const double decrease =
        gini(pos, n) - (nl / n) * gini(left_pos, left.size()) - (nr / n) * gini(right_pos, right.size());
    importance[j] += (static_cast<double>(n) / static_cast<double>(X.rows())) * decrease;

    stack.push_back(std::move(left));
    stack.push_back(std::move(right));
  }
};

}  // namespace

std::vector<ImportanceEntry> feature_importance(const Eigen::MatrixXd& X,
                                                const std::vector<int>& y, int n_trees,
                                                std::uint64_t seed) {
  if (X.rows() < 2 || static_cast<std::size_t>(X.rows()) != y.size()) {
    throw DataError("feature_importance needs >= 2 samples with matching labels");
  }
  const bool has_pos = std::any_of(y.begin(), y.end(), [](int v) { return v > 0; });
  const bool has_neg = std::any_of(y.begin(), y.end(), [](int v) { return v <= 0; });
  if (!has_pos || !has_neg) throw DataError("feature_importance needs both classes");

  const int d = static_cast<int>(X.cols());
  Eigen::MatrixXd per_tree(n_trees, d);
  for (int t = 0; t < n_trees; ++t) {
    RandomTreeRun run(X, y, derive_seed(seed, static_cast<std::uint64_t>(t)));
    run.grow();
    const double total = run.importance.sum();
    if (total > 0) run.importance /= total;
    per_tree.row(t) = run.importance.transpose();
  }

  const Eigen::VectorXd mean = per_tree.colwise().mean();
  Eigen::VectorXd stddev(d);
  for (int j = 0; j < d; ++j) {
    stddev[j] = std::sqrt((per_tree.col(j).array() - mean[j]).square().mean());
  }
  const double total = mean.sum();

  std::vector<ImportanceEntry> out(d);
  for (int j = 0; j < d; ++j) {
    out[j] = {j, total > 0 ? mean[j] / total : 0.0, stddev[j]};
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ImportanceEntry& a, const ImportanceEntry& b) { return a.mean > b.mean; });
  return out;
}

}  // namespace vews
