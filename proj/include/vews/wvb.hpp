#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vews/pairfeat.hpp"

namespace vews {

/// The 11 per-user behavioral features. All are booleans except crm, which
/// counts consecutive meta-page re-edits.
struct WvbVector {
  bool crs = false;      // consecutive re-edit, slowly
  bool crv = false;      // consecutive re-edit, very fast
  int crm = 0;           // consecutive re-edits of a meta-page (count)
  bool crn = false;      // consecutive re-edit of a non-meta page
  bool crmv = false;     // consecutive meta re-edit, very fast
  bool crmf = false;     // consecutive meta re-edit, fast
  bool crms = false;     // consecutive meta re-edit, slowly
  bool crf_crv = false;  // re-edit within 15 min, later another within 3 min
  bool fm = false;       // first edit on a meta-page
  bool ntus = false;     // new page within 3 hops, unknown category, slowly
  bool nts_nts = false;  // two new-page-within-3-hops-slowly occurrences

  static constexpr int kDim = 11;
  static const std::array<const char*, kDim>& names();
  Eigen::VectorXd numeric() const;
};

/// The -WR expansion: each of the eight re-edit features is split into a
/// revert-driven and a not-revert-driven variant; fm, ntus and nts_nts are
/// unchanged. 19 features total.
struct WvbVectorWR {
  bool crs_r = false, crs_nr = false;
  bool crv_r = false, crv_nr = false;
  int crm_r = 0, crm_nr = 0;
  bool crn_r = false, crn_nr = false;
  bool crmv_r = false, crmv_nr = false;
  bool crmf_r = false, crmf_nr = false;
  bool crms_r = false, crms_nr = false;
  bool crf_crv_r = false, crf_crv_nr = false;
  bool fm = false;
  bool ntus = false;
  bool nts_nts = false;

  static constexpr int kDim = 19;
  static const std::array<const char*, kDim>& names();
  Eigen::VectorXd numeric() const;
  /// Just the eight revert-driven halves, used by the WTPM-WR feature mode.
  static constexpr int kRevertDim = 8;
  Eigen::VectorXd revert_driven_numeric() const;
};

/// Computes the WVB features from a user log, optionally truncated to the
/// first k rows (= the user's first k edits).
WvbVector wvb_features(const UserLog& log, std::optional<int> k = std::nullopt);

/// Revert-split variant. Throws DataError when the log carries no revert
/// information (run the plain mode instead).
WvbVectorWR wvb_features_wr(const UserLog& log, std::optional<int> k = std::nullopt);

struct ImportanceEntry {
  int feature = 0;
  double mean = 0;  // normalized mean impurity decrease, sums to 1 over all entries
  double stddev = 0;  // spread of the per-tree normalized importances
};

/// Feature importance from a forest of fully randomized trees (random split
/// feature, random threshold), ranked by mean impurity decrease. X is
/// samples-by-features; y holds +/-1 class labels and must contain both
/// classes. Entries cover every feature and sum to 1.
std::vector<ImportanceEntry> feature_importance(const Eigen::MatrixXd& X,
                                                const std::vector<int>& y, int n_trees = 250,
                                                std::uint64_t seed = 1);

}  // namespace vews
