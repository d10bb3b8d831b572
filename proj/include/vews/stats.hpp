#pragma once

#include <array>
#include <optional>
#include <string>

#include <json.hpp>

#include "vews/corpus.hpp"

namespace vews {

/// Class-conditional behavioral statistics. Every fraction is nullopt when
/// its denominator is empty (never 0/0); the revert-driven block is nullopt
/// when the corpus has no revert data.
struct ClassStats {
  std::size_t users = 0;
  std::size_t edits = 0;
  std::size_t pair_rows = 0;  // consecutive pairs, i.e. edits minus firsts

  std::optional<double> reedit_fraction;    // re-edits over consecutive pairs
  std::optional<double> new_edit_fraction;  // complement, new-page pairs
  std::array<std::optional<double>, 3> time_bucket_fraction;  // very_fast, fast, slow
  std::optional<double> within_15min_fraction;

  std::optional<double> first_edit_meta_fraction;  // per user with >=1 edit
  std::optional<double> first4_meta_fraction;      // pooled over each user's first 4 edits
  std::optional<double> all_meta_fraction;         // pooled over all edits

  std::optional<double> revert_driven_reedit_fraction;  // P(prev_reverted | re-edit)
  std::optional<double> edit_war_ge2_user_fraction;
  std::optional<double> edit_war_ge3_user_fraction;
  std::optional<double> surface_meta_user_fraction;    // >=1 surface edit on a meta page
  std::optional<double> surface_normal_user_fraction;  // >=1 surface edit on a normal page
  std::optional<double> surface_ge3_user_fraction;     // >=3 surface edits anywhere
};

struct StatsReport {
  ClassStats vandal;
  ClassStats benign;
  bool reverts_available = false;
  std::size_t unlabeled_users = 0;
};

/// Per-class editing statistics over a labeled corpus: re-edit vs new-edit
/// shares, inter-edit speed, meta-page engagement, and (when revert data is
/// loaded) revert-driven re-edits, edit wars and surface edits.
StatsReport behavior_stats(const Corpus& corpus);

nlohmann::json stats_to_json(const StatsReport& report);

}  // namespace vews
