#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vews/corpus.hpp"

namespace vews {

/// Gap between consecutive edits: very_fast < 3 min, fast < 15 min, slow
/// otherwise. Boundary gaps fall on the slower side (180 s is fast, 900 s is
/// slow) because the bucket definitions read "less than" strictly.
enum class TimeBucket { very_fast, fast, slow };

TimeBucket bucket_of_gap(std::int64_t gap_seconds);
const char* time_bucket_name(TimeBucket b);

enum class CommonCats { none, at_least_one, null_info };

const char* common_cats_name(CommonCats c);

/// One consecutive edit pair (p1, p2) of a user, describing p2 relative to
/// p1. A user's very first edit has no real predecessor; it is emitted as a
/// sentinel pair whose p1 is empty and whose time bucket measures the gap
/// from registration when the registration time is known (slow otherwise).
struct PairFeatures {
  std::string user;
  std::string p1;  // empty on the sentinel row
  std::string p2;
  Timestamp ts2 = 0;
  bool is_meta2 = false;
  TimeBucket time = TimeBucket::slow;
  bool is_first = false;
  bool is_reedit = false;
  bool same_page_consecutive = false;
  /// Whether an edit of p2 by this user strictly before ts2 was reverted.
  /// Present only when revert data is loaded.
  std::optional<bool> prev_reverted;
  /// Present iff the row is a new-page edit (neither sentinel nor re-edit).
  std::optional<HopBucket> hop;
  std::optional<CommonCats> common_cats;

  bool is_new_page() const { return hop.has_value(); }
};

struct UserLog {
  std::string user;
  std::vector<PairFeatures> rows;  // one row per edit, sentinel first
};

/// Page history of one user while walking the timeline, fed to
/// featurize_pair. Callers normally use build_user_log instead.
struct PairContext {
  bool page_seen = false;        // cur.page edited strictly before
  bool page_reverted = false;    // an earlier edit of cur.page was reverted
  bool reverts_loaded = false;
};

PairFeatures featurize_pair(const EditRecord* prev, const EditRecord& cur,
                            const PairContext& ctx, const HopGraph* graph,
                            std::optional<Timestamp> registration_ts);

/// Builds the chronological pair log of one user: a sentinel row for the
/// first edit, then one row per consecutive pair. prev_reverted is causal —
/// it only sees reverts of edits strictly earlier in the timeline.
UserLog build_user_log(const UserTimeline& timeline, const HopGraph* graph,
                       bool reverts_loaded,
                       std::optional<Timestamp> registration_ts = std::nullopt);

/// Logs for every user in the corpus, in corpus.timelines order.
std::vector<UserLog> build_user_logs(const Corpus& corpus);

/// edit_pair dataset export: one CSV row per PairFeatures, columns in
/// declaration order.
void write_edit_pair_csv(std::ostream& out, const std::vector<UserLog>& logs);

}  // namespace vews
