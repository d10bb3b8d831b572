#include "vews/pairfeat.hpp"

#include <algorithm>
#include <unordered_set>

namespace vews {

TimeBucket bucket_of_gap(std::int64_t gap_seconds) {
  if (gap_seconds < 180) return TimeBucket::very_fast;
  if (gap_seconds < 900) return TimeBucket::fast;
  return TimeBucket::slow;
}

const char* time_bucket_name(TimeBucket b) {
  switch (b) {
    case TimeBucket::very_fast: return "very_fast";
    case TimeBucket::fast: return "fast";
    case TimeBucket::slow: return "slow";
  }
  return "?";
}

const char* common_cats_name(CommonCats c) {
  switch (c) {
    case CommonCats::none: return "none";
    case CommonCats::at_least_one: return "at_least_one";
    case CommonCats::null_info: return "null_info";
  }
  return "?";
}

namespace {

// Both inputs sorted; set-intersection emptiness test.
bool share_category(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const int cmp = a[i].compare(b[j]);
    if (cmp == 0) return true;
    (cmp < 0 ? i : j)++;
  }
  return false;
}

CommonCats common_cats_of(const EditRecord& prev, const EditRecord& cur) {
  if (!prev.categories || !cur.categories) return CommonCats::null_info;
  return share_category(*prev.categories, *cur.categories) ? CommonCats::at_least_one
                                                           : CommonCats::none;
}

}  // namespace

PairFeatures featurize_pair(const EditRecord* prev, const EditRecord& cur,
                            const PairContext& ctx, const HopGraph* graph,
                            std::optional<Timestamp> registration_ts) {
  PairFeatures row;
  row.user = cur.user;
  row.p2 = cur.page;
  row.ts2 = cur.ts;
  row.is_meta2 = cur.is_meta;
  if (ctx.reverts_loaded) row.prev_reverted = ctx.page_reverted;

  if (prev == nullptr) {
    row.is_first = true;
    row.time = registration_ts ? bucket_of_gap(cur.ts - *registration_ts) : TimeBucket::slow;
    return row;
  }

  row.p1 = prev->page;
  row.time = bucket_of_gap(cur.ts - prev->ts);
  if (ctx.page_seen) {
    row.is_reedit = true;
    row.same_page_consecutive = prev->page == cur.page;
  } else {
    row.hop = graph ? graph->hop_bucket(prev->page, cur.page) : HopBucket::unreachable;
    row.common_cats = common_cats_of(*prev, cur);
  }
  return row;
}

UserLog build_user_log(const UserTimeline& timeline, const HopGraph* graph, bool reverts_loaded,
                       std::optional<Timestamp> registration_ts) {
  UserLog log;
  log.user = timeline.user;
  log.rows.reserve(timeline.edits.size());

  std::unordered_set<std::string> seen;
  std::unordered_set<std::string> reverted_pages;
  const EditRecord* prev = nullptr;
  for (const EditRecord& cur : timeline.edits) {
    PairContext ctx;
    ctx.reverts_loaded = reverts_loaded;
    ctx.page_seen = seen.count(cur.page) > 0;
    ctx.page_reverted = reverted_pages.count(cur.page) > 0;
    log.rows.push_back(featurize_pair(prev, cur, ctx, graph, registration_ts));
    seen.insert(cur.page);
    if (cur.reverted.value_or(false)) reverted_pages.insert(cur.page);
    prev = &cur;
  }
  return log;
}

std::vector<UserLog> build_user_logs(const Corpus& corpus) {
  std::vector<UserLog> logs;
  logs.reserve(corpus.timelines.size());
  const HopGraph* graph = corpus.has_links ? &corpus.graph : nullptr;
  for (const auto& tl : corpus.timelines) {
    logs.push_back(
        build_user_log(tl, graph, corpus.has_revert_data, corpus.registration_of(tl.user)));
  }
  return logs;
}

void write_edit_pair_csv(std::ostream& out, const std::vector<UserLog>& logs) {
  out << "user,p1,p2,ts2,is_meta2,time,is_first,is_reedit,same_page_consecutive,"
         "prev_reverted,hop,common_cats\n";
  auto boolstr = [](bool b) { return b ? "true" : "false"; };
  for (const auto& log : logs) {
    for (const auto& r : log.rows) {
      out << r.user << ',' << r.p1 << ',' << r.p2 << ',' << format_iso8601_utc(r.ts2) << ','
          << boolstr(r.is_meta2) << ',' << time_bucket_name(r.time) << ',' << boolstr(r.is_first)
          << ',' << boolstr(r.is_reedit) << ',' << boolstr(r.same_page_consecutive) << ','
          << (r.prev_reverted ? boolstr(*r.prev_reverted) : "") << ','
          << (r.hop ? hop_bucket_name(*r.hop) : "") << ','
          << (r.common_cats ? common_cats_name(*r.common_cats) : "") << '\n';
    }
  }
}

}  // namespace vews
