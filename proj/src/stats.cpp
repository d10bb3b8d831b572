#include "vews/stats.hpp"

#include <algorithm>

#include "vews/pairfeat.hpp"

namespace vews {

namespace {

struct Tally {
  std::size_t users = 0;
  std::size_t edits = 0;
  std::size_t pair_rows = 0;
  std::size_t reedits = 0;
  std::size_t new_edits = 0;
  std::array<std::size_t, 3> buckets{};
  std::size_t users_with_edits = 0;
  std::size_t first_meta = 0;
  std::size_t first4_edits = 0;
  std::size_t first4_meta = 0;
  std::size_t meta_edits = 0;
  std::size_t revert_driven_reedits = 0;
  std::size_t war_ge2_users = 0;
  std::size_t war_ge3_users = 0;
  std::size_t surface_meta_users = 0;
  std::size_t surface_normal_users = 0;
  std::size_t surface_ge3_users = 0;
};

std::optional<double> frac(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

ClassStats finalize(const Tally& t, bool reverts) {
  ClassStats s;
  s.users = t.users;
  s.edits = t.edits;
  s.pair_rows = t.pair_rows;
  s.reedit_fraction = frac(t.reedits, t.pair_rows);
  s.new_edit_fraction = frac(t.new_edits, t.pair_rows);
  for (int b = 0; b < 3; ++b) s.time_bucket_fraction[b] = frac(t.buckets[b], t.pair_rows);
  s.within_15min_fraction = frac(t.buckets[0] + t.buckets[1], t.pair_rows);
  s.first_edit_meta_fraction = frac(t.first_meta, t.users_with_edits);
  s.first4_meta_fraction = frac(t.first4_meta, t.first4_edits);
  s.all_meta_fraction = frac(t.meta_edits, t.edits);
  if (reverts) {
    s.revert_driven_reedit_fraction = frac(t.revert_driven_reedits, t.reedits);
    s.edit_war_ge2_user_fraction = frac(t.war_ge2_users, t.users_with_edits);
    s.edit_war_ge3_user_fraction = frac(t.war_ge3_users, t.users_with_edits);
    s.surface_meta_user_fraction = frac(t.surface_meta_users, t.users_with_edits);
    s.surface_normal_user_fraction = frac(t.surface_normal_users, t.users_with_edits);
    s.surface_ge3_user_fraction = frac(t.surface_ge3_users, t.users_with_edits);
  }
  return s;
}

}  // namespace

StatsReport behavior_stats(const Corpus& corpus) {
  StatsReport report;
  report.reverts_available = corpus.has_revert_data;
  Tally vandal, benign;
  const HopGraph* graph = corpus.has_links ? &corpus.graph : nullptr;

  for (const auto& tl : corpus.timelines) {
    const UserLabel* label = corpus.label_of(tl.user);
    if (!label) {
      ++report.unlabeled_users;
      continue;
    }
    Tally& t = label->label == Label::vandal ? vandal : benign;
    ++t.users;
    t.edits += tl.edits.size();
    if (tl.edits.empty()) continue;
    ++t.users_with_edits;

    const UserLog log =
        build_user_log(tl, graph, corpus.has_revert_data, label->registration_ts);
    std::size_t war_pairs = 0;
    std::size_t surface_edits = 0;
    bool surface_meta = false, surface_normal = false;
    for (std::size_t i = 0; i < log.rows.size(); ++i) {
      const PairFeatures& r = log.rows[i];
      if (i < 4) {  // rows map 1:1 onto edits, sentinel included
        ++t.first4_edits;
        if (r.is_meta2) ++t.first4_meta;
      }
      if (r.is_meta2) ++t.meta_edits;
      if (r.is_first) {
        if (r.is_meta2) ++t.first_meta;
        continue;
      }
      ++t.pair_rows;
      ++t.buckets[static_cast<int>(r.time)];
      if (r.is_reedit) {
        ++t.reedits;
        if (r.prev_reverted.value_or(false)) ++t.revert_driven_reedits;
      } else {
        ++t.new_edits;
      }
      const bool prev_rev = r.prev_reverted.value_or(false);
      if (r.same_page_consecutive && prev_rev) ++war_pairs;
      if (r.same_page_consecutive && !prev_rev && r.time == TimeBucket::very_fast) {
        ++surface_edits;
        (r.is_meta2 ? surface_meta : surface_normal) = true;
      }
    }
    if (war_pairs >= 2) ++t.war_ge2_users;
    if (war_pairs >= 3) ++t.war_ge3_users;
    if (surface_meta) ++t.surface_meta_users;
    if (surface_normal) ++t.surface_normal_users;
    if (surface_edits >= 3) ++t.surface_ge3_users;
  }

  report.vandal = finalize(vandal, corpus.has_revert_data);
  report.benign = finalize(benign, corpus.has_revert_data);
  return report;
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

nlohmann::json class_json(const ClassStats& s) {
  return {
      {"users", s.users},
      {"edits", s.edits},
      {"consecutive_pairs", s.pair_rows},
      {"reedit_fraction", opt_json(s.reedit_fraction)},
      {"new_edit_fraction", opt_json(s.new_edit_fraction)},
      {"time_buckets",
       {{"very_fast", opt_json(s.time_bucket_fraction[0])},
        {"fast", opt_json(s.time_bucket_fraction[1])},
        {"slow", opt_json(s.time_bucket_fraction[2])}}},
      {"within_15min_fraction", opt_json(s.within_15min_fraction)},
      {"first_edit_meta_fraction", opt_json(s.first_edit_meta_fraction)},
      {"first4_meta_fraction", opt_json(s.first4_meta_fraction)},
      {"all_meta_fraction", opt_json(s.all_meta_fraction)},
      {"revert_driven_reedit_fraction", opt_json(s.revert_driven_reedit_fraction)},
      {"edit_war_ge2_user_fraction", opt_json(s.edit_war_ge2_user_fraction)},
      {"edit_war_ge3_user_fraction", opt_json(s.edit_war_ge3_user_fraction)},
      {"surface_meta_user_fraction", opt_json(s.surface_meta_user_fraction)},
      {"surface_normal_user_fraction", opt_json(s.surface_normal_user_fraction)},
      {"surface_ge3_user_fraction", opt_json(s.surface_ge3_user_fraction)},
  };
}

}  // namespace

nlohmann::json stats_to_json(const StatsReport& report) {
  return {
      {"reverts_available", report.reverts_available},
      {"unlabeled_users", report.unlabeled_users},
      {"vandal", class_json(report.vandal)},
      {"benign", class_json(report.benign)},
  };
}

}  // namespace vews
