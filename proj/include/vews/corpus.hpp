#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vews/timeutil.hpp"

namespace vews {

/// One timestamped edit by a user on a page.
struct EditRecord {
  std::string user;
  std::string page;
  std::string title;
  Timestamp ts = 0;
  /// Sorted, de-duplicated; nullopt when category information is unavailable.
  std::optional<std::vector<std::string>> categories;
  bool is_meta = false;
  std::optional<bool> reverted;
  std::optional<bool> reverted_by_bot;
};

enum class Label { vandal, benign };

inline int label_sign(Label l) { return l == Label::benign ? +1 : -1; }
inline const char* label_name(Label l) { return l == Label::benign ? "benign" : "vandal"; }

struct UserLabel {
  std::string user;
  Label label = Label::benign;
  std::optional<Timestamp> registration_ts;
};

struct UserTimeline {
  std::string user;
  std::vector<EditRecord> edits;  // non-decreasing ts, input order preserved on ties
};

enum class HopBucket { within_3, more_than_3, unreachable };

const char* hop_bucket_name(HopBucket b);

/// Directed page hyper-link graph answering "is p2 within 3 hops of p1".
///
/// Queries run a breadth-first search from p1. Distance bookkeeping stops
/// mattering past depth 3; the search keeps expanding only to tell
/// more_than_3 apart from unreachable, and gives up (reporting more_than_3,
/// a documented approximation) once a per-query expansion cap is hit.
/// Results are memoized per source page behind a mutex, so concurrent
/// readers are safe.
class HopGraph {
 public:
  HopGraph() = default;
  HopGraph(HopGraph&& other) noexcept;
  HopGraph& operator=(HopGraph&& other) noexcept;
  HopGraph(const HopGraph&) = delete;
  HopGraph& operator=(const HopGraph&) = delete;

  void add_edge(const std::string& src, const std::string& dst);

  bool empty() const { return adjacency_.empty(); }
  std::size_t node_count() const { return node_ids_.size(); }
  std::size_t edge_count() const;

  HopBucket hop_bucket(const std::string& p1, const std::string& p2) const;

  static constexpr std::size_t kExpansionCap = 1'000'000;

 private:
  struct Reach {
    std::unordered_map<int, bool> within3;  // node -> reached at depth <= 3
    bool cap_hit = false;
  };

  int intern(const std::string& id);
  std::optional<int> find(const std::string& id) const;
  std::shared_ptr<const Reach> reach_from(int src) const;

  std::unordered_map<std::string, int> index_;
  std::vector<std::string> node_ids_;
  std::vector<std::vector<int>> adjacency_;

  static constexpr std::size_t kMemoLimit = 1 << 16;
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<int, std::shared_ptr<const Reach>> memo_;
};

struct LoadReport {
  std::size_t total_edits = 0;
  std::size_t total_users = 0;
  std::size_t vandal_users = 0;
  std::size_t benign_users = 0;
  std::size_t revert_rows_joined = 0;
  std::vector<std::string> warnings;
};

/// Immutable after load; all queries are safe for concurrent readers.
struct Corpus {
  std::vector<UserTimeline> timelines;  // file order of first appearance
  std::unordered_map<std::string, std::size_t> user_index;
  std::unordered_map<std::string, UserLabel> labels;
  HopGraph graph;
  bool has_links = false;
  bool has_revert_data = false;
  LoadReport report;

  const UserLabel* label_of(const std::string& user) const;
  std::optional<Timestamp> registration_of(const std::string& user) const;
};

/// Loads and indexes the edit corpus. Paths other than edits/labels are
/// optional. Malformed rows raise DataError with the offending line number;
/// recoverable oddities (labels without edits, duplicate edits, unmatched
/// revert rows) are retained as warnings in the report.
Corpus load_corpus(const std::string& edits_path, const std::string& labels_path,
                   const std::optional<std::string>& links_path = std::nullopt,
                   const std::optional<std::string>& reverts_path = std::nullopt);

}  // namespace vews
