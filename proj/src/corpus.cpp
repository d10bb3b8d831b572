#include "vews/corpus.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vews/error.hpp"

namespace vews {

using nlohmann::json;

const char* hop_bucket_name(HopBucket b) {
  switch (b) {
    case HopBucket::within_3: return "within_3";
    case HopBucket::more_than_3: return "more_than_3";
    case HopBucket::unreachable: return "unreachable";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// HopGraph

HopGraph::HopGraph(HopGraph&& other) noexcept { *this = std::move(other); }

HopGraph& HopGraph::operator=(HopGraph&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(memo_mutex_, other.memo_mutex_);
    index_ = std::move(other.index_);
    node_ids_ = std::move(other.node_ids_);
    adjacency_ = std::move(other.adjacency_);
    memo_ = std::move(other.memo_);
  }
  return *this;
}

void HopGraph::add_edge(const std::string& src, const std::string& dst) {
  const int s = intern(src);
  const int d = intern(dst);
  adjacency_[s].push_back(d);
}

std::size_t HopGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& row : adjacency_) n += row.size();
  return n;
}

int HopGraph::intern(const std::string& id) {
  auto it = index_.find(id);
  if (it != index_.end()) return it->second;
  const int idx = static_cast<int>(node_ids_.size());
  index_.emplace(id, idx);
  node_ids_.push_back(id);
  adjacency_.emplace_back();
  return idx;
}

std::optional<int> HopGraph::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::shared_ptr<const HopGraph::Reach> HopGraph::reach_from(int src) const {
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(src);
    if (it != memo_.end()) return it->second;
  }

  auto reach = std::make_shared<Reach>();
  std::unordered_map<int, int> depth;
  depth.emplace(src, 0);
  std::deque<int> queue{src};
  std::size_t expanded = 0;
  while (!queue.empty()) {
    if (++expanded > kExpansionCap) {
      reach->cap_hit = true;
      break;
    }
    const int node = queue.front();
    queue.pop_front();
    const int d = depth[node];
    for (int next : adjacency_[node]) {
      if (depth.emplace(next, d + 1).second) queue.push_back(next);
    }
  }
  reach->within3.reserve(depth.size());
  for (const auto& [node, d] : depth) reach->within3.emplace(node, d <= 3);

  std::lock_guard<std::mutex> lock(memo_mutex_);
  if (memo_.size() < kMemoLimit) memo_.emplace(src, reach);
  return reach;
}

HopBucket HopGraph::hop_bucket(const std::string& p1, const std::string& p2) const {
  const auto s = find(p1);
  const auto t = find(p2);
  if (!s || !t) return HopBucket::unreachable;
  if (*s == *t) return HopBucket::within_3;
  const auto reach = reach_from(*s);
  auto it = reach->within3.find(*t);
  if (it != reach->within3.end()) return it->second ? HopBucket::within_3 : HopBucket::more_than_3;
  return reach->cap_hit ? HopBucket::more_than_3 : HopBucket::unreachable;
}

// ---------------------------------------------------------------------------
// Corpus

const UserLabel* Corpus::label_of(const std::string& user) const {
  auto it = labels.find(user);
  return it == labels.end() ? nullptr : &it->second;
}

std::optional<Timestamp> Corpus::registration_of(const std::string& user) const {
  const UserLabel* l = label_of(user);
  return l ? l->registration_ts : std::nullopt;
}

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line_no, const std::string& msg) {
  throw DataError(path + ":" + std::to_string(line_no) + ": " + msg);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

// Minimal RFC-4180 style CSV row split: double-quoted fields, "" escapes.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

EditRecord parse_edit_line(const std::string& path, std::size_t line_no, const std::string& line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    fail(path, line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) fail(path, line_no, "edit row is not a JSON object");

  EditRecord rec;
  try {
    rec.user = obj.at("user").get<std::string>();
    rec.page = obj.at("page").get<std::string>();
    rec.title = obj.value("title", std::string{});
    const auto ts = parse_iso8601_utc(obj.at("ts").get<std::string>());
    if (!ts) fail(path, line_no, "ts is not an ISO-8601 UTC timestamp");
    rec.ts = *ts;
    rec.is_meta = obj.at("meta").get<bool>();
    const auto cats = obj.find("categories");
    if (cats == obj.end() || cats->is_null()) {
      rec.categories = std::nullopt;
    } else if (cats->is_array()) {
      std::vector<std::string> v = cats->get<std::vector<std::string>>();
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      rec.categories = std::move(v);
    } else {
      fail(path, line_no, "categories must be an array or null");
    }
    if (obj.contains("reverted")) rec.reverted = obj.at("reverted").get<bool>();
    if (obj.contains("reverted_by_bot")) rec.reverted_by_bot = obj.at("reverted_by_bot").get<bool>();
  } catch (const json::exception& e) {
    fail(path, line_no, std::string("bad edit row: ") + e.what());
  }
  return rec;
}

}  // namespace

Corpus load_corpus(const std::string& edits_path, const std::string& labels_path,
                   const std::optional<std::string>& links_path,
                   const std::optional<std::string>& reverts_path) {
  Corpus corpus;
  auto warn = [&corpus](std::string msg) { corpus.report.warnings.push_back(std::move(msg)); };

  // Edits: JSON lines, grouped per user in order of first appearance.
  {
    std::ifstream in = open_or_throw(edits_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      line = strip_cr(line);
      if (line.empty()) continue;
      EditRecord rec = parse_edit_line(edits_path, line_no, line);
      if (rec.reverted.has_value()) corpus.has_revert_data = true;
      auto [it, fresh] = corpus.user_index.emplace(rec.user, corpus.timelines.size());
      if (fresh) corpus.timelines.push_back(UserTimeline{rec.user, {}});
      corpus.timelines[it->second].edits.push_back(std::move(rec));
      ++corpus.report.total_edits;
    }
  }

  // Chronological per-user order; stable sort keeps input order on equal ts.
  for (auto& tl : corpus.timelines) {
    std::stable_sort(tl.edits.begin(), tl.edits.end(),
                     [](const EditRecord& a, const EditRecord& b) { return a.ts < b.ts; });
    for (std::size_t i = 1; i < tl.edits.size(); ++i) {
      const auto& prev = tl.edits[i - 1];
      const auto& cur = tl.edits[i];
      if (prev.ts == cur.ts && prev.page == cur.page) {
        warn("duplicate edit (" + tl.user + ", " + format_iso8601_utc(cur.ts) + ", " + cur.page +
             "): keeping both");
      }
    }
  }

  // Labels: CSV user,label,registration_ts.
  {
    std::ifstream in = open_or_throw(labels_path);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
      ++line_no;
      line = strip_cr(line);
      if (line.empty()) continue;
      const auto fields = split_csv(line);
      if (!header_seen) {
        header_seen = true;
        if (fields.size() < 2 || fields[0] != "user" || fields[1] != "label") {
          fail(labels_path, line_no, "expected header user,label,registration_ts");
        }
        continue;
      }
      if (fields.size() < 2) fail(labels_path, line_no, "expected at least user,label");
      UserLabel ul;
      ul.user = fields[0];
      if (fields[1] == "vandal") {
        ul.label = Label::vandal;
      } else if (fields[1] == "benign") {
        ul.label = Label::benign;
      } else {
        fail(labels_path, line_no, "unknown label token \"" + fields[1] + "\"");
      }
      if (fields.size() >= 3 && !fields[2].empty()) {
        const auto ts = parse_iso8601_utc(fields[2]);
        if (!ts) fail(labels_path, line_no, "registration_ts is not ISO-8601 UTC");
        ul.registration_ts = ts;
      }
      if (corpus.labels.count(ul.user)) {
        fail(labels_path, line_no, "duplicate label for user \"" + ul.user + "\"");
      }
      if (!corpus.user_index.count(ul.user)) {
        warn("label for user \"" + ul.user + "\" references no edits; retained with empty timeline");
        corpus.user_index.emplace(ul.user, corpus.timelines.size());
        corpus.timelines.push_back(UserTimeline{ul.user, {}});
      }
      (ul.label == Label::vandal ? corpus.report.vandal_users : corpus.report.benign_users)++;
      corpus.labels.emplace(ul.user, std::move(ul));
    }
    if (!header_seen) fail(labels_path, 1, "empty labels file");
  }

  // Links: TSV src_page dst_page.
  if (links_path) {
    std::ifstream in = open_or_throw(*links_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      line = strip_cr(line);
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
        fail(*links_path, line_no, "expected two tab-separated page ids");
      }
      corpus.graph.add_edge(line.substr(0, tab), line.substr(tab + 1));
    }
    corpus.has_links = true;
  }

  // Reverts: CSV user,page,ts[,reverted_by_bot]; each row flags one edit as
  // reverted, joined by exact (user, page, ts).
  if (reverts_path) {
    std::ifstream in = open_or_throw(*reverts_path);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
      ++line_no;
      line = strip_cr(line);
      if (line.empty()) continue;
      const auto fields = split_csv(line);
      if (!header_seen) {
        header_seen = true;
        if (fields.size() < 3 || fields[0] != "user" || fields[1] != "page" || fields[2] != "ts") {
          fail(*reverts_path, line_no, "expected header user,page,ts[,reverted_by_bot]");
        }
        continue;
      }
      if (fields.size() < 3) fail(*reverts_path, line_no, "expected user,page,ts");
      const auto ts = parse_iso8601_utc(fields[2]);
      if (!ts) fail(*reverts_path, line_no, "ts is not ISO-8601 UTC");
      bool by_bot = false;
      if (fields.size() >= 4 && !fields[3].empty()) {
        if (fields[3] == "true") {
          by_bot = true;
        } else if (fields[3] == "false") {
          by_bot = false;
        } else {
          fail(*reverts_path, line_no, "reverted_by_bot must be true or false");
        }
      }
      auto user_it = corpus.user_index.find(fields[0]);
      bool matched = false;
      if (user_it != corpus.user_index.end()) {
        for (auto& edit : corpus.timelines[user_it->second].edits) {
          if (edit.ts == *ts && edit.page == fields[1]) {
            edit.reverted = true;
            if (by_bot) edit.reverted_by_bot = true;
            matched = true;
          }
        }
      }
      if (matched) {
        ++corpus.report.revert_rows_joined;
      } else {
        warn("revert row " + fields[0] + "," + fields[1] + "," + fields[2] +
             " matches no edit; ignored");
      }
    }
    corpus.has_revert_data = true;
    // Edits without a matching revert row are known non-reverted.
    for (auto& tl : corpus.timelines) {
      for (auto& edit : tl.edits) {
        if (!edit.reverted.has_value()) edit.reverted = false;
      }
    }
  } else if (corpus.has_revert_data) {
    for (auto& tl : corpus.timelines) {
      for (auto& edit : tl.edits) {
        if (!edit.reverted.has_value()) edit.reverted = false;
      }
    }
  }

  corpus.report.total_users = corpus.timelines.size();
  return corpus;
}

}  // namespace vews
