#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace vews {

/// Per-class draw probabilities. Values marked "calibration target" in the
/// emitted params file reproduce published class-conditional statistics;
/// the rest are derived knobs documented there.
struct ClassParams {
  double p_first_meta = 0.5;   // first edited page is a meta-page
  double p_reedit = 0.5;       // subsequent edit revisits a known page
  double p_consecutive_given_reedit = 0.5;  // re-edit hits the previous page
  double p_meta_page = 0.3;    // newly created page is a meta-page
  std::array<double, 3> time_buckets{0.2, 0.2, 0.6};  // very_fast, fast, slow
  double p_null_category = 0.1;   // page carries no category information
  double p_common_category = 0.4; // new page shares a category with its predecessor
  std::array<double, 3> hop_buckets{0.4, 0.3, 0.3};  // within_3, more_than_3, unreachable
  std::optional<double> p_revert;  // per-edit revert flag; absent = no revert data
  double mean_edits = 10;          // geometric, support {1, 2, ...}
};

struct GeneratorParams {
  ClassParams vandal;
  ClassParams benign;
  int users_per_class = 1000;
  std::uint64_t seed = 1;
  int span_start_month = 2013 * 12 + 3;  // 2013-04
  int span_months = 16;                  // registrations through 2014-07
  long page_pool_limit = 5'000'000;
};

/// Calibrated defaults; every probability's provenance is attached in the
/// emitted params file.
GeneratorParams default_params();

/// Probabilities in [0,1], distributions summing to 1 within 1e-9.
void validate_params(const GeneratorParams& params);

struct GeneratedCorpus {
  std::string edits_path;
  std::string labels_path;
  std::string links_path;
  std::string params_path;
};

/// Writes edits.jsonl, labels.csv, links.tsv and params.json under out_dir.
/// Deterministic given the seed: the same params produce byte-identical
/// files. The hyper-link graph is constructed edge-by-edge so that every
/// drawn hop bucket is exact (direct edge for within_3, a fresh 4-hop chain
/// for more_than_3, an in-degree-zero page for unreachable).
GeneratedCorpus generate(const GeneratorParams& params, const std::string& out_dir);

/// Params plus per-value provenance notes, as written to params.json.
nlohmann::json params_to_json(const GeneratorParams& params);

/// Reads the params.json layout back (provenance wrappers and bare numbers
/// both accepted); missing fields keep the default_params() values.
GeneratorParams params_from_json(const nlohmann::json& j);

}  // namespace vews
