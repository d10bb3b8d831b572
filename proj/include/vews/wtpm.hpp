#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vews/pairfeat.hpp"

namespace vews {

// ---------------------------------------------------------------------------
// The 60-state edit-pair space: meta (2) x time bucket (3) x relation (10),
// encoded as index = meta*30 + time*10 + relation.

enum class Relation : int {
  first_edit = 0,
  reedit_consecutive = 1,
  reedit_nonconsecutive = 2,
  new_within3_common = 3,
  new_within3_nocommon = 4,
  new_far_common = 5,
  new_far_nocommon = 6,
  new_unreachable_common = 7,
  new_unreachable_nocommon = 8,
  new_null_category = 9,
};

constexpr int kStateCount = 60;

struct StateParts {
  bool meta = false;
  TimeBucket time = TimeBucket::very_fast;
  Relation relation = Relation::first_edit;
};

int state_index(const StateParts& parts);
StateParts decode_state(int index);

/// State of one user-log row. New-page rows with unknown category map to
/// new_null_category regardless of hop bucket.
int state_of(const PairFeatures& row);

/// A synthetic log row that encodes to the given state; test support for the
/// encode/decode bijection.
PairFeatures representative_row(const StateParts& parts);

// ---------------------------------------------------------------------------
// Per-user transition matrix over the state space.

/// Sparse vector with entries sorted by index; the flattened matrix rows fed
/// to the autoencoder.
struct SparseVec {
  int dim = 0;
  std::vector<std::pair<int, double>> entries;

  Eigen::VectorXd dense() const;
  static SparseVec from_dense(const Eigen::VectorXd& v, double keep_above = 0.0);
};

/// 60x60 transition counts and row-normalized probabilities. Rows with no
/// observations stay all-zero. Stored sparse; a user's log visits at most a
/// handful of states.
class TransitionMatrix {
 public:
  static constexpr int kStates = kStateCount;

  /// Counts consecutive state pairs over the (optionally k-truncated) log.
  static TransitionMatrix from_log(const UserLog& log, std::optional<int> k = std::nullopt);
  static TransitionMatrix from_states(const std::vector<int>& states);

  int count(int from, int to) const;
  int row_total(int from) const;
  double prob(int from, int to) const;

  /// (flattened row-major index, count) pairs, sorted by index.
  const std::vector<std::pair<int, int>>& entries() const { return entries_; }

  /// Row-major flattened probabilities as a sparse 3600-dim vector.
  SparseVec flat_probs() const;

 private:
  std::vector<std::pair<int, int>> entries_;  // (from*60+to, count)
  std::array<int, kStates> row_totals_{};
};

// ---------------------------------------------------------------------------
// Autoencoder: visible -> logistic hidden -> logistic visible, trained by
// mini-batch SGD with momentum on the mean squared reconstruction error.

struct AutoencoderConfig {
  int hidden = 400;
  int epochs = 50;
  double rate = 0.1;
  double momentum = 0.9;
  int batch = 32;
  /// Per-epoch 1/t decay factor; 0 keeps the rate constant. With decay on,
  /// the recorded loss curve is expected non-increasing within 1e-6 per step.
  double rate_decay = 0.0;
  std::uint64_t seed = 1;
};

struct Autoencoder {
  Eigen::MatrixXd W1;  // visible x hidden
  Eigen::VectorXd b1;  // hidden
  Eigen::MatrixXd W2;  // hidden x visible
  Eigen::VectorXd b2;  // visible
  AutoencoderConfig config;
  std::vector<double> loss_curve;  // full-dataset objective after each epoch

  int visible() const { return static_cast<int>(W1.rows()); }
  int hidden() const { return static_cast<int>(W1.cols()); }

  /// Hidden activations for one input; values in (0, 1).
  Eigen::VectorXd encode(const SparseVec& x) const;
  Eigen::VectorXd encode_dense(const Eigen::VectorXd& x) const;

  /// Mean per-component squared reconstruction error over a dataset.
  double reconstruction_mse(const std::vector<SparseVec>& data) const;
};

/// Trains on the given vectors (entries must lie in [0, 1]). Deterministic
/// given the seed. Throws DataError on empty input, out-of-range entries, or
/// a non-finite loss (learning rate too high).
Autoencoder train_autoencoder(const std::vector<SparseVec>& data, AutoencoderConfig config);

void save_autoencoder(const Autoencoder& model, const std::string& path);
Autoencoder load_autoencoder(const std::string& path);

namespace detail {

/// Objective (mean over samples of half the squared reconstruction error)
/// and its gradients for one dense batch. Shared by the trainer and the
/// finite-difference gradient check.
struct AeGradients {
  double loss = 0;
  Eigen::MatrixXd gW1, gW2;
  Eigen::VectorXd gb1, gb2;
};

AeGradients ae_loss_and_grad(const Autoencoder& model, const Eigen::MatrixXd& batch);

}  // namespace detail

}  // namespace vews
