#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vews/error.hpp"

namespace vews {

/// Labels are +1 (benign, the positive class) and -1 (vandal) throughout.

/// Per-feature standardization fitted on training rows only. Zero-variance
/// features pass through unscaled.
class Standardizer {
 public:
  void fit(const Eigen::MatrixXd& X);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd transform_row(const Eigen::VectorXd& x) const;
  bool fitted() const { return mean_.size() > 0; }

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& scale() const { return scale_; }
  void set(Eigen::VectorXd mean, Eigen::VectorXd scale);

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;  // 1 for zero-variance features (and mean 0 there)
};

enum class ModelKind { svm, dtree, rforest, knn };

const char* model_kind_name(ModelKind k);
std::optional<ModelKind> parse_model_kind(const std::string& name);

struct SvmModel {
  Eigen::VectorXd w;
  double b = 0;
  double lambda = 1e-4;
  int epochs = 20;
  /// Regularized objective after each epoch, recomputed over the full
  /// training set from the epoch-end weights.
  std::vector<double> objective_curve;
  /// Epoch-end weight snapshots, kept only when requested at training time.
  std::vector<Eigen::VectorXd> weight_trajectory;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  int left = -1;
  int right = -1;
  int label = +1;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int predict(const Eigen::VectorXd& x) const;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  /// Majority vote; ties go to benign (+1).
  int vote(const Eigen::VectorXd& x) const;
};

struct KnnModel {
  Eigen::MatrixXd train_X;  // standardized
  std::vector<int> train_y;
  int k = 3;
};

struct TrainedModel {
  ModelKind kind = ModelKind::svm;
  std::uint64_t seed = 0;
  Standardizer standardizer;
  std::variant<SvmModel, TreeModel, ForestModel, KnnModel> impl;

  const SvmModel& svm() const { return std::get<SvmModel>(impl); }
};

struct SvmOptions {
  double lambda = 1e-4;
  int epochs = 20;
  bool record_trajectory = false;
};

struct ForestOptions {
  int n_trees = 10;
  bool bootstrap = true;
  /// sqrt(d) feature candidates per split when true, every feature otherwise.
  bool subsample_features = true;
};

/// Primal L2-regularized linear hinge-loss model trained by stochastic
/// subgradient descent with the 1/(lambda*t) step schedule on standardized
/// features. The intercept is set after training so the decision threshold
/// sits midway between the class mean margins.
TrainedModel train_svm(const Eigen::MatrixXd& X, const std::vector<int>& y,
                       SvmOptions options = {}, std::uint64_t seed = 1);

/// Binary tree grown by Gini-impurity minimization over all (feature,
/// midpoint-threshold) candidates; ties break toward the lowest feature
/// index, then the lowest threshold. Leaves predict the majority label.
TrainedModel train_tree(const Eigen::MatrixXd& X, const std::vector<int>& y, int min_split = 2,
                        std::uint64_t seed = 1);

/// Bootstrap-sampled trees with sqrt(d) random feature candidates per split.
TrainedModel train_forest(const Eigen::MatrixXd& X, const std::vector<int>& y,
                          ForestOptions options = {}, std::uint64_t seed = 1);

/// Stores the standardized training set; prediction scans the k nearest by
/// Euclidean distance. Distance ties break toward the lower training-row
/// index, vote ties toward the nearest neighbor's label.
TrainedModel train_knn(const Eigen::MatrixXd& X, const std::vector<int>& y, int k = 3);

std::vector<int> predict(const TrainedModel& model, const Eigen::MatrixXd& X);

/// w.x + b on standardized features; SVM only.
std::vector<double> predict_margin(const TrainedModel& model, const Eigen::MatrixXd& X);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

/// Stable byte serialization of every trained parameter; the no-leakage
/// audit compares digests of this.
std::string serialize_model_bytes(const TrainedModel& model);

}  // namespace vews
