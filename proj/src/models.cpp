#include "vews/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "vews/detail/base64.hpp"
#include "vews/rng.hpp"

namespace vews {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Standardizer

void Standardizer::fit(const Eigen::MatrixXd& X) {
  const double n = static_cast<double>(X.rows());
  mean_ = X.colwise().mean();
  scale_.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - mean_[j]).square().sum() / n;
    const double sd = std::sqrt(var);
    if (sd > 0) {
      scale_[j] = sd;
    } else {
      scale_[j] = 1.0;
      mean_[j] = 0.0;  // zero-variance features pass through unchanged
    }
  }
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& X) const {
  return (X.rowwise() - mean_.transpose()).array().rowwise() / scale_.transpose().array();
}

Eigen::VectorXd Standardizer::transform_row(const Eigen::VectorXd& x) const {
  return (x - mean_).cwiseQuotient(scale_);
}

void Standardizer::set(Eigen::VectorXd mean, Eigen::VectorXd scale) {
  mean_ = std::move(mean);
  scale_ = std::move(scale);
}

const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::svm: return "svm";
    case ModelKind::dtree: return "dtree";
    case ModelKind::rforest: return "rforest";
    case ModelKind::knn: return "knn";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(const std::string& name) {
  if (name == "svm") return ModelKind::svm;
  if (name == "dtree") return ModelKind::dtree;
  if (name == "rforest") return ModelKind::rforest;
  if (name == "knn") return ModelKind::knn;
  return std::nullopt;
}

namespace {

void check_two_classes(const std::vector<int>& y) {
  const bool pos = std::any_of(y.begin(), y.end(), [](int v) { return v > 0; });
  const bool neg = std::any_of(y.begin(), y.end(), [](int v) { return v <= 0; });
  if (!pos || !neg) throw DataError("training data must contain both classes");
}

}  // namespace

// ---------------------------------------------------------------------------
// SVM (Pegasos)

TrainedModel train_svm(const Eigen::MatrixXd& X, const std::vector<int>& y, SvmOptions options,
                       std::uint64_t seed) {
  if (static_cast<std::size_t>(X.rows()) != y.size() || y.empty()) {
    throw DataError("train_svm: rows and labels must match and be nonempty");
  }
  check_two_classes(y);

  TrainedModel model;
  model.kind = ModelKind::svm;
  model.seed = seed;
  model.standardizer.fit(X);
  const Eigen::MatrixXd Z = model.standardizer.transform(X);

  SvmModel svm;
  svm.lambda = options.lambda;
  svm.epochs = options.epochs;
  svm.w = Eigen::VectorXd::Zero(Z.cols());

  Rng rng(seed);
  std::vector<int> order(Z.rows());
  std::iota(order.begin(), order.end(), 0);

  std::uint64_t t = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    for (int i : order) {
      ++t;
      const double eta = 1.0 / (options.lambda * static_cast<double>(t));
      const double margin = y[i] * Z.row(i).dot(svm.w);
      svm.w *= (1.0 - eta * options.lambda);
      if (margin < 1.0) svm.w += (eta * y[i]) * Z.row(i).transpose();
    }
    double hinge = 0;
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
      hinge += std::max(0.0, 1.0 - y[i] * Z.row(i).dot(svm.w));
    }
    svm.objective_curve.push_back(0.5 * options.lambda * svm.w.squaredNorm() +
                                  hinge / static_cast<double>(Z.rows()));
    if (options.record_trajectory) svm.weight_trajectory.push_back(svm.w);
  }

  // Intercept: midpoint of the class mean margins. On mirror-symmetric data
  // the two means cancel exactly, leaving b = 0.
  double sum_pos = 0, sum_neg = 0;
  std::size_t n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    const double m = Z.row(i).dot(svm.w);
    if (y[i] > 0) {
      sum_pos += m;
      ++n_pos;
    } else {
      sum_neg += m;
      ++n_neg;
    }
  }
  svm.b = -0.5 * (sum_pos / static_cast<double>(n_pos) + sum_neg / static_cast<double>(n_neg));

  model.impl = std::move(svm);
  return model;
}

// ---------------------------------------------------------------------------
// Decision tree

int TreeModel::predict(const Eigen::VectorXd& x) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    node = x[nodes[node].feature] < nodes[node].threshold ? nodes[node].left : nodes[node].right;
  }
  return nodes[node].label;
}

int ForestModel::vote(const Eigen::VectorXd& x) const {
  int balance = 0;
  for (const auto& t : trees) balance += t.predict(x);
  return balance >= 0 ? +1 : -1;
}

namespace {

struct TreeBuilder {
  const Eigen::MatrixXd& X;
  const std::vector<int>& y;
  int min_split;
  int max_features;  // <= 0 means all features
  Rng* rng;          // only consulted when subsampling features
  TreeModel tree;

  static double gini(std::size_t pos, std::size_t n) {
    if (n == 0) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(n);
    return 2.0 * p * (1.0 - p);
  }

  int build(std::vector<int> idx) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    std::size_t pos = 0;
    for (int i : idx) pos += y[i] > 0;
    // Majority label; exact ties go to benign.
    tree.nodes[node_id].label = 2 * pos >= idx.size() ? +1 : -1;

    if (idx.size() < static_cast<std::size_t>(min_split) || pos == 0 || pos == idx.size()) {
      return node_id;
    }

    std::vector<int> candidates(X.cols());
    std::iota(candidates.begin(), candidates.end(), 0);
    if (max_features > 0 && max_features < static_cast<int>(candidates.size())) {
      // Partial Fisher-Yates: the first max_features entries become the draw.
      for (int i = 0; i < max_features; ++i) {
        const std::size_t j = i + rng->below(candidates.size() - i);
        std::swap(candidates[i], candidates[j]);
      }
      candidates.resize(max_features);
      std::sort(candidates.begin(), candidates.end());
    }

    int best_feature = -1;
    double best_threshold = 0;
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, int>> values(idx.size());
    for (int f : candidates) {
      for (std::size_t i = 0; i < idx.size(); ++i) values[i] = {X(idx[i], f), y[idx[i]] > 0};
      std::sort(values.begin(), values.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::size_t left_n = 0, left_pos = 0;
      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        ++left_n;
        left_pos += values[i].second;
        if (values[i].first == values[i + 1].first) continue;
        const std::size_t right_n = values.size() - left_n;
        const std::size_t right_pos = pos - left_pos;
        const double score = (static_cast<double>(left_n) * gini(left_pos, left_n) +
                              static_cast<double>(right_n) * gini(right_pos, right_n)) /
                             static_cast<double>(values.size());
        if (score < best_score) {
          best_score = score;
          best_feature = f;
          best_threshold = 0.5 * (values[i].first + values[i + 1].first);
        }
      }
    }
    if (best_feature < 0) return node_id;  // no splittable candidate

    std::vector<int> left, right;
    for (int i : idx) (X(i, best_feature) < best_threshold ? left : right).push_back(i);
    if (left.empty() || right.empty()) return node_id;

    idx.clear();
    idx.shrink_to_fit();
    tree.nodes[node_id].feature = best_feature;
    tree.nodes[node_id].threshold = best_threshold;
    const int l = build(std::move(left));
    tree.nodes[node_id].left = l;
    const int r = build(std::move(right));
    tree.nodes[node_id].right = r;
    return node_id;
  }
};

TreeModel grow_tree(const Eigen::MatrixXd& X, const std::vector<int>& y, std::vector<int> idx,
                    int min_split, int max_features, Rng* rng) {
  TreeBuilder builder{X, y, min_split, max_features, rng, {}};
  builder.build(std::move(idx));
  return std::move(builder.tree);
}

}  // namespace

TrainedModel train_tree(const Eigen::MatrixXd& X, const std::vector<int>& y, int min_split,
                        std::uint64_t seed) {
  if (static_cast<std::size_t>(X.rows()) != y.size() || y.empty()) {
    throw DataError("train_tree: rows and labels must match and be nonempty");
  }
  TrainedModel model;
  model.kind = ModelKind::dtree;
  model.seed = seed;
  model.standardizer.fit(X);
  const Eigen::MatrixXd Z = model.standardizer.transform(X);
  std::vector<int> idx(Z.rows());
  std::iota(idx.begin(), idx.end(), 0);
  model.impl = grow_tree(Z, y, std::move(idx), min_split, 0, nullptr);
  return model;
}

TrainedModel train_forest(const Eigen::MatrixXd& X, const std::vector<int>& y,
                          ForestOptions options, std::uint64_t seed) {
  if (static_cast<std::size_t>(X.rows()) != y.size() || y.empty()) {
    throw DataError("train_forest: rows and labels must match and be nonempty");
  }
  TrainedModel model;
  model.kind = ModelKind::rforest;
  model.seed = seed;
  model.standardizer.fit(X);
  const Eigen::MatrixXd Z = model.standardizer.transform(X);

  const int max_features =
      options.subsample_features
          ? std::max(1, static_cast<int>(std::sqrt(static_cast<double>(Z.cols()))))
          : 0;

  ForestModel forest;
  forest.trees.reserve(options.n_trees);
  for (int t = 0; t < options.n_trees; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<int> idx(Z.rows());
    if (options.bootstrap) {
      for (auto& i : idx) i = static_cast<int>(rng.below(Z.rows()));
    } else {
      std::iota(idx.begin(), idx.end(), 0);
    }
    forest.trees.push_back(grow_tree(Z, y, std::move(idx), 2, max_features, &rng));
  }
  model.impl = std::move(forest);
  return model;
}

// ---------------------------------------------------------------------------
// k-nearest neighbors

TrainedModel train_knn(const Eigen::MatrixXd& X, const std::vector<int>& y, int k) {
  if (static_cast<std::size_t>(X.rows()) != y.size() || y.empty()) {
    throw DataError("train_knn: rows and labels must match and be nonempty");
  }
  TrainedModel model;
  model.kind = ModelKind::knn;
  model.standardizer.fit(X);
  KnnModel knn;
  knn.train_X = model.standardizer.transform(X);
  knn.train_y = y;
  knn.k = k;
  model.impl = std::move(knn);
  return model;
}

namespace {

int knn_classify(const KnnModel& knn, const Eigen::VectorXd& z) {
  const Eigen::Index n = knn.train_X.rows();
  const int k = std::min<int>(knn.k, static_cast<int>(n));
  std::vector<std::pair<double, int>> dist(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dist[i] = {(knn.train_X.row(i).transpose() - z).squaredNorm(), static_cast<int>(i)};
  }
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());  // (distance, index) order
  int balance = 0;
  for (int i = 0; i < k; ++i) balance += knn.train_y[dist[i].second];
  if (balance != 0) return balance > 0 ? +1 : -1;
  return knn.train_y[dist[0].second];
}

}  // namespace

// ---------------------------------------------------------------------------
// Prediction

std::vector<int> predict(const TrainedModel& model, const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd Z = model.standardizer.transform(X);
  std::vector<int> out(Z.rows());
  switch (model.kind) {
    case ModelKind::svm: {
      const auto& svm = std::get<SvmModel>(model.impl);
      for (Eigen::Index i = 0; i < Z.rows(); ++i) {
        out[i] = Z.row(i).dot(svm.w) + svm.b >= 0 ? +1 : -1;
      }
      break;
    }
    case ModelKind::dtree: {
      const auto& tree = std::get<TreeModel>(model.impl);
      for (Eigen::Index i = 0; i < Z.rows(); ++i) out[i] = tree.predict(Z.row(i).transpose());
      break;
    }
    case ModelKind::rforest: {
      const auto& forest = std::get<ForestModel>(model.impl);
      for (Eigen::Index i = 0; i < Z.rows(); ++i) out[i] = forest.vote(Z.row(i).transpose());
      break;
    }
    case ModelKind::knn: {
      const auto& knn = std::get<KnnModel>(model.impl);
      for (Eigen::Index i = 0; i < Z.rows(); ++i) out[i] = knn_classify(knn, Z.row(i).transpose());
      break;
    }
  }
  return out;
}

std::vector<double> predict_margin(const TrainedModel& model, const Eigen::MatrixXd& X) {
  if (model.kind != ModelKind::svm) throw DataError("predict_margin: SVM models only");
  const auto& svm = std::get<SvmModel>(model.impl);
  const Eigen::MatrixXd Z = model.standardizer.transform(X);
  std::vector<double> out(Z.rows());
  for (Eigen::Index i = 0; i < Z.rows(); ++i) out[i] = Z.row(i).dot(svm.w) + svm.b;
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json tree_to_json(const TreeModel& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    nodes.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right},
                     {"y", n.label}});
  }
  return nodes;
}

TreeModel tree_from_json(const json& nodes) {
  TreeModel tree;
  for (const auto& n : nodes) {
    tree.nodes.push_back({n.at("f").get<int>(), n.at("t").get<double>(), n.at("l").get<int>(),
                          n.at("r").get<int>(), n.at("y").get<int>()});
  }
  return tree;
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
  json j{
      {"format", "vews-model"},
      {"version", 1},
      {"kind", model_kind_name(model.kind)},
      {"seed", model.seed},
      {"standardizer",
       {{"mean", detail::encode_vector(model.standardizer.mean())},
        {"scale", detail::encode_vector(model.standardizer.scale())},
        {"dim", model.standardizer.mean().size()}}},
  };
  switch (model.kind) {
    case ModelKind::svm: {
      const auto& svm = std::get<SvmModel>(model.impl);
      j["svm"] = {{"w", detail::encode_vector(svm.w)}, {"dim", svm.w.size()}, {"b", svm.b},
                  {"lambda", svm.lambda},              {"epochs", svm.epochs},
                  {"objective_curve", svm.objective_curve}};
      break;
    }
    case ModelKind::dtree:
      j["tree"] = tree_to_json(std::get<TreeModel>(model.impl));
      break;
    case ModelKind::rforest: {
      json trees = json::array();
      for (const auto& t : std::get<ForestModel>(model.impl).trees) trees.push_back(tree_to_json(t));
      j["forest"] = std::move(trees);
      break;
    }
    case ModelKind::knn: {
      const auto& knn = std::get<KnnModel>(model.impl);
      j["knn"] = {{"k", knn.k},
                  {"rows", knn.train_X.rows()},
                  {"cols", knn.train_X.cols()},
                  {"X", detail::encode_matrix(knn.train_X)},
                  {"y", knn.train_y}};
      break;
    }
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  if (j.value("format", "") != "vews-model" || j.value("version", 0) != 1) {
    throw DataError(path + ": not a vews-model(v1) file");
  }
  TrainedModel model;
  const auto kind = parse_model_kind(j.at("kind").get<std::string>());
  if (!kind) throw DataError(path + ": unknown model kind");
  model.kind = *kind;
  model.seed = j.at("seed").get<std::uint64_t>();
  const auto& st = j.at("standardizer");
  const Eigen::Index dim = st.at("dim").get<Eigen::Index>();
  model.standardizer.set(detail::decode_vector(st.at("mean").get<std::string>(), dim),
                         detail::decode_vector(st.at("scale").get<std::string>(), dim));
  switch (model.kind) {
    case ModelKind::svm: {
      SvmModel svm;
      const auto& js = j.at("svm");
      svm.w = detail::decode_vector(js.at("w").get<std::string>(), js.at("dim").get<Eigen::Index>());
      svm.b = js.at("b").get<double>();
      svm.lambda = js.at("lambda").get<double>();
      svm.epochs = js.at("epochs").get<int>();
      svm.objective_curve = js.at("objective_curve").get<std::vector<double>>();
      model.impl = std::move(svm);
      break;
    }
    case ModelKind::dtree:
      model.impl = tree_from_json(j.at("tree"));
      break;
    case ModelKind::rforest: {
      ForestModel forest;
      for (const auto& t : j.at("forest")) forest.trees.push_back(tree_from_json(t));
      model.impl = std::move(forest);
      break;
    }
    case ModelKind::knn: {
      KnnModel knn;
      const auto& jk = j.at("knn");
      knn.k = jk.at("k").get<int>();
      knn.train_X = detail::decode_matrix(jk.at("X").get<std::string>(),
                                          jk.at("rows").get<Eigen::Index>(),
                                          jk.at("cols").get<Eigen::Index>());
      knn.train_y = jk.at("y").get<std::vector<int>>();
      model.impl = std::move(knn);
      break;
    }
  }
  return model;
}

namespace {

void append_doubles(std::string& out, const double* data, std::size_t count) {
  out.append(reinterpret_cast<const char*>(data), count * sizeof(double));
}

void append_tree(std::string& out, const TreeModel& tree) {
  for (const auto& n : tree.nodes) {
    out.append(reinterpret_cast<const char*>(&n.feature), sizeof(n.feature));
    append_doubles(out, &n.threshold, 1);
    out.append(reinterpret_cast<const char*>(&n.left), sizeof(n.left));
    out.append(reinterpret_cast<const char*>(&n.right), sizeof(n.right));
    out.append(reinterpret_cast<const char*>(&n.label), sizeof(n.label));
  }
}

}  // namespace

std::string serialize_model_bytes(const TrainedModel& model) {
  std::string out;
  out += model_kind_name(model.kind);
  if (model.standardizer.fitted()) {
    append_doubles(out, model.standardizer.mean().data(), model.standardizer.mean().size());
    append_doubles(out, model.standardizer.scale().data(), model.standardizer.scale().size());
  }
  switch (model.kind) {
    case ModelKind::svm: {
      const auto& svm = std::get<SvmModel>(model.impl);
      append_doubles(out, svm.w.data(), svm.w.size());
      append_doubles(out, &svm.b, 1);
      break;
    }
    case ModelKind::dtree:
      append_tree(out, std::get<TreeModel>(model.impl));
      break;
    case ModelKind::rforest:
      for (const auto& t : std::get<ForestModel>(model.impl).trees) append_tree(out, t);
      break;
    case ModelKind::knn: {
      const auto& knn = std::get<KnnModel>(model.impl);
      append_doubles(out, knn.train_X.data(), knn.train_X.size());
      for (int v : knn.train_y) out.append(reinterpret_cast<const char*>(&v), sizeof(v));
      break;
    }
  }
  return out;
}

}  // namespace vews
