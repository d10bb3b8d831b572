#include "vews/wtpm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "vews/detail/base64.hpp"
#include "vews/error.hpp"
#include "vews/rng.hpp"

namespace vews {

using nlohmann::json;

// ---------------------------------------------------------------------------
// State space

int state_index(const StateParts& parts) {
  return (parts.meta ? 30 : 0) + static_cast<int>(parts.time) * 10 +
         static_cast<int>(parts.relation);
}

StateParts decode_state(int index) {
  StateParts parts;
  parts.meta = index >= 30;
  parts.time = static_cast<TimeBucket>(index % 30 / 10);
  parts.relation = static_cast<Relation>(index % 10);
  return parts;
}

int state_of(const PairFeatures& row) {
  StateParts parts;
  parts.meta = row.is_meta2;
  parts.time = row.time;
  if (row.is_first) {
    parts.relation = Relation::first_edit;
  } else if (row.is_reedit) {
    parts.relation = row.same_page_consecutive ? Relation::reedit_consecutive
                                               : Relation::reedit_nonconsecutive;
  } else if (row.common_cats == CommonCats::null_info) {
    parts.relation = Relation::new_null_category;
  } else {
    const bool common = row.common_cats == CommonCats::at_least_one;
    switch (*row.hop) {
      case HopBucket::within_3:
        parts.relation = common ? Relation::new_within3_common : Relation::new_within3_nocommon;
        break;
      case HopBucket::more_than_3:
        parts.relation = common ? Relation::new_far_common : Relation::new_far_nocommon;
        break;
      case HopBucket::unreachable:
        parts.relation =
            common ? Relation::new_unreachable_common : Relation::new_unreachable_nocommon;
        break;
    }
  }
  return state_index(parts);
}

PairFeatures representative_row(const StateParts& parts) {
  PairFeatures row;
  row.user = "u";
  row.p2 = "p2";
  row.is_meta2 = parts.meta;
  row.time = parts.time;
  switch (parts.relation) {
    case Relation::first_edit:
      row.is_first = true;
      return row;
    case Relation::reedit_consecutive:
      row.p1 = row.p2;
      row.is_reedit = true;
      row.same_page_consecutive = true;
      return row;
    case Relation::reedit_nonconsecutive:
      row.p1 = "p1";
      row.is_reedit = true;
      return row;
    default:
      break;
  }
  row.p1 = "p1";
  switch (parts.relation) {
    case Relation::new_within3_common:
      row.hop = HopBucket::within_3;
      row.common_cats = CommonCats::at_least_one;
      break;
    case Relation::new_within3_nocommon:
      row.hop = HopBucket::within_3;
      row.common_cats = CommonCats::none;
      break;
    case Relation::new_far_common:
      row.hop = HopBucket::more_than_3;
      row.common_cats = CommonCats::at_least_one;
      break;
    case Relation::new_far_nocommon:
      row.hop = HopBucket::more_than_3;
      row.common_cats = CommonCats::none;
      break;
    case Relation::new_unreachable_common:
      row.hop = HopBucket::unreachable;
      row.common_cats = CommonCats::at_least_one;
      break;
    case Relation::new_unreachable_nocommon:
      row.hop = HopBucket::unreachable;
      row.common_cats = CommonCats::none;
      break;
    case Relation::new_null_category:
      row.hop = HopBucket::within_3;
      row.common_cats = CommonCats::null_info;
      break;
    default:
      break;
  }
  return row;
}

// ---------------------------------------------------------------------------
// Transition matrix

Eigen::VectorXd SparseVec::dense() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (const auto& [i, val] : entries) v[i] = val;
  return v;
}

SparseVec SparseVec::from_dense(const Eigen::VectorXd& v, double keep_above) {
  SparseVec s;
  s.dim = static_cast<int>(v.size());
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > keep_above) s.entries.emplace_back(i, v[i]);
  }
  return s;
}

TransitionMatrix TransitionMatrix::from_log(const UserLog& log, std::optional<int> k) {
  std::size_t n = log.rows.size();
  if (k) n = std::min<std::size_t>(n, *k < 0 ? 0 : static_cast<std::size_t>(*k));
  std::vector<int> states(n);
  for (std::size_t i = 0; i < n; ++i) states[i] = state_of(log.rows[i]);
  return from_states(states);
}

TransitionMatrix TransitionMatrix::from_states(const std::vector<int>& states) {
  TransitionMatrix m;
  std::vector<std::pair<int, int>> flat;
  flat.reserve(states.size());
  for (std::size_t i = 1; i < states.size(); ++i) {
    flat.emplace_back(states[i - 1] * kStates + states[i], 1);
  }
  std::sort(flat.begin(), flat.end());
  for (const auto& [idx, one] : flat) {
    if (!m.entries_.empty() && m.entries_.back().first == idx) {
      m.entries_.back().second += one;
    } else {
      m.entries_.emplace_back(idx, one);
    }
    m.row_totals_[idx / kStates] += one;
  }
  return m;
}

int TransitionMatrix::count(int from, int to) const {
  const int idx = from * kStates + to;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(idx, 0));
  return it != entries_.end() && it->first == idx ? it->second : 0;
}

int TransitionMatrix::row_total(int from) const { return row_totals_[from]; }

double TransitionMatrix::prob(int from, int to) const {
  const int total = row_totals_[from];
  if (total == 0) return 0.0;
  return static_cast<double>(count(from, to)) / static_cast<double>(total);
}

SparseVec TransitionMatrix::flat_probs() const {
  SparseVec v;
  v.dim = kStates * kStates;
  v.entries.reserve(entries_.size());
  for (const auto& [idx, c] : entries_) {
    v.entries.emplace_back(idx, static_cast<double>(c) / row_totals_[idx / kStates]);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Autoencoder

namespace {

inline void sigmoid_inplace(Eigen::MatrixXd& m) {
  m = 1.0 / (1.0 + (-m.array()).exp());
}

void scatter_batch(const std::vector<SparseVec>& data, const std::vector<int>& order,
                   std::size_t begin, std::size_t end, Eigen::MatrixXd& batch) {
  batch.setZero(static_cast<Eigen::Index>(end - begin), data[0].dim);
  for (std::size_t r = begin; r < end; ++r) {
    for (const auto& [i, val] : data[order[r]].entries) {
      batch(static_cast<Eigen::Index>(r - begin), i) = val;
    }
  }
}

double full_loss(const Autoencoder& model, const std::vector<SparseVec>& data) {
  // Objective only; evaluated in chunks to keep the working set small.
  const std::size_t chunk = 256;
  double total = 0;
  Eigen::MatrixXd batch;
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t begin = 0; begin < data.size(); begin += chunk) {
    const std::size_t end = std::min(begin + chunk, data.size());
    scatter_batch(data, order, begin, end, batch);
    Eigen::MatrixXd H = (batch * model.W1).rowwise() + model.b1.transpose();
    sigmoid_inplace(H);
    Eigen::MatrixXd Y = (H * model.W2).rowwise() + model.b2.transpose();
    sigmoid_inplace(Y);
    total += 0.5 * (Y - batch).squaredNorm();
  }
  return total / static_cast<double>(data.size());
}

}  // namespace

Eigen::VectorXd Autoencoder::encode(const SparseVec& x) const {
  if (x.dim != visible()) throw DataError("encode: input dimension mismatch");
  Eigen::VectorXd pre = b1;
  for (const auto& [i, val] : x.entries) pre += W1.row(i).transpose() * val;
  return (1.0 / (1.0 + (-pre.array()).exp())).matrix();
}

Eigen::VectorXd Autoencoder::encode_dense(const Eigen::VectorXd& x) const {
  if (x.size() != visible()) throw DataError("encode: input dimension mismatch");
  Eigen::VectorXd pre = W1.transpose() * x + b1;
  return (1.0 / (1.0 + (-pre.array()).exp())).matrix();
}

double Autoencoder::reconstruction_mse(const std::vector<SparseVec>& data) const {
  if (data.empty()) return 0.0;
  return 2.0 * full_loss(*this, data) / static_cast<double>(visible());
}

namespace detail {

AeGradients ae_loss_and_grad(const Autoencoder& model, const Eigen::MatrixXd& batch) {
  const double m = static_cast<double>(batch.rows());
  Eigen::MatrixXd H = (batch * model.W1).rowwise() + model.b1.transpose();
  sigmoid_inplace(H);
  Eigen::MatrixXd Y = (H * model.W2).rowwise() + model.b2.transpose();
  sigmoid_inplace(Y);

  const Eigen::MatrixXd E = Y - batch;
  AeGradients g;
  g.loss = 0.5 * E.squaredNorm() / m;
  const Eigen::MatrixXd dZ2 = (E.array() * Y.array() * (1.0 - Y.array())).matrix() / m;
  g.gW2 = H.transpose() * dZ2;
  g.gb2 = dZ2.colwise().sum();
  const Eigen::MatrixXd dZ1 =
      ((dZ2 * model.W2.transpose()).array() * H.array() * (1.0 - H.array())).matrix();
  g.gW1 = batch.transpose() * dZ1;
  g.gb1 = dZ1.colwise().sum();
  return g;
}

}  // namespace detail

Autoencoder train_autoencoder(const std::vector<SparseVec>& data, AutoencoderConfig config) {
  if (data.empty()) throw DataError("train_autoencoder: no training vectors");
  const int visible = data[0].dim;
  for (const auto& v : data) {
    if (v.dim != visible) throw DataError("train_autoencoder: inconsistent input dimensions");
    for (const auto& [i, val] : v.entries) {
      if (!(val >= 0.0 && val <= 1.0)) {
        throw DataError("train_autoencoder: inputs must lie in [0, 1]");
      }
    }
  }

  Autoencoder model;
  model.config = config;
  Rng rng(config.seed);

  const double a1 = std::sqrt(6.0 / (visible + config.hidden));
  const double a2 = std::sqrt(6.0 / (config.hidden + visible));
  model.W1.resize(visible, config.hidden);
  for (Eigen::Index r = 0; r < model.W1.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.W1.cols(); ++c) model.W1(r, c) = rng.uniform(-a1, a1);
  }
  model.b1 = Eigen::VectorXd::Zero(config.hidden);
  model.W2.resize(config.hidden, visible);
  for (Eigen::Index r = 0; r < model.W2.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.W2.cols(); ++c) model.W2(r, c) = rng.uniform(-a2, a2);
  }
  model.b2 = Eigen::VectorXd::Zero(visible);

  Eigen::MatrixXd vW1 = Eigen::MatrixXd::Zero(visible, config.hidden);
  Eigen::VectorXd vb1 = Eigen::VectorXd::Zero(config.hidden);
  Eigen::MatrixXd vW2 = Eigen::MatrixXd::Zero(config.hidden, visible);
  Eigen::VectorXd vb2 = Eigen::VectorXd::Zero(visible);

  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Eigen::MatrixXd batch;
  const std::size_t batch_size = std::max(1, config.batch);

  model.loss_curve.reserve(config.epochs);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.rate / (1.0 + config.rate_decay * epoch);
    rng.shuffle(order);
    for (std::size_t begin = 0; begin < data.size(); begin += batch_size) {
      const std::size_t end = std::min(begin + batch_size, data.size());
      scatter_batch(data, order, begin, end, batch);
      const detail::AeGradients g = detail::ae_loss_and_grad(model, batch);
      if (!std::isfinite(g.loss)) {
        throw DataError("train_autoencoder: non-finite loss at epoch " + std::to_string(epoch) +
                        "; lower the learning rate");
      }
      vW1 = config.momentum * vW1 - lr * g.gW1;
      vb1 = config.momentum * vb1 - lr * g.gb1;
      vW2 = config.momentum * vW2 - lr * g.gW2;
      vb2 = config.momentum * vb2 - lr * g.gb2;
      model.W1 += vW1;
      model.b1 += vb1;
      model.W2 += vW2;
      model.b2 += vb2;
    }
    const double loss = full_loss(model, data);
    if (!std::isfinite(loss)) {
      throw DataError("train_autoencoder: non-finite loss at epoch " + std::to_string(epoch) +
                      "; lower the learning rate");
    }
    model.loss_curve.push_back(loss);
  }
  return model;
}

// ---------------------------------------------------------------------------
// Persistence: a self-describing JSON container. Parameter arrays are raw
// little-endian doubles in base64, so a reload reproduces activations
// bit-exactly.

void save_autoencoder(const Autoencoder& model, const std::string& path) {
  json j{
      {"format", "vews-autoencoder"},
      {"version", 1},
      {"visible", model.visible()},
      {"hidden", model.hidden()},
      {"seed", model.config.seed},
      {"epochs", model.config.epochs},
      {"rate", model.config.rate},
      {"momentum", model.config.momentum},
      {"batch", model.config.batch},
      {"rate_decay", model.config.rate_decay},
      {"loss_curve", model.loss_curve},
      {"W1", detail::encode_matrix(model.W1)},
      {"b1", detail::encode_vector(model.b1)},
      {"W2", detail::encode_matrix(model.W2)},
      {"b2", detail::encode_vector(model.b2)},
  };
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
}

Autoencoder load_autoencoder(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  if (j.value("format", "") != "vews-autoencoder" || j.value("version", 0) != 1) {
    throw DataError(path + ": not a vews-autoencoder(v1) file");
  }
  Autoencoder model;
  const int visible = j.at("visible").get<int>();
  model.config.hidden = j.at("hidden").get<int>();
  model.config.seed = j.at("seed").get<std::uint64_t>();
  model.config.epochs = j.at("epochs").get<int>();
  model.config.rate = j.at("rate").get<double>();
  model.config.momentum = j.at("momentum").get<double>();
  model.config.batch = j.at("batch").get<int>();
  model.config.rate_decay = j.at("rate_decay").get<double>();
  model.loss_curve = j.at("loss_curve").get<std::vector<double>>();
  model.W1 = detail::decode_matrix(j.at("W1").get<std::string>(), visible, model.config.hidden);
  model.b1 = detail::decode_vector(j.at("b1").get<std::string>(), model.config.hidden);
  model.W2 = detail::decode_matrix(j.at("W2").get<std::string>(), model.config.hidden, visible);
  model.b2 = detail::decode_vector(j.at("b2").get<std::string>(), visible);
  return model;
}

}  // namespace vews
