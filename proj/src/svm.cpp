#include "wforge/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace wforge {

void SvmConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidInput("svm.learning_rate must be positive");
  if (batch_size < 1) throw InvalidInput("svm.batch_size must be at least 1");
  if (!(lambda >= 0.0)) throw InvalidInput("svm.lambda must be non-negative");
  if (epochs < 1) throw InvalidInput("svm.epochs must be at least 1");
}

double decision_value(const Hyperplane& h, const FeatureVector& f) {
  if (f.features != h.features || f.values.size() != h.weights.size())
    throw InvalidInput("feature vector is not aligned with the hyperplane's feature set");
  return h.weights.dot(f.values) + h.bias;
}

std::vector<Eigen::Index> feature_columns(const FeatureSet& available, const FeatureSet& subset) {
  std::unordered_map<PauliString, Eigen::Index> where;
  for (std::size_t i = 0; i < available.size(); ++i) where.emplace(available[i], static_cast<Eigen::Index>(i));
  std::vector<Eigen::Index> cols;
  cols.reserve(subset.size());
  for (const auto& p : subset) {
    auto it = where.find(p);
    if (it == where.end()) throw InvalidInput("feature " + p.str() + " is not present in the data");
    cols.push_back(it->second);
  }
  return cols;
}

SvmProblem make_problem(const TrainingSet& data, const FeatureSet& subset) {
  const auto cols = feature_columns(data.features, subset);
  SvmProblem p;
  p.x.resize(static_cast<Eigen::Index>(data.samples.size()), static_cast<Eigen::Index>(cols.size()));
  p.y.resize(static_cast<Eigen::Index>(data.samples.size()));
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t k = 0; k < cols.size(); ++k) p.x(r, static_cast<Eigen::Index>(k)) = data.samples[i].features(cols[k]);
    p.y(r) = data.samples[i].label;
  }
  return p;
}

double svm_objective(const SvmProblem& p, const Eigen::VectorXd& w, double b, double lambda) {
  const Eigen::ArrayXd margins = p.y.array() * ((p.x * w).array() + b);
  return 0.5 * lambda * w.squaredNorm() + (1.0 - margins).max(0.0).mean();
}

Eigen::VectorXd svm_gradient(const SvmProblem& p, const Eigen::VectorXd& w, double b, double lambda) {
  const auto m = p.x.rows();
  const Eigen::ArrayXd margins = p.y.array() * ((p.x * w).array() + b);
  Eigen::VectorXd active = (margins < 1.0).cast<double>().matrix().cwiseProduct(p.y);
  Eigen::VectorXd g(w.size() + 1);
  g.head(w.size()) = lambda * w - p.x.transpose() * active / static_cast<double>(m);
  g(w.size()) = -active.sum() / static_cast<double>(m);
  return g;
}

Hyperplane train(const TrainingSet& data, const FeatureSet& subset, const SvmConfig& cfg) {
  cfg.validate();
  if (subset.empty()) throw InvalidInput("feature subset is empty");
  for (const auto& f : subset)
    if (f.is_identity()) throw InvalidInput("the identity string is the bias and cannot be a trained feature");
  data.validate_for_training();

  const SvmProblem prob = make_problem(data, subset);
  const auto m = prob.x.rows();
  const auto d = prob.x.cols();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(cfg.seed);

  const Eigen::Index batch = std::min<Eigen::Index>(cfg.batch_size, m);
  std::int64_t step = 0;
  Eigen::VectorXd gw(d);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < m; start += batch) {
      const Eigen::Index end = std::min(start + batch, m);
      const double scale = 1.0 / static_cast<double>(end - start);
      gw.setZero();
      double gb = 0.0;
      for (Eigen::Index k = start; k < end; ++k) {
        const Eigen::Index i = order[static_cast<std::size_t>(k)];
        const double yi = prob.y(i);
        if (yi * (prob.x.row(i).dot(w) + b) < 1.0) {
          gw.noalias() -= yi * prob.x.row(i).transpose();
          gb -= yi;
        }
      }
      ++step;
      const double lr = cfg.learning_rate / std::sqrt(static_cast<double>(step));
      w -= lr * (cfg.lambda * w + scale * gw);
      b -= lr * scale * gb;
    }
    if (!w.allFinite() || !std::isfinite(b)) {
      std::ostringstream diag;
      diag << "epoch=" << epoch << " step=" << step << " |w|=" << w.norm() << " b=" << b;
      throw NumericalFailure("SVM training diverged", diag.str());
    }
  }
  const double objective = svm_objective(prob, w, b, cfg.lambda);
  if (!std::isfinite(objective)) throw NumericalFailure("SVM objective is not finite");
  return Hyperplane{w, b, subset};
}

double training_accuracy(const Hyperplane& h, const TrainingSet& data) {
  if (data.samples.empty()) return 0.0;
  const auto cols = feature_columns(data.features, h.features);
  std::size_t correct = 0;
  for (const auto& s : data.samples) {
    double v = h.bias;
    for (std::size_t k = 0; k < cols.size(); ++k) v += h.weights(static_cast<Eigen::Index>(k)) * s.features(cols[k]);
    if ((s.label > 0 && v > 0.0) || (s.label < 0 && v < 0.0)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.samples.size());
}

}  // namespace wforge
