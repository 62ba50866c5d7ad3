#pragma once

#include <cstdint>
#include <vector>

#include "wforge/statesets.hpp"

namespace wforge {

struct SvmConfig {
  double learning_rate = 0.01;  // decays as 1/sqrt(step)
  int batch_size = 64;
  double lambda = 1e-4;
  int epochs = 200;
  std::uint64_t seed = 0;
  bool shuffle = true;

  void validate() const;
};

// Decision function w.f + b over `features`, which never contains the identity
// string: the bias plays the identity coefficient's role.
struct Hyperplane {
  Eigen::VectorXd weights;
  double bias = 0.0;
  FeatureSet features;
};

struct FeatureVector {
  Eigen::VectorXd values;
  FeatureSet features;
};

double decision_value(const Hyperplane& h, const FeatureVector& f);

// Column indices of `subset` within `available`; throws when one is missing.
std::vector<Eigen::Index> feature_columns(const FeatureSet& available, const FeatureSet& subset);

// Design matrix (rows = samples) and labels restricted to `subset`.
struct SvmProblem {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};
SvmProblem make_problem(const TrainingSet& data, const FeatureSet& subset);

// (lambda/2)|w|^2 + mean_i max(0, 1 - y_i (w.x_i + b)), and its (sub)gradient
// with respect to (w, b), b last.
double svm_objective(const SvmProblem& p, const Eigen::VectorXd& w, double b, double lambda);
Eigen::VectorXd svm_gradient(const SvmProblem& p, const Eigen::VectorXd& w, double b, double lambda);

// Mini-batch subgradient descent on the L2-regularized hinge loss. Separable
// samples (label +1) end up on the positive side.
Hyperplane train(const TrainingSet& data, const FeatureSet& subset, const SvmConfig& cfg);

// Fraction of samples whose decision value has the label's strict sign.
double training_accuracy(const Hyperplane& h, const TrainingSet& data);

}  // namespace wforge
