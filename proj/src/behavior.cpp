#include "gazedyn/behavior.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <string>

#include "gazedyn/error.hpp"

namespace gazedyn::behavior {

namespace {

std::string describe_conditioning(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  char buf[160];
  std::snprintf(buf, sizeof buf, "min eigenvalue %.6g, max eigenvalue %.6g, condition number %.6g",
                lo, hi, lo > 0.0 ? hi / lo : INFINITY);
  return buf;
}

}  // namespace

BehaviorModel::BehaviorModel(ManeuverKind label, Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                             double ridge_epsilon, FeatureConfig config)
    : label_(label),
      mean_(std::move(mean)),
      covariance_(std::move(covariance)),
      ridge_epsilon_(ridge_epsilon),
      config_(config) {
  const auto d = static_cast<Eigen::Index>(config_.dimension());
  if (mean_.size() != d || covariance_.rows() != d || covariance_.cols() != d) {
    throw InvalidArgument("model for " + std::string(maneuver_name(label_)) + " has dimension " +
                          std::to_string(mean_.size()) + " but mode " +
                          std::string(feature_mode_name(config_.mode)) + " needs " +
                          std::to_string(d));
  }
  if (!(ridge_epsilon_ >= 0.0)) throw InvalidArgument("ridge_epsilon must be nonnegative");
  const double magnitude = std::max(1.0, covariance_.cwiseAbs().maxCoeff());
  if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * magnitude) {
    throw InvalidArgument("covariance for " + std::string(maneuver_name(label_)) +
                          " is not symmetric");
  }

  const Eigen::MatrixXd reg = regularized_covariance();
  factor_.compute(reg);
  positive_definite_ = factor_.info() == Eigen::Success &&
                       (factor_.matrixLLT().diagonal().array() > 0.0).all();
  if (!positive_definite_) conditioning_ = describe_conditioning(reg);
}

Eigen::MatrixXd BehaviorModel::regularized_covariance() const {
  const auto d = covariance_.rows();
  const double trace = covariance_.trace();
  const double scale = trace > 0.0 ? trace / static_cast<double>(d) : 1.0;
  Eigen::MatrixXd reg = covariance_;
  reg.diagonal().array() += ridge_epsilon_ * scale;
  return reg;
}

double BehaviorModel::mahalanobis_sq(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != mean_.size()) {
    throw InvalidArgument("feature dimension " + std::to_string(x.size()) +
                          " does not match model dimension " + std::to_string(mean_.size()));
  }
  if (!positive_definite_) {
    throw NumericalError("covariance for " + std::string(maneuver_name(label_)) +
                         " is not positive definite after ridge " +
                         std::to_string(ridge_epsilon_) + ": " + conditioning_);
  }
  const Eigen::VectorXd diff = x - mean_;
  const Eigen::VectorXd half = factor_.matrixL().solve(diff);
  return half.squaredNorm();
}

BehaviorModel fit_behavior_model(std::span<const GlanceFeatureVector> samples, ManeuverKind label,
                                 double ridge_epsilon) {
  if (samples.size() < 2) {
    throw InvalidArgument("fitting " + std::string(maneuver_name(label)) +
                          " needs at least 2 samples, got " + std::to_string(samples.size()));
  }
  const FeatureConfig& config = samples.front().config;
  const auto d = static_cast<Eigen::Index>(config.dimension());

  // Welford accumulation.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  double n = 0.0;
  for (const GlanceFeatureVector& h : samples) {
    if (!h.config.same_features(config)) {
      throw InvalidArgument("training samples for " + std::string(maneuver_name(label)) +
                            " mix feature configurations");
    }
    if (static_cast<Eigen::Index>(h.values.size()) != d) {
      throw InvalidArgument("training sample has " + std::to_string(h.values.size()) +
                            " values, expected " + std::to_string(d));
    }
    const Eigen::Map<const Eigen::VectorXd> x(h.values.data(), d);
    n += 1.0;
    const Eigen::VectorXd before = x - mean;
    mean += before / n;
    scatter.noalias() += before * (x - mean).transpose();
  }
  Eigen::MatrixXd covariance = scatter / (n - 1.0);
  covariance = 0.5 * (covariance + covariance.transpose()).eval();

  FeatureConfig stored = config;
  stored.ridge_epsilon = ridge_epsilon;
  return BehaviorModel(label, std::move(mean), std::move(covariance), ridge_epsilon, stored);
}

double mahalanobis_sq(const GlanceFeatureVector& h, const BehaviorModel& model) {
  if (!h.config.same_features(model.config())) {
    throw InvalidArgument("feature vector (" + std::string(feature_mode_name(h.config.mode)) +
                          ") does not match the model's feature configuration (" +
                          std::string(feature_mode_name(model.config().mode)) + ")");
  }
  const Eigen::Map<const Eigen::VectorXd> x(h.values.data(),
                                            static_cast<Eigen::Index>(h.values.size()));
  return model.mahalanobis_sq(x);
}

double fitness(const GlanceFeatureVector& h, const BehaviorModel& model) {
  return std::exp(-0.5 * mahalanobis_sq(h, model));
}

Classification classify(const GlanceFeatureVector& h, std::span<const BehaviorModel> models) {
  if (models.empty()) throw InvalidArgument("classify needs at least one behavior model");
  Classification out;
  out.fitness.reserve(models.size());
  out.mahalanobis_sq.reserve(models.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const double d2 = mahalanobis_sq(h, models[i]);
    out.mahalanobis_sq.push_back(d2);
    out.fitness.push_back(std::exp(-0.5 * d2));
    if (i == 0) continue;
    const double best_d2 = out.mahalanobis_sq[best];
    if (d2 < best_d2 ||
        (d2 == best_d2 && maneuver_index(models[i].label()) < maneuver_index(models[best].label()))) {
      best = i;
    }
  }
  out.label = models[best].label();
  return out;
}

}  // namespace gazedyn::behavior
