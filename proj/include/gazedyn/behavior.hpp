#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "gazedyn/types.hpp"

namespace gazedyn::behavior {

/// Per-maneuver gaze-behavior model: sample mean and covariance of the
/// training descriptors, scored with an unnormalized Gaussian.
///
/// The covariance is stored unregularized. Scoring solves against
/// covariance + ridge_epsilon * scale * I, where scale is trace / d (1 when
/// the trace is zero), through a Cholesky factor computed once here.
class BehaviorModel {
 public:
  /// Throws InvalidArgument when dimensions disagree with the config or the
  /// covariance is not symmetric within 1e-9 (relative to its largest entry).
  BehaviorModel(ManeuverKind label, Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                double ridge_epsilon, FeatureConfig config);

  ManeuverKind label() const { return label_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  double ridge_epsilon() const { return ridge_epsilon_; }
  const FeatureConfig& config() const { return config_; }
  std::size_t dimension() const { return static_cast<std::size_t>(mean_.size()); }

  /// Covariance with the ridge added, as used by the solver.
  Eigen::MatrixXd regularized_covariance() const;

  /// Squared Mahalanobis distance of x from the mean. Throws InvalidArgument
  /// on a dimension mismatch and NumericalError when the regularized
  /// covariance is not positive definite.
  double mahalanobis_sq(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  ManeuverKind label_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  double ridge_epsilon_;
  FeatureConfig config_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  bool positive_definite_ = false;
  std::string conditioning_;
};

/// Sample mean and (n - 1)-denominator covariance of the samples. Needs at
/// least two samples sharing one feature layout.
BehaviorModel fit_behavior_model(std::span<const GlanceFeatureVector> samples, ManeuverKind label,
                                 double ridge_epsilon);

double mahalanobis_sq(const GlanceFeatureVector& h, const BehaviorModel& model);

/// exp(-0.5 * mahalanobis_sq), in (0, 1]; underflows to 0 only for
/// distances beyond roughly 1500.
double fitness(const GlanceFeatureVector& h, const BehaviorModel& model);

struct Classification {
  ManeuverKind label = ManeuverKind::LaneKeeping;
  /// One entry per input model, in input order.
  std::vector<double> fitness;
  std::vector<double> mahalanobis_sq;
};

/// Label of the model with the highest fitness. Ties go to the earliest
/// label in canonical order (LLC, RLC, LK). The comparison is done on the
/// squared distances so that underflowed fitness values still rank.
Classification classify(const GlanceFeatureVector& h, std::span<const BehaviorModel> models);

}  // namespace gazedyn::behavior
