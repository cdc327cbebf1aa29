#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gazedyn/behavior.hpp"
#include "gazedyn/features.hpp"
#include "gazedyn/types.hpp"

namespace gazedyn::eval {

using features::ZoneVector;

// --- gaze-estimator quality ------------------------------------------------

/// Per zone, estimated accumulation over true accumulation; 0 where the zone
/// is absent from the truth.
ZoneVector accumulation_ratio(std::span<const GazeZone> truth, std::span<const GazeZone> estimate);

/// Per zone, the estimated accumulation where the zone is absent from the
/// truth (a false accumulation); 0 where it is present.
ZoneVector accumulation_abs_error(std::span<const GazeZone> truth,
                                  std::span<const GazeZone> estimate);

struct MetricDistributions {
  /// Ratio values, recorded only for windows where the zone occurs in truth.
  std::array<std::vector<double>, kZoneCount> ratio;
  /// False-accumulation values, recorded only where the zone is absent in truth.
  std::array<std::vector<double>, kZoneCount> abs_error;
  std::size_t window_count = 0;
};

/// Number of windows of `window` frames taken every `step` frames.
std::size_t segment_count(std::size_t frames, std::size_t window, std::size_t step);

/// Slides a window over each aligned (truth, estimate) pair and collects both
/// metrics per zone. Defaults: 5 s windows every 1 s (4 s overlap).
MetricDistributions metric_distributions(std::span<const std::pair<Scanpath, Scanpath>> pairs,
                                         double window_seconds = 5.0, double step_seconds = 1.0);

// --- confusion matrices ----------------------------------------------------

/// Square count matrix over `classes` labels. Predictions outside the label
/// set (index == classes) are tallied per row but have no column, so those
/// rows' rates sum to less than one.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes);

  void add(std::size_t truth, std::size_t predicted);

  std::size_t classes() const { return classes_; }
  std::size_t count(std::size_t truth, std::size_t predicted) const;
  std::size_t outside(std::size_t truth) const { return outside_[truth]; }
  std::size_t row_total(std::size_t truth) const;
  std::size_t total() const;
  /// count / row_total; 0 for empty rows.
  double rate(std::size_t truth, std::size_t predicted) const;

 private:
  std::size_t classes_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> outside_;
};

/// Gaze-zone confusion (9 x 9). Frames whose truth is Unknown are skipped;
/// Unknown predictions count as outside. Throws on empty or unequal input.
ConfusionMatrix confusion_matrix(std::span<const GazeZone> truth, std::span<const GazeZone> pred);

/// Maneuver confusion (3 x 3).
ConfusionMatrix confusion_matrix(std::span<const ManeuverKind> truth,
                                 std::span<const ManeuverKind> pred);

/// Mean of per-class recall over classes that have at least one sample.
double weighted_accuracy(const ConfusionMatrix& cm);

// --- sliding-window prediction protocol ------------------------------------

struct WindowSample {
  GlanceFeatureVector feature;
  /// Frames between SyncF and the window end (negative before SyncF).
  long step = 0;
  /// step / fps, in seconds.
  double t_rel = 0.0;
  std::size_t event_index = 0;
  ManeuverKind truth = ManeuverKind::LaneKeeping;
  std::optional<ManeuverKind> predicted;
  /// Fitness per model, in the order the models were supplied.
  std::vector<double> fitness;
};

/// One window per frame step whose end runs from SyncF - sweep to
/// SyncF + sweep. Each window is config.window_seconds long. Throws
/// InvalidArgument naming the event when the drive lacks the margin.
std::vector<WindowSample> window_sweep(const Scanpath& drive, const ManeuverEvent& event,
                                       const FeatureConfig& config,
                                       double sweep_seconds = kSweepSeconds,
                                       std::size_t event_index = 0);

/// Classifies every sample in place.
void classify_samples(std::span<WindowSample> samples,
                      std::span<const behavior::BehaviorModel> models);

struct RecallPoint {
  long step = 0;
  double t_rel = 0.0;
  std::size_t true_positives = 0;
  std::size_t positives = 0;
  double recall = 0.0;
};

struct RecallCurve {
  ManeuverKind positive = ManeuverKind::LeftLaneChange;
  std::vector<RecallPoint> points;  // ascending step
  /// Steps seen in the samples but left out because they had no positives.
  std::size_t omitted_steps = 0;

  /// Point at the given step, if reported.
  const RecallPoint* at_step(long step) const;
};

/// Recall of `positive` per time step: samples of that class predicted as
/// that class over samples of that class. Other classes are negatives.
/// Throws when a sample lacks a prediction.
RecallCurve recall_curve(std::span<const WindowSample> samples, ManeuverKind positive);

/// Pools several curves by summing TP and P per step.
RecallCurve pool_recall_curves(std::span<const RecallCurve> curves);

struct ConfidenceTrace {
  ManeuverKind event_kind = ManeuverKind::LeftLaneChange;
  std::vector<ManeuverKind> models;  // model labels, in supplied order
  std::vector<long> steps;
  std::vector<double> t_rel;
  /// mean[m][t], stddev[m][t]: population statistics across events.
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stddev;
  std::size_t event_count = 0;
};

/// A lane-change event together with the stream it is anchored in.
struct EventRef {
  const Scanpath* drive = nullptr;
  ManeuverEvent event;
};

/// Per time step, mean and standard deviation of each model's fitness over
/// the given events (which must all be of one kind).
ConfidenceTrace confidence_traces(std::span<const EventRef> events,
                                  std::span<const behavior::BehaviorModel> models,
                                  const FeatureConfig& config,
                                  double sweep_seconds = kSweepSeconds);

/// Same statistics from already classified samples, restricted to samples
/// whose truth is event_kind. `models` names the fitness columns.
ConfidenceTrace trace_from_samples(std::span<const WindowSample> samples, ManeuverKind event_kind,
                                   std::span<const ManeuverKind> models);

// --- leave-one-driver-out cross-validation ---------------------------------

enum class GazeSource : std::uint8_t { Annotated, Estimated };

std::string_view gaze_source_name(GazeSource s);
GazeSource parse_gaze_source(std::string_view text);

struct ProtocolOptions {
  FeatureConfig config;
  /// Stream used for lane-change training windows.
  GazeSource lane_change_training = GazeSource::Annotated;
  /// Stream used for lane-keeping training windows.
  GazeSource lane_keeping_training = GazeSource::Estimated;
  double sweep_seconds = kSweepSeconds;
};

/// Training descriptors per class: the window ending at SyncF for lane
/// changes and the window ending at the segment end for lane keeping.
/// `provenance` receives the driver id of every sample (same order).
struct TrainingSet {
  std::array<std::vector<GlanceFeatureVector>, kManeuverCount> samples;
  std::array<std::vector<std::string>, kManeuverCount> provenance;
};

TrainingSet collect_training(const Corpus& corpus, const ProtocolOptions& options,
                             const std::vector<std::string>& include_drivers);

/// Fits LLC, RLC and LK models from the training set. Throws InvalidArgument
/// naming the class (and `context`) when a class has too few samples.
std::vector<behavior::BehaviorModel> fit_models(const TrainingSet& training,
                                                const FeatureConfig& config,
                                                const std::string& context = {});

struct TestResult {
  /// Classified sweep samples of every sweepable lane-change event.
  std::vector<WindowSample> samples;
  /// Per lane-keeping segment: truth and prediction of its single window.
  std::vector<ManeuverKind> segment_truth;
  std::vector<ManeuverKind> segment_pred;
  std::array<RecallCurve, 2> recall;  // LLC, RLC
  std::size_t skipped_events = 0;
};

/// Sweeps and classifies every lane-change event of the given drivers on the
/// estimated stream, and classifies every lane-keeping segment once.
TestResult evaluate_drivers(const Corpus& corpus, const std::vector<std::string>& drivers,
                            std::span<const behavior::BehaviorModel> models,
                            const ProtocolOptions& options);

struct FoldResult {
  std::string held_out;
  std::vector<std::string> training_drivers;
  /// Driver id of every training sample, per class.
  std::array<std::vector<std::string>, kManeuverCount> training_provenance;
  std::vector<behavior::BehaviorModel> models;
  TestResult test;
};

struct CvResult {
  std::vector<FoldResult> folds;
  /// Pooled across folds.
  std::array<RecallCurve, 2> recall;
  ConfusionMatrix segment_confusion{kManeuverCount};
};

/// One fold per driver: models trained on every other driver, tested on the
/// held-out one. Needs at least two drivers.
CvResult lodo_cv(const Corpus& corpus, const ProtocolOptions& options);

}  // namespace gazedyn::eval
