#include "gazedyn/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iterator>
#include <map>
#include <set>
#include <string>

#include "gazedyn/error.hpp"
#include "gazedyn/kernels.hpp"

namespace gazedyn::eval {

namespace {

void require_aligned(std::span<const GazeZone> truth, std::span<const GazeZone> estimate) {
  if (truth.empty()) throw InvalidArgument("gaze-quality metrics need non-empty windows");
  if (truth.size() != estimate.size()) {
    throw InvalidArgument("truth and estimate windows differ in length (" +
                          std::to_string(truth.size()) + " vs " + std::to_string(estimate.size()) +
                          ")");
  }
}

std::size_t frames_for(double seconds, int fps) {
  return static_cast<std::size_t>(std::lround(seconds * fps));
}

std::string event_label(const Scanpath& drive, const ManeuverEvent& event) {
  return std::string(maneuver_code(event.kind)) + " event at SyncF frame " +
         std::to_string(event.syncf_frame) + " in drive '" + drive.driver_id() + "/" +
         drive.drive_id() + "'";
}

bool contains(const std::vector<std::string>& ids, const std::string& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace

ZoneVector accumulation_ratio(std::span<const GazeZone> truth, std::span<const GazeZone> estimate) {
  require_aligned(truth, estimate);
  const ZoneVector a = features::gaze_accumulation(truth);
  const ZoneVector a_hat = features::gaze_accumulation(estimate);
  ZoneVector out{};
  for (std::size_t j = 0; j < kZoneCount; ++j) out[j] = a[j] != 0.0 ? a_hat[j] / a[j] : 0.0;
  return out;
}

ZoneVector accumulation_abs_error(std::span<const GazeZone> truth,
                                  std::span<const GazeZone> estimate) {
  require_aligned(truth, estimate);
  const ZoneVector a = features::gaze_accumulation(truth);
  const ZoneVector a_hat = features::gaze_accumulation(estimate);
  ZoneVector out{};
  for (std::size_t j = 0; j < kZoneCount; ++j) out[j] = a[j] != 0.0 ? 0.0 : a_hat[j];
  return out;
}

std::size_t segment_count(std::size_t frames, std::size_t window, std::size_t step) {
  if (window == 0 || step == 0 || frames < window) return 0;
  return (frames - window) / step + 1;
}

MetricDistributions metric_distributions(std::span<const std::pair<Scanpath, Scanpath>> pairs,
                                         double window_seconds, double step_seconds) {
  if (pairs.empty()) throw InvalidArgument("metric distributions need at least one pair");
  MetricDistributions out;
  for (const auto& [truth, estimate] : pairs) {
    if (truth.fps() != estimate.fps()) {
      throw InvalidArgument("truth and estimate fps differ for '" + truth.drive_id() + "'");
    }
    require_aligned(truth.zones(), estimate.zones());
    const std::size_t window = frames_for(window_seconds, truth.fps());
    const std::size_t step = frames_for(step_seconds, truth.fps());
    const std::size_t count = segment_count(truth.size(), window, step);
    for (std::size_t s = 0; s < count; ++s) {
      const FrameSpan span{s * step, s * step + window};
      const auto t = truth.window(span);
      const auto e = estimate.window(span);
      const ZoneVector a = features::gaze_accumulation(t);
      const ZoneVector ratio = accumulation_ratio(t, e);
      const ZoneVector abs_error = accumulation_abs_error(t, e);
      for (std::size_t j = 0; j < kZoneCount; ++j) {
        if (a[j] != 0.0) {
          out.ratio[j].push_back(ratio[j]);
        } else {
          out.abs_error[j].push_back(abs_error[j]);
        }
      }
      ++out.window_count;
    }
  }
  return out;
}

ConfusionMatrix::ConfusionMatrix(std::size_t classes)
    : classes_(classes), counts_(classes * classes, 0), outside_(classes, 0) {}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted) {
  if (truth >= classes_) throw InvalidArgument("confusion truth index out of range");
  if (predicted >= classes_) {
    ++outside_[truth];
  } else {
    ++counts_[truth * classes_ + predicted];
  }
}

std::size_t ConfusionMatrix::count(std::size_t truth, std::size_t predicted) const {
  return counts_.at(truth * classes_ + predicted);
}

std::size_t ConfusionMatrix::row_total(std::size_t truth) const {
  std::size_t total = outside_.at(truth);
  for (std::size_t p = 0; p < classes_; ++p) total += count(truth, p);
  return total;
}

std::size_t ConfusionMatrix::total() const {
  std::size_t total = 0;
  for (std::size_t t = 0; t < classes_; ++t) total += row_total(t);
  return total;
}

double ConfusionMatrix::rate(std::size_t truth, std::size_t predicted) const {
  const std::size_t row = row_total(truth);
  return row == 0 ? 0.0 : static_cast<double>(count(truth, predicted)) / static_cast<double>(row);
}

ConfusionMatrix confusion_matrix(std::span<const GazeZone> truth, std::span<const GazeZone> pred) {
  if (truth.empty()) throw InvalidArgument("confusion matrix needs at least one label");
  if (truth.size() != pred.size()) throw InvalidArgument("truth and prediction lengths differ");
  ConfusionMatrix cm(kZoneCount);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!is_canonical(truth[i])) continue;
    cm.add(zone_index(truth[i]), zone_index(pred[i]));
  }
  return cm;
}

ConfusionMatrix confusion_matrix(std::span<const ManeuverKind> truth,
                                 std::span<const ManeuverKind> pred) {
  if (truth.empty()) throw InvalidArgument("confusion matrix needs at least one label");
  if (truth.size() != pred.size()) throw InvalidArgument("truth and prediction lengths differ");
  ConfusionMatrix cm(kManeuverCount);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    cm.add(maneuver_index(truth[i]), maneuver_index(pred[i]));
  }
  return cm;
}

double weighted_accuracy(const ConfusionMatrix& cm) {
  double sum = 0.0;
  std::size_t populated = 0;
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    if (cm.row_total(c) == 0) continue;
    sum += cm.rate(c, c);
    ++populated;
  }
  if (populated == 0) throw InvalidArgument("weighted accuracy of an empty confusion matrix");
  return sum / static_cast<double>(populated);
}

std::vector<WindowSample> window_sweep(const Scanpath& drive, const ManeuverEvent& event,
                                       const FeatureConfig& config, double sweep_seconds,
                                       std::size_t event_index) {
  if (!event.is_lane_change()) {
    throw InvalidArgument("window sweep needs a lane-change event, got LaneKeeping");
  }
  const int fps = drive.fps();
  const auto sweep = static_cast<long>(frames_for(sweep_seconds, fps));
  const auto width = static_cast<long>(config.window_frames(fps));
  const auto syncf = static_cast<long>(event.syncf_frame);
  const auto frames = static_cast<long>(drive.size());
  if (syncf - sweep - width < 0 || syncf + sweep > frames) {
    throw InvalidArgument(event_label(drive, event) + " lacks sweep margin: needs " +
                          std::to_string(sweep + width) + " frames before and " +
                          std::to_string(sweep) + " after inside " + std::to_string(frames) +
                          " frames");
  }

  std::vector<FrameSpan> spans;
  spans.reserve(static_cast<std::size_t>(2 * sweep + 1));
  for (long step = -sweep; step <= sweep; ++step) {
    const long end = syncf + step;
    spans.push_back({static_cast<std::size_t>(end - width), static_cast<std::size_t>(end)});
  }
  std::vector<GlanceFeatureVector> feats = kernels::extract_parallel(drive, spans, config);

  std::vector<WindowSample> out;
  out.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    WindowSample s;
    s.feature = std::move(feats[i]);
    s.step = static_cast<long>(i) - sweep;
    s.t_rel = static_cast<double>(s.step) / fps;
    s.event_index = event_index;
    s.truth = event.kind;
    out.push_back(std::move(s));
  }
  return out;
}

void classify_samples(std::span<WindowSample> samples,
                      std::span<const behavior::BehaviorModel> models) {
  for (WindowSample& s : samples) {
    behavior::Classification c = behavior::classify(s.feature, models);
    s.predicted = c.label;
    s.fitness = std::move(c.fitness);
  }
}

const RecallPoint* RecallCurve::at_step(long step) const {
  auto it = std::lower_bound(points.begin(), points.end(), step,
                             [](const RecallPoint& p, long s) { return p.step < s; });
  return it != points.end() && it->step == step ? &*it : nullptr;
}

RecallCurve recall_curve(std::span<const WindowSample> samples, ManeuverKind positive) {
  struct Tally {
    double t_rel = 0.0;
    std::size_t tp = 0;
    std::size_t p = 0;
  };
  std::map<long, Tally> by_step;
  for (const WindowSample& s : samples) {
    if (!s.predicted) throw InvalidArgument("recall curve needs classified samples");
    Tally& t = by_step[s.step];
    t.t_rel = s.t_rel;
    if (s.truth == positive) {
      ++t.p;
      if (*s.predicted == positive) ++t.tp;
    }
  }
  RecallCurve curve;
  curve.positive = positive;
  for (const auto& [step, t] : by_step) {
    if (t.p == 0) {
      ++curve.omitted_steps;
      continue;
    }
    curve.points.push_back(
        {step, t.t_rel, t.tp, t.p, static_cast<double>(t.tp) / static_cast<double>(t.p)});
  }
  return curve;
}

RecallCurve pool_recall_curves(std::span<const RecallCurve> curves) {
  RecallCurve pooled;
  if (curves.empty()) return pooled;
  pooled.positive = curves.front().positive;
  std::map<long, RecallPoint> by_step;
  for (const RecallCurve& c : curves) {
    if (c.positive != pooled.positive) {
      throw InvalidArgument("cannot pool recall curves of different positive classes");
    }
    for (const RecallPoint& p : c.points) {
      RecallPoint& acc = by_step[p.step];
      acc.step = p.step;
      acc.t_rel = p.t_rel;
      acc.true_positives += p.true_positives;
      acc.positives += p.positives;
    }
  }
  for (auto& [step, p] : by_step) {
    p.recall = static_cast<double>(p.true_positives) / static_cast<double>(p.positives);
    pooled.points.push_back(p);
  }
  return pooled;
}

ConfidenceTrace trace_from_samples(std::span<const WindowSample> samples, ManeuverKind event_kind,
                                   std::span<const ManeuverKind> models) {
  struct Acc {
    double t_rel = 0.0;
    std::size_t n = 0;
    std::vector<double> sum;
    std::vector<double> sum_sq;
  };
  std::map<long, Acc> by_step;
  std::set<std::size_t> events;
  for (const WindowSample& s : samples) {
    if (s.truth != event_kind) continue;
    if (s.fitness.size() != models.size()) {
      throw InvalidArgument("sample carries " + std::to_string(s.fitness.size()) +
                            " fitness values for " + std::to_string(models.size()) + " models");
    }
    Acc& acc = by_step[s.step];
    if (acc.sum.empty()) {
      acc.sum.assign(models.size(), 0.0);
      acc.sum_sq.assign(models.size(), 0.0);
    }
    acc.t_rel = s.t_rel;
    ++acc.n;
    for (std::size_t m = 0; m < models.size(); ++m) {
      acc.sum[m] += s.fitness[m];
      acc.sum_sq[m] += s.fitness[m] * s.fitness[m];
    }
    events.insert(s.event_index);
  }

  ConfidenceTrace trace;
  trace.event_kind = event_kind;
  trace.models.assign(models.begin(), models.end());
  trace.mean.assign(models.size(), {});
  trace.stddev.assign(models.size(), {});
  for (const auto& [step, acc] : by_step) {
    trace.steps.push_back(step);
    trace.t_rel.push_back(acc.t_rel);
    const auto n = static_cast<double>(acc.n);
    for (std::size_t m = 0; m < models.size(); ++m) {
      const double mean = acc.sum[m] / n;
      const double var = std::max(0.0, acc.sum_sq[m] / n - mean * mean);
      trace.mean[m].push_back(mean);
      trace.stddev[m].push_back(std::sqrt(var));
    }
  }
  trace.event_count = events.size();
  return trace;
}

ConfidenceTrace confidence_traces(std::span<const EventRef> events,
                                  std::span<const behavior::BehaviorModel> models,
                                  const FeatureConfig& config, double sweep_seconds) {
  if (events.empty()) throw InvalidArgument("confidence traces need at least one event");
  if (models.empty()) throw InvalidArgument("confidence traces need at least one model");
  const ManeuverKind kind = events.front().event.kind;
  std::vector<WindowSample> all;
  for (std::size_t e = 0; e < events.size(); ++e) {
    const EventRef& ref = events[e];
    if (ref.drive == nullptr) throw InvalidArgument("confidence trace event has no drive");
    if (ref.event.kind != kind) {
      throw InvalidArgument("confidence traces need events of a single kind");
    }
    std::vector<WindowSample> sweep = window_sweep(*ref.drive, ref.event, config, sweep_seconds, e);
    classify_samples(sweep, models);
    std::move(sweep.begin(), sweep.end(), std::back_inserter(all));
  }
  std::vector<ManeuverKind> labels;
  for (const auto& m : models) labels.push_back(m.label());
  return trace_from_samples(all, kind, labels);
}

std::string_view gaze_source_name(GazeSource s) {
  return s == GazeSource::Annotated ? "annotated" : "estimated";
}

GazeSource parse_gaze_source(std::string_view text) {
  std::string key;
  for (char c : text) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "annotated") return GazeSource::Annotated;
  if (key == "estimated") return GazeSource::Estimated;
  throw ParseError("unknown gaze source '" + std::string(text) + "' (annotated or estimated)");
}

TrainingSet collect_training(const Corpus& corpus, const ProtocolOptions& options,
                             const std::vector<std::string>& include_drivers) {
  TrainingSet set;
  for (const Drive& drive : corpus) {
    if (!contains(include_drivers, drive.driver_id)) continue;
    for (const ManeuverEvent& event : drive.events) {
      const GazeSource source = event.is_lane_change() ? options.lane_change_training
                                                       : options.lane_keeping_training;
      const Scanpath* stream = &drive.estimated;
      if (source == GazeSource::Annotated) {
        if (!drive.annotated) {
          throw InvalidArgument("drive '" + drive.driver_id + "/" + drive.drive_id +
                                "' has no annotated stream for " +
                                std::string(maneuver_name(event.kind)) +
                                " training; supply ground truth or train on estimated gaze");
        }
        stream = &*drive.annotated;
      }
      const std::size_t width = options.config.window_frames(stream->fps());
      const std::size_t end = event.is_lane_change() ? event.syncf_frame : event.segment.end;
      if (end < width || end > stream->size()) {
        throw InvalidArgument("training window for " + event_label(*stream, event) +
                              " falls outside the drive");
      }
      const auto k = maneuver_index(event.kind);
      set.samples[k].push_back(features::assemble_features(*stream, {end - width, end}, options.config));
      set.provenance[k].push_back(drive.driver_id);
    }
  }
  return set;
}

std::vector<behavior::BehaviorModel> fit_models(const TrainingSet& training,
                                                const FeatureConfig& config,
                                                const std::string& context) {
  std::vector<behavior::BehaviorModel> models;
  for (ManeuverKind kind : canonical_maneuver_order()) {
    const auto& samples = training.samples[maneuver_index(kind)];
    if (samples.size() < 2) {
      throw InvalidArgument((context.empty() ? std::string() : context + ": ") + "class " +
                            std::string(maneuver_name(kind)) + " has " +
                            std::to_string(samples.size()) +
                            " training events (at least 2 required)");
    }
    models.push_back(behavior::fit_behavior_model(samples, kind, config.ridge_epsilon));
  }
  return models;
}

TestResult evaluate_drivers(const Corpus& corpus, const std::vector<std::string>& drivers,
                            std::span<const behavior::BehaviorModel> models,
                            const ProtocolOptions& options) {
  TestResult result;
  std::size_t event_index = 0;
  for (const Drive& drive : corpus) {
    if (!contains(drivers, drive.driver_id)) continue;
    const Scanpath& stream = drive.estimated;
    for (const ManeuverEvent& event : drive.events) {
      if (event.is_lane_change()) {
        if (!is_sweepable(event, stream.size(), stream.fps(), options.config.window_seconds,
                          options.sweep_seconds)) {
          ++result.skipped_events;
          continue;
        }
        std::vector<WindowSample> sweep =
            window_sweep(stream, event, options.config, options.sweep_seconds, event_index++);
        classify_samples(sweep, models);
        for (const WindowSample& s : sweep) {
          if (s.step == 0) {
            result.segment_truth.push_back(s.truth);
            result.segment_pred.push_back(*s.predicted);
          }
        }
        std::move(sweep.begin(), sweep.end(), std::back_inserter(result.samples));
      } else {
        const std::size_t width = options.config.window_frames(stream.fps());
        if (event.segment.end < width || event.segment.end > stream.size()) {
          ++result.skipped_events;
          continue;
        }
        const auto h = features::assemble_features(stream, {event.segment.end - width, event.segment.end},
                                                   options.config);
        result.segment_truth.push_back(event.kind);
        result.segment_pred.push_back(behavior::classify(h, models).label);
      }
    }
  }
  result.recall[0] = recall_curve(result.samples, ManeuverKind::LeftLaneChange);
  result.recall[1] = recall_curve(result.samples, ManeuverKind::RightLaneChange);
  return result;
}

CvResult lodo_cv(const Corpus& corpus, const ProtocolOptions& options) {
  options.config.validate();
  const std::vector<std::string> drivers = driver_ids(corpus);
  if (drivers.size() < 2) {
    throw InvalidArgument("leave-one-driver-out needs at least 2 drivers, got " +
                          std::to_string(drivers.size()));
  }
  CvResult cv;
  std::array<std::vector<RecallCurve>, 2> fold_curves;
  std::size_t event_offset = 0;
  for (const std::string& held_out : drivers) {
    FoldResult fold;
    fold.held_out = held_out;
    for (const std::string& d : drivers) {
      if (d != held_out) fold.training_drivers.push_back(d);
    }
    const TrainingSet training = collect_training(corpus, options, fold.training_drivers);
    fold.models = fit_models(training, options.config, "fold holding out driver '" + held_out + "'");
    fold.training_provenance = training.provenance;
    fold.test = evaluate_drivers(corpus, {held_out}, fold.models, options);
    std::size_t fold_events = 0;
    for (WindowSample& s : fold.test.samples) {
      fold_events = std::max(fold_events, s.event_index + 1);
      s.event_index += event_offset;
    }
    event_offset += fold_events;
    for (std::size_t c = 0; c < 2; ++c) fold_curves[c].push_back(fold.test.recall[c]);
    for (std::size_t i = 0; i < fold.test.segment_truth.size(); ++i) {
      cv.segment_confusion.add(maneuver_index(fold.test.segment_truth[i]),
                               maneuver_index(fold.test.segment_pred[i]));
    }
    cv.folds.push_back(std::move(fold));
  }
  cv.recall[0] = pool_recall_curves(fold_curves[0]);
  cv.recall[1] = pool_recall_curves(fold_curves[1]);
  cv.recall[0].positive = ManeuverKind::LeftLaneChange;
  cv.recall[1].positive = ManeuverKind::RightLaneChange;
  return cv;
}

}  // namespace gazedyn::eval
