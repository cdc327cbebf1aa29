#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gazedyn/types.hpp"

namespace gazedyn::synth {

/// One glance in a schedule: zone, duration drawn uniformly from
/// mean +/- jitter (floored at 0.1 s), and the chance it occurs at all.
/// In background check lists, probability acts as a relative weight.
struct GlanceStep {
  GazeZone zone = GazeZone::Front;
  double mean_seconds = 1.0;
  double jitter_seconds = 0.0;
  double probability = 1.0;

  bool operator==(const GlanceStep&) const = default;
};

/// Idle scanning: baseline dwells alternating with short check glances.
struct BackgroundBehavior {
  double dwell_mean_seconds = 3.0;
  double dwell_jitter_seconds = 1.5;
  std::vector<GlanceStep> checks;

  bool operator==(const BackgroundBehavior&) const = default;
};

/// Generator recipe for one maneuver class.
///
/// Lane changes: a segment of pre_seconds + post_seconds is filled with
/// background scanning, then the schedule is laid down so that its last
/// glance ends anchor_lead_seconds before SyncF (at pre_seconds).
/// Lane keeping: a 5-second background segment; the schedule is unused.
struct BehaviorTemplate {
  ManeuverKind kind = ManeuverKind::LaneKeeping;
  std::vector<GlanceStep> schedule;
  GazeZone baseline = GazeZone::Front;
  BackgroundBehavior background;
  double anchor_lead_seconds = 0.3;
  double pre_seconds = 12.0;
  double post_seconds = 6.0;
  /// Chance that a glance boundary is annotated with 1-2 Unknown frames.
  double transition_unknown_probability = 0.2;

  /// Throws InvalidArgument on out-of-range probabilities, non-positive
  /// durations, or lane-change margins under 10 s before / 5 s after SyncF.
  void validate() const;
  bool operator==(const BehaviorTemplate&) const = default;
};

BehaviorTemplate default_template(ManeuverKind kind);

/// Templates indexed by maneuver_index().
using TemplateSet = std::array<BehaviorTemplate, kManeuverCount>;
TemplateSet default_templates();

/// Emission model for a gaze estimator: row = true label, column = emitted
/// label, over the nine zones plus Unknown (last).
struct NoiseChannel {
  std::array<std::array<double, kLabelCount>, kLabelCount> confusion{};
  /// Chance that an erroneous label repeats on the next frame instead of a
  /// fresh draw; 0 gives independent frames.
  double burst_rho = 0.0;

  /// Throws InvalidArgument unless every row is a distribution (sum within
  /// 1e-9) and burst_rho is in [0, 1).
  void validate() const;

  static NoiseChannel identity();
  /// `error` mass spread uniformly over the other nine labels.
  static NoiseChannel uniform(double error);
  /// 15 % error: 13 % spread over spatially adjacent zones, 2 % Unknown.
  static NoiseChannel default_channel();

  bool operator==(const NoiseChannel&) const = default;
};

struct GeneratedEvent {
  Scanpath segment;
  ManeuverEvent event;
};

/// Deterministic in (template, seed, fps).
GeneratedEvent generate_event(const BehaviorTemplate& tmpl, std::uint64_t seed, int fps = 30);

struct DriverCounts {
  std::string driver_id;
  std::size_t left_lane_changes = 0;
  std::size_t right_lane_changes = 0;
  std::size_t lane_keeping = 0;

  bool operator==(const DriverCounts&) const = default;
};

/// Seven drivers with 50 LLC, 32 RLC and 333 LK events in total.
std::vector<DriverCounts> reference_driver_counts();
/// First n rows of the seven-driver table, repeated cyclically for n > 7
/// with fresh driver ids.
std::vector<DriverCounts> driver_counts(std::size_t n);

struct CorpusSpec {
  std::vector<DriverCounts> drivers = reference_driver_counts();
  TemplateSet templates = default_templates();
  int fps = 30;
  /// Per-driver multiplicative offset on duration means, uniform in 1 +/- this.
  double driver_jitter = 0.15;
  std::uint64_t seed = 42;
};

/// One drive per driver: the driver's events in shuffled order, back to
/// back. The annotated and estimated streams are both the clean labels;
/// apply_noise() replaces the estimated one.
Corpus generate_corpus(const CorpusSpec& spec);

/// Re-emits every frame through the channel. Deterministic in the seed;
/// length, fps and ids are preserved.
Scanpath corrupt_scanpath(const Scanpath& scanpath, const NoiseChannel& channel,
                          std::uint64_t seed);

/// Sets each drive's estimated stream to a corrupted copy of its annotated one.
void apply_noise(Corpus& corpus, const NoiseChannel& channel, std::uint64_t seed);

/// Seed of child `index` under `parent` (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

}  // namespace gazedyn::synth
