#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gazedyn/types.hpp"
#include "gazedyn/zone.hpp"

namespace gazedyn::features {

using ZoneVector = std::array<double, kZoneCount>;

/// Inclusive [start, end] frame indices of one confirmed glance, relative to
/// the window start.
struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start + 1; }
  bool operator==(const Segment&) const = default;
};

/// Output of the debounced glance tracker.
struct GlanceSegments {
  /// Confirmed glances per canonical zone; segments[j].size() == counts[j].
  std::array<std::vector<Segment>, kZoneCount> segments;
  std::array<std::size_t, kZoneCount> counts{};
  /// Confirmed transitions into Unknown. They end the previous glance but
  /// never open a segment.
  std::size_t unknown_transitions = 0;
};

/// Fraction of window frames spent in each zone. Unknown frames count in
/// the denominator only.
ZoneVector gaze_accumulation(std::span<const GazeZone> window);

/// Transitions into each zone per second, assuming the labels are exact.
/// The run the window opens with is never counted. Requires >= 2 frames.
ZoneVector glance_frequency_noise_free(std::span<const GazeZone> window, int fps);

/// Majority-vote glance tracker.
///
/// Starting from the first label as the current state, frame i (for
/// i >= W, zero-based) confirms a transition when it differs from the
/// current state and more than W/2 of the W preceding frames carry the same
/// label as frame i. The new glance opens at i; the glance it replaces
/// closes at i - 1; the last open glance closes at the final frame. The
/// glance the window opens in is not recorded, so each zone's segment count
/// equals its confirmed transition count.
///
/// Requires 1 <= W < window.size().
GlanceSegments glance_segments_robust(std::span<const GazeZone> window, int debounce_w);

/// Debounced transitions per second (counts / window duration).
ZoneVector glance_frequency(std::span<const GazeZone> window, int fps, int debounce_w);
ZoneVector glance_frequency(const GlanceSegments& segments, std::size_t frames, int fps);

/// Longest confirmed glance per zone in seconds, (end - start + 1) / fps;
/// zero for zones without a confirmed glance.
ZoneVector glance_duration(std::span<const GazeZone> window, int fps, int debounce_w);
ZoneVector glance_duration(const GlanceSegments& segments, int fps);

/// Descriptor for one window under config. The window length must equal
/// config.window_frames(fps).
GlanceFeatureVector assemble_features(std::span<const GazeZone> window, int fps,
                                      const FeatureConfig& config, FrameSpan span = {},
                                      std::string source = {});

/// Convenience: descriptor for scanpath frames [span.begin, span.end).
GlanceFeatureVector assemble_features(const Scanpath& scanpath, FrameSpan span,
                                      const FeatureConfig& config);

}  // namespace gazedyn::features
