#include "gazedyn/features.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "gazedyn/error.hpp"

namespace gazedyn::features {

namespace {

void require_fps(int fps) {
  if (fps <= 0) throw InvalidArgument("fps must be positive, got " + std::to_string(fps));
}

}  // namespace

ZoneVector gaze_accumulation(std::span<const GazeZone> window) {
  if (window.empty()) throw InvalidArgument("gaze accumulation needs a non-empty window");
  std::array<std::size_t, kLabelCount> counts{};
  for (GazeZone z : window) ++counts[zone_index(z)];
  ZoneVector out{};
  const auto n = static_cast<double>(window.size());
  for (std::size_t j = 0; j < kZoneCount; ++j) out[j] = static_cast<double>(counts[j]) / n;
  return out;
}

ZoneVector glance_frequency_noise_free(std::span<const GazeZone> window, int fps) {
  require_fps(fps);
  if (window.size() < 2) {
    throw InvalidArgument("noise-free glance frequency needs at least 2 frames, got " +
                          std::to_string(window.size()));
  }
  std::array<std::size_t, kLabelCount> transitions{};
  for (std::size_t n = 1; n < window.size(); ++n) {
    if (window[n] != window[n - 1]) ++transitions[zone_index(window[n])];
  }
  const double seconds = static_cast<double>(window.size()) / fps;
  ZoneVector out{};
  for (std::size_t j = 0; j < kZoneCount; ++j) out[j] = static_cast<double>(transitions[j]) / seconds;
  return out;
}

GlanceSegments glance_segments_robust(std::span<const GazeZone> window, int debounce_w) {
  const std::size_t n = window.size();
  if (debounce_w < 1 || static_cast<std::size_t>(debounce_w) >= n) {
    throw InvalidArgument("debounce W must satisfy 1 <= W < N (W = " + std::to_string(debounce_w) +
                          ", N = " + std::to_string(n) + ")");
  }
  const auto w = static_cast<std::size_t>(debounce_w);

  GlanceSegments out;
  GazeZone last = window[0];
  // Open glance, if any: (zone, start). The initial run is never opened.
  std::optional<std::pair<GazeZone, std::size_t>> open;

  auto close_open = [&](std::size_t end) {
    if (open && is_canonical(open->first)) {
      out.segments[zone_index(open->first)].push_back({open->second, end});
    }
    open.reset();
  };

  for (std::size_t i = w; i < n; ++i) {
    const GazeZone g = window[i];
    if (g == last) continue;
    std::size_t agree = 0;
    for (std::size_t k = i - w; k < i; ++k) agree += (window[k] == g) ? 1 : 0;
    if (2 * agree <= w) continue;

    close_open(i - 1);
    if (is_canonical(g)) {
      ++out.counts[zone_index(g)];
    } else {
      ++out.unknown_transitions;
    }
    open.emplace(g, i);
    last = g;
  }
  close_open(n - 1);
  return out;
}

ZoneVector glance_frequency(const GlanceSegments& segments, std::size_t frames, int fps) {
  require_fps(fps);
  if (frames == 0) throw InvalidArgument("glance frequency needs a non-empty window");
  const double seconds = static_cast<double>(frames) / fps;
  ZoneVector out{};
  for (std::size_t j = 0; j < kZoneCount; ++j) {
    out[j] = static_cast<double>(segments.counts[j]) / seconds;
  }
  return out;
}

ZoneVector glance_frequency(std::span<const GazeZone> window, int fps, int debounce_w) {
  require_fps(fps);
  return glance_frequency(glance_segments_robust(window, debounce_w), window.size(), fps);
}

ZoneVector glance_duration(const GlanceSegments& segments, int fps) {
  require_fps(fps);
  ZoneVector out{};
  for (std::size_t j = 0; j < kZoneCount; ++j) {
    std::size_t longest = 0;
    for (const Segment& s : segments.segments[j]) longest = std::max(longest, s.length());
    out[j] = static_cast<double>(longest) / fps;
  }
  return out;
}

ZoneVector glance_duration(std::span<const GazeZone> window, int fps, int debounce_w) {
  require_fps(fps);
  return glance_duration(glance_segments_robust(window, debounce_w), fps);
}

GlanceFeatureVector assemble_features(std::span<const GazeZone> window, int fps,
                                      const FeatureConfig& config, FrameSpan span,
                                      std::string source) {
  require_fps(fps);
  const std::size_t expected = config.window_frames(fps);
  if (window.size() != expected) {
    throw InvalidArgument("feature window length mismatch: expected N = " +
                          std::to_string(expected) + " frames, got N = " +
                          std::to_string(window.size()));
  }
  if (span.end == span.begin) span = {0, window.size()};

  GlanceFeatureVector h;
  h.config = config;
  h.window = span;
  h.source = std::move(source);
  h.values.reserve(config.dimension());

  auto append = [&](const ZoneVector& v) { h.values.insert(h.values.end(), v.begin(), v.end()); };
  switch (config.mode) {
    case FeatureMode::GazeAccumulation:
      append(gaze_accumulation(window));
      break;
    case FeatureMode::GlanceDuration:
      append(glance_duration(window, fps, config.debounce_w));
      break;
    case FeatureMode::GlanceDurationFrequency: {
      const GlanceSegments segs = glance_segments_robust(window, config.debounce_w);
      append(glance_duration(segs, fps));
      append(glance_frequency(segs, window.size(), fps));
      break;
    }
  }
  return h;
}

GlanceFeatureVector assemble_features(const Scanpath& scanpath, FrameSpan span,
                                      const FeatureConfig& config) {
  std::string source = scanpath.driver_id() + "/" + scanpath.drive_id();
  return assemble_features(scanpath.window(span), scanpath.fps(), config, span, std::move(source));
}

}  // namespace gazedyn::features
