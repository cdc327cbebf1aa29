#include "gazedyn/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "gazedyn/error.hpp"

namespace gazedyn {

namespace {

std::string lower(std::string_view text) {
  std::string out;
  for (char c : text) {
    auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) continue;
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  return out;
}

}  // namespace

Scanpath::Scanpath(std::vector<GazeZone> zones, int fps, std::string driver_id,
                   std::string drive_id)
    : zones_(std::move(zones)),
      fps_(fps),
      driver_id_(std::move(driver_id)),
      drive_id_(std::move(drive_id)) {
  if (zones_.empty()) throw InvalidArgument("scanpath must contain at least one frame");
  if (fps_ <= 0) throw InvalidArgument("scanpath fps must be positive, got " + std::to_string(fps_));
}

std::span<const GazeZone> Scanpath::window(FrameSpan span) const {
  if (span.begin >= span.end || span.end > zones_.size()) {
    throw InvalidArgument("window [" + std::to_string(span.begin) + ", " +
                          std::to_string(span.end) + ") is empty or outside scanpath of " +
                          std::to_string(zones_.size()) + " frames");
  }
  return std::span<const GazeZone>(zones_).subspan(span.begin, span.size());
}

Scanpath Scanpath::with_zones(std::vector<GazeZone> zones) const {
  if (zones.size() != zones_.size()) {
    throw InvalidArgument("replacement labels change scanpath length");
  }
  return Scanpath(std::move(zones), fps_, driver_id_, drive_id_);
}

std::array<std::size_t, kLabelCount> Scanpath::label_counts() const {
  std::array<std::size_t, kLabelCount> counts{};
  for (GazeZone z : zones_) ++counts[zone_index(z)];
  return counts;
}

std::string_view maneuver_name(ManeuverKind k) {
  switch (k) {
    case ManeuverKind::LeftLaneChange: return "LeftLaneChange";
    case ManeuverKind::RightLaneChange: return "RightLaneChange";
    case ManeuverKind::LaneKeeping: return "LaneKeeping";
  }
  return "?";
}

std::string_view maneuver_code(ManeuverKind k) {
  switch (k) {
    case ManeuverKind::LeftLaneChange: return "LLC";
    case ManeuverKind::RightLaneChange: return "RLC";
    case ManeuverKind::LaneKeeping: return "LK";
  }
  return "?";
}

ManeuverKind parse_maneuver(std::string_view text) {
  const std::string key = lower(text);
  for (ManeuverKind k : canonical_maneuver_order()) {
    if (key == lower(maneuver_name(k)) || key == lower(maneuver_code(k))) return k;
  }
  throw ParseError("unknown maneuver kind '" + std::string(text) + "'");
}

ManeuverEvent ManeuverEvent::lane_change(ManeuverKind kind, std::size_t syncf_frame) {
  if (kind == ManeuverKind::LaneKeeping) {
    throw InvalidArgument("lane_change() called with LaneKeeping");
  }
  ManeuverEvent e;
  e.kind = kind;
  e.syncf_frame = syncf_frame;
  return e;
}

ManeuverEvent ManeuverEvent::lane_keeping(FrameSpan segment, int fps) {
  if (fps <= 0) throw InvalidArgument("fps must be positive");
  const auto expected = static_cast<std::size_t>(std::lround(kLaneKeepingSeconds * fps));
  if (segment.end <= segment.begin || segment.size() != expected) {
    throw InvalidArgument("lane-keeping segment [" + std::to_string(segment.begin) + ", " +
                          std::to_string(segment.end) + ") must span exactly " +
                          std::to_string(expected) + " frames (5 s at " + std::to_string(fps) +
                          " fps)");
  }
  ManeuverEvent e;
  e.kind = ManeuverKind::LaneKeeping;
  e.segment = segment;
  return e;
}

bool is_sweepable(const ManeuverEvent& event, std::size_t drive_frames, int fps,
                  double window_seconds, double sweep_seconds) {
  if (!event.is_lane_change() || fps <= 0) return false;
  const auto before = static_cast<std::size_t>(std::lround((sweep_seconds + window_seconds) * fps));
  const auto after = static_cast<std::size_t>(std::lround(sweep_seconds * fps));
  return event.syncf_frame >= before && event.syncf_frame + after <= drive_frames;
}

std::string_view feature_mode_name(FeatureMode m) {
  switch (m) {
    case FeatureMode::GazeAccumulation: return "GA";
    case FeatureMode::GlanceDuration: return "GD";
    case FeatureMode::GlanceDurationFrequency: return "GD_GF";
  }
  return "?";
}

FeatureMode parse_feature_mode(std::string_view text) {
  std::string key = lower(text);
  std::erase(key, '_');
  if (key == "ga") return FeatureMode::GazeAccumulation;
  if (key == "gd") return FeatureMode::GlanceDuration;
  if (key == "gdgf") return FeatureMode::GlanceDurationFrequency;
  throw ParseError("unknown feature mode '" + std::string(text) + "' (expected ga, gd or gdgf)");
}

std::size_t FeatureConfig::dimension() const {
  return mode == FeatureMode::GlanceDurationFrequency ? 2 * kZoneCount : kZoneCount;
}

std::size_t FeatureConfig::window_frames(int fps) const {
  return static_cast<std::size_t>(std::lround(window_seconds * fps));
}

void FeatureConfig::validate() const {
  if (!(window_seconds > 0.0) || !std::isfinite(window_seconds)) {
    throw InvalidArgument("window_seconds must be positive");
  }
  if (debounce_w < 1) throw InvalidArgument("debounce W must be at least 1 frame");
  if (!(ridge_epsilon >= 0.0) || !std::isfinite(ridge_epsilon)) {
    throw InvalidArgument("ridge_epsilon must be nonnegative");
  }
}

bool FeatureConfig::same_features(const FeatureConfig& other) const {
  return mode == other.mode && window_seconds == other.window_seconds &&
         debounce_w == other.debounce_w;
}

std::vector<std::string> driver_ids(const Corpus& corpus) {
  std::vector<std::string> ids;
  for (const auto& d : corpus) {
    if (std::find(ids.begin(), ids.end(), d.driver_id) == ids.end()) ids.push_back(d.driver_id);
  }
  return ids;
}

}  // namespace gazedyn
