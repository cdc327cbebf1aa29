#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazedyn/zone.hpp"

namespace gazedyn {

/// Half-open frame range [begin, end).
struct FrameSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const FrameSpan&) const = default;
};

/// Frame-rate sequence of gaze-zone labels for one drive (or a slice of one).
class Scanpath {
 public:
  /// Throws InvalidArgument when zones is empty or fps is not positive.
  Scanpath(std::vector<GazeZone> zones, int fps, std::string driver_id = {},
           std::string drive_id = {});

  std::span<const GazeZone> zones() const { return zones_; }
  std::size_t size() const { return zones_.size(); }
  int fps() const { return fps_; }
  double duration_seconds() const { return static_cast<double>(zones_.size()) / fps_; }
  const std::string& driver_id() const { return driver_id_; }
  const std::string& drive_id() const { return drive_id_; }

  /// Label view over [span.begin, span.end); throws when out of range or empty.
  std::span<const GazeZone> window(FrameSpan span) const;

  /// Copy of this scanpath with the labels replaced (same length required).
  Scanpath with_zones(std::vector<GazeZone> zones) const;

  /// Per-label counts, canonical zones first and Unknown last.
  std::array<std::size_t, kLabelCount> label_counts() const;

  bool operator==(const Scanpath&) const = default;

 private:
  std::vector<GazeZone> zones_;
  int fps_;
  std::string driver_id_;
  std::string drive_id_;
};

/// Maneuver classes, in the canonical order used for tie-breaking.
enum class ManeuverKind : std::uint8_t {
  LeftLaneChange = 0,
  RightLaneChange,
  LaneKeeping,
};

inline constexpr std::size_t kManeuverCount = 3;

constexpr std::array<ManeuverKind, kManeuverCount> canonical_maneuver_order() {
  return {ManeuverKind::LeftLaneChange, ManeuverKind::RightLaneChange,
          ManeuverKind::LaneKeeping};
}

constexpr std::size_t maneuver_index(ManeuverKind k) { return static_cast<std::size_t>(k); }

std::string_view maneuver_name(ManeuverKind k);
/// Short code: "LLC", "RLC" or "LK".
std::string_view maneuver_code(ManeuverKind k);
/// Accepts the full name or the short code, case-insensitively.
ManeuverKind parse_maneuver(std::string_view text);

/// A labeled maneuver anchored inside a drive.
///
/// Lane changes carry the synchronization frame (tire touches the lane
/// marking). Lane keeping carries its 5-second segment.
struct ManeuverEvent {
  ManeuverKind kind = ManeuverKind::LaneKeeping;
  std::size_t syncf_frame = 0;
  FrameSpan segment;

  static ManeuverEvent lane_change(ManeuverKind kind, std::size_t syncf_frame);
  /// Throws InvalidArgument unless the segment is exactly 5 s at fps.
  static ManeuverEvent lane_keeping(FrameSpan segment, int fps);

  bool is_lane_change() const { return kind != ManeuverKind::LaneKeeping; }
  bool operator==(const ManeuverEvent&) const = default;
};

inline constexpr double kLaneKeepingSeconds = 5.0;
inline constexpr double kSweepSeconds = 5.0;

/// True when a lane-change event leaves room for the full window sweep:
/// the earliest window starts (sweep + window) seconds before SyncF and the
/// latest ends sweep seconds after it.
bool is_sweepable(const ManeuverEvent& event, std::size_t drive_frames, int fps,
                  double window_seconds = 5.0, double sweep_seconds = kSweepSeconds);

enum class FeatureMode : std::uint8_t {
  GazeAccumulation,        // GA
  GlanceDuration,          // GD
  GlanceDurationFrequency  // GD_GF
};

std::string_view feature_mode_name(FeatureMode m);
/// Accepts "ga", "gd", "gdgf", "gd_gf" in any case.
FeatureMode parse_feature_mode(std::string_view text);

struct FeatureConfig {
  FeatureMode mode = FeatureMode::GazeAccumulation;
  double window_seconds = 5.0;
  int debounce_w = 6;
  double ridge_epsilon = 1e-6;

  std::size_t dimension() const;
  std::size_t window_frames(int fps) const;
  /// Throws InvalidArgument on non-positive window/W or negative ridge.
  void validate() const;
  /// Same descriptor layout (mode, window and W). Ridge is a model setting.
  bool same_features(const FeatureConfig& other) const;

  bool operator==(const FeatureConfig&) const = default;
};

/// Descriptor for one window. Values follow canonical zone order; in
/// GD_GF mode the nine frequencies follow the nine durations.
struct GlanceFeatureVector {
  std::vector<double> values;
  FeatureConfig config;
  FrameSpan window;
  std::string source;
};

/// One recorded drive: the estimated label stream, optional annotated
/// ground truth, and the maneuver events marked in it.
struct Drive {
  std::string driver_id;
  std::string drive_id;
  Scanpath estimated;
  std::optional<Scanpath> annotated;
  std::vector<ManeuverEvent> events;
};

using Corpus = std::vector<Drive>;

/// Distinct driver ids in order of first appearance.
std::vector<std::string> driver_ids(const Corpus& corpus);

}  // namespace gazedyn
