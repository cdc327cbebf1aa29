#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace gazedyn {

/// In-cabin gaze region. The first nine values form the canonical ordered
/// set used to index every descriptor; Unknown is a sentinel outside it.
enum class GazeZone : std::uint8_t {
  Front = 0,
  Right,
  Left,
  CenterStack,
  Rearview,
  Speedometer,
  LeftShoulder,
  RightWindshield,
  EyesClosed,
  Unknown,
};

inline constexpr std::size_t kZoneCount = 9;
/// Index used for Unknown in arrays that also track the sentinel.
inline constexpr std::size_t kUnknownIndex = kZoneCount;
inline constexpr std::size_t kLabelCount = kZoneCount + 1;

constexpr std::array<GazeZone, kZoneCount> canonical_zone_order() {
  return {GazeZone::Front,        GazeZone::Right,           GazeZone::Left,
          GazeZone::CenterStack,  GazeZone::Rearview,        GazeZone::Speedometer,
          GazeZone::LeftShoulder, GazeZone::RightWindshield, GazeZone::EyesClosed};
}

/// Position in canonical order; Unknown maps to kUnknownIndex.
constexpr std::size_t zone_index(GazeZone z) { return static_cast<std::size_t>(z); }

constexpr bool is_canonical(GazeZone z) { return z != GazeZone::Unknown; }

/// Inverse of zone_index over 0..kLabelCount-1.
GazeZone zone_from_index(std::size_t index);

/// Canonical spelling, e.g. "CenterStack". Round-trips through parse_zone_label.
std::string_view zone_name(GazeZone z);

/// Case-, whitespace- and underscore-insensitive lookup ("center_stack",
/// "Center Stack" and "CENTERSTACK" all match). Throws ParseError naming the
/// token when nothing matches.
GazeZone parse_zone_label(std::string_view text);

}  // namespace gazedyn
