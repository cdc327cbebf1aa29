#include "gazedyn/zone.hpp"

#include <cctype>
#include <string>

#include "gazedyn/error.hpp"

namespace gazedyn {

namespace {

constexpr std::array<std::string_view, kLabelCount> kNames = {
    "Front",       "Right",        "Left",           "CenterStack", "Rearview",
    "Speedometer", "LeftShoulder", "RightWindshield", "EyesClosed",  "Unknown"};

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc) || c == '_') continue;
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  return out;
}

}  // namespace

GazeZone zone_from_index(std::size_t index) {
  if (index >= kLabelCount) {
    throw InvalidArgument("zone index out of range: " + std::to_string(index));
  }
  return static_cast<GazeZone>(index);
}

std::string_view zone_name(GazeZone z) { return kNames[zone_index(z)]; }

GazeZone parse_zone_label(std::string_view text) {
  const std::string key = normalize(text);
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (normalize(kNames[i]) == key) return static_cast<GazeZone>(i);
  }
  throw ParseError("unrecognized gaze zone label '" + std::string(text) + "'");
}

}  // namespace gazedyn
