#include "doctest.h"

#include <set>
#include <string>

#include "gazedyn/error.hpp"
#include "gazedyn/types.hpp"
#include "gazedyn/zone.hpp"
#include "support/oracles.hpp"

using namespace gazedyn;

TEST_SUITE("core") {

TEST_CASE("canonical zone order") {
  const auto order = canonical_zone_order();
  const std::array<std::string, kZoneCount> names = {
      "Front",    "Right",       "Left",         "CenterStack", "Rearview",
      "Speedometer", "LeftShoulder", "RightWindshield", "EyesClosed"};
  REQUIRE(order.size() == 9);
  for (std::size_t i = 0; i < order.size(); ++i) {
    CHECK(zone_name(order[i]) == names[i]);
    CHECK(zone_index(order[i]) == i);
  }
  CHECK(zone_index(GazeZone::Front) == 0);
  CHECK(zone_index(GazeZone::EyesClosed) == 8);
  CHECK_FALSE(is_canonical(GazeZone::Unknown));
}

TEST_CASE("zone index is a bijection onto 0..8") {
  std::set<std::size_t> seen;
  for (GazeZone z : canonical_zone_order()) {
    seen.insert(zone_index(z));
    CHECK(zone_from_index(zone_index(z)) == z);
  }
  CHECK(seen.size() == kZoneCount);
  CHECK(*seen.rbegin() == kZoneCount - 1);
  CHECK(zone_from_index(kUnknownIndex) == GazeZone::Unknown);
  CHECK_THROWS_AS(zone_from_index(kLabelCount), InvalidArgument);
}

TEST_CASE("label parsing") {
  CHECK(parse_zone_label("front") == GazeZone::Front);
  CHECK(parse_zone_label("center_stack") == GazeZone::CenterStack);
  CHECK(parse_zone_label("Center Stack") == GazeZone::CenterStack);
  CHECK(parse_zone_label("RIGHT_WINDSHIELD") == GazeZone::RightWindshield);
  CHECK(parse_zone_label("unknown") == GazeZone::Unknown);
  CHECK_THROWS_AS(parse_zone_label("sunroof"), ParseError);
  CHECK_THROWS_WITH_AS(parse_zone_label("sunroof"), doctest::Contains("sunroof"), ParseError);
  CHECK_THROWS_AS(parse_zone_label(""), ParseError);
}

TEST_CASE("every label round-trips through its name") {
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    const GazeZone z = zone_from_index(i);
    CHECK(parse_zone_label(zone_name(z)) == z);
  }
}

TEST_CASE("label counts cover every frame") {
  oracle::Gen g(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto labels = oracle::random_labels(g, g.integer(1, 400));
    const Scanpath sp(oracle::to_zones(labels), 30);
    const auto counts = sp.label_counts();
    std::size_t total = 0;
    for (auto c : counts) total += c;
    CHECK(total == sp.size());
    CHECK(counts[kUnknownIndex] <= sp.size());
  }
}

TEST_CASE("scanpath validation") {
  CHECK_THROWS_AS(Scanpath({}, 30), InvalidArgument);
  CHECK_THROWS_AS(Scanpath({GazeZone::Front}, 0), InvalidArgument);
  CHECK_THROWS_AS(Scanpath({GazeZone::Front}, -5), InvalidArgument);
  const Scanpath sp(std::vector<GazeZone>(150, GazeZone::Front), 30, "d1", "r1");
  CHECK(sp.duration_seconds() == doctest::Approx(5.0));
  CHECK(sp.window({10, 20}).size() == 10);
  CHECK_THROWS_AS(sp.window({100, 151}), InvalidArgument);
  CHECK_THROWS_AS(sp.window({5, 5}), InvalidArgument);
  CHECK_THROWS_AS(sp.with_zones({GazeZone::Left}), InvalidArgument);
}

TEST_CASE("maneuver names and events") {
  for (ManeuverKind k : canonical_maneuver_order()) {
    CHECK(parse_maneuver(maneuver_name(k)) == k);
    CHECK(parse_maneuver(maneuver_code(k)) == k);
  }
  CHECK(parse_maneuver("llc") == ManeuverKind::LeftLaneChange);
  CHECK_THROWS_AS(parse_maneuver("merge"), ParseError);

  CHECK_NOTHROW(ManeuverEvent::lane_keeping({0, 150}, 30));
  CHECK_THROWS_AS(ManeuverEvent::lane_keeping({0, 149}, 30), InvalidArgument);
  CHECK_THROWS_AS(ManeuverEvent::lane_change(ManeuverKind::LaneKeeping, 10), InvalidArgument);
}

TEST_CASE("sweep margins") {
  const auto ev = ManeuverEvent::lane_change(ManeuverKind::LeftLaneChange, 9000);
  CHECK(is_sweepable(ev, 9150, 30));
  CHECK_FALSE(is_sweepable(ev, 9149, 30));
  CHECK(is_sweepable(ManeuverEvent::lane_change(ManeuverKind::LeftLaneChange, 300), 450, 30));
  CHECK_FALSE(is_sweepable(ManeuverEvent::lane_change(ManeuverKind::LeftLaneChange, 299), 450, 30));
}

TEST_CASE("feature config") {
  FeatureConfig c;
  CHECK(c.dimension() == 9);
  CHECK(c.window_frames(30) == 150);
  c.mode = FeatureMode::GlanceDuration;
  CHECK(c.dimension() == 9);
  c.mode = FeatureMode::GlanceDurationFrequency;
  CHECK(c.dimension() == 18);
  CHECK(parse_feature_mode("gdgf") == FeatureMode::GlanceDurationFrequency);
  CHECK(parse_feature_mode("GD_GF") == FeatureMode::GlanceDurationFrequency);
  CHECK(parse_feature_mode("Ga") == FeatureMode::GazeAccumulation);
  CHECK_THROWS_AS(parse_feature_mode("gf"), ParseError);

  FeatureConfig bad;
  bad.debounce_w = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = {};
  bad.window_seconds = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = {};
  bad.ridge_epsilon = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);

  FeatureConfig a, b;
  b.ridge_epsilon = 0.5;
  CHECK(a.same_features(b));
  b.debounce_w = 4;
  CHECK_FALSE(a.same_features(b));
}

}
