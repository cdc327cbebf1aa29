#include "gazedyn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "gazedyn/error.hpp"
#include "gazedyn/parallel.hpp"

namespace gazedyn::synth {

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not, so
// draws are built directly from the raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::size_t frames_of(double seconds, int fps) {
  return static_cast<std::size_t>(std::lround(seconds * fps));
}

std::size_t draw_frames(const GlanceStep& step, Rng& rng, int fps) {
  const double seconds =
      std::max(0.1, step.mean_seconds + step.jitter_seconds * rng.uniform(-1.0, 1.0));
  return std::max<std::size_t>(1, frames_of(seconds, fps));
}

void paint(std::vector<GazeZone>& zones, std::size_t begin, std::size_t end, GazeZone z) {
  end = std::min(end, zones.size());
  for (std::size_t i = begin; i < end; ++i) zones[i] = z;
}

const GlanceStep& pick_check(const std::vector<GlanceStep>& checks, Rng& rng) {
  double total = 0.0;
  for (const auto& c : checks) total += c.probability;
  double u = rng.uniform() * total;
  for (const auto& c : checks) {
    if (u < c.probability) return c;
    u -= c.probability;
  }
  return checks.back();
}

void fill_background(std::vector<GazeZone>& zones, const BehaviorTemplate& tmpl, Rng& rng,
                     int fps) {
  const BackgroundBehavior& bg = tmpl.background;
  const GlanceStep dwell{tmpl.baseline, bg.dwell_mean_seconds, bg.dwell_jitter_seconds, 1.0};
  // Start at a random phase of a baseline dwell.
  std::size_t pos = static_cast<std::size_t>(rng.uniform() * static_cast<double>(draw_frames(dwell, rng, fps)));
  paint(zones, 0, pos, tmpl.baseline);
  while (pos < zones.size()) {
    if (!bg.checks.empty()) {
      const GlanceStep& check = pick_check(bg.checks, rng);
      const std::size_t len = draw_frames(check, rng, fps);
      paint(zones, pos, pos + len, check.zone);
      pos += len;
    }
    const std::size_t len = draw_frames(dwell, rng, fps);
    paint(zones, pos, pos + len, tmpl.baseline);
    pos += len;
  }
}

void mark_transitions(std::vector<GazeZone>& zones, double probability, Rng& rng) {
  if (probability <= 0.0) return;
  for (std::size_t i = 1; i < zones.size(); ++i) {
    if (zones[i] == zones[i - 1] || !is_canonical(zones[i - 1]) || !is_canonical(zones[i])) continue;
    if (rng.uniform() >= probability) continue;
    const std::size_t len = 1 + rng.below(2);
    for (std::size_t k = i; k < std::min(i + len, zones.size()); ++k) zones[k] = GazeZone::Unknown;
    i += len;
  }
}

void check_step(const GlanceStep& s, const char* what) {
  if (!(s.mean_seconds > 0.0)) throw InvalidArgument(std::string(what) + " glance mean must be positive");
  if (!(s.jitter_seconds >= 0.0)) throw InvalidArgument(std::string(what) + " glance jitter must be nonnegative");
  if (!(s.probability >= 0.0 && s.probability <= 1.0)) {
    throw InvalidArgument(std::string(what) + " glance probability must lie in [0, 1]");
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  std::uint64_t z = parent + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void BehaviorTemplate::validate() const {
  for (const auto& s : schedule) check_step(s, "schedule");
  for (const auto& s : background.checks) check_step(s, "background");
  if (!(background.dwell_mean_seconds > 0.0) || !(background.dwell_jitter_seconds >= 0.0)) {
    throw InvalidArgument("background dwell must have positive mean and nonnegative jitter");
  }
  if (!is_canonical(baseline)) throw InvalidArgument("baseline zone must not be Unknown");
  if (!(transition_unknown_probability >= 0.0 && transition_unknown_probability <= 1.0)) {
    throw InvalidArgument("transition_unknown_probability must lie in [0, 1]");
  }
  if (kind != ManeuverKind::LaneKeeping) {
    if (pre_seconds < 10.0 || post_seconds < 5.0) {
      throw InvalidArgument(std::string(maneuver_name(kind)) +
                            " template needs at least 10 s before and 5 s after SyncF");
    }
    if (!(anchor_lead_seconds >= 0.0)) throw InvalidArgument("anchor lead must be nonnegative");
    double longest = anchor_lead_seconds;
    for (const auto& s : schedule) longest += s.mean_seconds + s.jitter_seconds;
    if (longest > pre_seconds) {
      throw InvalidArgument(std::string(maneuver_name(kind)) +
                            " schedule can exceed the pre-SyncF span");
    }
  }
}

BehaviorTemplate default_template(ManeuverKind kind) {
  using Z = GazeZone;
  BehaviorTemplate t;
  t.kind = kind;
  // Idle checks. Ahead of a lane change, drivers leave out the side away
  // from the target lane.
  const GlanceStep speedometer{Z::Speedometer, 0.6, 0.25, 0.30};
  const GlanceStep rearview{Z::Rearview, 0.6, 0.25, 0.22};
  const GlanceStep center_stack{Z::CenterStack, 0.7, 0.3, 0.10};
  const GlanceStep left{Z::Left, 0.5, 0.2, 0.08};
  const GlanceStep right{Z::Right, 0.5, 0.2, 0.08};
  const GlanceStep eyes_closed{Z::EyesClosed, 0.25, 0.1, 0.12};
  const GlanceStep left_shoulder{Z::LeftShoulder, 0.4, 0.15, 0.05};
  const GlanceStep right_windshield{Z::RightWindshield, 0.5, 0.2, 0.05};
  switch (kind) {
    case ManeuverKind::LeftLaneChange:
      t.background.checks = {speedometer, rearview, left, eyes_closed, left_shoulder};
      break;
    case ManeuverKind::RightLaneChange:
      t.background.checks = {speedometer, rearview, center_stack, right, eyes_closed, right_windshield};
      break;
    case ManeuverKind::LaneKeeping:
      t.background.checks = {speedometer, rearview,    center_stack,  left,
                             right,       eyes_closed, left_shoulder, right_windshield};
      break;
  }
  switch (kind) {
    case ManeuverKind::LeftLaneChange:
      t.schedule = {{Z::Left, 0.8, 0.25, 1.0},     {Z::Front, 0.4, 0.15, 1.0},
                    {Z::Rearview, 0.9, 0.25, 1.0}, {Z::Front, 0.3, 0.1, 1.0},
                    {Z::Left, 0.9, 0.3, 1.0},      {Z::LeftShoulder, 0.4, 0.15, 0.5}};
      break;
    case ManeuverKind::RightLaneChange:
      t.schedule = {{Z::Rearview, 0.9, 0.25, 1.0}, {Z::Front, 0.4, 0.15, 1.0},
                    {Z::Right, 1.0, 0.3, 1.0},     {Z::Front, 0.3, 0.1, 1.0},
                    {Z::Rearview, 0.5, 0.2, 0.5},  {Z::RightWindshield, 0.4, 0.15, 0.5}};
      break;
    case ManeuverKind::LaneKeeping:
      break;
  }
  return t;
}

TemplateSet default_templates() {
  return {default_template(ManeuverKind::LeftLaneChange),
          default_template(ManeuverKind::RightLaneChange),
          default_template(ManeuverKind::LaneKeeping)};
}

void NoiseChannel::validate() const {
  for (std::size_t r = 0; r < kLabelCount; ++r) {
    double sum = 0.0;
    for (double p : confusion[r]) {
      if (!(p >= 0.0)) {
        throw InvalidArgument("noise channel row " + std::string(zone_name(zone_from_index(r))) +
                              " has a negative entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidArgument("noise channel row " + std::string(zone_name(zone_from_index(r))) +
                            " sums to " + std::to_string(sum) + ", not 1");
    }
  }
  if (!(burst_rho >= 0.0 && burst_rho < 1.0)) throw InvalidArgument("burst_rho must lie in [0, 1)");
}

NoiseChannel NoiseChannel::identity() {
  NoiseChannel c;
  for (std::size_t r = 0; r < kLabelCount; ++r) c.confusion[r][r] = 1.0;
  return c;
}

NoiseChannel NoiseChannel::uniform(double error) {
  if (!(error >= 0.0 && error <= 1.0)) throw InvalidArgument("error rate must lie in [0, 1]");
  NoiseChannel c;
  for (std::size_t r = 0; r < kLabelCount; ++r) {
    for (std::size_t k = 0; k < kLabelCount; ++k) {
      c.confusion[r][k] = r == k ? 1.0 - error : error / static_cast<double>(kLabelCount - 1);
    }
  }
  return c;
}

NoiseChannel NoiseChannel::default_channel() {
  using Z = GazeZone;
  constexpr double kError = 0.15;
  constexpr double kUnknown = 0.02;
  const std::array<std::vector<Z>, kZoneCount> neighbours = {{
      {Z::Speedometer, Z::Rearview},        // Front
      {Z::RightWindshield, Z::CenterStack}, // Right
      {Z::LeftShoulder, Z::Front},          // Left
      {Z::Speedometer, Z::Right},            // CenterStack
      {Z::Front},                           // Rearview
      {Z::Front, Z::EyesClosed},            // Speedometer
      {Z::Left},                            // LeftShoulder
      {Z::Right, Z::Front},                 // RightWindshield
      {Z::Speedometer},                     // EyesClosed
  }};
  NoiseChannel c;
  for (std::size_t r = 0; r < kZoneCount; ++r) {
    c.confusion[r][r] = 1.0 - kError;
    c.confusion[r][kUnknownIndex] = kUnknown;
    const double share = (kError - kUnknown) / static_cast<double>(neighbours[r].size());
    for (Z n : neighbours[r]) c.confusion[r][zone_index(n)] += share;
  }
  c.confusion[kUnknownIndex][kUnknownIndex] = 1.0 - kError;
  c.confusion[kUnknownIndex][zone_index(Z::Front)] = kError;
  return c;
}

GeneratedEvent generate_event(const BehaviorTemplate& tmpl, std::uint64_t seed, int fps) {
  if (fps <= 0) throw InvalidArgument("fps must be positive");
  tmpl.validate();
  Rng rng(seed);

  if (tmpl.kind == ManeuverKind::LaneKeeping) {
    std::vector<GazeZone> zones(frames_of(kLaneKeepingSeconds, fps), tmpl.baseline);
    fill_background(zones, tmpl, rng, fps);
    mark_transitions(zones, tmpl.transition_unknown_probability, rng);
    const std::size_t n = zones.size();
    return {Scanpath(std::move(zones), fps), ManeuverEvent::lane_keeping({0, n}, fps)};
  }

  const std::size_t syncf = frames_of(tmpl.pre_seconds, fps);
  std::vector<GazeZone> zones(syncf + frames_of(tmpl.post_seconds, fps), tmpl.baseline);
  fill_background(zones, tmpl, rng, fps);

  std::size_t pos = syncf - std::min(syncf, frames_of(tmpl.anchor_lead_seconds, fps));
  paint(zones, pos, syncf, tmpl.baseline);
  for (auto it = tmpl.schedule.rbegin(); it != tmpl.schedule.rend(); ++it) {
    const std::size_t len = draw_frames(*it, rng, fps);
    if (rng.uniform() >= it->probability) continue;
    const std::size_t start = pos - std::min(pos, len);
    paint(zones, start, pos, it->zone);
    pos = start;
  }
  mark_transitions(zones, tmpl.transition_unknown_probability, rng);
  return {Scanpath(std::move(zones), fps), ManeuverEvent::lane_change(tmpl.kind, syncf)};
}

std::vector<DriverCounts> reference_driver_counts() {
  return {{"driver1", 9, 5, 20},  {"driver2", 5, 5, 60},  {"driver3", 5, 4, 50},
          {"driver4", 10, 4, 32}, {"driver5", 10, 4, 45}, {"driver6", 6, 5, 80},
          {"driver7", 5, 5, 46}};
}

std::vector<DriverCounts> driver_counts(std::size_t n) {
  const auto table = reference_driver_counts();
  std::vector<DriverCounts> out;
  for (std::size_t i = 0; i < n; ++i) {
    DriverCounts c = table[i % table.size()];
    c.driver_id = "driver" + std::to_string(i + 1);
    out.push_back(c);
  }
  return out;
}

namespace {

BehaviorTemplate scaled(BehaviorTemplate t, double factor) {
  for (auto& s : t.schedule) s.mean_seconds *= factor;
  return t;
}

}  // namespace

Corpus generate_corpus(const CorpusSpec& spec) {
  if (spec.fps <= 0) throw InvalidArgument("fps must be positive");
  if (!(spec.driver_jitter >= 0.0 && spec.driver_jitter < 1.0)) {
    throw InvalidArgument("driver_jitter must lie in [0, 1)");
  }
  for (const auto& t : spec.templates) t.validate();
  for (std::size_t k = 0; k < kManeuverCount; ++k) {
    if (maneuver_index(spec.templates[k].kind) != k) {
      throw InvalidArgument("template set is not ordered LLC, RLC, LK");
    }
  }

  std::vector<std::optional<Drive>> drives(spec.drivers.size());
  parallel_for(spec.drivers.size(), [&](std::size_t d) {
    const DriverCounts& counts = spec.drivers[d];
    const std::uint64_t driver_seed = derive_seed(spec.seed, d);
    Rng rng(driver_seed);
    const double factor = 1.0 + spec.driver_jitter * rng.uniform(-1.0, 1.0);
    TemplateSet templates;
    for (std::size_t k = 0; k < kManeuverCount; ++k) templates[k] = scaled(spec.templates[k], factor);

    std::vector<ManeuverKind> kinds;
    kinds.insert(kinds.end(), counts.left_lane_changes, ManeuverKind::LeftLaneChange);
    kinds.insert(kinds.end(), counts.right_lane_changes, ManeuverKind::RightLaneChange);
    kinds.insert(kinds.end(), counts.lane_keeping, ManeuverKind::LaneKeeping);
    rng.shuffle(kinds);
    if (kinds.empty()) return;

    std::vector<GazeZone> zones;
    std::vector<ManeuverEvent> events;
    for (std::size_t e = 0; e < kinds.size(); ++e) {
      GeneratedEvent g =
          generate_event(templates[maneuver_index(kinds[e])], derive_seed(driver_seed, e), spec.fps);
      const std::size_t offset = zones.size();
      zones.insert(zones.end(), g.segment.zones().begin(), g.segment.zones().end());
      ManeuverEvent ev = g.event;
      if (ev.is_lane_change()) {
        ev.syncf_frame += offset;
      } else {
        ev.segment = {ev.segment.begin + offset, ev.segment.end + offset};
      }
      events.push_back(ev);
    }
    Scanpath clean(std::move(zones), spec.fps, counts.driver_id, "drive1");
    drives[d] = Drive{counts.driver_id, "drive1", clean, clean, std::move(events)};
  });

  Corpus corpus;
  for (auto& d : drives) {
    if (d) corpus.push_back(std::move(*d));
  }
  return corpus;
}

Scanpath corrupt_scanpath(const Scanpath& scanpath, const NoiseChannel& channel,
                          std::uint64_t seed) {
  channel.validate();
  Rng rng(seed);
  auto draw = [&](std::size_t row) {
    double u = rng.uniform();
    for (std::size_t k = 0; k < kLabelCount; ++k) {
      const double p = channel.confusion[row][k];
      if (u < p) return static_cast<GazeZone>(k);
      u -= p;
    }
    // Rounding residue: fall back to the last label with mass.
    for (std::size_t k = kLabelCount; k-- > 0;) {
      if (channel.confusion[row][k] > 0.0) return static_cast<GazeZone>(k);
    }
    return static_cast<GazeZone>(row);
  };

  std::vector<GazeZone> out;
  out.reserve(scanpath.size());
  bool in_error = false;
  GazeZone previous = GazeZone::Unknown;
  for (GazeZone truth : scanpath.zones()) {
    GazeZone emitted;
    if (in_error && previous != truth && channel.burst_rho > 0.0 &&
        rng.uniform() < channel.burst_rho) {
      emitted = previous;
    } else {
      emitted = draw(zone_index(truth));
    }
    out.push_back(emitted);
    in_error = emitted != truth;
    previous = emitted;
  }
  return scanpath.with_zones(std::move(out));
}

void apply_noise(Corpus& corpus, const NoiseChannel& channel, std::uint64_t seed) {
  channel.validate();
  parallel_for(corpus.size(), [&](std::size_t i) {
    Drive& d = corpus[i];
    const Scanpath& clean = d.annotated ? *d.annotated : d.estimated;
    d.estimated = corrupt_scanpath(clean, channel, derive_seed(seed, i));
  });
}

}  // namespace gazedyn::synth
