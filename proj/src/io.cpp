#include "gazedyn/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gazedyn/error.hpp"
#include "json.hpp"

namespace gazedyn::io {

using nlohmann::json;

namespace {

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n' ? 1 : 0;
  return "line " + std::to_string(line);
}

json parse_document(const std::string& text, const std::string& origin, const char* format) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": malformed JSON at " + line_context(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError(origin + ": top level must be an object");
  const auto fmt = doc.find("format");
  if (fmt == doc.end() || !fmt->is_string() || fmt->get<std::string>() != format) {
    throw ParseError(origin + ": field 'format' must be \"" + format + "\"");
  }
  const auto ver = doc.find("version");
  if (ver == doc.end() || !ver->is_number_integer()) {
    throw ParseError(origin + ": field 'version' missing or not an integer");
  }
  if (ver->get<int>() != kFormatVersion) {
    throw ParseError(origin + ": unsupported " + format + " version " +
                     std::to_string(ver->get<int>()) + " (expected " +
                     std::to_string(kFormatVersion) + ")");
  }
  return doc;
}

json header(const char* format) { return json{{"format", format}, {"version", kFormatVersion}}; }

// Typed field access with origin/field context in every error.
class Reader {
 public:
  Reader(const json& node, std::string context) : node_(node), context_(std::move(context)) {}

  const json& at(const std::string& key) const {
    const auto it = node_.find(key);
    if (it == node_.end()) throw ParseError(context_ + ": missing field '" + key + "'");
    return *it;
  }
  bool has(const std::string& key) const { return node_.contains(key); }
  std::string where(const std::string& key) const { return context_ + ": field '" + key + "'"; }
  std::string where(const std::string& key, std::size_t index) const {
    return where(key + "[" + std::to_string(index) + "]");
  }

  std::string str(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ParseError(where(key) + " must be a string");
    return v.get<std::string>();
  }
  long long integer(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ParseError(where(key) + " must be an integer");
    return v.get<long long>();
  }
  double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ParseError(where(key) + " must be a number");
    return v.get<double>();
  }
  const json& array(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ParseError(where(key) + " must be an array");
    return v;
  }
  Reader child(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_object()) throw ParseError(where(key) + " must be an object");
    return Reader(v, context_ + "." + key);
  }

 private:
  const json& node_;
  std::string context_;
};

std::vector<double> numbers(const json& arr, const std::string& where) {
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ParseError(where + "[" + std::to_string(i) + "] must be a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

GazeZone zone_at(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + " must be a zone label string");
  try {
    return parse_zone_label(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

std::size_t frame_at(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError(where + " must be a nonnegative integer frame index");
  }
  return v.get<std::size_t>();
}

json config_to_json(const FeatureConfig& c) {
  return json{{"mode", std::string(feature_mode_name(c.mode))},
              {"window_seconds", c.window_seconds},
              {"debounce_w", c.debounce_w},
              {"ridge_epsilon", c.ridge_epsilon}};
}

FeatureConfig config_from_json(const Reader& r) {
  FeatureConfig c;
  try {
    c.mode = parse_feature_mode(r.str("mode"));
  } catch (const ParseError& e) {
    throw ParseError(r.where("mode") + ": " + e.what());
  }
  c.window_seconds = r.number("window_seconds");
  c.debounce_w = static_cast<int>(r.integer("debounce_w"));
  c.ridge_epsilon = r.number("ridge_epsilon");
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(r.where("mode") + " block invalid: " + e.what());
  }
  return c;
}

json zone_order_json() {
  json order = json::array();
  for (GazeZone z : canonical_zone_order()) order.push_back(std::string(zone_name(z)));
  return order;
}

json step_to_json(const synth::GlanceStep& s) {
  return json{{"zone", std::string(zone_name(s.zone))},
              {"mean_seconds", s.mean_seconds},
              {"jitter_seconds", s.jitter_seconds},
              {"probability", s.probability}};
}

synth::GlanceStep step_from_json(const json& v, const std::string& where) {
  if (!v.is_object()) throw ParseError(where + " must be an object");
  Reader r(v, where);
  synth::GlanceStep s;
  s.zone = zone_at(r.at("zone"), r.where("zone"));
  s.mean_seconds = r.number("mean_seconds");
  s.jitter_seconds = r.number("jitter_seconds");
  s.probability = r.number("probability");
  return s;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string relative_to(const fs::path& p, const fs::path& base) {
  std::error_code ec;
  fs::path rel = fs::relative(fs::absolute(p), fs::absolute(base), ec);
  return ec || rel.empty() ? p.generic_string() : rel.generic_string();
}

}  // namespace

void write_text_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at '" + path.string() + "'");
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string scanpath_to_json(const Scanpath& sp) {
  json doc = header("gazedyn.scanpath");
  doc["driver_id"] = sp.driver_id();
  doc["drive_id"] = sp.drive_id();
  doc["fps"] = sp.fps();
  json zones = json::array();
  for (GazeZone z : sp.zones()) zones.push_back(std::string(zone_name(z)));
  doc["zones"] = std::move(zones);
  return doc.dump() + "\n";
}

Scanpath scanpath_from_json(const std::string& text, const std::string& origin) {
  const json doc = parse_document(text, origin, "gazedyn.scanpath");
  const Reader r(doc, origin);
  const long long fps = r.integer("fps");
  if (fps <= 0) throw ParseError(r.where("fps") + " must be positive, got " + std::to_string(fps));
  const json& arr = r.array("zones");
  if (arr.empty()) throw ParseError(r.where("zones") + " must not be empty");
  std::vector<GazeZone> zones;
  zones.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    zones.push_back(zone_at(arr[i], r.where("zones", i)));
  }
  return Scanpath(std::move(zones), static_cast<int>(fps), r.str("driver_id"), r.str("drive_id"));
}

void save_scanpath(const Scanpath& sp, const fs::path& path) {
  write_text_atomic(path, scanpath_to_json(sp));
}

Scanpath load_scanpath(const fs::path& path) {
  return scanpath_from_json(read_text(path), path.string());
}

void save_events(const EventFile& file, const fs::path& path) {
  json doc = header("gazedyn.events");
  doc["fps"] = file.fps;
  json events = json::array();
  for (const ManeuverEvent& e : file.events) {
    json ev{{"kind", std::string(maneuver_name(e.kind))}};
    if (e.is_lane_change()) {
      ev["syncf_frame"] = e.syncf_frame;
    } else {
      ev["segment"] = json::array({e.segment.begin, e.segment.end});
    }
    events.push_back(std::move(ev));
  }
  doc["events"] = std::move(events);
  write_text_atomic(path, doc.dump(1) + "\n");
}

EventFile load_events(const fs::path& path) {
  const std::string origin = path.string();
  const json doc = parse_document(read_text(path), origin, "gazedyn.events");
  const Reader r(doc, origin);
  EventFile file;
  const long long fps = r.integer("fps");
  if (fps <= 0) throw ParseError(r.where("fps") + " must be positive");
  file.fps = static_cast<int>(fps);
  const json& arr = r.array("events");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = origin + ": events[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) throw ParseError(where + " must be an object");
    const Reader er(arr[i], where);
    ManeuverKind kind;
    try {
      kind = parse_maneuver(er.str("kind"));
    } catch (const ParseError& e) {
      throw ParseError(er.where("kind") + ": " + e.what());
    }
    if (kind != ManeuverKind::LaneKeeping) {
      file.events.push_back(
          ManeuverEvent::lane_change(kind, frame_at(er.at("syncf_frame"), er.where("syncf_frame"))));
    } else {
      const json& seg = er.array("segment");
      if (seg.size() != 2) throw ParseError(er.where("segment") + " must be [start, end]");
      const FrameSpan span{frame_at(seg[0], er.where("segment") + "[0]"),
                           frame_at(seg[1], er.where("segment") + "[1]")};
      try {
        file.events.push_back(ManeuverEvent::lane_keeping(span, file.fps));
      } catch (const InvalidArgument& e) {
        throw ParseError(where + ": " + e.what());
      }
    }
  }
  return file;
}

void save_models(std::span<const behavior::BehaviorModel> models, const fs::path& path) {
  if (models.empty()) throw InvalidArgument("no models to save");
  json doc = header("gazedyn.model");
  doc["feature_config"] = config_to_json(models.front().config());
  doc["zone_order"] = zone_order_json();
  json classes = json::array();
  for (const auto& m : models) {
    if (!m.config().same_features(models.front().config())) {
      throw InvalidArgument("models in one file must share a feature configuration");
    }
    json mean = json::array();
    for (Eigen::Index i = 0; i < m.mean().size(); ++i) mean.push_back(m.mean()(i));
    json cov = json::array();
    for (Eigen::Index i = 0; i < m.covariance().rows(); ++i) {
      for (Eigen::Index j = 0; j < m.covariance().cols(); ++j) cov.push_back(m.covariance()(i, j));
    }
    classes.push_back(json{{"label", std::string(maneuver_name(m.label()))},
                           {"ridge_epsilon", m.ridge_epsilon()},
                           {"mean", std::move(mean)},
                           {"covariance", std::move(cov)}});
  }
  doc["classes"] = std::move(classes);
  write_text_atomic(path, doc.dump(1) + "\n");
}

std::vector<behavior::BehaviorModel> load_models(const fs::path& path,
                                                 const std::optional<FeatureConfig>& expected) {
  const std::string origin = path.string();
  const json doc = parse_document(read_text(path), origin, "gazedyn.model");
  const Reader r(doc, origin);
  const FeatureConfig config = config_from_json(r.child("feature_config"));
  if (r.array("zone_order") != zone_order_json()) {
    throw ParseError(r.where("zone_order") + " differs from the canonical zone order");
  }
  if (expected && !expected->same_features(config)) {
    throw InvalidArgument(origin + ": model was fitted with " +
                          std::string(feature_mode_name(config.mode)) + " features (window " +
                          std::to_string(config.window_seconds) + " s, W " +
                          std::to_string(config.debounce_w) + ") but " +
                          std::string(feature_mode_name(expected->mode)) + " features (window " +
                          std::to_string(expected->window_seconds) + " s, W " +
                          std::to_string(expected->debounce_w) + ") were requested");
  }
  const auto d = static_cast<Eigen::Index>(config.dimension());
  std::vector<behavior::BehaviorModel> models;
  const json& classes = r.array("classes");
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const std::string where = origin + ": classes[" + std::to_string(c) + "]";
    if (!classes[c].is_object()) throw ParseError(where + " must be an object");
    const Reader cr(classes[c], where);
    ManeuverKind label;
    try {
      label = parse_maneuver(cr.str("label"));
    } catch (const ParseError& e) {
      throw ParseError(cr.where("label") + ": " + e.what());
    }
    const std::vector<double> mean = numbers(cr.array("mean"), cr.where("mean"));
    const std::vector<double> cov = numbers(cr.array("covariance"), cr.where("covariance"));
    if (static_cast<Eigen::Index>(mean.size()) != d || static_cast<Eigen::Index>(cov.size()) != d * d) {
      throw ParseError(where + ": mean/covariance sizes do not match " +
                       std::string(feature_mode_name(config.mode)) + " dimension " +
                       std::to_string(d));
    }
    Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(mean.data(), d);
    Eigen::MatrixXd sigma(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) sigma(i, j) = cov[static_cast<std::size_t>(i * d + j)];
    }
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
      throw ParseError(cr.where("covariance") + " is not symmetric within 1e-9");
    }
    FeatureConfig stored = config;
    stored.ridge_epsilon = cr.number("ridge_epsilon");
    models.emplace_back(label, std::move(mu), std::move(sigma), stored.ridge_epsilon, stored);
  }
  if (models.empty()) throw ParseError(r.where("classes") + " is empty");
  return models;
}

Manifest load_manifest(const fs::path& path) {
  const std::string origin = path.string();
  const json doc = parse_document(read_text(path), origin, "gazedyn.manifest");
  const Reader r(doc, origin);
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  Manifest m;
  std::set<std::pair<std::string, std::string>> seen;
  const json& drives = r.array("drives");
  for (std::size_t i = 0; i < drives.size(); ++i) {
    const std::string where = origin + ": drives[" + std::to_string(i) + "]";
    if (!drives[i].is_object()) throw ParseError(where + " must be an object");
    const Reader dr(drives[i], where);
    ManifestEntry e;
    e.driver_id = dr.str("driver_id");
    e.drive_id = dr.str("drive_id");
    e.scanpath = resolve(base, dr.str("scanpath"));
    e.events = resolve(base, dr.str("events"));
    if (dr.has("ground_truth") && !dr.at("ground_truth").is_null()) {
      e.ground_truth = resolve(base, dr.str("ground_truth"));
    }
    if (!seen.insert({e.driver_id, e.drive_id}).second) {
      throw ParseError(where + ": duplicate (driver_id, drive_id) pair ('" + e.driver_id + "', '" +
                       e.drive_id + "')");
    }
    m.drives.push_back(std::move(e));
  }
  return m;
}

void save_manifest(const Manifest& manifest, const fs::path& path) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  json doc = header("gazedyn.manifest");
  json drives = json::array();
  for (const ManifestEntry& e : manifest.drives) {
    json d{{"driver_id", e.driver_id},
           {"drive_id", e.drive_id},
           {"scanpath", relative_to(e.scanpath, base)},
           {"events", relative_to(e.events, base)}};
    if (e.ground_truth) d["ground_truth"] = relative_to(*e.ground_truth, base);
    drives.push_back(std::move(d));
  }
  doc["drives"] = std::move(drives);
  write_text_atomic(path, doc.dump(1) + "\n");
}

Corpus load_corpus(const Manifest& manifest) {
  Corpus corpus;
  for (const ManifestEntry& e : manifest.drives) {
    const std::string name = "'" + e.driver_id + "/" + e.drive_id + "'";
    Scanpath estimated = load_scanpath(e.scanpath);
    EventFile events = load_events(e.events);
    if (events.fps != estimated.fps()) {
      throw ParseError(e.events.string() + ": fps " + std::to_string(events.fps) +
                       " differs from scanpath fps " + std::to_string(estimated.fps()));
    }
    std::optional<Scanpath> annotated;
    if (e.ground_truth) {
      annotated = load_scanpath(*e.ground_truth);
      if (annotated->size() != estimated.size() || annotated->fps() != estimated.fps()) {
        throw ParseError("drive " + name + ": ground truth and estimated streams are not aligned");
      }
    }
    for (const ManeuverEvent& ev : events.events) {
      const bool inside = ev.is_lane_change() ? ev.syncf_frame < estimated.size()
                                              : ev.segment.end <= estimated.size();
      if (!inside) {
        throw ParseError(e.events.string() + ": " + std::string(maneuver_name(ev.kind)) +
                         " event lies outside the " + std::to_string(estimated.size()) +
                         "-frame drive");
      }
    }
    corpus.push_back(Drive{e.driver_id, e.drive_id, std::move(estimated), std::move(annotated),
                           std::move(events.events)});
  }
  return corpus;
}

void save_templates(const synth::TemplateSet& templates, const fs::path& path) {
  json doc = header("gazedyn.templates");
  json arr = json::array();
  for (const auto& t : templates) {
    json schedule = json::array();
    for (const auto& s : t.schedule) schedule.push_back(step_to_json(s));
    json checks = json::array();
    for (const auto& s : t.background.checks) checks.push_back(step_to_json(s));
    arr.push_back(json{{"kind", std::string(maneuver_name(t.kind))},
                       {"baseline", std::string(zone_name(t.baseline))},
                       {"schedule", std::move(schedule)},
                       {"background",
                        {{"dwell_mean_seconds", t.background.dwell_mean_seconds},
                         {"dwell_jitter_seconds", t.background.dwell_jitter_seconds},
                         {"checks", std::move(checks)}}},
                       {"anchor_lead_seconds", t.anchor_lead_seconds},
                       {"pre_seconds", t.pre_seconds},
                       {"post_seconds", t.post_seconds},
                       {"transition_unknown_probability", t.transition_unknown_probability}});
  }
  doc["templates"] = std::move(arr);
  write_text_atomic(path, doc.dump(1) + "\n");
}

synth::TemplateSet load_templates(const fs::path& path) {
  const std::string origin = path.string();
  const json doc = parse_document(read_text(path), origin, "gazedyn.templates");
  const Reader r(doc, origin);
  const json& arr = r.array("templates");
  synth::TemplateSet set = synth::default_templates();
  std::array<bool, kManeuverCount> found{};
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = origin + ": templates[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) throw ParseError(where + " must be an object");
    const Reader tr(arr[i], where);
    synth::BehaviorTemplate t;
    try {
      t.kind = parse_maneuver(tr.str("kind"));
    } catch (const ParseError& e) {
      throw ParseError(tr.where("kind") + ": " + e.what());
    }
    t.baseline = zone_at(tr.at("baseline"), tr.where("baseline"));
    const json& schedule = tr.array("schedule");
    for (std::size_t k = 0; k < schedule.size(); ++k) {
      t.schedule.push_back(step_from_json(schedule[k], tr.where("schedule", k)));
    }
    const Reader bg = tr.child("background");
    t.background.dwell_mean_seconds = bg.number("dwell_mean_seconds");
    t.background.dwell_jitter_seconds = bg.number("dwell_jitter_seconds");
    const json& checks = bg.array("checks");
    for (std::size_t k = 0; k < checks.size(); ++k) {
      t.background.checks.push_back(step_from_json(checks[k], bg.where("checks", k)));
    }
    t.anchor_lead_seconds = tr.number("anchor_lead_seconds");
    t.pre_seconds = tr.number("pre_seconds");
    t.post_seconds = tr.number("post_seconds");
    t.transition_unknown_probability = tr.number("transition_unknown_probability");
    try {
      t.validate();
    } catch (const InvalidArgument& e) {
      throw ParseError(where + ": " + e.what());
    }
    set[maneuver_index(t.kind)] = t;
    found[maneuver_index(t.kind)] = true;
  }
  for (ManeuverKind k : canonical_maneuver_order()) {
    if (!found[maneuver_index(k)]) {
      throw ParseError(origin + ": no template for " + std::string(maneuver_name(k)));
    }
  }
  return set;
}

void save_noise_channel(const synth::NoiseChannel& channel, const fs::path& path) {
  json doc = header("gazedyn.noise");
  json labels = zone_order_json();
  labels.push_back(std::string(zone_name(GazeZone::Unknown)));
  doc["labels"] = std::move(labels);
  json rows = json::array();
  for (const auto& row : channel.confusion) rows.push_back(json(std::vector<double>(row.begin(), row.end())));
  doc["confusion"] = std::move(rows);
  doc["burst_rho"] = channel.burst_rho;
  write_text_atomic(path, doc.dump(1) + "\n");
}

synth::NoiseChannel load_noise_channel(const fs::path& path) {
  const std::string origin = path.string();
  const json doc = parse_document(read_text(path), origin, "gazedyn.noise");
  const Reader r(doc, origin);
  json labels = zone_order_json();
  labels.push_back(std::string(zone_name(GazeZone::Unknown)));
  if (r.array("labels") != labels) {
    throw ParseError(r.where("labels") + " must list the nine canonical zones then Unknown");
  }
  const json& rows = r.array("confusion");
  if (rows.size() != kLabelCount) throw ParseError(r.where("confusion") + " must have 10 rows");
  synth::NoiseChannel c;
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    const std::string where = r.where("confusion", i);
    if (!rows[i].is_array() || rows[i].size() != kLabelCount) throw ParseError(where + " must have 10 entries");
    const std::vector<double> row = numbers(rows[i], where);
    std::copy(row.begin(), row.end(), c.confusion[i].begin());
  }
  c.burst_rho = r.number("burst_rho");
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return c;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_time(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", seconds);
  // Avoid "-0.000000".
  if (std::string(buf) == "-0.000000") return "0.000000";
  return buf;
}

std::string recall_csv(const eval::RecallCurve& curve) {
  std::string out = "positive_class,t_rel,tp,p,recall\n";
  const std::string label(maneuver_code(curve.positive));
  for (const auto& p : curve.points) {
    out += label + "," + format_time(p.t_rel) + "," + std::to_string(p.true_positives) + "," +
           std::to_string(p.positives) + "," + format_number(p.recall) + "\n";
  }
  return out;
}

std::string traces_csv(const eval::ConfidenceTrace& trace) {
  std::string out = "event_kind,model,t_rel,mean,std\n";
  const std::string kind(maneuver_code(trace.event_kind));
  for (std::size_t m = 0; m < trace.models.size(); ++m) {
    const std::string model(maneuver_code(trace.models[m]));
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
      out += kind + "," + model + "," + format_time(trace.t_rel[t]) + "," +
             format_number(trace.mean[m][t]) + "," + format_number(trace.stddev[m][t]) + "\n";
    }
  }
  return out;
}

std::string distributions_csv(const eval::MetricDistributions& dist) {
  std::string out = "metric,zone,value\n";
  auto emit = [&](const char* metric, const auto& lists) {
    for (std::size_t j = 0; j < kZoneCount; ++j) {
      const std::string zone(zone_name(zone_from_index(j)));
      for (double v : lists[j]) out += std::string(metric) + "," + zone + "," + format_number(v) + "\n";
    }
  };
  emit("ratio", dist.ratio);
  emit("abs_error", dist.abs_error);
  return out;
}

std::string confusion_csv(const eval::ConfusionMatrix& cm, std::span<const std::string> labels) {
  if (labels.size() != cm.classes()) throw InvalidArgument("confusion labels do not match classes");
  std::string out = "true,predicted,count,rate\n";
  for (std::size_t t = 0; t < cm.classes(); ++t) {
    const double row = static_cast<double>(cm.row_total(t));
    for (std::size_t p = 0; p < cm.classes(); ++p) {
      out += labels[t] + "," + labels[p] + "," + std::to_string(cm.count(t, p)) + "," +
             format_number(cm.rate(t, p)) + "\n";
    }
    out += labels[t] + ",Outside," + std::to_string(cm.outside(t)) + "," +
           format_number(row > 0 ? static_cast<double>(cm.outside(t)) / row : 0.0) + "\n";
  }
  return out;
}

void write_recall_csv(const eval::RecallCurve& curve, const fs::path& path) {
  write_text_atomic(path, recall_csv(curve));
}

void write_traces_csv(const eval::ConfidenceTrace& trace, const fs::path& path) {
  write_text_atomic(path, traces_csv(trace));
}

void write_distributions_csv(const eval::MetricDistributions& dist, const fs::path& path) {
  write_text_atomic(path, distributions_csv(dist));
}

void write_confusion_csv(const eval::ConfusionMatrix& cm, std::span<const std::string> labels,
                         const fs::path& path) {
  write_text_atomic(path, confusion_csv(cm, labels));
}

}  // namespace gazedyn::io
