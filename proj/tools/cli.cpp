#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "gazedyn/behavior.hpp"
#include "gazedyn/error.hpp"
#include "gazedyn/eval.hpp"
#include "gazedyn/io.hpp"
#include "gazedyn/parallel.hpp"
#include "gazedyn/synth.hpp"
#include "json.hpp"

namespace gazedyn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string subcommand;
  std::string manifest;
  std::string mode = "ga";
  double window = 5.0;
  int debounce_w = 6;
  double ridge = 1e-6;
  std::uint64_t seed = 42;
  std::string out = ".";
  // synth
  std::size_t drivers = 7;
  int fps = 30;
  std::string noise = "default";
  double burst_rho = -1.0;  // < 0: keep the channel's own value
  std::string templates;
  // fit / predict / eval
  std::string model;
  bool cv = false;
  bool gaze_quality = false;
  std::string lc_source = "annotated";
  std::string lk_source = "estimated";
  double sweep = kSweepSeconds;
};

FeatureConfig feature_config(const RunConfig& rc) {
  FeatureConfig c;
  c.mode = parse_feature_mode(rc.mode);
  c.window_seconds = rc.window;
  c.debounce_w = rc.debounce_w;
  c.ridge_epsilon = rc.ridge;
  c.validate();
  return c;
}

eval::ProtocolOptions protocol(const RunConfig& rc) {
  eval::ProtocolOptions o;
  o.config = feature_config(rc);
  o.lane_change_training = eval::parse_gaze_source(rc.lc_source);
  o.lane_keeping_training = eval::parse_gaze_source(rc.lk_source);
  if (!(rc.sweep > 0.0)) throw InvalidArgument("--sweep must be positive");
  o.sweep_seconds = rc.sweep;
  return o;
}

synth::NoiseChannel noise_channel(const RunConfig& rc) {
  synth::NoiseChannel c;
  if (rc.noise == "default") {
    c = synth::NoiseChannel::default_channel();
  } else if (rc.noise == "identity") {
    c = synth::NoiseChannel::identity();
  } else if (rc.noise.rfind("uniform:", 0) == 0) {
    c = synth::NoiseChannel::uniform(std::stod(rc.noise.substr(8)));
  } else {
    c = io::load_noise_channel(rc.noise);
  }
  if (rc.burst_rho >= 0.0) c.burst_rho = rc.burst_rho;
  c.validate();
  return c;
}

json resolved(const RunConfig& rc) {
  const FeatureConfig c = feature_config(rc);
  json j{{"subcommand", rc.subcommand},
         {"manifest", rc.manifest},
         {"mode", std::string(feature_mode_name(c.mode))},
         {"window_seconds", c.window_seconds},
         {"debounce_w", c.debounce_w},
         {"ridge_epsilon", c.ridge_epsilon},
         {"seed", rc.seed},
         {"out", rc.out},
         {"threads", worker_count()}};
  if (rc.subcommand == "synth") {
    j["drivers"] = rc.drivers;
    j["fps"] = rc.fps;
    j["noise"] = rc.noise;
    j["burst_rho"] = noise_channel(rc).burst_rho;
    j["templates"] = rc.templates.empty() ? "default" : rc.templates;
  } else {
    j["model"] = rc.model;
    j["cv"] = rc.cv;
    j["gaze_quality"] = rc.gaze_quality;
    j["lc_source"] = rc.lc_source;
    j["lk_source"] = rc.lk_source;
    j["sweep_seconds"] = rc.sweep;
  }
  return j;
}

Corpus load_manifest_corpus(const RunConfig& rc) {
  if (rc.manifest.empty()) throw InvalidArgument("--manifest is required");
  return io::load_corpus(io::load_manifest(rc.manifest));
}

std::vector<std::string> maneuver_labels() {
  std::vector<std::string> labels;
  for (ManeuverKind k : canonical_maneuver_order()) labels.emplace_back(maneuver_code(k));
  return labels;
}

std::vector<std::string> zone_labels() {
  std::vector<std::string> labels;
  for (GazeZone z : canonical_zone_order()) labels.emplace_back(zone_name(z));
  return labels;
}

std::string recall_cell(const eval::RecallCurve& curve, double t, int fps) {
  const auto step = static_cast<long>(std::lround(t * fps));
  const eval::RecallPoint* p = curve.at_step(step);
  if (p == nullptr) return "n/a";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f (%zu/%zu)", p->recall, p->true_positives, p->positives);
  return buf;
}

int corpus_fps(const Corpus& corpus) { return corpus.empty() ? 30 : corpus.front().estimated.fps(); }

void print_summary(std::ostream& out, const std::array<eval::RecallCurve, 2>& recall,
                   const FeatureConfig& config, int fps) {
  out << "recall summary (" << feature_mode_name(config.mode) << ")\n";
  out << "  class  t=-1.0s            t=0s\n";
  for (const auto& curve : recall) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-5s  %-18s %s\n", std::string(maneuver_code(curve.positive)).c_str(),
                  recall_cell(curve, -1.0, fps).c_str(), recall_cell(curve, 0.0, fps).c_str());
    out << line;
  }
}

void write_prediction_outputs(const fs::path& dir, const std::array<eval::RecallCurve, 2>& recall,
                              std::span<const eval::WindowSample> samples,
                              std::span<const ManeuverKind> model_labels,
                              const eval::ConfusionMatrix& confusion) {
  for (const auto& curve : recall) {
    io::write_recall_csv(curve, dir / ("recall_" + std::string(maneuver_code(curve.positive)) + ".csv"));
  }
  for (ManeuverKind kind : {ManeuverKind::LeftLaneChange, ManeuverKind::RightLaneChange}) {
    const eval::ConfidenceTrace trace = eval::trace_from_samples(samples, kind, model_labels);
    io::write_traces_csv(trace, dir / ("traces_" + std::string(maneuver_code(kind)) + ".csv"));
  }
  const auto labels = maneuver_labels();
  io::write_confusion_csv(confusion, labels, dir / "confusion_maneuver.csv");
}

int cmd_synth(const RunConfig& rc, std::ostream& out) {
  synth::CorpusSpec spec;
  spec.drivers = synth::driver_counts(rc.drivers);
  spec.fps = rc.fps;
  spec.seed = rc.seed;
  if (!rc.templates.empty()) spec.templates = io::load_templates(rc.templates);
  const synth::NoiseChannel channel = noise_channel(rc);

  Corpus corpus = synth::generate_corpus(spec);
  synth::apply_noise(corpus, channel, synth::derive_seed(rc.seed, 0x6e6f697365ULL));

  const fs::path dir(rc.out);
  fs::create_directories(dir);
  io::Manifest manifest;
  std::array<std::size_t, kManeuverCount> totals{};
  for (const Drive& d : corpus) {
    const std::string stem = d.driver_id + "_" + d.drive_id;
    io::ManifestEntry e{d.driver_id, d.drive_id, dir / (stem + ".estimated.json"),
                        dir / (stem + ".events.json"), dir / (stem + ".truth.json")};
    io::save_scanpath(d.estimated, e.scanpath);
    io::save_scanpath(*d.annotated, *e.ground_truth);
    io::save_events({d.estimated.fps(), d.events}, e.events);
    for (const auto& ev : d.events) ++totals[maneuver_index(ev.kind)];
    manifest.drives.push_back(std::move(e));
  }
  io::save_manifest(manifest, dir / "manifest.json");
  io::save_templates(spec.templates, dir / "templates.json");
  io::save_noise_channel(channel, dir / "noise.json");
  out << "wrote " << corpus.size() << " drives to " << dir.string() << " (LLC " << totals[0]
      << ", RLC " << totals[1] << ", LK " << totals[2] << ")\n";
  return 0;
}

int cmd_extract(const RunConfig& rc, std::ostream& out) {
  const Corpus corpus = load_manifest_corpus(rc);
  const eval::ProtocolOptions opts = protocol(rc);
  const eval::TrainingSet set = eval::collect_training(corpus, opts, driver_ids(corpus));

  std::string csv = "driver_id,kind,window_begin,window_end";
  const std::size_t dim = opts.config.dimension();
  for (std::size_t i = 0; i < dim; ++i) {
    const bool freq = i >= kZoneCount;
    const char* prefix = opts.config.mode == FeatureMode::GazeAccumulation ? "GA_" : (freq ? "GF_" : "GD_");
    csv += "," + std::string(prefix) + std::string(zone_name(zone_from_index(i % kZoneCount)));
  }
  csv += "\n";
  std::size_t rows = 0;
  for (ManeuverKind k : canonical_maneuver_order()) {
    const auto idx = maneuver_index(k);
    for (std::size_t s = 0; s < set.samples[idx].size(); ++s) {
      const GlanceFeatureVector& h = set.samples[idx][s];
      csv += set.provenance[idx][s] + "," + std::string(maneuver_code(k)) + "," +
             std::to_string(h.window.begin) + "," + std::to_string(h.window.end);
      for (double v : h.values) csv += "," + io::format_number(v);
      csv += "\n";
      ++rows;
    }
  }
  const fs::path path = fs::path(rc.out) / "features.csv";
  io::write_text_atomic(path, csv);
  out << "wrote " << rows << " feature vectors to " << path.string() << "\n";
  return 0;
}

int cmd_fit(const RunConfig& rc, std::ostream& out) {
  const Corpus corpus = load_manifest_corpus(rc);
  const eval::ProtocolOptions opts = protocol(rc);
  const eval::TrainingSet set = eval::collect_training(corpus, opts, driver_ids(corpus));
  const auto models = eval::fit_models(set, opts.config);
  const fs::path path = rc.model.empty() ? fs::path(rc.out) / "model.json" : fs::path(rc.model);
  io::save_models(models, path);
  out << "fitted " << models.size() << " " << feature_mode_name(opts.config.mode) << " models ("
      << opts.config.dimension() << " dims; LLC " << set.samples[0].size() << ", RLC "
      << set.samples[1].size() << ", LK " << set.samples[2].size() << " samples) -> "
      << path.string() << "\n";
  return 0;
}

int cmd_predict(const RunConfig& rc, std::ostream& out) {
  if (rc.model.empty()) throw InvalidArgument("predict needs --model");
  const Corpus corpus = load_manifest_corpus(rc);
  const eval::ProtocolOptions opts = protocol(rc);
  const auto models = io::load_models(rc.model, opts.config);
  const eval::TestResult result = eval::evaluate_drivers(corpus, driver_ids(corpus), models, opts);

  std::string csv = "event_index,kind,t_rel,predicted";
  for (const auto& m : models) csv += ",fitness_" + std::string(maneuver_code(m.label()));
  csv += "\n";
  for (const eval::WindowSample& s : result.samples) {
    csv += std::to_string(s.event_index) + "," + std::string(maneuver_code(s.truth)) + "," +
           io::format_time(s.t_rel) + "," + std::string(maneuver_code(*s.predicted));
    for (double f : s.fitness) csv += "," + io::format_number(f);
    csv += "\n";
  }
  const fs::path path = fs::path(rc.out) / "predictions.csv";
  io::write_text_atomic(path, csv);
  out << "wrote " << result.samples.size() << " window predictions to " << path.string() << "\n";
  return 0;
}

void run_gaze_quality(const Corpus& corpus, const fs::path& dir, std::ostream& out) {
  std::vector<std::pair<Scanpath, Scanpath>> pairs;
  std::vector<GazeZone> truth;
  std::vector<GazeZone> pred;
  for (const Drive& d : corpus) {
    if (!d.annotated) continue;
    pairs.emplace_back(*d.annotated, d.estimated);
    truth.insert(truth.end(), d.annotated->zones().begin(), d.annotated->zones().end());
    pred.insert(pred.end(), d.estimated.zones().begin(), d.estimated.zones().end());
  }
  if (pairs.empty()) throw InvalidArgument("--gaze-quality needs drives with ground_truth streams");
  const eval::MetricDistributions dist = eval::metric_distributions(pairs);
  io::write_distributions_csv(dist, dir / "gaze_quality.csv");
  const eval::ConfusionMatrix cm = eval::confusion_matrix(truth, pred);
  const auto labels = zone_labels();
  io::write_confusion_csv(cm, labels, dir / "confusion_zone.csv");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", eval::weighted_accuracy(cm));
  out << "gaze quality: " << dist.window_count << " windows; zone weighted accuracy " << buf << "\n";
}

void write_folds_csv(const eval::CvResult& cv, const fs::path& path) {
  std::string csv = "held_out,training_drivers,train_LLC,train_RLC,train_LK,test_windows,skipped_events\n";
  for (const auto& f : cv.folds) {
    std::string drivers;
    for (const auto& d : f.training_drivers) drivers += (drivers.empty() ? "" : ";") + d;
    csv += f.held_out + "," + drivers;
    for (const auto& p : f.training_provenance) csv += "," + std::to_string(p.size());
    csv += "," + std::to_string(f.test.samples.size()) + "," + std::to_string(f.test.skipped_events) + "\n";
  }
  io::write_text_atomic(path, csv);
}

int run_cv(const RunConfig& rc, const Corpus& corpus, std::ostream& out, bool per_fold) {
  const eval::ProtocolOptions opts = protocol(rc);
  const eval::CvResult cv = eval::lodo_cv(corpus, opts);
  const fs::path dir(rc.out);
  std::vector<eval::WindowSample> samples;
  for (const auto& f : cv.folds) samples.insert(samples.end(), f.test.samples.begin(), f.test.samples.end());
  constexpr auto order = canonical_maneuver_order();
  const std::vector<ManeuverKind> labels(order.begin(), order.end());
  write_prediction_outputs(dir, cv.recall, samples, labels, cv.segment_confusion);
  write_folds_csv(cv, dir / "folds.csv");
  if (per_fold) {
    for (const auto& f : cv.folds) {
      const fs::path fold_dir = dir / ("fold_" + f.held_out);
      for (const auto& curve : f.test.recall) {
        io::write_recall_csv(curve, fold_dir / ("recall_" + std::string(maneuver_code(curve.positive)) + ".csv"));
      }
      for (ManeuverKind kind : {ManeuverKind::LeftLaneChange, ManeuverKind::RightLaneChange}) {
        io::write_traces_csv(eval::trace_from_samples(f.test.samples, kind, labels),
                             fold_dir / ("traces_" + std::string(maneuver_code(kind)) + ".csv"));
      }
    }
  }
  out << cv.folds.size() << "-fold leave-one-driver-out\n";
  print_summary(out, cv.recall, opts.config, corpus_fps(corpus));
  return 0;
}

int cmd_eval(const RunConfig& rc, std::ostream& out) {
  const Corpus corpus = load_manifest_corpus(rc);
  const fs::path dir(rc.out);
  fs::create_directories(dir);
  bool did_something = false;
  if (rc.gaze_quality) {
    run_gaze_quality(corpus, dir, out);
    did_something = true;
  }
  if (rc.cv) {
    run_cv(rc, corpus, out, false);
    did_something = true;
  } else if (!rc.model.empty()) {
    const eval::ProtocolOptions opts = protocol(rc);
    const auto models = io::load_models(rc.model, opts.config);
    const eval::TestResult result = eval::evaluate_drivers(corpus, driver_ids(corpus), models, opts);
    std::vector<ManeuverKind> labels;
    for (const auto& m : models) labels.push_back(m.label());
    const eval::ConfusionMatrix cm = eval::confusion_matrix(result.segment_truth, result.segment_pred);
    write_prediction_outputs(dir, result.recall, result.samples, labels, cm);
    print_summary(out, result.recall, opts.config, corpus_fps(corpus));
    did_something = true;
  }
  if (!did_something) throw InvalidArgument("eval needs --model, --cv or --gaze-quality");
  return 0;
}

int cmd_cv(const RunConfig& rc, std::ostream& out) {
  const Corpus corpus = load_manifest_corpus(rc);
  fs::create_directories(rc.out);
  return run_cv(rc, corpus, out, true);
}

void add_feature_flags(CLI::App* app, RunConfig& rc) {
  app->add_option("--manifest", rc.manifest, "Corpus manifest (JSON)");
  app->add_option("--mode", rc.mode, "Descriptor: ga, gd or gdgf")->capture_default_str();
  app->add_option("--window", rc.window, "Window length in seconds")->capture_default_str();
  app->add_option("--debounce-w", rc.debounce_w, "Majority window W in frames")->capture_default_str();
  app->add_option("--ridge", rc.ridge, "Relative covariance ridge epsilon")->capture_default_str();
  app->add_option("--lc-source", rc.lc_source, "Lane-change training stream: annotated|estimated")
      ->capture_default_str();
  app->add_option("--lk-source", rc.lk_source, "Lane-keeping training stream: annotated|estimated")
      ->capture_default_str();
  app->add_option("--sweep", rc.sweep, "Sweep half-width around SyncF in seconds")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Driver gaze-dynamics descriptors, behavior models and lane-change prediction", "gazedyn"};
  app.require_subcommand(1);
  RunConfig rc;

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic multi-driver corpus");
  synth_cmd->add_option("--drivers", rc.drivers, "Number of drivers")->capture_default_str();
  synth_cmd->add_option("--fps", rc.fps, "Frame rate")->capture_default_str();
  synth_cmd->add_option("--noise", rc.noise, "default | identity | uniform:<rate> | <channel.json>")
      ->capture_default_str();
  synth_cmd->add_option("--burst-rho", rc.burst_rho, "Override error persistence in [0, 1)");
  synth_cmd->add_option("--templates", rc.templates, "Behavior template file (JSON)");
  synth_cmd->add_option("--mode", rc.mode, "Accepted for symmetry; unused by synth");

  auto* extract_cmd = app.add_subcommand("extract", "Write training descriptors to features.csv");
  auto* fit_cmd = app.add_subcommand("fit", "Fit LLC/RLC/LK behavior models on the whole corpus");
  auto* predict_cmd = app.add_subcommand("predict", "Classify sliding windows around every lane change");
  auto* eval_cmd = app.add_subcommand("eval", "Recall curves, confidence traces and gaze quality");
  auto* cv_cmd = app.add_subcommand("cv", "Leave-one-driver-out cross-validation with per-fold output");
  for (auto* cmd : {extract_cmd, fit_cmd, predict_cmd, eval_cmd, cv_cmd}) add_feature_flags(cmd, rc);
  fit_cmd->add_option("--model", rc.model, "Output model path (default <out>/model.json)");
  predict_cmd->add_option("--model", rc.model, "Model file")->required();
  eval_cmd->add_option("--model", rc.model, "Model file to evaluate");
  eval_cmd->add_flag("--cv", rc.cv, "Leave-one-driver-out instead of a fixed model");
  eval_cmd->add_flag("--gaze-quality", rc.gaze_quality, "Gaze accumulation ratio / false accumulation");
  for (auto* cmd : app.get_subcommands({})) {
    cmd->add_option("--seed", rc.seed, "Master random seed")->capture_default_str();
    cmd->add_option("--out", rc.out, "Output directory")->capture_default_str();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    rc.subcommand = app.get_subcommands().front()->get_name();
    err << "resolved config: " << resolved(rc).dump() << "\n";
    if (rc.subcommand == "synth") return cmd_synth(rc, out);
    if (rc.subcommand == "extract") return cmd_extract(rc, out);
    if (rc.subcommand == "fit") return cmd_fit(rc, out);
    if (rc.subcommand == "predict") return cmd_predict(rc, out);
    if (rc.subcommand == "eval") return cmd_eval(rc, out);
    if (rc.subcommand == "cv") return cmd_cv(rc, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace gazedyn::cli
