#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazedyn/behavior.hpp"
#include "gazedyn/eval.hpp"
#include "gazedyn/synth.hpp"
#include "gazedyn/types.hpp"

// File formats. Every document is JSON with a "format" tag and an integer
// "version"; loaders reject other tags and versions. Writers go through a
// temporary file in the target directory and rename it into place.
// Schemas with worked examples: docs/formats.md.
namespace gazedyn::io {

namespace fs = std::filesystem;

inline constexpr int kFormatVersion = 1;

void write_text_atomic(const fs::path& path, const std::string& content);
std::string read_text(const fs::path& path);

// --- scanpaths ---
std::string scanpath_to_json(const Scanpath& sp);
Scanpath scanpath_from_json(const std::string& text, const std::string& origin = "<memory>");
void save_scanpath(const Scanpath& sp, const fs::path& path);
Scanpath load_scanpath(const fs::path& path);

// --- events ---
struct EventFile {
  int fps = 30;
  std::vector<ManeuverEvent> events;
};
void save_events(const EventFile& file, const fs::path& path);
/// Lane-keeping segments must span exactly 5 s; sweep margins are checked
/// where the events are used.
EventFile load_events(const fs::path& path);

// --- models ---
void save_models(std::span<const behavior::BehaviorModel> models, const fs::path& path);
/// When `expected` is given, the stored feature layout must match it.
std::vector<behavior::BehaviorModel> load_models(
    const fs::path& path, const std::optional<FeatureConfig>& expected = std::nullopt);

// --- corpus manifests ---
struct ManifestEntry {
  std::string driver_id;
  std::string drive_id;
  fs::path scanpath;  // estimated stream
  fs::path events;
  std::optional<fs::path> ground_truth;
};
struct Manifest {
  std::vector<ManifestEntry> drives;
};
/// Relative paths are resolved against the manifest's directory.
Manifest load_manifest(const fs::path& path);
/// Paths are written relative to the manifest's directory when possible.
void save_manifest(const Manifest& manifest, const fs::path& path);
/// Loads every referenced file and checks ids, lengths and event bounds.
Corpus load_corpus(const Manifest& manifest);

// --- generator configuration ---
void save_templates(const synth::TemplateSet& templates, const fs::path& path);
synth::TemplateSet load_templates(const fs::path& path);
void save_noise_channel(const synth::NoiseChannel& channel, const fs::path& path);
synth::NoiseChannel load_noise_channel(const fs::path& path);

// --- metric CSVs (header row, deterministic row order, fixed precision) ---
/// positive_class,t_rel,tp,p,recall
std::string recall_csv(const eval::RecallCurve& curve);
/// event_kind,model,t_rel,mean,std
std::string traces_csv(const eval::ConfidenceTrace& trace);
/// metric,zone,value  (metric is "ratio" or "abs_error")
std::string distributions_csv(const eval::MetricDistributions& dist);
/// true,predicted,count,rate  (predicted "Outside" holds off-label predictions)
std::string confusion_csv(const eval::ConfusionMatrix& cm, std::span<const std::string> labels);

void write_recall_csv(const eval::RecallCurve& curve, const fs::path& path);
void write_traces_csv(const eval::ConfidenceTrace& trace, const fs::path& path);
void write_distributions_csv(const eval::MetricDistributions& dist, const fs::path& path);
void write_confusion_csv(const eval::ConfusionMatrix& cm, std::span<const std::string> labels,
                         const fs::path& path);

/// Decimal rendering used by every CSV writer ("%.10g").
std::string format_number(double v);
/// Seconds with six decimals, e.g. "-1.000000".
std::string format_time(double seconds);

}  // namespace gazedyn::io
