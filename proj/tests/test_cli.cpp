#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gazedyn/io.hpp"
#include "json.hpp"
#include "support/tempdir.hpp"

using namespace gazedyn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string p(const test::TempDir& d, const std::string& rel) { return (d / rel).string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth, fit, predict and eval wire together") {
  test::TempDir dir;
  auto r = run({"synth", "--drivers", "3", "--seed", "5", "--out", p(dir, "corpus")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("wrote 3 drives") != std::string::npos);
  CHECK(r.err.find("\"drivers\":3") != std::string::npos);
  CHECK(fs::exists(dir / "corpus" / "manifest.json"));
  CHECK(fs::exists(dir / "corpus" / "templates.json"));
  CHECK(fs::exists(dir / "corpus" / "noise.json"));
  const std::string manifest = p(dir, "corpus/manifest.json");

  r = run({"fit", "--manifest", manifest, "--mode", "gdgf", "--out", p(dir, "fit")});
  REQUIRE(r.code == 0);
  const auto models = io::load_models(dir / "fit" / "model.json");
  REQUIRE(models.size() == 3);
  CHECK(models[0].dimension() == 18);

  r = run({"fit", "--manifest", manifest, "--out", p(dir, "fit_ga")});
  REQUIRE(r.code == 0);
  CHECK(io::load_models(dir / "fit_ga" / "model.json")[2].dimension() == 9);

  r = run({"predict", "--manifest", manifest, "--model", p(dir, "fit/model.json"), "--mode", "gdgf", "--out",
           p(dir, "pred")});
  REQUIRE(r.code == 0);
  CHECK(io::read_text(dir / "pred" / "predictions.csv").rfind("event_index,kind,t_rel,predicted,fitness_LLC", 0) == 0);

  r = run({"predict", "--manifest", manifest, "--model", p(dir, "fit/model.json"), "--mode", "ga", "--out",
           p(dir, "pred2")});
  CHECK(r.code == 1);
  CHECK(r.err.find("GD_GF") != std::string::npos);

  r = run({"eval", "--manifest", manifest, "--model", p(dir, "fit_ga/model.json"), "--out", p(dir, "eval")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("recall summary (GA)") != std::string::npos);
  CHECK(fs::exists(dir / "eval" / "recall_LLC.csv"));
  CHECK(fs::exists(dir / "eval" / "traces_RLC.csv"));
  CHECK(fs::exists(dir / "eval" / "confusion_maneuver.csv"));

  r = run({"extract", "--manifest", manifest, "--mode", "gd", "--out", p(dir, "feat")});
  REQUIRE(r.code == 0);
  CHECK(io::read_text(dir / "feat" / "features.csv").rfind("driver_id,kind,window_begin,window_end,GD_Front", 0) == 0);
}

TEST_CASE("cross-validated eval and gaze quality") {
  test::TempDir dir;
  REQUIRE(run({"synth", "--drivers", "2", "--seed", "9", "--out", p(dir, "c")}).code == 0);
  const std::string manifest = p(dir, "c/manifest.json");
  auto r = run({"eval", "--cv", "--gaze-quality", "--manifest", manifest, "--out", p(dir, "e")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("2-fold") != std::string::npos);
  CHECK(r.out.find("weighted accuracy") != std::string::npos);
  const std::string recall = io::read_text(dir / "e" / "recall_LLC.csv");
  CHECK(std::count(recall.begin(), recall.end(), '\n') == 302);
  CHECK(fs::exists(dir / "e" / "gaze_quality.csv"));
  CHECK(fs::exists(dir / "e" / "confusion_zone.csv"));
  CHECK(fs::exists(dir / "e" / "folds.csv"));

  r = run({"cv", "--manifest", manifest, "--out", p(dir, "cv")});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "cv" / "fold_driver1" / "recall_RLC.csv"));
  CHECK(io::read_text(dir / "cv" / "recall_LLC.csv") == recall);
}

TEST_CASE("identity noise keeps the estimated stream clean") {
  test::TempDir dir;
  REQUIRE(run({"synth", "--drivers", "1", "--noise", "identity", "--out", p(dir, "c")}).code == 0);
  CHECK(io::load_scanpath(dir / "c" / "driver1_drive1.estimated.json") ==
        io::load_scanpath(dir / "c" / "driver1_drive1.truth.json"));
}

TEST_CASE("same seed, same files") {
  test::TempDir dir;
  REQUIRE(run({"synth", "--drivers", "2", "--seed", "3", "--out", p(dir, "a")}).code == 0);
  REQUIRE(run({"synth", "--drivers", "2", "--seed", "3", "--out", p(dir, "b")}).code == 0);
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    CHECK(io::read_text(e.path()) == io::read_text(dir / "b" / e.path().filename()));
  }
}

TEST_CASE("a corpus without right lane changes names the class") {
  test::TempDir dir;
  REQUIRE(run({"synth", "--drivers", "2", "--out", p(dir, "c")}).code == 0);
  for (const auto& e : fs::directory_iterator(dir / "c")) {
    const std::string name = e.path().filename().string();
    if (name.find(".events.json") == std::string::npos) continue;
    auto doc = nlohmann::json::parse(io::read_text(e.path()));
    nlohmann::json kept = nlohmann::json::array();
    for (const auto& ev : doc["events"]) {
      if (ev["kind"] != "RightLaneChange") kept.push_back(ev);
    }
    doc["events"] = kept;
    io::write_text_atomic(e.path(), doc.dump());
  }
  const auto r = run({"fit", "--manifest", p(dir, "c/manifest.json"), "--out", p(dir, "f")});
  CHECK(r.code == 1);
  CHECK(r.err.find("RightLaneChange") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code != 0);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"fit", "--mode", "xyz", "--manifest", "m.json"}).code != 0);
  CHECK(run({"fit", "--window", "abc"}).code == 2);
  const auto missing = run({"fit", "--manifest", "/nonexistent/manifest.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("/nonexistent/manifest.json") != std::string::npos);
  CHECK(run({"eval", "--manifest", "/nonexistent/manifest.json"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

}
