#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "purpose/cli.h"
#include "purpose/io.h"
#include "support.h"

using namespace purpose;
using purpose::testing::demo_path;
using purpose::testing::TempDir;
namespace fs = std::filesystem;

namespace {

int run(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (code != 0) MESSAGE("command failed: " << e.str());
  if (out) *out = o.str();
  return code;
}

std::string demo(std::string_view name) { return demo_path(name).string(); }

// Every pipeline stage on the demo corpus, writing into `dir`.
void pipeline(const fs::path& dir, const std::string& jobs) {
  const auto p = [&](std::string_view name) { return (dir / name).string(); };
  REQUIRE(run({"filter", "--input", demo("raw.jsonl"), "--wordlist", demo("wordlist.txt"),
               "--output", p("filtered.jsonl"), "--report", p("filter.json")}) == 0);
  REQUIRE(run({"annotate-stats", "--annotations", demo("annotations.tsv"), "--emotions",
               demo("emotions.tsv"), "--output", p("stats.json"), "--tsv-dir", p("stats")}) == 0);
  REQUIRE(run({"gold", "--annotations", demo("annotations.tsv"), "--granularity", "coarse",
               "--output", p("gold.tsv")}) == 0);
  REQUIRE(run({"build-lexicon", "--input", p("filtered.jsonl"), "--hashtags",
               demo("emotion_hashtags.txt"), "--output", p("hpmi.tsv")}) == 0);
  const std::vector<std::string> resources = {
      "--emotion-lexicon", demo("emotion_lexicon.tsv"), "--clusters", demo("clusters.tsv"),
      "--pos",             demo("pos.tsv"),             "--hashtag-lexicon", p("hpmi.tsv"),
      "--jobs",            jobs};
  auto with = [&](std::vector<std::string> args) {
    args.insert(args.end(), resources.begin(), resources.end());
    return args;
  };
  REQUIRE(run(with({"featurize", "--input", p("filtered.jsonl"), "--output", p("vectors.tsv")})) ==
          0);
  REQUIRE(run(with({"evaluate", "--input", p("filtered.jsonl"), "--gold", p("gold.tsv"), "--k",
                    "5", "--repeats", "2", "--output", p("eval.json"), "--tsv-dir",
                    p("eval")})) == 0);
  REQUIRE(run(with({"ablate", "--input", p("filtered.jsonl"), "--gold", p("gold.tsv"), "--k", "5",
                    "--repeats", "2", "--remove", "ngrams,hashtag_pmi,pos+clusters", "--output",
                    p("ablate.json"), "--tsv-dir", p("ablate")})) == 0);
  REQUIRE(run(with({"train", "--input", p("filtered.jsonl"), "--gold", p("gold.tsv"), "--output",
                    p("model.bin")})) == 0);
  REQUIRE(run(with({"predict", "--model", p("model.bin"), "--input", p("filtered.jsonl"),
                    "--output", p("predictions.tsv")})) == 0);
}

std::vector<fs::path> files_under(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) out.push_back(fs::relative(entry.path(), root));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("demo pipeline end to end, byte-identical on rerun") {
  TempDir first, second;
  pipeline(first.path(), "0");
  pipeline(second.path(), "1");

  const auto names = files_under(first.path());
  CHECK(names == files_under(second.path()));
  CHECK(names.size() >= 15);
  for (const auto& name : names) {
    INFO(name.string());
    CHECK(io::read_file(first.path() / name) == io::read_file(second.path() / name));
  }

  const auto eval = nlohmann::json::parse(io::read_file(first / "eval.json"));
  const double accuracy = eval["mean_accuracy"];
  const double baseline = eval["majority_baseline"];
  CHECK(accuracy > baseline + 0.2);
  CHECK(eval["fold_accuracies"].size() == 10);
  CHECK(eval["labels"] == nlohmann::json::array({"favour", "oppose", "other"}));

  const auto ablation = nlohmann::json::parse(io::read_file(first / "ablate.json"));
  REQUIRE(ablation["ablations"].size() == 3);
  CHECK(ablation["ablations"][0]["removed"] == "ngrams");
  CHECK(ablation["ablations"][2]["removed"] == "pos+clusters");
  CHECK(ablation["ablations"][0]["delta"].get<double>() > 0.1);
  CHECK(ablation["reference"]["fold_accuracies"] == eval["fold_accuracies"]);

  // Every filtered tweet gets a vector line and a prediction.
  const auto filtered = io::read_file(first / "filtered.jsonl");
  const auto kept = io::split_lines(filtered).size();
  const auto vectors = io::read_file(first / "vectors.tsv");
  CHECK(io::split_lines(vectors).size() == kept);
  const auto predictions = io::read_file(first / "predictions.tsv");
  CHECK(io::split_lines(predictions).size() == kept + 1);

  const auto lexicon = io::read_file(first / "hpmi.tsv");
  CHECK(lexicon.starts_with("#emotions:\t"));
  CHECK(fs::exists(first / "stats" / "agreement.tsv"));
  CHECK(fs::exists(first / "eval" / "confusion.tsv"));
  CHECK(fs::exists(first / "ablate" / "ablation.tsv"));
}
