#include "purpose/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "purpose/annotations.h"
#include "purpose/corpus.h"
#include "purpose/error.h"
#include "purpose/evalharness.h"
#include "purpose/features.h"
#include "purpose/io.h"
#include "purpose/learner.h"
#include "purpose/lexicons.h"
#include "purpose/parallel.h"
#include "purpose/textproc.h"

namespace purpose::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- helpers

std::vector<std::pair<std::string, std::string>> parse_gold_tsv(std::string_view content,
                                                                std::string_view source) {
  const auto lines = io::split_lines(content);
  if (lines.empty()) throw DataError(std::string(source) + ": empty gold file");
  const auto header = io::split(lines.front(), '\t');
  if (header.size() < 2 || header[0] != "tweet_id" || header[1] != "label") {
    throw DataError(io::at_line(source, 1, "expected header starting tweet_id<TAB>label"));
  }
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string, std::less<>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (io::trim(lines[i]).empty()) continue;
    const auto fields = io::split(lines[i], '\t');
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError(io::at_line(source, i + 1, "expected tweet_id<TAB>label"));
    }
    if (!seen.emplace(fields[0]).second) {
      throw DataError(io::at_line(source, i + 1, "duplicate tweet id: " + std::string(fields[0])));
    }
    out.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return out;
}

std::vector<std::string> order_labels(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  using annotations::scheme_labels;
  for (auto scheme :
       {annotations::kPurposeFine, annotations::kPurposeCoarse, annotations::kRelevanceScheme}) {
    const bool all_known = std::all_of(labels.begin(), labels.end(), [&](const std::string& l) {
      return annotations::scheme_label_index(scheme, l).has_value();
    });
    if (!all_known) continue;
    std::vector<std::string> ordered;
    for (auto name : scheme_labels(scheme)) {
      if (std::binary_search(labels.begin(), labels.end(), std::string(name))) {
        ordered.emplace_back(name);
      }
    }
    return ordered;
  }
  return labels;
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

void require_file(const std::string& path, std::string_view flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw DataError("cannot read " + path + ": no such file");
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    io::write_file(path, content);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Resource and feature flags shared by featurize/train/predict/evaluate/ablate.
struct FeatureFlags {
  std::string emotion_lexicon;
  std::string clusters;
  std::string pos;
  std::string negations;
  std::string emoticons;
  std::string hashtag_lexicon;
  std::string groups = "all";

  void add_to(CLI::App& app) {
    app.add_option("--emotion-lexicon", emotion_lexicon,
                   "Word-emotion lexicon, word<TAB>label<TAB>0|1");
    app.add_option("--clusters", clusters, "Word clusters, path<TAB>word<TAB>count");
    app.add_option("--pos", pos, "POS tags, tweet_id<TAB>space-joined tags");
    app.add_option("--negations", negations, "Negation word list (default: bundled)");
    app.add_option("--emoticons", emoticons, "Extra emoticons, emoticon<TAB>polarity");
    app.add_option("--hashtag-lexicon", hashtag_lexicon, "Hashtag emotion lexicon (build-lexicon)");
    app.add_option("--groups", groups, "Comma-separated feature groups, or 'all'")
        ->default_str("all");
  }

  features::FeatureConfig config() const {
    if (groups == "all") return features::FeatureConfig::all();
    features::FeatureConfig c;
    try {
      c = features::FeatureConfig::parse(groups);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--groups: ") + e.what());
    }
    if (c.enabled.empty()) throw UsageError("--groups: no feature group selected");
    return c;
  }
};

// Prints each warning at most once per run.
class Warnings {
 public:
  explicit Warnings(std::ostream& err) : err_(err) {}
  void once(const std::string& message) {
    if (seen_.insert(message).second) err_ << "warning: " << message << '\n';
  }

 private:
  std::ostream& err_;
  std::set<std::string> seen_;
};

features::Resources load_resources(const FeatureFlags& flags, const features::FeatureConfig& config,
                                   Warnings& warnings) {
  using features::FeatureGroup;
  features::Resources r;
  if (!flags.emotion_lexicon.empty()) {
    require_file(flags.emotion_lexicon, "--emotion-lexicon");
    r.emotion_lexicon = lexicons::EmotionLexicon::load(flags.emotion_lexicon);
  } else if (config.has(FeatureGroup::kEmolex)) {
    warnings.once("no --emotion-lexicon given; emolex features will be empty");
  }
  if (!flags.clusters.empty()) {
    require_file(flags.clusters, "--clusters");
    r.clusters = textproc::ClusterMap::load(flags.clusters);
  } else if (config.has(FeatureGroup::kClusters)) {
    warnings.once("no --clusters given; cluster features will be empty");
  }
  if (!flags.hashtag_lexicon.empty()) {
    require_file(flags.hashtag_lexicon, "--hashtag-lexicon");
    r.hashtag_lexicon = lexicons::HashtagEmotionLexicon::load(flags.hashtag_lexicon);
  } else if (config.has(FeatureGroup::kHashtagPmi)) {
    warnings.once("no --hashtag-lexicon given; hashtag_pmi features will be empty");
  }
  if (!flags.negations.empty()) {
    require_file(flags.negations, "--negations");
    r.negations = textproc::NegationList::load(flags.negations);
  }
  if (!flags.emoticons.empty()) {
    require_file(flags.emoticons, "--emoticons");
    r.emoticons = textproc::EmoticonMatcher::load(flags.emoticons);
  }
  return r;
}

std::vector<corpus::Tweet> load_corpus(const std::string& path, const FeatureFlags& flags,
                                       const features::FeatureConfig& config,
                                       const features::Resources& resources, Warnings& warnings) {
  require_file(path, "--input");
  auto tweets = corpus::load_jsonl(path);
  if (!flags.pos.empty()) {
    require_file(flags.pos, "--pos");
    corpus::attach_pos_file(tweets, flags.pos, resources.emoticons);
  }
  if (config.has(features::FeatureGroup::kPos)) {
    const bool any = std::any_of(tweets.begin(), tweets.end(),
                                 [](const corpus::Tweet& t) { return t.pos_tags.has_value(); });
    if (!any) warnings.once("no POS tags available; pos features will be empty");
  }
  return tweets;
}

std::vector<features::FeatureVector> extract_all(const std::vector<corpus::Tweet>& tweets,
                                                 const features::Resources& resources,
                                                 const features::FeatureConfig& config,
                                                 unsigned jobs) {
  std::vector<features::FeatureVector> out(tweets.size());
  parallel_for(tweets.size(), jobs,
               [&](std::size_t i) { out[i] = features::extract(tweets[i], resources, config); });
  return out;
}

// Tweets with a gold label, in corpus order.
learner::Dataset build_dataset(const std::vector<corpus::Tweet>& tweets,
                               const std::vector<features::FeatureVector>& vectors,
                               const std::string& gold_path, Warnings& warnings) {
  require_file(gold_path, "--gold");
  const auto gold = parse_gold_tsv(io::read_file(gold_path), gold_path);
  std::map<std::string, std::string, std::less<>> label_of(gold.begin(), gold.end());
  std::vector<std::string> names;
  for (const auto& [id, label] : gold) names.push_back(label);
  const auto label_set = order_labels(names);

  std::vector<learner::Instance> instances;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    auto it = label_of.find(tweets[i].id);
    if (it == label_of.end()) continue;
    ++matched;
    const auto pos = std::find(label_set.begin(), label_set.end(), it->second) - label_set.begin();
    instances.push_back({tweets[i].id, vectors[i], static_cast<int>(pos)});
  }
  if (instances.empty()) throw DataError(gold_path + ": no gold label matches a corpus tweet");
  if (matched < gold.size()) {
    warnings.once(std::to_string(gold.size() - matched) + " gold labels have no corpus tweet");
  }
  return learner::Dataset(std::move(instances), label_set);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (auto piece : io::split(text, ',')) {
    double v = 0.0;
    if (!io::parse_double(io::trim(piece), v) || !(v > 0.0) || !std::isfinite(v)) {
      throw UsageError("--c-grid: '" + std::string(piece) + "' is not a positive number");
    }
    grid.push_back(v);
  }
  if (grid.empty()) throw UsageError("--c-grid: empty grid");
  return grid;
}

std::string default_grid_text() {
  std::string out;
  for (double c : learner::kDefaultCGrid) {
    if (!out.empty()) out += ',';
    out += io::format_double(c);
  }
  return out;
}

annotations::Scheme parse_scheme(const std::string& question, const std::string& granularity) {
  annotations::Scheme s;
  if (question == "q1") {
    s.question = annotations::Question::kPurpose;
  } else if (question == "q2") {
    s.question = annotations::Question::kRelevance;
  } else {
    throw UsageError("--question must be q1 or q2");
  }
  if (granularity == "fine") {
    s.granularity = annotations::Granularity::kFine;
  } else if (granularity == "coarse") {
    s.granularity = annotations::Granularity::kCoarse;
  } else {
    throw UsageError("--granularity must be fine or coarse");
  }
  return s;
}

// ---------------------------------------------------------------- filter

struct FilterArgs {
  std::string input;
  std::string wordlist;
  std::string output;
  std::string report;
  std::string english_code{corpus::kEnglishCode};
};

int cmd_filter(const FilterArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.input, "--input");
  require_file(a.wordlist, "--wordlist");
  const auto tweets = corpus::load_jsonl(a.input);
  const auto wordlist = corpus::load_wordlist(a.wordlist);
  if (wordlist.empty()) throw DataError(a.wordlist + ": wordlist is empty");
  const auto result = corpus::filter_corpus(tweets, wordlist, a.english_code);
  emit(a.output, corpus::to_jsonl(result.kept), out);
  if (!a.report.empty()) io::write_file(a.report, result.report.to_json());
  err << "filter: kept " << result.report.kept << " of " << result.report.total_in << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- annotate-stats

struct StatsArgs {
  std::string annotations;
  std::string emotions;
  std::string output;
  std::string tsv_dir;
  bool keep_all = false;
  bool strong_confusion = false;
};

json matrix_json(const annotations::CountMatrix& m, annotations::Scheme scheme) {
  json j;
  const auto& labels = annotations::scheme_labels(scheme);
  j["labels"] = json::array();
  for (auto l : labels) j["labels"].push_back(std::string(l));
  j["counts"] = m;
  return j;
}

std::string matrix_tsv(const annotations::CountMatrix& m, annotations::Scheme scheme) {
  const auto& labels = annotations::scheme_labels(scheme);
  std::string out = "majority\\label";
  for (auto l : labels) out += '\t' + std::string(l);
  out += "\ttotal\n";
  for (std::size_t x = 0; x < m.size(); ++x) {
    out += std::string(labels[x]);
    std::size_t total = 0;
    for (std::size_t count : m[x]) {
      out += '\t' + std::to_string(count);
      total += count;
    }
    out += '\t' + std::to_string(total) + '\n';
  }
  return out;
}

int cmd_annotate_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
  using namespace annotations;
  require_file(a.annotations, "--annotations");
  if (!a.emotions.empty()) require_file(a.emotions, "--emotions");
  const auto all_sets = group_records(load_tsv(a.annotations));
  json report;

  std::vector<AnnotationSet> sets = all_sets;
  if (!a.keep_all) {
    const auto filtered = filter_poor_annotators(all_sets);
    report["annotator_filter"] = {{"dropped", filtered.dropped},
                                  {"mean_agreement", filtered.mean},
                                  {"stdev_agreement", filtered.stdev},
                                  {"agreement", filtered.agreement}};
    sets = filtered.kept;
    err << "annotate-stats: dropped " << filtered.dropped.size() << " annotator(s)\n";
  }

  std::string histogram_tsv = "annotations_per_tweet\ttweets\tannotations\n";
  json histogram = json::array();
  for (const auto& row : annotations_per_tweet(sets)) {
    histogram.push_back({{"bucket", row.bucket}, {"tweets", row.tweets}, {"annotations", row.annotations}});
    histogram_tsv += row.bucket + '\t' + std::to_string(row.tweets) + '\t' +
                     std::to_string(row.annotations) + '\n';
  }
  report["annotations_per_tweet"] = histogram;

  std::vector<AnnotationSet> multi;
  for (const auto& s : sets) {
    if (s.records.size() >= 2) multi.push_back(s);
  }

  const std::vector<Scheme> schemes = {kPurposeFine, kPurposeCoarse, kRelevanceScheme};
  std::map<std::string, std::string> distribution_tsv;
  std::string agreement_tsv = "scheme\tiaa\tapms\tmcs1\tmcs2\tmcs3\n";
  for (auto scheme : schemes) {
    const std::string key(scheme_name(scheme));
    const auto golds = gold_labels(sets, scheme);
    json dist = json::object();
    std::string tsv = "label\tpercent\n";
    if (!golds.empty()) {
      const auto pct = category_distribution(golds);
      const auto& labels = scheme_labels(scheme);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        dist[std::string(labels[i])] = pct[i];
        tsv += std::string(labels[i]) + '\t' + fixed(pct[i], 2) + '\n';
      }
    }
    report["gold_count"][key] = golds.size();
    report["category_distribution"][key] = dist;
    distribution_tsv[key] = tsv;

    const auto mcs = majority_class_size_histogram(sets, scheme);
    report["majority_class_size"][key] = mcs;
    json agreement = json::object();
    if (!multi.empty()) {
      const double iaa = inter_annotator_agreement(multi, scheme);
      const double apms = average_probability_majority(multi, scheme);
      agreement = {{"iaa", iaa}, {"apms", apms}};
      agreement_tsv += key + '\t' + fixed(iaa, 2) + '\t' + fixed(apms, 4) + '\t' + fixed(mcs[0], 2) +
                       '\t' + fixed(mcs[1], 2) + '\t' + fixed(mcs[2], 2) + '\n';
    }
    report["agreement"][key] = agreement;
  }

  const auto rule = a.strong_confusion ? MajorityRule::kStrong : MajorityRule::kPlurality;
  const auto confusion = confusion_matrix(sets, kPurposeFine, rule);
  report["confusion"] = matrix_json(confusion, kPurposeFine);
  report["confusion"]["rule"] = a.strong_confusion ? "strong" : "plurality";

  std::string crosstab_tsv;
  if (!a.emotions.empty()) {
    const auto emotion_golds = load_emotion_golds(a.emotions);
    const auto purpose_golds = gold_labels(sets, kPurposeFine);
    const auto table = purpose_emotion_crosstab(purpose_golds, emotion_golds);
    report["purpose_emotion"] = {{"rows", table.rows},
                                 {"columns", table.columns},
                                 {"percent", table.percent},
                                 {"row_totals", table.row_totals}};
    crosstab_tsv = "purpose";
    for (const auto& c : table.columns) crosstab_tsv += '\t' + c;
    crosstab_tsv += "\ttweets\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      crosstab_tsv += table.rows[r];
      for (double v : table.percent[r]) crosstab_tsv += '\t' + fixed(v, 2);
      crosstab_tsv += '\t' + std::to_string(table.row_totals[r]) + '\n';
    }
  }

  emit(a.output, dump(report), out);
  if (!a.tsv_dir.empty()) {
    fs::create_directories(a.tsv_dir);
    const fs::path dir(a.tsv_dir);
    io::write_file(dir / "annotations_per_tweet.tsv", histogram_tsv);
    for (const auto& [key, tsv] : distribution_tsv) {
      io::write_file(dir / ("category_distribution_" + key + ".tsv"), tsv);
    }
    io::write_file(dir / "agreement.tsv", agreement_tsv);
    io::write_file(dir / "confusion_q1.tsv", matrix_tsv(confusion, kPurposeFine));
    if (!crosstab_tsv.empty()) io::write_file(dir / "purpose_emotion.tsv", crosstab_tsv);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- gold

struct GoldArgs {
  std::string annotations;
  std::string output;
  std::string question = "q1";
  std::string granularity = "fine";
  std::size_t min_annotations = 2;
  bool keep_all = false;
};

int cmd_gold(const GoldArgs& a, std::ostream& out, std::ostream& err) {
  using namespace annotations;
  const Scheme scheme = parse_scheme(a.question, a.granularity);
  require_file(a.annotations, "--annotations");
  auto sets = group_records(load_tsv(a.annotations));
  if (!a.keep_all) {
    auto filtered = filter_poor_annotators(sets);
    err << "gold: dropped " << filtered.dropped.size() << " annotator(s)\n";
    sets = std::move(filtered.kept);
  }
  const auto golds = gold_labels(sets, scheme, a.min_annotations);
  std::string tsv = "tweet_id\tlabel\tsupport\ttotal\n";
  for (const auto& g : golds) {
    tsv += g.tweet_id + '\t' + std::string(g.label_name()) + '\t' + std::to_string(g.support_count) +
           '\t' + std::to_string(g.total_count) + '\n';
  }
  emit(a.output, tsv, out);
  err << "gold: " << golds.size() << " of " << sets.size() << " tweets have a strong majority\n";
  return kExitOk;
}

// ---------------------------------------------------------------- build-lexicon

struct LexiconArgs {
  std::string input;
  std::string hashtags;
  std::string output;
  std::size_t min_word = lexicons::PmiThresholds{}.min_word;
  std::size_t min_joint = lexicons::PmiThresholds{}.min_joint;
};

int cmd_build_lexicon(const LexiconArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.input, "--input");
  require_file(a.hashtags, "--hashtags");
  const auto tweets = corpus::load_jsonl(a.input);
  const auto emotions = lexicons::load_emotion_hashtags(a.hashtags);
  if (emotions.empty()) throw DataError(a.hashtags + ": no emotion hashtags");
  const auto lexicon = lexicons::build_hashtag_lexicon(tweets, emotions, {a.min_word, a.min_joint});
  emit(a.output, lexicon.serialize(), out);
  err << "build-lexicon: " << lexicon.pair_count() << " pairs over " << lexicon.word_count()
      << " words\n";
  return kExitOk;
}

// ---------------------------------------------------------------- featurize

struct FeaturizeArgs {
  std::string input;
  std::string output;
  FeatureFlags flags;
  unsigned jobs = 0;
};

int cmd_featurize(const FeaturizeArgs& a, std::ostream& out, std::ostream& err) {
  Warnings warnings(err);
  const auto config = a.flags.config();
  const auto resources = load_resources(a.flags, config, warnings);
  const auto tweets = load_corpus(a.input, a.flags, config, resources, warnings);
  const auto vectors = extract_all(tweets, resources, config, a.jobs);
  std::string tsv;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    tsv += features::to_tsv_line(tweets[i].id, vectors[i]) + '\n';
  }
  emit(a.output, tsv, out);
  return kExitOk;
}

// ---------------------------------------------------------------- train / predict

struct TrainArgs {
  std::string input;
  std::string gold;
  std::string output;
  std::string c_grid = default_grid_text();
  double c = 0.0;
  FeatureFlags flags;
  unsigned jobs = 0;
  unsigned long long seed = kDefaultSeed;
};

int cmd_train(const TrainArgs& a, std::ostream& /*out*/, std::ostream& err) {
  if (a.output.empty()) throw UsageError("--output is required");
  Warnings warnings(err);
  const auto config = a.flags.config();
  const auto grid = parse_grid(a.c_grid);
  const auto resources = load_resources(a.flags, config, warnings);
  const auto tweets = load_corpus(a.input, a.flags, config, resources, warnings);
  const auto dataset =
      build_dataset(tweets, extract_all(tweets, resources, config, a.jobs), a.gold, warnings);
  learner::TrainOptions options;
  options.seed = a.seed;
  options.config_hash = learner::fnv1a(config.describe());
  double c = a.c;
  if (c == 0.0) {
    c = learner::tune_c(dataset, grid, options);
  } else if (!(c > 0.0)) {
    throw UsageError("--c must be positive");
  }
  const auto model = learner::train(dataset, c, options);
  learner::save_model(model, a.output);
  err << "train: " << dataset.size() << " instances, " << model.vocabulary.size()
      << " features, C=" << io::format_double(c) << '\n';
  return kExitOk;
}

struct PredictArgs {
  std::string model;
  std::string input;
  std::string output;
  FeatureFlags flags;
  unsigned jobs = 0;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  Warnings warnings(err);
  const auto config = a.flags.config();
  require_file(a.model, "--model");
  const auto model = learner::load_model(a.model);
  if (model.config_hash != learner::fnv1a(config.describe())) {
    throw DataError(a.model + ": model was trained with different feature groups than --groups " +
                    a.flags.groups);
  }
  const auto resources = load_resources(a.flags, config, warnings);
  const auto tweets = load_corpus(a.input, a.flags, config, resources, warnings);
  const auto vectors = extract_all(tweets, resources, config, a.jobs);
  std::string tsv = "tweet_id\tlabel\n";
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    tsv += tweets[i].id + '\t' + learner::predict_label(model, vectors[i]) + '\n';
  }
  emit(a.output, tsv, out);
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate / ablate

struct EvalArgs {
  std::string input;
  std::string gold;
  std::string output;
  std::string tsv_dir;
  std::string c_grid = default_grid_text();
  std::string remove;
  int k = 10;
  int repeats = 10;
  FeatureFlags flags;
  unsigned jobs = 0;
  unsigned long long seed = kDefaultSeed;
};

evalharness::EvalOptions eval_options(const EvalArgs& a) {
  if (a.k < 2) throw UsageError("--k must be at least 2");
  if (a.repeats < 1) throw UsageError("--repeats must be at least 1");
  evalharness::EvalOptions o;
  o.k = a.k;
  o.repeats = a.repeats;
  o.seed = a.seed;
  o.c_grid = parse_grid(a.c_grid);
  o.jobs = a.jobs;
  return o;
}

learner::Dataset eval_dataset(const EvalArgs& a, const features::FeatureConfig& config,
                              Warnings& warnings) {
  const auto resources = load_resources(a.flags, config, warnings);
  const auto tweets = load_corpus(a.input, a.flags, config, resources, warnings);
  return build_dataset(tweets, extract_all(tweets, resources, config, a.jobs), a.gold, warnings);
}

void check_fold_count(const learner::Dataset& dataset, int k) {
  if (static_cast<std::size_t>(k) > dataset.size()) {
    throw DataError("--k " + std::to_string(k) + " exceeds the " + std::to_string(dataset.size()) +
                    " labeled tweets");
  }
}

int cmd_evaluate(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  Warnings warnings(err);
  const auto config = a.flags.config();
  const auto options = eval_options(a);
  const auto dataset = eval_dataset(a, config, warnings);
  check_fold_count(dataset, a.k);
  const auto report = evalharness::cross_validate(dataset, config, options);
  const std::vector<evalharness::EvalReport> reports{report};
  if (a.output.empty()) {
    out << dump(evalharness::to_json(report));
  } else {
    io::write_file(a.output, dump(evalharness::to_json(report)));
    out << evalharness::summary_tsv(reports);
  }
  if (!a.tsv_dir.empty()) {
    fs::create_directories(a.tsv_dir);
    const fs::path dir(a.tsv_dir);
    io::write_file(dir / "summary.tsv", evalharness::summary_tsv(reports));
    io::write_file(dir / "per_class.tsv", evalharness::per_class_tsv(report));
    io::write_file(dir / "confusion.tsv", evalharness::confusion_tsv(report));
  }
  return kExitOk;
}

std::vector<std::vector<features::FeatureGroup>> parse_removals(const std::string& text,
                                                                const features::FeatureConfig& config) {
  std::vector<std::vector<features::FeatureGroup>> out;
  if (text.empty()) {
    for (auto g : features::all_groups()) {
      if (config.has(g)) out.push_back({g});
    }
    return out;
  }
  for (auto entry : io::split(text, ',')) {
    std::vector<features::FeatureGroup> removal;
    for (auto piece : io::split(io::trim(entry), '+')) {
      auto g = features::parse_group(io::trim(piece));
      if (!g) throw UsageError("--remove: unknown feature group '" + std::string(piece) + "'");
      if (!config.has(*g)) {
        throw UsageError("--remove: group '" + std::string(piece) + "' is not in --groups");
      }
      removal.push_back(*g);
    }
    out.push_back(std::move(removal));
  }
  return out;
}

int cmd_ablate(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  Warnings warnings(err);
  const auto config = a.flags.config();
  const auto options = eval_options(a);
  const auto removals = parse_removals(a.remove, config);
  if (removals.empty()) throw UsageError("--remove: nothing to ablate");
  for (const auto& r : removals) {
    if (config.without(r).enabled.empty()) {
      throw UsageError("--remove: removing every enabled group leaves nothing to evaluate");
    }
  }
  const auto dataset = eval_dataset(a, config, warnings);
  check_fold_count(dataset, a.k);
  const auto result = evalharness::ablate(dataset, config, removals, options);
  if (a.output.empty()) {
    out << dump(evalharness::to_json(result));
  } else {
    io::write_file(a.output, dump(evalharness::to_json(result)));
    out << evalharness::ablation_tsv(result);
  }
  if (!a.tsv_dir.empty()) {
    fs::create_directories(a.tsv_dir);
    io::write_file(fs::path(a.tsv_dir) / "ablation.tsv", evalharness::ablation_tsv(result));
  }
  return kExitOk;
}

void add_jobs(CLI::App& app, unsigned& jobs) {
  app.add_option("--jobs", jobs, "Worker threads (0: all hardware threads)")->default_str("0");
}

void add_seed(CLI::App& app, unsigned long long& seed) {
  app.add_option("--seed", seed, "Seed for every random choice")
      ->default_str(std::to_string(kDefaultSeed));
}

void add_eval_flags(CLI::App& app, EvalArgs& a) {
  app.add_option("--input", a.input, "Corpus, JSON lines")->required();
  app.add_option("--gold", a.gold, "Gold labels, tweet_id<TAB>label")->required();
  app.add_option("--output", a.output, "JSON report path (default: standard output)");
  app.add_option("--tsv-dir", a.tsv_dir, "Directory for TSV tables");
  app.add_option("--k", a.k, "Folds")->default_str("10");
  app.add_option("--repeats", a.repeats, "Repetitions of the k-fold split")->default_str("10");
  app.add_option("--c-grid", a.c_grid, "Comma-separated C values for inner tuning")
      ->default_str(a.c_grid);
  a.flags.add_to(app);
  add_jobs(app, a.jobs);
  add_seed(app, a.seed);
}

}  // namespace

// ---------------------------------------------------------------- run

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tweet purpose classification toolkit", "purpose"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  FilterArgs filter;
  auto* sub_filter = app.add_subcommand("filter", "Drop retweets and non-English tweets, normalize text");
  sub_filter->add_option("--input", filter.input, "Corpus, JSON lines")->required();
  sub_filter->add_option("--wordlist", filter.wordlist, "English wordlist, one word per line")
      ->required();
  sub_filter->add_option("--output", filter.output, "Kept tweets (default: standard output)");
  sub_filter->add_option("--report", filter.report, "Filter report JSON path");
  sub_filter->add_option("--english-code", filter.english_code, "Accepted language tag")
      ->default_str(std::string(corpus::kEnglishCode));

  StatsArgs stats;
  auto* sub_stats = app.add_subcommand("annotate-stats", "Agreement statistics and label tables");
  sub_stats->add_option("--annotations", stats.annotations, "Annotation TSV")->required();
  sub_stats->add_option("--emotions", stats.emotions,
                        "Emotion judgments TSV (tweet_id, annotator_id, emotion)");
  sub_stats->add_option("--output", stats.output, "JSON report path (default: standard output)");
  sub_stats->add_option("--tsv-dir", stats.tsv_dir, "Directory for TSV tables");
  sub_stats->add_flag("--keep-all-annotators", stats.keep_all, "Skip the poor-annotator filter");
  sub_stats->add_flag("--strong-majority-confusion", stats.strong_confusion,
                      "Confusion matrix over strong-majority tweets only");

  GoldArgs gold;
  auto* sub_gold = app.add_subcommand("gold", "Strong-majority gold labels");
  sub_gold->add_option("--annotations", gold.annotations, "Annotation TSV")->required();
  sub_gold->add_option("--output", gold.output, "Gold TSV path (default: standard output)");
  sub_gold->add_option("--question", gold.question, "q1 (purpose) or q2 (relevance)")
      ->default_str("q1");
  sub_gold->add_option("--granularity", gold.granularity, "fine or coarse")->default_str("fine");
  sub_gold->add_option("--min-annotations", gold.min_annotations, "Minimum records per tweet")
      ->default_str("2");
  sub_gold->add_flag("--keep-all-annotators", gold.keep_all, "Skip the poor-annotator filter");

  LexiconArgs lexicon;
  auto* sub_lexicon = app.add_subcommand("build-lexicon", "Induce the hashtag emotion lexicon by PMI");
  sub_lexicon->add_option("--input", lexicon.input, "Corpus, JSON lines")->required();
  sub_lexicon->add_option("--hashtags", lexicon.hashtags, "Emotion hashtag list")->required();
  sub_lexicon->add_option("--output", lexicon.output, "Lexicon path (default: standard output)");
  sub_lexicon->add_option("--min-word", lexicon.min_word, "Minimum tweets containing the word")
      ->default_str(std::to_string(lexicon.min_word));
  sub_lexicon->add_option("--min-joint", lexicon.min_joint,
                          "Minimum tweets containing word and hashtag")
      ->default_str(std::to_string(lexicon.min_joint));

  FeaturizeArgs featurize;
  auto* sub_featurize = app.add_subcommand("featurize", "Write canonical feature vectors");
  sub_featurize->add_option("--input", featurize.input, "Corpus, JSON lines")->required();
  sub_featurize->add_option("--output", featurize.output, "Vector TSV path (default: standard output)");
  featurize.flags.add_to(*sub_featurize);
  add_jobs(*sub_featurize, featurize.jobs);

  TrainArgs train;
  auto* sub_train = app.add_subcommand("train", "Train a model on labeled tweets");
  sub_train->add_option("--input", train.input, "Corpus, JSON lines")->required();
  sub_train->add_option("--gold", train.gold, "Gold labels, tweet_id<TAB>label")->required();
  sub_train->add_option("--output", train.output, "Model path")->required();
  sub_train->add_option("--c", train.c, "Fixed C (default: tuned by inner cross-validation)");
  sub_train->add_option("--c-grid", train.c_grid, "Comma-separated C values for tuning")
      ->default_str(train.c_grid);
  train.flags.add_to(*sub_train);
  add_jobs(*sub_train, train.jobs);
  add_seed(*sub_train, train.seed);

  PredictArgs predict;
  auto* sub_predict = app.add_subcommand("predict", "Label tweets with a trained model");
  sub_predict->add_option("--model", predict.model, "Model path")->required();
  sub_predict->add_option("--input", predict.input, "Corpus, JSON lines")->required();
  sub_predict->add_option("--output", predict.output, "Predictions TSV (default: standard output)");
  predict.flags.add_to(*sub_predict);
  add_jobs(*sub_predict, predict.jobs);

  EvalArgs evaluate;
  auto* sub_evaluate = app.add_subcommand("evaluate", "Repeated stratified cross-validation");
  add_eval_flags(*sub_evaluate, evaluate);

  EvalArgs ablation;
  auto* sub_ablate = app.add_subcommand("ablate", "Cross-validation with feature groups removed");
  add_eval_flags(*sub_ablate, ablation);
  sub_ablate->add_option("--remove", ablation.remove,
                         "Comma-separated removals, '+' joins groups (default: each enabled group)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sub_filter) return cmd_filter(filter, out, err);
    if (*sub_stats) return cmd_annotate_stats(stats, out, err);
    if (*sub_gold) return cmd_gold(gold, out, err);
    if (*sub_lexicon) return cmd_build_lexicon(lexicon, out, err);
    if (*sub_featurize) return cmd_featurize(featurize, out, err);
    if (*sub_train) return cmd_train(train, out, err);
    if (*sub_predict) return cmd_predict(predict, out, err);
    if (*sub_evaluate) return cmd_evaluate(evaluate, out, err);
    if (*sub_ablate) return cmd_ablate(ablation, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("purpose");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace purpose::cli
