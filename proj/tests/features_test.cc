#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "purpose/corpus.h"
#include "purpose/error.h"
#include "purpose/features.h"
#include "purpose/io.h"
#include "support.h"

using namespace purpose;
using namespace purpose::features;
using purpose::testing::data_path;
using purpose::testing::Gen;

namespace {

Resources fixture_resources() {
  Resources r;
  r.emotion_lexicon = lexicons::EmotionLexicon::load(data_path("features_emolex.tsv"));
  r.clusters = textproc::ClusterMap::load(data_path("features_clusters.tsv"));
  r.hashtag_lexicon = lexicons::HashtagEmotionLexicon::load(data_path("features_hpmi.tsv"));
  return r;
}

corpus::Tweet tweet(std::string text) {
  corpus::Tweet t;
  t.id = "t";
  t.text = std::move(text);
  return t;
}

std::vector<textproc::Token> marked(std::string_view text) {
  return textproc::mark_negation(textproc::tokenize(text));
}

std::set<std::string> names(const FeatureVector& v) {
  std::set<std::string> out;
  for (const auto& [name, value] : v) out.insert(name);
  return out;
}

std::set<std::string> with_prefix(const FeatureVector& v, std::string_view prefix) {
  std::set<std::string> out;
  for (const auto& [name, value] : v) {
    if (name.starts_with(prefix)) out.insert(name);
  }
  return out;
}

}  // namespace

TEST_CASE("fixture tweets reproduce the golden vectors byte for byte") {
  const auto tweets = corpus::load_jsonl(data_path("features_tweets.jsonl"));
  REQUIRE(tweets.size() == 12);
  const auto resources = fixture_resources();
  std::string produced;
  for (const auto& t : tweets) {
    produced += to_tsv_line(t.id, extract(t, resources, FeatureConfig::all()));
    produced += '\n';
  }
  const std::string golden = io::read_file(purpose::testing::golden_path("features.tsv"));
  CHECK(produced == golden);
  auto got = io::split_lines(produced);
  auto want = io::split_lines(golden);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i] == want[i]) continue;
    auto a = parse_tsv_line(got[i]).second;
    auto b = parse_tsv_line(want[i]).second;
    for (const auto& [n, v] : a) {
      if (!b.count(n) || b.at(n) != v) MESSAGE("extra or different: " << n);
    }
    for (const auto& [n, v] : b) {
      if (!a.count(n)) MESSAGE("missing: " << n);
    }
  }
}

TEST_CASE("ngram features: negation example and length bounds") {
  auto v = ngram_features(marked("not perfect"));
  CHECK(v.count("W1:not"));
  CHECK(v.count("W1:perfect_NEG"));
  CHECK(v.count("W2:not perfect_NEG"));
  CHECK_FALSE(v.count("W1:perfect"));

  auto hi = ngram_features(marked("hi"));
  CHECK(with_prefix(hi, "W2:").empty());
  CHECK(with_prefix(hi, "SK").empty());
  CHECK(with_prefix(hi, "C3:").empty());  // two characters only
  CHECK(hi == FeatureVector{{"W1:hi", 1.0}});

  // Punctuation is out of word n-grams but keeps its own character n-grams.
  auto p = ngram_features(marked("wow !!!"));
  CHECK(p.count("C3:!!!"));
  CHECK(with_prefix(p, "W2:").empty());
}

TEST_CASE("ngram features on five tokens equal a brute-force window enumeration") {
  auto v = ngram_features(marked("a bb ccc dddd eeeee"));
  const std::vector<std::string> u = {"a", "bb", "ccc", "dddd", "eeeee"};
  std::set<std::string> want;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t i = 0; i + n <= u.size(); ++i) {
      std::string w;
      for (std::size_t k = 0; k < n; ++k) w += (k ? " " : "") + u[i + k];
      want.insert("W" + std::to_string(n) + ":" + w);
      for (std::size_t s = 1; n >= 3 && s + 1 < n; ++s) {
        std::string g;
        for (std::size_t k = 0; k < n; ++k) g += (k ? " " : "") + (k == s ? std::string("*") : u[i + k]);
        want.insert("SK" + std::to_string(n) + ":" + g);
      }
    }
  }
  for (const auto& word : u) {
    for (std::size_t n = 3; n <= 5; ++n) {
      for (std::size_t i = 0; i + n <= word.size(); ++i) {
        want.insert("C" + std::to_string(n) + ":" + word.substr(i, n));
      }
    }
  }
  CHECK(names(v) == want);
  // 5+4+3+2 word windows, 3+4 skipped; repeated letters leave one distinct
  // char gram per length: ccc 1, dddd 2, eeeee 3.
  CHECK(v.size() == 14 + 7 + 6);
  for (const auto& [n, value] : v) CHECK(value == 1.0);
}

TEST_CASE("emotion lexicon features") {
  lexicons::EmotionLexicon lex;
  lex.add("great", "joy");
  lex.add("great", "positive");
  auto simple = emotion_lexicon_features(marked("great"), lex);
  CHECK(simple == FeatureVector{{"EMO:joy", 1.0}, {"EMO:positive", 1.0}});

  auto negated = emotion_lexicon_features(marked("not great"), lex);
  CHECK(negated.at("EMO:joy_NEG") == 1.0);
  CHECK_FALSE(negated.count("EMO:joy"));

  auto three = emotion_lexicon_features(marked("#great GREAT great"), lex);
  CHECK(three.at("EMO:hashtag:joy") == 1.0);
  CHECK(three.at("EMO:allcaps:joy") == 1.0);
  CHECK(three.at("EMO:joy") == 3.0);
}

TEST_CASE("surface features") {
  auto wow = surface_features(marked("WOW!!! ?!"));
  CHECK(wow.at("PUNC:bang_run") == 1.0);
  CHECK(wow.at("PUNC:mixed_run") == 1.0);
  CHECK(wow.at("META:allcaps") == 1.0);
  CHECK_FALSE(wow.count("PUNC:question_run"));

  CHECK(surface_features(marked(":)")) == FeatureVector{{"META:emoticon_pos", 1.0}});
  CHECK(surface_features(marked("no way , fine")) ==
        FeatureVector{{"META:negated_contexts", 1.0}});
  auto counts = surface_features(marked("#a #b soooo :( ?? ."));
  CHECK(counts.at("META:hashtags") == 2.0);
  CHECK(counts.at("META:elongated") == 1.0);
  CHECK(counts.at("META:emoticon_neg") == 1.0);
  CHECK(counts.at("PUNC:question_run") == 1.0);
  CHECK(counts.size() == 4);
}

TEST_CASE("cluster and POS features") {
  auto clusters = textproc::ClusterMap::parse("0101\tobama\t9\n0101\tmitt\t2\n0110\twin\t3\n");
  auto v = cluster_features(marked("Obama mitt will win"), clusters);
  CHECK(v == FeatureVector{{"CL:0101", 1.0}, {"CL:0110", 1.0}});

  auto t = tweet("vote now !");
  t.pos_tags = {{{"vote", "V"}, {"now", "R"}, {"!", ","}}};
  auto tokens = prepare_tokens(t, Resources{});
  CHECK(pos_features(tokens) == FeatureVector{{"POS:,", 1.0}, {"POS:R", 1.0}, {"POS:V", 1.0}});
  t.pos_tags->pop_back();
  CHECK_THROWS_AS(prepare_tokens(t, Resources{}), DataError);
}

TEST_CASE("extract gating, determinism and the empty tweet") {
  const auto resources = fixture_resources();
  const auto t = tweet("I don't agree with this WAR !!! #good :) soooo");
  const auto full = extract(t, resources, FeatureConfig::all());
  CHECK(full == extract(t, resources, FeatureConfig::all()));

  auto ngrams_only = extract(t, resources, FeatureConfig::parse("ngrams"));
  for (const auto& [name, value] : ngrams_only) {
    CHECK((name.starts_with("W") || name.starts_with("C") || name.starts_with("SK")));
  }
  CHECK_THROWS_AS(extract(t, resources, FeatureConfig{}), std::invalid_argument);
  CHECK(extract(tweet(""), resources, FeatureConfig::all()).empty());
  CHECK(extract(tweet("   "), resources, FeatureConfig::all()).empty());

  // Missing resources silence their groups only.
  auto bare = extract(t, Resources{}, FeatureConfig::all());
  CHECK(with_prefix(bare, "EMO:").empty());
  CHECK(with_prefix(bare, "CL:").empty());
  CHECK(with_prefix(bare, "HPMI:").empty());
  CHECK_FALSE(with_prefix(bare, "W1:").empty());
}

TEST_CASE("feature config parsing and description") {
  auto c = FeatureConfig::parse("pos, ngrams");
  CHECK(c.describe() == "ngrams,pos");
  CHECK(FeatureConfig::all().enabled.size() == 11);
  CHECK_THROWS_AS(FeatureConfig::parse("ngrams,colour"), std::invalid_argument);
  for (FeatureGroup g : all_groups()) CHECK(parse_group(group_name(g)) == g);
  std::vector<FeatureGroup> drop = {FeatureGroup::kPos};
  CHECK_FALSE(FeatureConfig::all().without(drop).has(FeatureGroup::kPos));
}

TEST_CASE("property: ablation removes exactly the group's names") {
  const auto resources = fixture_resources();
  Gen gen(14);
  const std::vector<std::string> pieces = {"not", "GOOD", "great", "#happy", "war", "!!!", "?!",
                                           ":)",  ":(",   "soooo", "vote",   ",",   "never",
                                           "@u",  "the",  "3.5",   "win",    "lose", "#trust"};
  for (int round = 0; round < 150; ++round) {
    std::string text;
    for (int i = gen.range(0, 10); i > 0; --i) text += gen.pick(pieces) + " ";
    const auto t = tweet(text);
    const auto full = extract(t, resources, FeatureConfig::all());
    for (const auto& [name, value] : full) {
      REQUIRE(group_of(name).has_value());
      CHECK(std::isfinite(value));
      CHECK(value > 0.0);
      const auto g = *group_of(name);
      if (g == FeatureGroup::kNgrams || g == FeatureGroup::kClusters ||
          g == FeatureGroup::kEmoticons) {
        CHECK(value == 1.0);
      } else if (g != FeatureGroup::kHashtagPmi) {
        CHECK(value == std::floor(value));
      }
    }
    for (FeatureGroup g : all_groups()) {
      std::vector<FeatureGroup> drop = {g};
      auto config = FeatureConfig::all().without(drop);
      if (config.enabled.empty()) continue;
      const auto ablated = extract(t, resources, config);
      FeatureVector expected;
      for (const auto& [name, value] : full) {
        if (group_of(name) != g) expected.emplace(name, value);
      }
      CHECK(ablated == expected);
      CHECK(restrict(full, config) == expected);
    }
  }
}

TEST_CASE("property: extraction does not depend on other tweets") {
  const auto resources = fixture_resources();
  const auto tweets = corpus::load_jsonl(data_path("features_tweets.jsonl"));
  std::vector<FeatureVector> forward;
  for (const auto& t : tweets) forward.push_back(extract(t, resources, FeatureConfig::all()));
  for (std::size_t i = tweets.size(); i-- > 0;) {
    CHECK(extract(tweets[i], resources, FeatureConfig::all()) == forward[i]);
  }
}

TEST_CASE("feature TSV lines") {
  FeatureVector v = {{"W1:a:b", 1.0}, {"HPMI:joy", 0.1}, {"META:hashtags", 2.0}};
  const std::string line = to_tsv_line("id7", v);
  CHECK(line == "id7\tHPMI:joy:0.1\tMETA:hashtags:2\tW1:a:b:1");
  auto [id, back] = parse_tsv_line(line);
  CHECK(id == "id7");
  CHECK(back == v);
  CHECK_THROWS_AS(parse_tsv_line("id\tnovalue"), DataError);
  CHECK_THROWS_AS(parse_tsv_line("\tW1:a:1"), DataError);

  FeatureVector zero;
  increment(zero, "x", 2.0);
  increment(zero, "x", -2.0);
  CHECK(zero.empty());
}
