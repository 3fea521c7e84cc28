#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "annotation_oracles.h"
#include "purpose/annotations.h"
#include "purpose/error.h"
#include "support.h"

using namespace purpose;
using namespace purpose::annotations;
using purpose::testing::Gen;

namespace {

AnnotationRecord rec(std::string tweet, std::string annotator, PurposeLabel q1,
                     Relevance q2 = Relevance::kPolitical) {
  return {std::move(tweet), std::move(annotator), q1, q2};
}

AnnotationSet set_of(std::string tweet, std::vector<PurposeLabel> labels) {
  AnnotationSet s{tweet, {}};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    s.records.push_back(rec(tweet, "a" + std::to_string(i), labels[i]));
  }
  return s;
}

using P = PurposeLabel;

}  // namespace

TEST_CASE("label inventory and coarse mapping") {
  CHECK(scheme_labels(kPurposeFine).size() == 11);
  CHECK(scheme_labels(kPurposeCoarse).size() == 3);
  CHECK(scheme_labels(kRelevanceScheme).size() == 2);
  int favour = 0, oppose = 0, other = 0;
  for (int i = 0; i < kPurposeLabelCount; ++i) {
    auto label = static_cast<PurposeLabel>(i);
    REQUIRE(parse_purpose(name(label)) == label);
    switch (coarse_of(label)) {
      case CoarseLabel::kFavour: ++favour; break;
      case CoarseLabel::kOppose: ++oppose; break;
      case CoarseLabel::kOther: ++other; break;
    }
  }
  CHECK(favour == 3);
  CHECK(oppose == 6);
  CHECK(other == 2);
  CHECK(coarse_of(P::kVent) == CoarseLabel::kOppose);
  CHECK(coarse_of(P::kInformation) == CoarseLabel::kOther);
  CHECK_FALSE(parse_purpose("to_support"));
  CHECK(parse_relevance("not_political") == Relevance::kNotPolitical);
  CHECK(scheme_name(kPurposeCoarse) == "q1_coarse");
}

TEST_CASE("annotation TSV parsing") {
  auto records = parse_tsv(
      "tweet_id\tannotator_id\tq1\tq2\n"
      "t1\ta\tsupport\tpolitical\n"
      "t1\tb\tvent\tnot_political\n");
  REQUIRE(records.size() == 2);
  CHECK(records[1].q1 == P::kVent);
  CHECK(records[1].q2 == Relevance::kNotPolitical);

  auto message = [](std::string_view content) {
    try {
      parse_tsv(content, "ann.tsv");
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("tweet_id\tannotator_id\tq1\tq2\nt1\ta\tcheer\tpolitical\n").find("ann.tsv:2") !=
        std::string::npos);
  CHECK(message("tweet_id\tannotator_id\tq1\tq2\nt1\ta\tsupport\n").find("ann.tsv:2") !=
        std::string::npos);
  CHECK(message("id\tannotator\tq1\tq2\n") != "no error");

  std::vector<AnnotationRecord> dup = {rec("t1", "a", P::kSupport), rec("t1", "a", P::kVent)};
  CHECK_THROWS_AS(group_records(dup), DataError);
  std::vector<AnnotationRecord> ok = {rec("t2", "a", P::kSupport), rec("t1", "a", P::kVent),
                                      rec("t2", "b", P::kVent)};
  auto sets = group_records(ok);
  REQUIRE(sets.size() == 2);
  CHECK(sets[0].tweet_id == "t2");
  CHECK(sets[0].records.size() == 2);
}

TEST_CASE("plurality and strong majority rules") {
  std::vector<int> a = {1, 1, 2};
  std::vector<int> tie = {1, 1, 2, 2, 3};
  std::vector<int> two_two = {1, 1, 2, 3};
  CHECK(plurality_label(a) == 1);
  CHECK_FALSE(plurality_label(tie));
  CHECK(plurality_label(two_two) == 1);
  CHECK(strong_majority(a) == 1);
  CHECK_FALSE(strong_majority(two_two));
  CHECK_FALSE(strong_majority(std::vector<int>{}));
}

TEST_CASE("strong_majority_label examples") {
  auto g = strong_majority_label(set_of("t", {P::kSupport, P::kSupport, P::kRidicule}));
  REQUIRE(g);
  CHECK(g->label_name() == "support");
  CHECK(g->support_count == 2);
  CHECK(g->total_count == 3);

  auto mixed = set_of("t", {P::kSupport, P::kRidicule, P::kVent});
  CHECK_FALSE(strong_majority_label(mixed, kPurposeFine));
  auto coarse = strong_majority_label(mixed, kPurposeCoarse);
  REQUIRE(coarse);
  CHECK(coarse->label_name() == "oppose");

  CHECK_FALSE(strong_majority_label(set_of("t", {P::kSupport, P::kSupport, P::kRidicule, P::kVent})));
  CHECK_THROWS_AS(strong_majority_label(AnnotationSet{"t", {}}), std::invalid_argument);
}

TEST_CASE("property: strong majority labels are stable under record permutation") {
  Gen gen(31);
  auto sets = purpose::testing::random_sets(gen, 200, 8, 1, 6, 0.5);
  for (auto& set : sets) {
    for (Scheme scheme : {kPurposeFine, kPurposeCoarse, kRelevanceScheme}) {
      auto before = strong_majority_label(set, scheme);
      auto shuffled = set;
      std::shuffle(shuffled.records.begin(), shuffled.records.end(), gen.engine());
      auto after = strong_majority_label(shuffled, scheme);
      REQUIRE(before.has_value() == after.has_value());
      if (before) {
        CHECK(before->label == after->label);
        CHECK(before->support_count > before->total_count - before->support_count);
      }
    }
  }
}

TEST_CASE("gold labels respect the minimum annotation count") {
  std::vector<AnnotationSet> sets = {set_of("one", {P::kPraise}),
                                     set_of("two", {P::kPraise, P::kPraise}),
                                     set_of("split", {P::kPraise, P::kVent})};
  auto golds = gold_labels(sets, kPurposeFine, 2);
  REQUIRE(golds.size() == 1);
  CHECK(golds[0].tweet_id == "two");
  CHECK(gold_labels(sets, kPurposeFine, 1).size() == 2);
}

TEST_CASE("annotator agreement: the 6 of 10 worked example") {
  // X annotates ten tweets with two partners each; on six of them a partner
  // repeats X's answer.
  std::vector<AnnotationRecord> records;
  for (int t = 0; t < 10; ++t) {
    std::string id = "t" + std::to_string(t);
    records.push_back(rec(id, "X", P::kSupport));
    records.push_back(rec(id, "Y", t < 6 ? P::kSupport : P::kVent));
    records.push_back(rec(id, "Z", t < 6 ? P::kPraise : P::kVent));
  }
  auto agreement = annotator_majority_agreement(records, kPurposeFine);
  CHECK(agreement.at("X") == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(agreement.at("Y") == 1.0);
  CHECK(agreement.at("Z") == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("annotator agreement basics") {
  std::vector<AnnotationSet> unanimous = {set_of("a", {P::kVent, P::kVent, P::kVent}),
                                          set_of("b", {P::kInformation, P::kInformation,
                                                       P::kInformation})};
  auto agreement = annotator_majority_agreement(unanimous);
  for (const auto& [id, p] : agreement) CHECK(p == 1.0);
  CHECK(average_probability_majority(unanimous) == 1.0);

  // A tie counts as disagreement for everyone on that tweet.
  std::vector<AnnotationSet> tied = {set_of("a", {P::kVent, P::kSupport})};
  for (const auto& [id, p] : annotator_majority_agreement(tied)) CHECK(p == 0.0);

  std::vector<AnnotationSet> single = {set_of("a", {P::kVent})};
  CHECK_THROWS_AS(annotator_majority_agreement(single), std::invalid_argument);
}

TEST_CASE("APMS is the unweighted mean over annotators") {
  // P agrees on 3 of 5 tweets (0.6); Q on every one of 2 tweets (1.0).
  std::vector<AnnotationSet> sets;
  for (int t = 0; t < 5; ++t) {
    std::string id = "p" + std::to_string(t);
    AnnotationSet s{id, {rec(id, "P", t < 3 ? P::kSupport : P::kVent),
                         rec(id, "M1", P::kSupport), rec(id, "M2", P::kSupport)}};
    sets.push_back(s);
  }
  for (int t = 0; t < 2; ++t) {
    std::string id = "q" + std::to_string(t);
    sets.push_back(AnnotationSet{id, {rec(id, "Q", P::kMistake), rec(id, "M3", P::kMistake)}});
  }
  auto agreement = annotator_majority_agreement(sets);
  CHECK(agreement.at("P") == doctest::Approx(0.6));
  CHECK(agreement.at("Q") == 1.0);
  // M1, M2 and M3 agree everywhere, so APMS = (0.6 + 1 + 1 + 1 + 1) / 5.
  CHECK(average_probability_majority(sets) == doctest::Approx(4.6 / 5).epsilon(1e-15));

  std::map<std::string, double> two = {{"a", 0.6}, {"b", 1.0}};
  CHECK(std::accumulate(two.begin(), two.end(), 0.0,
                        [](double s, const auto& kv) { return s + kv.second; }) /
            2 ==
        doctest::Approx(0.8));
}

TEST_CASE("poor annotator cut") {
  auto oracle_cut = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return mean - 2.0 * std::sqrt(var / v.size());
  };

  // With four annotators no value can sit more than sqrt(3) population
  // standard deviations from the mean, so 0.2 survives the cut.
  std::vector<double> four = {0.9, 0.88, 0.91, 0.2};
  CHECK(oracle_cut(four) == doctest::Approx(0.11878).epsilon(1e-4));
  std::map<std::string, double> a4 = {{"a", 0.9}, {"b", 0.88}, {"c", 0.91}, {"d", 0.2}};
  CHECK(poor_annotators(a4).empty());

  std::vector<double> seven = {0.9, 0.88, 0.91, 0.9, 0.89, 0.92, 0.2};
  CHECK(oracle_cut(seven) == doctest::Approx(0.30953).epsilon(1e-4));
  std::map<std::string, double> a7 = {{"a", 0.9},  {"b", 0.88}, {"c", 0.91}, {"d", 0.9},
                                      {"e", 0.89}, {"f", 0.92}, {"g", 0.2}};
  CHECK(poor_annotators(a7) == std::vector<std::string>{"g"});

  std::map<std::string, double> equal = {{"a", 0.5}, {"b", 0.5}, {"c", 0.5}};
  CHECK(poor_annotators(equal).empty());
  CHECK_THROWS_AS(poor_annotators({{"a", 0.5}}), std::invalid_argument);
}

TEST_CASE("filter_poor_annotators removes records and only empty sets") {
  // Six reliable annotators always agree on the tweet's label; "bad" always
  // picks something else, so its agreement is 0 against 1 for the rest.
  std::vector<AnnotationSet> sets;
  for (int t = 0; t < 12; ++t) {
    std::string id = "t" + std::to_string(t);
    AnnotationSet s{id, {}};
    s.records.push_back(rec(id, "g" + std::to_string(t % 6), P::kSupport));
    s.records.push_back(rec(id, "g" + std::to_string((t + 1) % 6), P::kSupport));
    if (t % 2 == 0) s.records.push_back(rec(id, "g" + std::to_string((t + 2) % 6), P::kSupport));
    s.records.push_back(rec(id, "bad", P::kVent));
    sets.push_back(s);
  }
  sets.push_back(AnnotationSet{"solo", {rec("solo", "bad", P::kVent)}});

  auto result = filter_poor_annotators(sets);
  CHECK(result.dropped == std::vector<std::string>{"bad"});
  CHECK(result.agreement.at("bad") == 0.0);
  CHECK(result.stdev > 0.0);
  REQUIRE(result.kept.size() == 12);  // "solo" emptied and removed
  for (const auto& s : result.kept) {
    CHECK(s.records.size() >= 2);
    for (const auto& r : s.records) CHECK(r.annotator_id != "bad");
  }
  CHECK(result.kept[1].records.size() == 2);  // 3 -> 2 records, retained
}

TEST_CASE("annotations per tweet histogram") {
  std::vector<AnnotationSet> sets = {set_of("a", {P::kVent}),
                                     set_of("b", {P::kVent, P::kVent}),
                                     set_of("c", std::vector<P>(7, P::kVent))};
  auto rows = annotations_per_tweet(sets);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].tweets == 1);
  CHECK(rows[1].annotations == 2);
  CHECK(rows[4].bucket == ">=5");
  CHECK(rows[4].annotations == 7);
  CHECK(rows[5].tweets == 3);
  CHECK(rows[5].annotations == 10);
}

TEST_CASE("majority class size histogram") {
  std::vector<AnnotationSet> unanimous = {set_of("a", {P::kVent, P::kVent, P::kVent})};
  auto h = majority_class_size_histogram(unanimous);
  CHECK(h == std::array<double, 3>{0.0, 0.0, 100.0});

  // Two answers can never split three ways, so MCS-1 is zero for Q2.
  Gen gen(3);
  auto sets = purpose::testing::random_sets(gen, 100, 6, 3, 3, 0.0);
  auto q2 = majority_class_size_histogram(sets, kRelevanceScheme);
  CHECK(q2[0] == 0.0);
  CHECK(q2[0] + q2[1] + q2[2] == doctest::Approx(100.0).epsilon(1e-12));

  std::vector<AnnotationSet> none = {set_of("a", {P::kVent, P::kVent})};
  CHECK(majority_class_size_histogram(none) == std::array<double, 3>{0.0, 0.0, 0.0});

  Gen mixed_gen(8);
  auto mixed = purpose::testing::random_sets(mixed_gen, 20, 6, 2, 4, 0.4);
  auto got = majority_class_size_histogram(mixed);
  auto want = purpose::testing::oracle_mcs(mixed, kPurposeFine);
  for (int k = 0; k < 3; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12));
}

TEST_CASE("inter-annotator agreement") {
  std::vector<AnnotationSet> unanimous = {set_of("a", {P::kVent, P::kVent, P::kVent})};
  CHECK(inter_annotator_agreement(unanimous) == 100.0);
  std::vector<AnnotationSet> one = {set_of("a", {P::kVent, P::kVent, P::kSupport})};
  CHECK(inter_annotator_agreement(one) == doctest::Approx(100.0 / 3));

  Gen gen(15);
  auto sets = purpose::testing::random_sets(gen, 15, 7, 2, 5, 0.5);
  for (Scheme scheme : {kPurposeFine, kPurposeCoarse, kRelevanceScheme}) {
    CHECK(inter_annotator_agreement(sets, scheme) ==
          doctest::Approx(purpose::testing::oracle_iaa(sets, scheme)).epsilon(1e-12));
  }
}

TEST_CASE("property: coarse agreement never falls below fine agreement") {
  Gen gen(77);
  for (int round = 0; round < 100; ++round) {
    auto sets = purpose::testing::random_sets(gen, gen.range(1, 25), 8, 2, 6, gen.uniform(0, 1));
    CHECK(inter_annotator_agreement(sets, kPurposeCoarse) >=
          inter_annotator_agreement(sets, kPurposeFine));
    CHECK(average_probability_majority(sets, kPurposeFine) ==
          doctest::Approx(purpose::testing::oracle_apms(sets, kPurposeFine)).epsilon(1e-12));
  }
}

TEST_CASE("confusion matrix") {
  std::vector<AnnotationSet> one = {set_of("a", {P::kPraise, P::kPraise, P::kSupport})};
  auto m = confusion_matrix(one);
  const int praise = static_cast<int>(P::kPraise);
  const int support = static_cast<int>(P::kSupport);
  CHECK(m[praise][praise] == 2);
  CHECK(m[praise][support] == 1);

  std::vector<AnnotationSet> unanimous = {set_of("a", {P::kVent, P::kVent}),
                                          set_of("b", {P::kAgree, P::kAgree, P::kAgree})};
  auto d = confusion_matrix(unanimous);
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = 0; y < d.size(); ++y) {
      if (x != y) CHECK(d[x][y] == 0);
    }
  }

  // Plurality admits [praise, praise, support, vent]; the strong rule does not.
  std::vector<AnnotationSet> plural = {set_of("a", {P::kPraise, P::kPraise, P::kSupport, P::kVent})};
  auto total = [](const CountMatrix& cm) {
    std::size_t s = 0;
    for (const auto& row : cm) s += std::accumulate(row.begin(), row.end(), std::size_t{0});
    return s;
  };
  CHECK(total(confusion_matrix(plural, kPurposeFine, MajorityRule::kPlurality)) == 4);
  CHECK(total(confusion_matrix(plural, kPurposeFine, MajorityRule::kStrong)) == 0);

  Gen gen(30);
  auto sets = purpose::testing::random_sets(gen, 30, 6, 2, 5, 0.5);
  CHECK(confusion_matrix(sets, kPurposeFine) ==
        purpose::testing::oracle_confusion(sets, kPurposeFine, 11));
  CHECK(confusion_matrix(sets, kPurposeCoarse) ==
        purpose::testing::oracle_confusion(sets, kPurposeCoarse, 3));
}

TEST_CASE("category distribution") {
  // Counts engineered from the published percentages over 1072 tweets.
  const std::vector<int> counts = {5, 161, 284, 75, 37, 27, 165, 76, 88, 143, 11};
  std::vector<GoldLabel> golds;
  for (int label = 0; label < 11; ++label) {
    for (int i = 0; i < counts[label]; ++i) golds.push_back({"t", kPurposeFine, label, 3, 3});
  }
  auto pct = category_distribution(golds);
  CHECK(pct[static_cast<int>(P::kSupport)] == doctest::Approx(26.49).epsilon(0.0002));
  CHECK(std::accumulate(pct.begin(), pct.end(), 0.0) == doctest::Approx(100.0).epsilon(1e-12));

  std::vector<GoldLabel> single = {{"t", kPurposeCoarse, 1, 2, 2}};
  auto one = category_distribution(single);
  CHECK(one == std::vector<double>{0.0, 100.0, 0.0});

  CHECK_THROWS_AS(category_distribution(std::span<const GoldLabel>{}), std::invalid_argument);
  std::vector<GoldLabel> mixed = {{"a", kPurposeCoarse, 1, 2, 2}, {"b", kPurposeFine, 1, 2, 2}};
  CHECK_THROWS_AS(category_distribution(mixed), std::invalid_argument);

  Gen gen(4);
  std::vector<GoldLabel> random;
  std::vector<int> tally(3, 0);
  for (int i = 0; i < 57; ++i) {
    int label = gen.range(0, 2);
    ++tally[label];
    random.push_back({"t", kPurposeCoarse, label, 2, 2});
  }
  auto rp = category_distribution(random);
  for (int k = 0; k < 3; ++k) CHECK(rp[k] == doctest::Approx(100.0 * tally[k] / 57));
}

TEST_CASE("purpose-emotion crosstab") {
  const int praise = static_cast<int>(P::kPraise);
  std::vector<GoldLabel> golds;
  std::map<std::string, std::string> emotions;
  // 100 praise tweets: 67 admiration, 4 anticipation, 25 joy, 4 trust.
  for (int i = 0; i < 100; ++i) {
    std::string id = "p" + std::to_string(i);
    golds.push_back({id, kPurposeFine, praise, 2, 3});
    emotions[id] = i < 67 ? "admiration" : i < 71 ? "anticipation" : i < 96 ? "joy" : "trust";
  }
  auto table = purpose_emotion_crosstab(golds, emotions);
  REQUIRE(table.rows == std::vector<std::string>{"praise"});
  auto col = [&](std::string_view e) {
    return std::find(table.columns.begin(), table.columns.end(), e) - table.columns.begin();
  };
  CHECK(table.percent[0][col("admiration")] == doctest::Approx(67.0));
  CHECK(table.percent[0][col("anticipation")] == doctest::Approx(4.0));
  CHECK(table.percent[0][col("joy")] == doctest::Approx(25.0));
  CHECK(table.row_totals[0] == 100);

  // 3x3 tally against a brute-force count; tweets missing either label skip.
  Gen gen(12);
  const std::vector<std::string> emo = {"anger", "joy", "trust"};
  std::vector<GoldLabel> g3;
  std::map<std::string, std::string> e3;
  std::map<std::pair<int, std::string>, int> cell;
  std::map<int, int> row_total;
  for (int i = 0; i < 60; ++i) {
    std::string id = "x" + std::to_string(i);
    int label = gen.range(0, 2);
    g3.push_back({id, kPurposeCoarse, label, 2, 2});
    if (gen.chance(0.8)) {
      e3[id] = gen.pick(emo);
      ++cell[{label, e3[id]}];
      ++row_total[label];
    }
  }
  auto t3 = purpose_emotion_crosstab(g3, e3);
  for (std::size_t r = 0; r < t3.rows.size(); ++r) {
    int label = *scheme_label_index(kPurposeCoarse, t3.rows[r]);
    double row_sum = 0.0;
    for (std::size_t c = 0; c < t3.columns.size(); ++c) {
      CHECK(t3.percent[r][c] ==
            doctest::Approx(100.0 * cell[{label, t3.columns[c]}] / row_total[label]));
      row_sum += t3.percent[r][c];
    }
    CHECK(row_sum == doctest::Approx(100.0));
  }

  std::map<std::string, std::string> disjoint = {{"nobody", "joy"}};
  CHECK_THROWS_AS(purpose_emotion_crosstab(golds, disjoint), DataError);
}

TEST_CASE("emotion gold parsing") {
  auto golds = parse_emotion_golds(
      "tweet_id\tannotator_id\temotion\n"
      "a\tx\tjoy\na\ty\tjoy\na\tz\tanger\n"
      "b\tx\tjoy\nb\ty\tanger\n"
      "c\tx\ttrust\n");
  CHECK(golds == std::map<std::string, std::string>{{"a", "joy"}});
  CHECK(parse_emotion_golds("tweet_id\tannotator_id\temotion\nc\tx\ttrust\n", "e", 1).size() == 1);
  CHECK_THROWS_AS(parse_emotion_golds("tweet_id\tannotator_id\temotion\nc\tx\n"), DataError);
}
