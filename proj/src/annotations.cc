#include "purpose/annotations.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "purpose/error.h"
#include "purpose/io.h"

namespace purpose::annotations {

namespace {

constexpr std::array<std::string_view, kPurposeLabelCount> kPurposeNames = {
    "agree",    "praise",   "support", "hypocrisy",   "mistake",       "disagree",
    "ridicule", "criticize", "vent",   "information", "none_of_above"};
constexpr std::array<std::string_view, kCoarseLabelCount> kCoarseNames = {"favour", "oppose",
                                                                          "other"};
constexpr std::array<std::string_view, kRelevanceCount> kRelevanceNames = {"political",
                                                                           "not_political"};

std::vector<int> labels_of(const AnnotationSet& set, Scheme scheme) {
  std::vector<int> labels;
  labels.reserve(set.records.size());
  for (const auto& r : set.records) labels.push_back(label_index(r, scheme));
  return labels;
}

std::size_t label_count(Scheme scheme) { return scheme_labels(scheme).size(); }

std::vector<std::size_t> histogram(std::span<const int> labels, std::size_t size) {
  std::vector<std::size_t> counts(size, 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

}  // namespace

CoarseLabel coarse_of(PurposeLabel label) {
  switch (label) {
    case PurposeLabel::kAgree:
    case PurposeLabel::kPraise:
    case PurposeLabel::kSupport:
      return CoarseLabel::kFavour;
    case PurposeLabel::kHypocrisy:
    case PurposeLabel::kMistake:
    case PurposeLabel::kDisagree:
    case PurposeLabel::kRidicule:
    case PurposeLabel::kCriticize:
    case PurposeLabel::kVent:
      return CoarseLabel::kOppose;
    case PurposeLabel::kInformation:
    case PurposeLabel::kNoneOfAbove:
      return CoarseLabel::kOther;
  }
  return CoarseLabel::kOther;
}

std::string_view name(PurposeLabel label) { return kPurposeNames[static_cast<int>(label)]; }
std::string_view name(CoarseLabel label) { return kCoarseNames[static_cast<int>(label)]; }
std::string_view name(Relevance label) { return kRelevanceNames[static_cast<int>(label)]; }

std::optional<PurposeLabel> parse_purpose(std::string_view text) {
  for (int i = 0; i < kPurposeLabelCount; ++i) {
    if (kPurposeNames[i] == text) return static_cast<PurposeLabel>(i);
  }
  return std::nullopt;
}

std::optional<Relevance> parse_relevance(std::string_view text) {
  for (int i = 0; i < kRelevanceCount; ++i) {
    if (kRelevanceNames[i] == text) return static_cast<Relevance>(i);
  }
  return std::nullopt;
}

bool Scheme::operator==(const Scheme& other) const {
  if (question != other.question) return false;
  return question == Question::kRelevance || granularity == other.granularity;
}

const std::vector<std::string_view>& scheme_labels(Scheme scheme) {
  static const std::vector<std::string_view> fine(kPurposeNames.begin(), kPurposeNames.end());
  static const std::vector<std::string_view> coarse(kCoarseNames.begin(), kCoarseNames.end());
  static const std::vector<std::string_view> relevance(kRelevanceNames.begin(),
                                                       kRelevanceNames.end());
  if (scheme.question == Question::kRelevance) return relevance;
  return scheme.granularity == Granularity::kFine ? fine : coarse;
}

std::string_view scheme_name(Scheme scheme) {
  if (scheme.question == Question::kRelevance) return "q2";
  return scheme.granularity == Granularity::kFine ? "q1" : "q1_coarse";
}

std::optional<int> scheme_label_index(Scheme scheme, std::string_view label) {
  const auto& labels = scheme_labels(scheme);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

int label_index(const AnnotationRecord& record, Scheme scheme) {
  if (scheme.question == Question::kRelevance) return static_cast<int>(record.q2);
  if (scheme.granularity == Granularity::kCoarse) return static_cast<int>(coarse_of(record.q1));
  return static_cast<int>(record.q1);
}

std::vector<AnnotationSet> group_records(std::span<const AnnotationRecord> records) {
  std::vector<AnnotationSet> sets;
  std::unordered_map<std::string, std::size_t> index;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : records) {
    if (!seen.emplace(r.tweet_id, r.annotator_id).second) {
      throw DataError("annotator " + r.annotator_id + " judged tweet " + r.tweet_id +
                      " more than once");
    }
    auto [it, inserted] = index.emplace(r.tweet_id, sets.size());
    if (inserted) sets.push_back(AnnotationSet{r.tweet_id, {}});
    sets[it->second].records.push_back(r);
  }
  return sets;
}

std::vector<AnnotationRecord> parse_tsv(std::string_view content, std::string_view source) {
  std::vector<AnnotationRecord> records;
  std::size_t line_no = 0;
  bool header_seen = false;
  for (std::string_view line : io::split_lines(content)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    auto fields = io::split(line, '\t');
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "tweet_id" || fields[1] != "annotator_id" ||
          fields[2] != "q1" || fields[3] != "q2") {
        throw DataError(io::at_line(source, line_no,
                                    "expected header tweet_id<TAB>annotator_id<TAB>q1<TAB>q2"));
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty()) {
      throw DataError(io::at_line(source, line_no, "expected 4 tab-separated fields"));
    }
    auto q1 = parse_purpose(fields[2]);
    if (!q1) {
      throw DataError(io::at_line(source, line_no, "unknown q1 label '" + std::string(fields[2]) + "'"));
    }
    auto q2 = parse_relevance(fields[3]);
    if (!q2) {
      throw DataError(io::at_line(source, line_no, "unknown q2 label '" + std::string(fields[3]) + "'"));
    }
    records.push_back({std::string(fields[0]), std::string(fields[1]), *q1, *q2});
  }
  return records;
}

std::vector<AnnotationRecord> load_tsv(const std::filesystem::path& path) {
  return parse_tsv(io::read_file(path), path.string());
}

std::string_view GoldLabel::label_name() const {
  return scheme_labels(scheme)[static_cast<std::size_t>(label)];
}

std::optional<int> plurality_label(std::span<const int> labels) {
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  std::optional<int> best;
  std::size_t best_count = 0;
  bool tied = false;
  for (const auto& [label, count] : counts) {
    if (count > best_count) {
      best = label;
      best_count = count;
      tied = false;
    } else if (count == best_count) {
      tied = true;
    }
  }
  if (tied) return std::nullopt;
  return best;
}

std::optional<int> strong_majority(std::span<const int> labels) {
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  for (const auto& [label, count] : counts) {
    if (count > labels.size() - count) return label;
  }
  return std::nullopt;
}

std::map<std::string, double> annotator_majority_agreement(std::span<const AnnotationSet> sets,
                                                           Scheme scheme) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // matched, total
  for (const auto& set : sets) {
    if (set.records.size() < 2) {
      throw std::invalid_argument("annotator_majority_agreement: tweet " + set.tweet_id +
                                  " has fewer than two records");
    }
    const auto labels = labels_of(set, scheme);
    const auto majority = plurality_label(labels);
    for (std::size_t i = 0; i < set.records.size(); ++i) {
      auto& [matched, total] = tally[set.records[i].annotator_id];
      ++total;
      if (majority && labels[i] == *majority) ++matched;
    }
  }
  std::map<std::string, double> agreement;
  for (const auto& [annotator, counts] : tally) {
    agreement[annotator] = static_cast<double>(counts.first) / static_cast<double>(counts.second);
  }
  return agreement;
}

std::map<std::string, double> annotator_majority_agreement(
    std::span<const AnnotationRecord> records, Scheme scheme) {
  return annotator_majority_agreement(group_records(records), scheme);
}

namespace {
std::pair<double, double> mean_and_population_stdev(const std::map<std::string, double>& values) {
  double sum = 0.0;
  for (const auto& [k, v] : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (const auto& [k, v] : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}
}  // namespace

std::vector<std::string> poor_annotators(const std::map<std::string, double>& agreement) {
  if (agreement.size() < 2) {
    throw std::invalid_argument("poor_annotators: need at least two annotators");
  }
  const auto [mean, stdev] = mean_and_population_stdev(agreement);
  std::vector<std::string> poor;
  for (const auto& [annotator, p] : agreement) {
    if (p < mean - 2.0 * stdev) poor.push_back(annotator);
  }
  return poor;
}

AnnotatorFilterResult filter_poor_annotators(std::span<const AnnotationSet> sets) {
  std::vector<AnnotationSet> multi;
  for (const auto& set : sets) {
    if (set.records.size() >= 2) multi.push_back(set);
  }
  AnnotatorFilterResult result;
  result.agreement = annotator_majority_agreement(multi, kPurposeFine);
  result.dropped = poor_annotators(result.agreement);
  std::tie(result.mean, result.stdev) = mean_and_population_stdev(result.agreement);

  const std::set<std::string> dropped(result.dropped.begin(), result.dropped.end());
  for (const auto& set : sets) {
    AnnotationSet kept{set.tweet_id, {}};
    for (const auto& r : set.records) {
      if (dropped.count(r.annotator_id) == 0) kept.records.push_back(r);
    }
    if (!kept.records.empty()) result.kept.push_back(std::move(kept));
  }
  return result;
}

std::optional<GoldLabel> strong_majority_label(const AnnotationSet& set, Scheme scheme) {
  if (set.records.empty()) {
    throw std::invalid_argument("strong_majority_label: empty annotation set");
  }
  const auto labels = labels_of(set, scheme);
  const auto winner = strong_majority(labels);
  if (!winner) return std::nullopt;
  const auto support = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), *winner));
  return GoldLabel{set.tweet_id, scheme, *winner, support, labels.size()};
}

std::vector<GoldLabel> gold_labels(std::span<const AnnotationSet> sets, Scheme scheme,
                                   std::size_t min_annotations) {
  std::vector<GoldLabel> golds;
  for (const auto& set : sets) {
    if (set.records.size() < min_annotations || set.records.empty()) continue;
    if (auto gold = strong_majority_label(set, scheme)) golds.push_back(std::move(*gold));
  }
  return golds;
}

std::vector<SizeHistogramRow> annotations_per_tweet(std::span<const AnnotationSet> sets) {
  std::vector<SizeHistogramRow> rows = {{"1"}, {"2"}, {"3"}, {"4"}, {">=5"}, {"all"}};
  for (const auto& set : sets) {
    const std::size_t n = set.records.size();
    if (n == 0) continue;
    auto& row = rows[std::min<std::size_t>(n, 5) - 1];
    ++row.tweets;
    row.annotations += n;
    ++rows.back().tweets;
    rows.back().annotations += n;
  }
  return rows;
}

std::array<double, 3> majority_class_size_histogram(std::span<const AnnotationSet> sets,
                                                    Scheme scheme) {
  std::array<std::size_t, 3> counts{};
  std::size_t total = 0;
  for (const auto& set : sets) {
    if (set.records.size() != 3) continue;
    const auto hist = histogram(labels_of(set, scheme), label_count(scheme));
    const std::size_t largest = *std::max_element(hist.begin(), hist.end());
    ++counts[largest - 1];
    ++total;
  }
  std::array<double, 3> percent{};
  if (total == 0) return percent;
  for (std::size_t i = 0; i < 3; ++i) {
    percent[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return percent;
}

double inter_annotator_agreement(std::span<const AnnotationSet> sets, Scheme scheme) {
  if (sets.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& set : sets) {
    const std::size_t n = set.records.size();
    if (n < 2) {
      throw std::invalid_argument("inter_annotator_agreement: tweet " + set.tweet_id +
                                  " has fewer than two records");
    }
    // Agreeing pairs = sum over labels of C(count, 2).
    const auto hist = histogram(labels_of(set, scheme), label_count(scheme));
    std::size_t agreeing = 0;
    for (std::size_t c : hist) agreeing += c * (c - (c > 0 ? 1 : 0)) / 2;
    sum += static_cast<double>(agreeing) / static_cast<double>(n * (n - 1) / 2);
  }
  return 100.0 * sum / static_cast<double>(sets.size());
}

double average_probability_majority(std::span<const AnnotationSet> sets, Scheme scheme) {
  const auto agreement = annotator_majority_agreement(sets, scheme);
  if (agreement.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [annotator, p] : agreement) sum += p;
  return sum / static_cast<double>(agreement.size());
}

CountMatrix confusion_matrix(std::span<const AnnotationSet> sets, Scheme scheme,
                             MajorityRule rule) {
  const std::size_t k = label_count(scheme);
  CountMatrix matrix(k, std::vector<std::size_t>(k, 0));
  for (const auto& set : sets) {
    const auto labels = labels_of(set, scheme);
    const auto majority =
        rule == MajorityRule::kPlurality ? plurality_label(labels) : strong_majority(labels);
    if (!majority) continue;
    for (int l : labels) ++matrix[static_cast<std::size_t>(*majority)][static_cast<std::size_t>(l)];
  }
  return matrix;
}

std::vector<double> category_distribution(std::span<const GoldLabel> golds) {
  if (golds.empty()) throw std::invalid_argument("category_distribution: no gold labels");
  const Scheme scheme = golds.front().scheme;
  std::vector<std::size_t> counts(label_count(scheme), 0);
  for (const auto& g : golds) {
    if (!(g.scheme == scheme)) {
      throw std::invalid_argument("category_distribution: mixed label schemes");
    }
    ++counts[static_cast<std::size_t>(g.label)];
  }
  std::vector<double> percent;
  for (std::size_t c : counts) {
    percent.push_back(100.0 * static_cast<double>(c) / static_cast<double>(golds.size()));
  }
  return percent;
}

Crosstab purpose_emotion_crosstab(std::span<const GoldLabel> purpose_golds,
                                  const std::map<std::string, std::string>& emotion_golds) {
  std::map<int, std::map<std::string, std::size_t>> counts;
  std::set<std::string> emotions;
  std::optional<Scheme> scheme;
  for (const auto& g : purpose_golds) {
    auto it = emotion_golds.find(g.tweet_id);
    if (it == emotion_golds.end()) continue;
    if (!scheme) scheme = g.scheme;
    ++counts[g.label][it->second];
    emotions.insert(it->second);
  }
  if (counts.empty()) {
    throw DataError("purpose_emotion_crosstab: no tweet has both a purpose and an emotion label");
  }
  Crosstab table;
  table.columns.assign(emotions.begin(), emotions.end());
  for (const auto& [label, row] : counts) {
    table.rows.emplace_back(scheme_labels(*scheme)[static_cast<std::size_t>(label)]);
    std::size_t total = 0;
    for (const auto& [emotion, c] : row) total += c;
    std::vector<double> percent;
    for (const auto& emotion : table.columns) {
      auto it = row.find(emotion);
      const std::size_t c = it == row.end() ? 0 : it->second;
      percent.push_back(100.0 * static_cast<double>(c) / static_cast<double>(total));
    }
    table.percent.push_back(std::move(percent));
    table.row_totals.push_back(total);
  }
  return table;
}

std::map<std::string, std::string> parse_emotion_golds(std::string_view content,
                                                       std::string_view source,
                                                       std::size_t min_annotations) {
  std::map<std::string, std::vector<std::string>> judgments;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line_no = 0;
  bool header_seen = false;
  for (std::string_view line : io::split_lines(content)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    auto fields = io::split(line, '\t');
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "tweet_id" || fields[1] != "annotator_id" ||
          fields[2] != "emotion") {
        throw DataError(io::at_line(source, line_no,
                                    "expected header tweet_id<TAB>annotator_id<TAB>emotion"));
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      throw DataError(io::at_line(source, line_no, "expected 3 tab-separated fields"));
    }
    if (!seen.emplace(std::string(fields[0]), std::string(fields[1])).second) {
      throw DataError(io::at_line(source, line_no, "duplicate (tweet, annotator) judgment"));
    }
    judgments[std::string(fields[0])].emplace_back(fields[2]);
  }
  std::map<std::string, std::string> golds;
  for (const auto& [tweet, emotions] : judgments) {
    if (emotions.size() < min_annotations) continue;
    std::map<std::string, std::size_t> counts;
    for (const auto& e : emotions) ++counts[e];
    for (const auto& [e, c] : counts) {
      if (c > emotions.size() - c) golds[tweet] = e;
    }
  }
  return golds;
}

std::map<std::string, std::string> load_emotion_golds(const std::filesystem::path& path,
                                                      std::size_t min_annotations) {
  return parse_emotion_golds(io::read_file(path), path.string(), min_annotations);
}

}  // namespace purpose::annotations
