#ifndef PURPOSE_ANNOTATIONS_H_
#define PURPOSE_ANNOTATIONS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace purpose::annotations {

// Fine purpose labels, in questionnaire display order (favour, oppose, other).
enum class PurposeLabel {
  kAgree,
  kPraise,
  kSupport,
  kHypocrisy,
  kMistake,
  kDisagree,
  kRidicule,
  kCriticize,
  kVent,
  kInformation,
  kNoneOfAbove,
};
inline constexpr int kPurposeLabelCount = 11;

enum class CoarseLabel { kFavour, kOppose, kOther };
inline constexpr int kCoarseLabelCount = 3;

enum class Relevance { kPolitical, kNotPolitical };
inline constexpr int kRelevanceCount = 2;

CoarseLabel coarse_of(PurposeLabel label);

std::string_view name(PurposeLabel label);
std::string_view name(CoarseLabel label);
std::string_view name(Relevance label);
std::optional<PurposeLabel> parse_purpose(std::string_view text);
std::optional<Relevance> parse_relevance(std::string_view text);

enum class Question { kPurpose, kRelevance };
enum class Granularity { kFine, kCoarse };

// Which label space a statistic is computed over: Q1 fine (11 labels),
// Q1 coarse (3 labels) or Q2 (2 labels; granularity is ignored).
struct Scheme {
  Question question = Question::kPurpose;
  Granularity granularity = Granularity::kFine;

  bool operator==(const Scheme&) const;
};

inline constexpr Scheme kPurposeFine{Question::kPurpose, Granularity::kFine};
inline constexpr Scheme kPurposeCoarse{Question::kPurpose, Granularity::kCoarse};
inline constexpr Scheme kRelevanceScheme{Question::kRelevance, Granularity::kFine};

// Label names of the scheme, in display order.
const std::vector<std::string_view>& scheme_labels(Scheme scheme);
// "q1", "q1_coarse" or "q2".
std::string_view scheme_name(Scheme scheme);
std::optional<int> scheme_label_index(Scheme scheme, std::string_view label);

struct AnnotationRecord {
  std::string tweet_id;
  std::string annotator_id;
  PurposeLabel q1 = PurposeLabel::kNoneOfAbove;
  Relevance q2 = Relevance::kPolitical;
};

// Index of the record's answer within scheme_labels(scheme).
int label_index(const AnnotationRecord& record, Scheme scheme);

struct AnnotationSet {
  std::string tweet_id;
  std::vector<AnnotationRecord> records;
};

// Groups records by tweet in order of first appearance. Throws DataError when
// an annotator judged the same tweet twice.
std::vector<AnnotationSet> group_records(std::span<const AnnotationRecord> records);

// TSV with header tweet_id, annotator_id, q1, q2. q2 is "political" or
// "not_political".
std::vector<AnnotationRecord> parse_tsv(std::string_view content,
                                        std::string_view source = "<memory>");
std::vector<AnnotationRecord> load_tsv(const std::filesystem::path& path);

struct GoldLabel {
  std::string tweet_id;
  Scheme scheme;
  int label = 0;
  std::size_t support_count = 0;
  std::size_t total_count = 0;

  std::string_view label_name() const;
};

// Label with a unique highest count, if any.
std::optional<int> plurality_label(std::span<const int> labels);
// Label chosen more often than all other labels combined, if any.
std::optional<int> strong_majority(std::span<const int> labels);

// Fraction of each annotator's assignments that match the plurality label of
// the tweet; tweets without a unique plurality count as disagreement. Every
// set must hold at least two records (std::invalid_argument otherwise).
std::map<std::string, double> annotator_majority_agreement(std::span<const AnnotationSet> sets,
                                                           Scheme scheme = kPurposeFine);
std::map<std::string, double> annotator_majority_agreement(
    std::span<const AnnotationRecord> records, Scheme scheme = kPurposeFine);

// Annotators whose agreement lies strictly below mean - 2 * stdev
// (population stdev). Throws std::invalid_argument for fewer than two.
std::vector<std::string> poor_annotators(const std::map<std::string, double>& agreement);

struct AnnotatorFilterResult {
  std::vector<AnnotationSet> kept;
  std::vector<std::string> dropped;  // sorted
  std::map<std::string, double> agreement;
  double mean = 0.0;
  double stdev = 0.0;
};

// Single pass: agreement on Q1 (fine) over sets with at least two records,
// then every record of a poor annotator is removed and emptied sets dropped.
AnnotatorFilterResult filter_poor_annotators(std::span<const AnnotationSet> sets);

std::optional<GoldLabel> strong_majority_label(const AnnotationSet& set,
                                               Scheme scheme = kPurposeFine);

// Strong-majority labels for sets with at least `min_annotations` records.
std::vector<GoldLabel> gold_labels(std::span<const AnnotationSet> sets, Scheme scheme,
                                   std::size_t min_annotations = 2);

struct SizeHistogramRow {
  std::string bucket;  // "1" .. "4", ">=5", "all"
  std::size_t tweets = 0;
  std::size_t annotations = 0;
};

// Tweets and annotations per annotations-per-tweet bucket, with a total row.
std::vector<SizeHistogramRow> annotations_per_tweet(std::span<const AnnotationSet> sets);

// Percentages of tweets whose largest agreeing subset has size 1, 2, 3
// (element 0 is size 1). Only sets with exactly three records count; all
// zeros when there are none.
std::array<double, 3> majority_class_size_histogram(std::span<const AnnotationSet> sets,
                                                    Scheme scheme = kPurposeFine);

// Mean over tweets of the fraction of agreeing annotator pairs, times 100.
double inter_annotator_agreement(std::span<const AnnotationSet> sets, Scheme scheme = kPurposeFine);

// Unweighted mean of annotator_majority_agreement over annotators.
double average_probability_majority(std::span<const AnnotationSet> sets,
                                    Scheme scheme = kPurposeFine);

enum class MajorityRule { kPlurality, kStrong };

using CountMatrix = std::vector<std::vector<std::size_t>>;

// cell[x][y]: records labeled y on tweets whose majority label is x. Tweets
// without a majority under `rule` are skipped.
CountMatrix confusion_matrix(std::span<const AnnotationSet> sets, Scheme scheme = kPurposeFine,
                             MajorityRule rule = MajorityRule::kPlurality);

// Percentage of gold labels per scheme label (display order). All labels must
// share one scheme; throws std::invalid_argument when empty.
std::vector<double> category_distribution(std::span<const GoldLabel> golds);

struct Crosstab {
  std::vector<std::string> rows;     // purposes present, display order
  std::vector<std::string> columns;  // emotions present, sorted
  std::vector<std::vector<double>> percent;
  std::vector<std::size_t> row_totals;
};

// Row percentages of emotions per purpose over tweets labeled in both maps.
// Throws DataError when no tweet has both labels.
Crosstab purpose_emotion_crosstab(std::span<const GoldLabel> purpose_golds,
                                  const std::map<std::string, std::string>& emotion_golds);

// Emotion judgments as TSV tweet_id, annotator_id, emotion (with header).
// Returns the strong-majority emotion of every tweet judged by at least
// `min_annotations` annotators.
std::map<std::string, std::string> parse_emotion_golds(std::string_view content,
                                                       std::string_view source = "<memory>",
                                                       std::size_t min_annotations = 2);
std::map<std::string, std::string> load_emotion_golds(const std::filesystem::path& path,
                                                      std::size_t min_annotations = 2);

}  // namespace purpose::annotations

#endif  // PURPOSE_ANNOTATIONS_H_
