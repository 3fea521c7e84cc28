#ifndef PURPOSE_FEATURES_H_
#define PURPOSE_FEATURES_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "purpose/corpus.h"
#include "purpose/lexicons.h"
#include "purpose/textproc.h"

namespace purpose::features {

// Sparse feature vector keyed by namespaced feature name. Holds no zeros.
using FeatureVector = std::map<std::string, double, std::less<>>;

// Adds `by` to a feature, erasing it if the result is zero.
void increment(FeatureVector& vector, std::string name, double by = 1.0);
void merge_into(FeatureVector& into, const FeatureVector& from);

enum class FeatureGroup {
  kNgrams,
  kPos,
  kClusters,
  kAllcaps,
  kEmolex,
  kNegation,
  kPunctuation,
  kEmoticons,
  kHashtags,
  kElongated,
  kHashtagPmi,
};

const std::vector<FeatureGroup>& all_groups();
std::string_view group_name(FeatureGroup group);
std::optional<FeatureGroup> parse_group(std::string_view name);

// Owning group of a feature name, from its prefix.
std::optional<FeatureGroup> group_of(std::string_view feature_name);

struct FeatureConfig {
  std::set<FeatureGroup> enabled;

  static FeatureConfig all();
  FeatureConfig without(std::span<const FeatureGroup> groups) const;
  bool has(FeatureGroup group) const { return enabled.count(group) > 0; }
  // Comma-separated group names in declaration order.
  std::string describe() const;
  // Parses a comma-separated list of group names.
  static FeatureConfig parse(std::string_view list);
};

// Keeps the features whose group is enabled.
FeatureVector restrict(const FeatureVector& vector, const FeatureConfig& config);

struct Resources {
  std::optional<lexicons::EmotionLexicon> emotion_lexicon;
  std::optional<lexicons::HashtagEmotionLexicon> hashtag_lexicon;
  std::optional<textproc::ClusterMap> clusters;
  textproc::NegationList negations;
  textproc::EmoticonMatcher emoticons;
};

// Tokenizes, attaches the tweet's POS tags and marks negation scopes.
std::vector<textproc::Token> prepare_tokens(const corpus::Tweet& tweet, const Resources& resources);

// Word n-grams (n = 1..4) over non-punctuation tokens, lowercased, negated
// tokens suffixed "_NEG"; skipped 3- and 4-grams with one interior position
// replaced by "*"; character 3..5-grams inside each token. All presence.
FeatureVector ngram_features(std::span<const textproc::Token> tokens);

// Per-label counts of lexicon words, split further by POS tag, all-caps words
// and hashtags. Labels of negated tokens get a "_NEG" suffix.
FeatureVector emotion_lexicon_features(std::span<const textproc::Token> tokens,
                                       const lexicons::EmotionLexicon& lexicon);

// All-caps words, '!'/'?'/mixed punctuation runs, hashtags, elongated words,
// negated contexts and emoticon polarity flags.
FeatureVector surface_features(std::span<const textproc::Token> tokens,
                               const textproc::NegationList& negations = textproc::default_negations());

FeatureVector allcaps_features(std::span<const textproc::Token> tokens);
FeatureVector punctuation_features(std::span<const textproc::Token> tokens);
FeatureVector emoticon_features(std::span<const textproc::Token> tokens);
FeatureVector hashtag_count_features(std::span<const textproc::Token> tokens);
FeatureVector elongated_features(std::span<const textproc::Token> tokens);
FeatureVector negation_features(std::span<const textproc::Token> tokens,
                                const textproc::NegationList& negations);
FeatureVector pos_features(std::span<const textproc::Token> tokens);
FeatureVector cluster_features(std::span<const textproc::Token> tokens,
                               const textproc::ClusterMap& clusters);
FeatureVector hashtag_pmi_features(std::span<const textproc::Token> tokens,
                                   const lexicons::HashtagEmotionLexicon& lexicon);

// Union of the enabled groups. Groups whose resource is missing contribute
// nothing. Throws std::invalid_argument for an empty config.
FeatureVector extract(const corpus::Tweet& tweet, const Resources& resources,
                      const FeatureConfig& config);

// Canonical line: tweet_id, then name:value pairs sorted by name, tab-separated.
std::string to_tsv_line(std::string_view tweet_id, const FeatureVector& vector);
std::pair<std::string, FeatureVector> parse_tsv_line(std::string_view line);

}  // namespace purpose::features

#endif  // PURPOSE_FEATURES_H_
