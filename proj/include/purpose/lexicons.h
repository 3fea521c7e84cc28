#ifndef PURPOSE_LEXICONS_H_
#define PURPOSE_LEXICONS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "purpose/corpus.h"
#include "purpose/textproc.h"

namespace purpose::lexicons {

// Eight basic emotions followed by the two polarities.
inline constexpr std::array<std::string_view, 10> kEmotionLexiconLabels = {
    "anger", "anticipation", "disgust", "fear",     "joy",
    "sadness", "surprise",   "trust",   "positive", "negative"};

// Word-level association lexicon in the word<TAB>label<TAB>{0,1} format.
class EmotionLexicon {
 public:
  EmotionLexicon() = default;

  static EmotionLexicon load(const std::filesystem::path& path);
  static EmotionLexicon parse(std::string_view content, std::string_view source = "<memory>");

  // Adds one association; throws std::invalid_argument on an unknown label or
  // when a word would get both polarities.
  void add(std::string_view word, std::string_view label);

  // Label indices into kEmotionLexiconLabels, ascending; nullptr when the
  // word has no associations. Case-insensitive.
  const std::vector<int>* lookup(std::string_view word) const;

  std::size_t size() const { return entries_.size(); }

  // word -> sorted label names, for inspection and tests.
  std::map<std::string, std::vector<std::string>> entries() const;

 private:
  std::unordered_map<std::string, std::vector<int>> entries_;
};

// Lookup key of a token for lexicon purposes: lowercased surface of words,
// lowercased surface without '#' for hashtags; nullopt for other kinds.
std::optional<std::string> lexicon_key(const textproc::Token& token);

struct PmiThresholds {
  std::size_t min_word = 5;   // tweets containing the word
  std::size_t min_joint = 2;  // tweets containing word and emotion hashtag
};

// Tweet-level presence counts behind PMI.
struct CooccurrenceCounts {
  std::size_t n_tweets = 0;
  std::vector<std::string> emotions;
  std::vector<std::size_t> emotion_count;  // parallel to `emotions`
  std::unordered_map<std::string, std::size_t> word_count;
  std::unordered_map<std::string, std::map<int, std::size_t>> joint;  // word -> emotion -> n

  std::size_t joint_count(std::string_view word, std::string_view emotion) const;
  std::optional<int> emotion_index(std::string_view emotion) const;

  // Associative merge of counts over the same emotion list.
  CooccurrenceCounts& operator+=(const CooccurrenceCounts& other);
};

inline constexpr std::size_t kMaxEmotions = 585;

// Emotion hashtag list: one word per line, '#' prefix optional, '#'-only
// comment lines ("# ...") ignored.
std::vector<std::string> load_emotion_hashtags(const std::filesystem::path& path);
std::vector<std::string> parse_emotion_hashtags(std::string_view content);

// Each tweet counts once per word it contains and once per emotion hashtag it
// carries. Emotion hashtag tokens are not counted on the word side.
CooccurrenceCounts count_cooccurrences(std::span<const corpus::Tweet> tweets,
                                       std::span<const std::string> emotion_hashtags);

// log2(joint * n / (word_count * emotion_count)), or nullopt when the pair is
// below either threshold or never co-occurs.
std::optional<double> pmi(const CooccurrenceCounts& counts, std::string_view word,
                          std::string_view emotion, PmiThresholds thresholds = {});

class HashtagEmotionLexicon {
 public:
  HashtagEmotionLexicon() = default;
  explicit HashtagEmotionLexicon(std::vector<std::string> emotions);

  const std::vector<std::string>& emotions() const { return emotions_; }

  // Throws std::invalid_argument for a non-positive or non-finite weight or an
  // unknown emotion.
  void set_weight(std::string_view word, std::string_view emotion, double weight);
  std::optional<double> weight(std::string_view word, std::string_view emotion) const;

  // (emotion index, weight) pairs for a lowercased word; nullptr if absent.
  const std::vector<std::pair<int, double>>* associations(std::string_view word) const;

  std::size_t word_count() const { return weights_.size(); }
  std::size_t pair_count() const;

  // Header "#emotions:" + tab-separated names, then word<TAB>emotion<TAB>weight
  // rows sorted by word and emotion order.
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;
  static HashtagEmotionLexicon parse(std::string_view content,
                                     std::string_view source = "<memory>");
  static HashtagEmotionLexicon load(const std::filesystem::path& path);

 private:
  std::vector<std::string> emotions_;
  std::unordered_map<std::string, int> emotion_index_;
  std::unordered_map<std::string, std::vector<std::pair<int, double>>> weights_;
};

// Keeps every (word, emotion) pair with positive PMI.
HashtagEmotionLexicon build_hashtag_lexicon(std::span<const corpus::Tweet> tweets,
                                            std::span<const std::string> emotion_hashtags,
                                            PmiThresholds thresholds = {});
HashtagEmotionLexicon lexicon_from_counts(const CooccurrenceCounts& counts,
                                          PmiThresholds thresholds = {});

// Sum over token occurrences of the token's weight for each emotion. Only
// emotions with a non-zero sum appear.
std::map<std::string, double> hashtag_feature_values(const HashtagEmotionLexicon& lexicon,
                                                     std::span<const textproc::Token> tokens);

}  // namespace purpose::lexicons

#endif  // PURPOSE_LEXICONS_H_
