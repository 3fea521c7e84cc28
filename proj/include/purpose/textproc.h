#ifndef PURPOSE_TEXTPROC_H_
#define PURPOSE_TEXTPROC_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace purpose::textproc {

enum class TokenKind { kWord, kHashtag, kMention, kUrl, kEmoticon, kPunctuation, kNumber };

std::string_view kind_name(TokenKind kind);

// Emoticon polarity, decided by the mouth character.
enum class Polarity { kNeutral, kPositive, kNegative };

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::kWord;
  bool negated = false;
  std::optional<std::string> pos;
  Polarity polarity = Polarity::kNeutral;  // meaningful for emoticons only

  bool operator==(const Token&) const = default;
};

// ASCII lowercase; bytes >= 0x80 are copied unchanged.
std::string to_lower(std::string_view text);

// Splits UTF-8 into code point substrings. Invalid bytes become single-byte
// pieces so the concatenation always equals the input.
std::vector<std::string_view> utf8_chars(std::string_view text);

// Length of the URL starting at `pos` (http://, https:// or www. prefix,
// case-insensitive, running to the next whitespace minus trailing
// punctuation), or 0 if none starts there. Does not check the left boundary.
std::size_t match_url(std::string_view text, std::size_t pos);

// Length of an @-mention (@ followed by [A-Za-z0-9_]+) at `pos`, or 0.
std::size_t match_mention(std::string_view text, std::size_t pos);

// True when `pos` is at the start of text or follows a non-word byte.
bool at_word_boundary(std::string_view text, std::size_t pos);

// Recognizes eye/nose/mouth emoticons in both reading directions, e.g. ":)",
// ";-(", ":P", "(:". Extra literal emoticons may be registered; they take
// precedence over the built-in pattern when they produce a longer match.
class EmoticonMatcher {
 public:
  struct Match {
    std::size_t length = 0;
    Polarity polarity = Polarity::kNeutral;
  };

  EmoticonMatcher() = default;

  // Resource file: one emoticon per line, optionally followed by a tab and
  // positive|negative|neutral. '#' lines are comments.
  static EmoticonMatcher load(const std::filesystem::path& path);

  void add(std::string emoticon, Polarity polarity);

  // Match at `pos`; the caller guarantees the left boundary. A match followed
  // by an ASCII letter or digit is rejected.
  Match match(std::string_view text, std::size_t pos) const;

 private:
  Match builtin_match(std::string_view text, std::size_t pos) const;

  std::vector<std::pair<std::string, Polarity>> extras_;
};

const EmoticonMatcher& default_emoticons();

// Emoticons are recognized before punctuation splitting; URLs, mentions and
// hashtags stay whole; a run of '!'/'?' characters, or of one repeated
// sentence punctuation character, is a single token.
std::vector<Token> tokenize(std::string_view text,
                            const EmoticonMatcher& emoticons = default_emoticons());

// Negation cue words. Besides the listed words, any token ending in "n't"
// counts as a negation.
class NegationList {
 public:
  NegationList();  // bundled list
  explicit NegationList(std::vector<std::string> words);

  // One word per line; '#' lines are comments.
  static NegationList load(const std::filesystem::path& path);

  bool is_negation(std::string_view surface) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

const NegationList& default_negations();

// True for punctuation tokens made only of , . : ; ! ?
bool is_clause_punctuation(const Token& token);

// Marks word and hashtag tokens that follow a negation word and precede the
// next clause punctuation token. The negation word itself stays unmarked.
std::vector<Token> mark_negation(std::vector<Token> tokens,
                                 const NegationList& negations = default_negations());

// Number of negated contexts: negation words that open a scope while no
// scope is already open.
int count_negated_contexts(std::span<const Token> tokens,
                           const NegationList& negations = default_negations());

// Some character occurs three or more times in a row ("soooo").
bool is_elongated(std::string_view word);

// At least two characters, at least one letter, and every letter uppercase.
bool is_allcaps(std::string_view word);

// Brown-cluster bit paths keyed by lowercased word.
class ClusterMap {
 public:
  static constexpr std::size_t kMaxClusters = 1000;

  ClusterMap() = default;

  // TSV rows cluster_path<TAB>word<TAB>count. For a word listed more than
  // once the row with the highest count wins (first row on ties).
  static ClusterMap load(const std::filesystem::path& path);
  static ClusterMap parse(std::string_view content, std::string_view source = "<memory>");

  // Returns nullptr for unknown words. Case-insensitive.
  const std::string* lookup(std::string_view word) const;

  std::size_t size() const { return clusters_.size(); }
  std::size_t cluster_count() const;

 private:
  std::unordered_map<std::string, std::string> clusters_;
};

}  // namespace purpose::textproc

#endif  // PURPOSE_TEXTPROC_H_
