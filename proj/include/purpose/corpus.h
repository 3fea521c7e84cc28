#ifndef PURPOSE_CORPUS_H_
#define PURPOSE_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "purpose/textproc.h"

namespace purpose::corpus {

struct Tweet {
  std::string id;
  std::string text;
  std::optional<std::string> lang_code;
  // Token-aligned (token, tag) pairs from an external tagger.
  std::optional<std::vector<std::pair<std::string, std::string>>> pos_tags;
  std::optional<std::string> source_query;
};

struct CorpusFilterReport {
  std::size_t total_in = 0;
  std::size_t dropped_retweet = 0;
  std::size_t dropped_language = 0;
  std::size_t dropped_english_wordcount = 0;
  std::size_t kept = 0;

  // Field-wise addition, for merging per-partition reports.
  CorpusFilterReport& operator+=(const CorpusFilterReport& other);
  bool consistent() const;
  std::string to_json() const;

  bool operator==(const CorpusFilterReport&) const = default;
};

using Wordlist = std::unordered_set<std::string>;

inline constexpr std::string_view kEnglishCode = "en";
inline constexpr std::string_view kUrlPlaceholder = "http://someurl";
inline constexpr std::string_view kMentionPlaceholder = "@someuser";

// UTF-8 text, one word per line, '#' lines ignored; words are lowercased.
Wordlist load_wordlist(const std::filesystem::path& path);
Wordlist parse_wordlist(std::string_view content);

// A whitespace-delimited token equal to "RT", "rt" or "Rt".
bool is_retweet(const Tweet& tweet);

// Language tag (when present) must equal `english_code`, and at least two
// token positions must be wordlist members after lowercasing and stripping
// leading '#'/'@' and trailing punctuation. Throws std::invalid_argument on
// an empty wordlist.
bool passes_english_filter(const Tweet& tweet, const Wordlist& wordlist,
                           std::string_view english_code = kEnglishCode);

// Replaces URLs with http://someurl and @-mentions with @someuser.
std::string normalize(std::string_view text);

struct FilterResult {
  std::vector<Tweet> kept;
  CorpusFilterReport report;
};

// Normalizes each tweet, then drops retweets, non-English language tags and
// tweets with fewer than two wordlist words, in that order. Throws DataError
// on a duplicate tweet id.
FilterResult filter_corpus(std::span<const Tweet> tweets, const Wordlist& wordlist,
                           std::string_view english_code = kEnglishCode);

// JSON lines with keys id, text, optional lang, optional query and optional
// pos (list of [token, tag]). Blank lines are skipped.
std::vector<Tweet> parse_jsonl(std::string_view content, std::string_view source = "<memory>");
std::vector<Tweet> load_jsonl(const std::filesystem::path& path);
std::string to_jsonl(std::span<const Tweet> tweets);

// Throws DataError when the tweet carries POS tags whose count differs from
// the tokenizer's token count.
void validate_pos(const Tweet& tweet);

// POS file: tweet_id<TAB>space-joined tags, aligned with tokenize(text) under
// the same emoticon matcher used for feature extraction. Tweets absent from
// the file keep their current tags.
void attach_pos_file(std::vector<Tweet>& tweets, const std::filesystem::path& path,
                     const textproc::EmoticonMatcher& emoticons = textproc::default_emoticons());

// Throws DataError naming the first repeated id.
void check_unique_ids(std::span<const Tweet> tweets);

}  // namespace purpose::corpus

#endif  // PURPOSE_CORPUS_H_
