#include "purpose/corpus.h"

#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "purpose/error.h"
#include "purpose/io.h"
#include "purpose/textproc.h"

namespace purpose::corpus {

using nlohmann::json;

CorpusFilterReport& CorpusFilterReport::operator+=(const CorpusFilterReport& other) {
  total_in += other.total_in;
  dropped_retweet += other.dropped_retweet;
  dropped_language += other.dropped_language;
  dropped_english_wordcount += other.dropped_english_wordcount;
  kept += other.kept;
  return *this;
}

bool CorpusFilterReport::consistent() const {
  return total_in == kept + dropped_retweet + dropped_language + dropped_english_wordcount;
}

std::string CorpusFilterReport::to_json() const {
  json j;
  j["total_in"] = total_in;
  j["dropped_retweet"] = dropped_retweet;
  j["dropped_language"] = dropped_language;
  j["dropped_english_wordcount"] = dropped_english_wordcount;
  j["kept"] = kept;
  return j.dump(2) + "\n";
}

Wordlist parse_wordlist(std::string_view content) {
  Wordlist words;
  for (std::string_view raw : io::split_lines(content)) {
    std::string_view line = io::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    words.insert(textproc::to_lower(line));
  }
  return words;
}

Wordlist load_wordlist(const std::filesystem::path& path) {
  return parse_wordlist(io::read_file(path));
}

bool is_retweet(const Tweet& tweet) {
  for (std::string_view token : io::split_whitespace(tweet.text)) {
    if (token == "RT" || token == "rt" || token == "Rt") return true;
  }
  return false;
}

namespace {
bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}
}  // namespace

bool passes_english_filter(const Tweet& tweet, const Wordlist& wordlist,
                           std::string_view english_code) {
  if (wordlist.empty()) throw std::invalid_argument("passes_english_filter: empty wordlist");
  if (tweet.lang_code && *tweet.lang_code != english_code) return false;
  int hits = 0;
  for (std::string_view token : io::split_whitespace(tweet.text)) {
    while (!token.empty() && (token.front() == '#' || token.front() == '@')) {
      token.remove_prefix(1);
    }
    while (!token.empty() && is_ascii_punct(token.back())) token.remove_suffix(1);
    if (token.empty()) continue;
    if (wordlist.count(textproc::to_lower(token)) > 0 && ++hits >= 2) return true;
  }
  return false;
}

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (textproc::at_word_boundary(text, i)) {
      if (std::size_t len = textproc::match_url(text, i); len > 0) {
        out += kUrlPlaceholder;
        i += len;
        continue;
      }
      if (std::size_t len = textproc::match_mention(text, i); len > 0) {
        out += kMentionPlaceholder;
        i += len;
        continue;
      }
    }
    out += text[i];
    ++i;
  }
  return out;
}

void check_unique_ids(std::span<const Tweet> tweets) {
  std::unordered_set<std::string_view> seen;
  for (const Tweet& t : tweets) {
    if (!seen.insert(t.id).second) throw DataError("duplicate tweet id: " + t.id);
  }
}

FilterResult filter_corpus(std::span<const Tweet> tweets, const Wordlist& wordlist,
                           std::string_view english_code) {
  check_unique_ids(tweets);
  FilterResult result;
  result.report.total_in = tweets.size();
  for (const Tweet& original : tweets) {
    Tweet tweet = original;
    tweet.text = normalize(original.text);
    if (is_retweet(tweet)) {
      ++result.report.dropped_retweet;
    } else if (tweet.lang_code && *tweet.lang_code != english_code) {
      ++result.report.dropped_language;
    } else if (!passes_english_filter(tweet, wordlist, english_code)) {
      ++result.report.dropped_english_wordcount;
    } else {
      ++result.report.kept;
      result.kept.push_back(std::move(tweet));
    }
  }
  return result;
}

std::vector<Tweet> parse_jsonl(std::string_view content, std::string_view source) {
  std::vector<Tweet> tweets;
  std::size_t line_no = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(io::at_line(source, line_no, std::string("invalid JSON: ") + e.what()));
    }
    auto fail = [&](const std::string& msg) {
      throw DataError(io::at_line(source, line_no, msg));
    };
    if (!j.is_object()) fail("expected a JSON object");
    Tweet tweet;
    if (!j.contains("id")) fail("missing key 'id'");
    if (j["id"].is_string()) {
      tweet.id = j["id"].get<std::string>();
    } else if (j["id"].is_number_integer()) {
      tweet.id = std::to_string(j["id"].get<long long>());
    } else {
      fail("'id' must be a string or integer");
    }
    if (tweet.id.empty()) fail("empty 'id'");
    if (!j.contains("text") || !j["text"].is_string()) fail("missing string key 'text'");
    tweet.text = j["text"].get<std::string>();
    if (j.contains("lang") && !j["lang"].is_null()) {
      if (!j["lang"].is_string()) fail("'lang' must be a string");
      tweet.lang_code = j["lang"].get<std::string>();
    }
    if (j.contains("query") && !j["query"].is_null()) {
      if (!j["query"].is_string()) fail("'query' must be a string");
      tweet.source_query = j["query"].get<std::string>();
    }
    if (j.contains("pos") && !j["pos"].is_null()) {
      if (!j["pos"].is_array()) fail("'pos' must be a list of [token, tag]");
      std::vector<std::pair<std::string, std::string>> tags;
      for (const auto& pair : j["pos"]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
            !pair[1].is_string()) {
          fail("'pos' must be a list of [token, tag]");
        }
        tags.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
      }
      tweet.pos_tags = std::move(tags);
    }
    try {
      validate_pos(tweet);
    } catch (const DataError& e) {
      fail(e.what());
    }
    tweets.push_back(std::move(tweet));
  }
  check_unique_ids(tweets);
  return tweets;
}

std::vector<Tweet> load_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(io::read_file(path), path.string());
}

std::string to_jsonl(std::span<const Tweet> tweets) {
  std::string out;
  for (const Tweet& t : tweets) {
    json j;
    j["id"] = t.id;
    j["text"] = t.text;
    if (t.lang_code) j["lang"] = *t.lang_code;
    if (t.source_query) j["query"] = *t.source_query;
    if (t.pos_tags) {
      json tags = json::array();
      for (const auto& [token, tag] : *t.pos_tags) tags.push_back({token, tag});
      j["pos"] = std::move(tags);
    }
    out += j.dump(-1, ' ', false, json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

void validate_pos(const Tweet& tweet) {
  if (!tweet.pos_tags) return;
  const std::size_t tokens = textproc::tokenize(tweet.text).size();
  if (tokens != tweet.pos_tags->size()) {
    throw DataError("tweet " + tweet.id + ": " + std::to_string(tweet.pos_tags->size()) +
                    " POS tags for " + std::to_string(tokens) + " tokens");
  }
}

void attach_pos_file(std::vector<Tweet>& tweets, const std::filesystem::path& path,
                     const textproc::EmoticonMatcher& emoticons) {
  const std::string content = io::read_file(path);
  const std::string source = path.string();
  std::unordered_map<std::string, std::vector<std::string>> tags_by_id;
  std::size_t line_no = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw DataError(io::at_line(source, line_no, "expected tweet_id<TAB>tags"));
    }
    std::vector<std::string> tags;
    for (auto tag : io::split_whitespace(line.substr(tab + 1))) tags.emplace_back(tag);
    if (!tags_by_id.emplace(std::string(line.substr(0, tab)), std::move(tags)).second) {
      throw DataError(io::at_line(source, line_no, "duplicate tweet id"));
    }
  }
  for (Tweet& tweet : tweets) {
    auto it = tags_by_id.find(tweet.id);
    if (it == tags_by_id.end()) continue;
    auto tokens = textproc::tokenize(tweet.text, emoticons);
    if (tokens.size() != it->second.size()) {
      throw DataError(source + ": tweet " + tweet.id + " has " +
                      std::to_string(it->second.size()) + " tags for " +
                      std::to_string(tokens.size()) + " tokens");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      pairs.emplace_back(tokens[k].surface, it->second[k]);
    }
    tweet.pos_tags = std::move(pairs);
  }
}

}  // namespace purpose::corpus
