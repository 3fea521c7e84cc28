#include "purpose/textproc.h"

#include <algorithm>
#include <map>

#include "purpose/error.h"
#include "purpose/io.h"

namespace purpose::textproc {

namespace {

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_ascii_word(char c) { return is_ascii_alnum(c) || c == '_'; }

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Length of the UTF-8 sequence starting at `pos` (1 for invalid bytes).
std::size_t utf8_length(std::string_view text, std::size_t pos) {
  auto lead = static_cast<unsigned char>(text[pos]);
  std::size_t len = 1;
  if (lead >= 0xF0 && lead < 0xF8) {
    len = 4;
  } else if (lead >= 0xE0) {
    len = lead < 0xF0 ? 3 : 1;
  } else if (lead >= 0xC0) {
    len = 2;
  }
  if (pos + len > text.size()) return 1;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<unsigned char>(text[pos + k]) & 0xC0) != 0x80) return 1;
  }
  return len;
}

// General punctuation U+2010..U+2027 except U+2019 (used as an apostrophe).
bool is_unicode_punct(std::string_view text, std::size_t pos) {
  if (pos + 3 > text.size()) return false;
  auto b0 = static_cast<unsigned char>(text[pos]);
  auto b1 = static_cast<unsigned char>(text[pos + 1]);
  auto b2 = static_cast<unsigned char>(text[pos + 2]);
  if (b0 != 0xE2 || b1 != 0x80) return false;
  return b2 >= 0x90 && b2 <= 0xA7 && b2 != 0x99;
}

// Bytes that belong inside words: ASCII letters/digits/underscore and any
// non-ASCII byte outside the general punctuation block.
bool is_word_byte_at(std::string_view text, std::size_t pos) {
  char c = text[pos];
  if (is_ascii_word(c)) return true;
  if (static_cast<unsigned char>(c) < 0x80) return false;
  return !is_unicode_punct(text, pos);
}

bool is_eye(char c) { return c == ':' || c == ';' || c == '=' || c == '8'; }
bool is_nose(char c) { return c == '-' || c == 'o' || c == '*' || c == '\''; }
bool is_mouth(char c) {
  switch (c) {
    case ')': case ']': case '(': case '[': case 'd': case 'D': case 'p': case 'P':
    case '/': case '}': case '{': case '@': case '|': case '\\':
      return true;
    default:
      return false;
  }
}

Polarity forward_polarity(char mouth) {
  switch (mouth) {
    case ')': case ']': case 'D':
      return Polarity::kPositive;
    case '(': case '[': case '/': case '\\':
      return Polarity::kNegative;
    default:
      return Polarity::kNeutral;
  }
}

// Read right-to-left, "(:" smiles and "):" frowns.
Polarity reverse_polarity(char mouth) {
  switch (mouth) {
    case '(': case '[':
      return Polarity::kPositive;
    case ')': case ']': case '/': case '\\': case 'D':
      return Polarity::kNegative;
    default:
      return Polarity::kNeutral;
  }
}

bool is_sentence_punct(char c) {
  return c == '!' || c == '?' || c == '.' || c == ',' || c == ';' || c == ':';
}

bool right_boundary_ok(std::string_view text, std::size_t end) {
  return end >= text.size() || !is_ascii_alnum(text[end]);
}

}  // namespace

std::string_view kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::kWord: return "word";
    case TokenKind::kHashtag: return "hashtag";
    case TokenKind::kMention: return "mention";
    case TokenKind::kUrl: return "url";
    case TokenKind::kEmoticon: return "emoticon";
    case TokenKind::kPunctuation: return "punctuation";
    case TokenKind::kNumber: return "number";
  }
  return "unknown";
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string_view> utf8_chars(std::string_view text) {
  std::vector<std::string_view> chars;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = utf8_length(text, i);
    chars.push_back(text.substr(i, len));
    i += len;
  }
  return chars;
}

std::size_t match_url(std::string_view text, std::size_t pos) {
  static constexpr std::string_view kPrefixes[] = {"http://", "https://", "www."};
  std::size_t prefix_len = 0;
  for (std::string_view prefix : kPrefixes) {
    if (pos + prefix.size() > text.size()) continue;
    if (to_lower(text.substr(pos, prefix.size())) == prefix) {
      prefix_len = prefix.size();
      break;
    }
  }
  if (prefix_len == 0) return 0;
  std::size_t end = pos + prefix_len;
  while (end < text.size() && !is_space(text[end])) ++end;
  static constexpr std::string_view kTrailing = ".,;:!?)]}'\"";
  while (end > pos + prefix_len && kTrailing.find(text[end - 1]) != std::string_view::npos) {
    --end;
  }
  if (end == pos + prefix_len) return 0;
  return end - pos;
}

std::size_t match_mention(std::string_view text, std::size_t pos) {
  if (pos >= text.size() || text[pos] != '@') return 0;
  std::size_t end = pos + 1;
  while (end < text.size() && is_ascii_word(text[end])) ++end;
  return end == pos + 1 ? 0 : end - pos;
}

bool at_word_boundary(std::string_view text, std::size_t pos) {
  if (pos == 0) return true;
  // Step back to the lead byte of the previous character.
  std::size_t prev = pos - 1;
  while (prev > 0 && (static_cast<unsigned char>(text[prev]) & 0xC0) == 0x80) --prev;
  return !is_word_byte_at(text, prev);
}

// ---------------------------------------------------------------- emoticons

EmoticonMatcher EmoticonMatcher::load(const std::filesystem::path& path) {
  const std::string content = io::read_file(path);
  const std::string source = path.string();
  EmoticonMatcher matcher;
  std::size_t line_no = 0;
  for (std::string_view raw : io::split_lines(content)) {
    ++line_no;
    std::string_view line = io::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = io::split(line, '\t');
    if (fields.size() > 2 || fields[0].empty()) {
      throw DataError(io::at_line(source, line_no, "expected emoticon[<TAB>polarity]"));
    }
    Polarity polarity = Polarity::kNeutral;
    if (fields.size() == 2) {
      if (fields[1] == "positive") {
        polarity = Polarity::kPositive;
      } else if (fields[1] == "negative") {
        polarity = Polarity::kNegative;
      } else if (fields[1] != "neutral") {
        throw DataError(io::at_line(source, line_no, "unknown polarity '" +
                                                         std::string(fields[1]) + "'"));
      }
    }
    matcher.add(std::string(fields[0]), polarity);
  }
  return matcher;
}

void EmoticonMatcher::add(std::string emoticon, Polarity polarity) {
  extras_.emplace_back(std::move(emoticon), polarity);
  std::stable_sort(extras_.begin(), extras_.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
}

EmoticonMatcher::Match EmoticonMatcher::builtin_match(std::string_view text,
                                                      std::size_t pos) const {
  const std::size_t n = text.size();
  auto at = [&](std::size_t i) { return i < n ? text[i] : '\0'; };

  // Forward: [<>]? eyes nose? mouth
  {
    std::size_t i = pos;
    if (at(i) == '<' || at(i) == '>') ++i;
    if (is_eye(at(i))) {
      ++i;
      if (is_nose(at(i)) && is_mouth(at(i + 1))) ++i;
      if (is_mouth(at(i)) && right_boundary_ok(text, i + 1)) {
        return {i + 1 - pos, forward_polarity(at(i))};
      }
    }
  }
  // Reverse: mouth nose? eyes [<>]?
  {
    std::size_t i = pos;
    if (is_mouth(at(i))) {
      char mouth = at(i);
      ++i;
      if (is_nose(at(i)) && is_eye(at(i + 1))) ++i;
      if (is_eye(at(i))) {
        ++i;
        if ((at(i) == '<' || at(i) == '>') && right_boundary_ok(text, i + 1)) {
          return {i + 1 - pos, reverse_polarity(mouth)};
        }
        if (right_boundary_ok(text, i)) return {i - pos, reverse_polarity(mouth)};
      }
    }
  }
  return {};
}

EmoticonMatcher::Match EmoticonMatcher::match(std::string_view text, std::size_t pos) const {
  Match best = builtin_match(text, pos);
  for (const auto& [emoticon, polarity] : extras_) {
    if (emoticon.size() <= best.length) break;
    if (text.substr(pos, emoticon.size()) == emoticon &&
        right_boundary_ok(text, pos + emoticon.size())) {
      best = {emoticon.size(), polarity};
      break;
    }
  }
  return best;
}

const EmoticonMatcher& default_emoticons() {
  static const EmoticonMatcher matcher;
  return matcher;
}

// ---------------------------------------------------------------- tokenizer

std::vector<Token> tokenize(std::string_view text, const EmoticonMatcher& emoticons) {
  std::vector<Token> tokens;
  const std::size_t n = text.size();
  std::size_t i = 0;

  auto emit = [&](std::size_t start, std::size_t end, TokenKind kind,
                  Polarity polarity = Polarity::kNeutral) {
    Token token;
    token.surface = std::string(text.substr(start, end - start));
    token.kind = kind;
    token.polarity = polarity;
    tokens.push_back(std::move(token));
  };

  while (i < n) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    const bool boundary = at_word_boundary(text, i);

    if (boundary) {
      if (std::size_t len = match_url(text, i); len > 0) {
        emit(i, i + len, TokenKind::kUrl);
        i += len;
        continue;
      }
      if (auto m = emoticons.match(text, i); m.length > 0) {
        emit(i, i + m.length, TokenKind::kEmoticon, m.polarity);
        i += m.length;
        continue;
      }
    }

    if (c == '@') {
      if (std::size_t len = match_mention(text, i); len > 0) {
        emit(i, i + len, TokenKind::kMention);
        i += len;
        continue;
      }
    }
    if (c == '#' && i + 1 < n && is_word_byte_at(text, i + 1)) {
      std::size_t end = i + 1;
      while (end < n && is_word_byte_at(text, end)) end += utf8_length(text, end);
      emit(i, end, TokenKind::kHashtag);
      i = end;
      continue;
    }

    if (is_word_byte_at(text, i)) {
      std::size_t end = i;
      while (end < n) {
        if (is_word_byte_at(text, end)) {
          end += utf8_length(text, end);
          continue;
        }
        // Internal apostrophes and hyphens join word pieces ("don't");
        // '.' and ',' join digit groups ("3.5", "1,000").
        const char d = text[end];
        const bool joins_word = (d == '\'' || d == '-') && end + 1 < n &&
                                is_word_byte_at(text, end + 1);
        const bool joins_digits = (d == '.' || d == ',') && end > i && is_digit(text[end - 1]) &&
                                  end + 1 < n && is_digit(text[end + 1]);
        if (joins_word || joins_digits) {
          end += 1;
          continue;
        }
        break;
      }
      std::string_view surface = text.substr(i, end - i);
      bool numeric = is_digit(surface.front());
      for (char s : surface) {
        if (!is_digit(s) && s != '.' && s != ',') numeric = false;
      }
      emit(i, end, numeric ? TokenKind::kNumber : TokenKind::kWord);
      i = end;
      continue;
    }

    if (c == '!' || c == '?') {
      std::size_t end = i;
      while (end < n && (text[end] == '!' || text[end] == '?')) ++end;
      emit(i, end, TokenKind::kPunctuation);
      i = end;
      continue;
    }
    if (is_sentence_punct(c)) {
      std::size_t end = i;
      while (end < n && text[end] == c) ++end;
      emit(i, end, TokenKind::kPunctuation);
      i = end;
      continue;
    }
    std::size_t len = utf8_length(text, i);
    emit(i, i + len, TokenKind::kPunctuation);
    i += len;
  }
  return tokens;
}

// ---------------------------------------------------------------- negation

namespace {
const std::vector<std::string>& bundled_negations() {
  static const std::vector<std::string> words = {
      "never",  "no",      "nothing", "nowhere", "noone",  "none",    "not",
      "havent", "hasnt",   "hadnt",   "cant",    "couldnt", "shouldnt", "wont",
      "wouldnt", "dont",   "doesnt",  "didnt",   "isnt",   "arent",   "aint",
      "cannot", "without", "nobody",  "neither", "nor"};
  return words;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}
}  // namespace

NegationList::NegationList() : NegationList(bundled_negations()) {}

NegationList::NegationList(std::vector<std::string> words) {
  for (auto& w : words) words_.insert(to_lower(w));
}

NegationList NegationList::load(const std::filesystem::path& path) {
  const std::string content = io::read_file(path);
  std::vector<std::string> words;
  for (std::string_view raw : io::split_lines(content)) {
    std::string_view line = io::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    words.emplace_back(line);
  }
  return NegationList(std::move(words));
}

bool NegationList::is_negation(std::string_view surface) const {
  const std::string lower = to_lower(surface);
  if (words_.count(lower) > 0) return true;
  return ends_with(lower, "n't") || ends_with(lower, "n\xE2\x80\x99t");
}

const NegationList& default_negations() {
  static const NegationList list;
  return list;
}

bool is_clause_punctuation(const Token& token) {
  if (token.kind != TokenKind::kPunctuation || token.surface.empty()) return false;
  return std::all_of(token.surface.begin(), token.surface.end(), is_sentence_punct);
}

std::vector<Token> mark_negation(std::vector<Token> tokens, const NegationList& negations) {
  bool in_scope = false;
  for (Token& token : tokens) {
    if (is_clause_punctuation(token)) {
      in_scope = false;
    } else if (token.kind == TokenKind::kWord && negations.is_negation(token.surface)) {
      in_scope = true;
    } else if (in_scope &&
               (token.kind == TokenKind::kWord || token.kind == TokenKind::kHashtag)) {
      token.negated = true;
    }
  }
  return tokens;
}

int count_negated_contexts(std::span<const Token> tokens, const NegationList& negations) {
  int contexts = 0;
  bool in_scope = false;
  for (const Token& token : tokens) {
    if (is_clause_punctuation(token)) {
      in_scope = false;
    } else if (token.kind == TokenKind::kWord && negations.is_negation(token.surface)) {
      if (!in_scope) ++contexts;
      in_scope = true;
    }
  }
  return contexts;
}

// ---------------------------------------------------------------- word shape

bool is_elongated(std::string_view word) {
  auto chars = utf8_chars(word);
  int run = 0;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    run = (i > 0 && chars[i] == chars[i - 1]) ? run + 1 : 1;
    if (run >= 3) return true;
  }
  return false;
}

bool is_allcaps(std::string_view word) {
  if (utf8_chars(word).size() < 2) return false;
  bool has_letter = false;
  for (char c : word) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') has_letter = true;
  }
  return has_letter;
}

// ---------------------------------------------------------------- clusters

ClusterMap ClusterMap::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.string());
}

ClusterMap ClusterMap::parse(std::string_view content, std::string_view source) {
  struct Entry {
    std::string path;
    long long count;
  };
  std::map<std::string, Entry> best;
  std::size_t line_no = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    auto fields = io::split(line, '\t');
    long long count = 0;
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        !io::parse_int64(fields[2], count)) {
      throw DataError(io::at_line(source, line_no, "expected cluster_path<TAB>word<TAB>count"));
    }
    std::string word = to_lower(fields[1]);
    auto it = best.find(word);
    if (it == best.end()) {
      best.emplace(std::move(word), Entry{std::string(fields[0]), count});
    } else if (count > it->second.count) {
      it->second = Entry{std::string(fields[0]), count};
    }
  }
  ClusterMap map;
  for (auto& [word, entry] : best) map.clusters_.emplace(word, std::move(entry.path));
  if (map.cluster_count() > kMaxClusters) {
    throw DataError(std::string(source) + ": more than " + std::to_string(kMaxClusters) +
                    " distinct clusters");
  }
  return map;
}

const std::string* ClusterMap::lookup(std::string_view word) const {
  auto it = clusters_.find(to_lower(word));
  return it == clusters_.end() ? nullptr : &it->second;
}

std::size_t ClusterMap::cluster_count() const {
  std::unordered_set<std::string> ids;
  for (const auto& [word, path] : clusters_) ids.insert(path);
  return ids.size();
}

}  // namespace purpose::textproc
