#include "purpose/lexicons.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "purpose/error.h"
#include "purpose/io.h"

namespace purpose::lexicons {

namespace {

std::optional<int> emotion_label_index(std::string_view label) {
  for (std::size_t i = 0; i < kEmotionLexiconLabels.size(); ++i) {
    if (kEmotionLexiconLabels[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

constexpr int kPositive = 8;
constexpr int kNegative = 9;

}  // namespace

// ---------------------------------------------------------------- NRC-style

void EmotionLexicon::add(std::string_view word, std::string_view label) {
  auto index = emotion_label_index(label);
  if (!index) throw std::invalid_argument("unknown emotion label '" + std::string(label) + "'");
  auto& labels = entries_[textproc::to_lower(word)];
  if (std::find(labels.begin(), labels.end(), *index) != labels.end()) return;
  const int opposite = *index == kPositive ? kNegative : (*index == kNegative ? kPositive : -1);
  if (opposite >= 0 && std::find(labels.begin(), labels.end(), opposite) != labels.end()) {
    throw std::invalid_argument("word '" + std::string(word) + "' has both polarities");
  }
  labels.insert(std::upper_bound(labels.begin(), labels.end(), *index), *index);
}

EmotionLexicon EmotionLexicon::parse(std::string_view content, std::string_view source) {
  EmotionLexicon lexicon;
  std::size_t line_no = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    auto fields = io::split(line, '\t');
    if (fields.size() != 3 || fields[0].empty() || (fields[2] != "0" && fields[2] != "1")) {
      throw DataError(io::at_line(source, line_no, "expected word<TAB>label<TAB>0|1"));
    }
    if (!emotion_label_index(fields[1])) {
      throw DataError(io::at_line(source, line_no,
                                  "unknown emotion label '" + std::string(fields[1]) + "'"));
    }
    if (fields[2] == "0") continue;
    try {
      lexicon.add(fields[0], fields[1]);
    } catch (const std::invalid_argument& e) {
      throw DataError(io::at_line(source, line_no, e.what()));
    }
  }
  return lexicon;
}

EmotionLexicon EmotionLexicon::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.string());
}

const std::vector<int>* EmotionLexicon::lookup(std::string_view word) const {
  auto it = entries_.find(textproc::to_lower(word));
  if (it == entries_.end() || it->second.empty()) return nullptr;
  return &it->second;
}

std::map<std::string, std::vector<std::string>> EmotionLexicon::entries() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [word, labels] : entries_) {
    auto& names = out[word];
    for (int l : labels) names.emplace_back(kEmotionLexiconLabels[static_cast<std::size_t>(l)]);
    std::sort(names.begin(), names.end());
  }
  return out;
}

std::optional<std::string> lexicon_key(const textproc::Token& token) {
  using textproc::TokenKind;
  if (token.kind == TokenKind::kWord) return textproc::to_lower(token.surface);
  if (token.kind == TokenKind::kHashtag) return textproc::to_lower(token.surface.substr(1));
  return std::nullopt;
}

// ---------------------------------------------------------------- counts

std::size_t CooccurrenceCounts::joint_count(std::string_view word,
                                            std::string_view emotion) const {
  auto e = emotion_index(emotion);
  if (!e) return 0;
  auto it = joint.find(std::string(word));
  if (it == joint.end()) return 0;
  auto jt = it->second.find(*e);
  return jt == it->second.end() ? 0 : jt->second;
}

std::optional<int> CooccurrenceCounts::emotion_index(std::string_view emotion) const {
  for (std::size_t i = 0; i < emotions.size(); ++i) {
    if (emotions[i] == emotion) return static_cast<int>(i);
  }
  return std::nullopt;
}

CooccurrenceCounts& CooccurrenceCounts::operator+=(const CooccurrenceCounts& other) {
  if (emotions.empty() && n_tweets == 0) {
    emotions = other.emotions;
    emotion_count.assign(emotions.size(), 0);
  }
  if (other.emotions != emotions) {
    throw std::invalid_argument("CooccurrenceCounts: merging counts over different emotions");
  }
  n_tweets += other.n_tweets;
  for (std::size_t i = 0; i < emotion_count.size(); ++i) emotion_count[i] += other.emotion_count[i];
  for (const auto& [word, c] : other.word_count) word_count[word] += c;
  for (const auto& [word, row] : other.joint) {
    auto& mine = joint[word];
    for (const auto& [e, c] : row) mine[e] += c;
  }
  return *this;
}

std::vector<std::string> parse_emotion_hashtags(std::string_view content) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (std::string_view raw : io::split_lines(content)) {
    std::string_view line = io::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#' && (line.size() == 1 || line[1] == ' ' || line[1] == '#')) continue;
    if (line.front() == '#') line.remove_prefix(1);
    std::string word = textproc::to_lower(line);
    if (seen.insert(word).second) out.push_back(std::move(word));
  }
  return out;
}

std::vector<std::string> load_emotion_hashtags(const std::filesystem::path& path) {
  return parse_emotion_hashtags(io::read_file(path));
}

CooccurrenceCounts count_cooccurrences(std::span<const corpus::Tweet> tweets,
                                       std::span<const std::string> emotion_hashtags) {
  CooccurrenceCounts counts;
  std::unordered_map<std::string, int> emotion_ids;
  for (const auto& raw : emotion_hashtags) {
    std::string e = textproc::to_lower(raw);
    if (!e.empty() && e.front() == '#') e.erase(0, 1);
    if (e.empty() || emotion_ids.count(e) > 0) {
      throw std::invalid_argument("emotion hashtags must be non-empty and unique: '" + raw + "'");
    }
    emotion_ids.emplace(e, static_cast<int>(counts.emotions.size()));
    counts.emotions.push_back(std::move(e));
  }
  if (counts.emotions.size() > kMaxEmotions) {
    throw std::invalid_argument("more than " + std::to_string(kMaxEmotions) + " emotions");
  }
  counts.emotion_count.assign(counts.emotions.size(), 0);

  for (const auto& tweet : tweets) {
    ++counts.n_tweets;
    std::set<int> tagged;
    std::set<std::string> words;
    for (const auto& token : textproc::tokenize(tweet.text)) {
      auto key = lexicon_key(token);
      if (!key) continue;
      if (token.kind == textproc::TokenKind::kHashtag) {
        if (auto it = emotion_ids.find(*key); it != emotion_ids.end()) {
          tagged.insert(it->second);
          continue;
        }
      }
      words.insert(std::move(*key));
    }
    for (int e : tagged) ++counts.emotion_count[static_cast<std::size_t>(e)];
    for (const auto& w : words) {
      ++counts.word_count[w];
      if (tagged.empty()) continue;
      auto& row = counts.joint[w];
      for (int e : tagged) ++row[e];
    }
  }
  return counts;
}

std::optional<double> pmi(const CooccurrenceCounts& counts, std::string_view word,
                          std::string_view emotion, PmiThresholds thresholds) {
  auto e = counts.emotion_index(emotion);
  if (!e) return std::nullopt;
  auto wc = counts.word_count.find(std::string(word));
  if (wc == counts.word_count.end() || wc->second < thresholds.min_word) return std::nullopt;
  const std::size_t joint = counts.joint_count(word, emotion);
  if (joint == 0 || joint < thresholds.min_joint) return std::nullopt;
  const double numerator = static_cast<double>(joint) * static_cast<double>(counts.n_tweets);
  const double denominator = static_cast<double>(wc->second) *
                             static_cast<double>(counts.emotion_count[static_cast<std::size_t>(*e)]);
  return std::log2(numerator / denominator);
}

// ---------------------------------------------------------------- lexicon

HashtagEmotionLexicon::HashtagEmotionLexicon(std::vector<std::string> emotions)
    : emotions_(std::move(emotions)) {
  if (emotions_.size() > kMaxEmotions) {
    throw std::invalid_argument("more than " + std::to_string(kMaxEmotions) + " emotions");
  }
  for (std::size_t i = 0; i < emotions_.size(); ++i) {
    if (emotions_[i].empty() || !emotion_index_.emplace(emotions_[i], static_cast<int>(i)).second) {
      throw std::invalid_argument("emotion names must be non-empty and unique: '" + emotions_[i] +
                                  "'");
    }
  }
}

void HashtagEmotionLexicon::set_weight(std::string_view word, std::string_view emotion,
                                       double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("lexicon weights must be positive and finite");
  }
  auto e = emotion_index_.find(std::string(emotion));
  if (e == emotion_index_.end()) {
    throw std::invalid_argument("unknown emotion '" + std::string(emotion) + "'");
  }
  auto& row = weights_[std::string(word)];
  auto it = std::lower_bound(row.begin(), row.end(), e->second,
                             [](const auto& p, int id) { return p.first < id; });
  if (it != row.end() && it->first == e->second) {
    it->second = weight;
  } else {
    row.insert(it, {e->second, weight});
  }
}

std::optional<double> HashtagEmotionLexicon::weight(std::string_view word,
                                                    std::string_view emotion) const {
  auto e = emotion_index_.find(std::string(emotion));
  if (e == emotion_index_.end()) return std::nullopt;
  const auto* row = associations(word);
  if (row == nullptr) return std::nullopt;
  for (const auto& [id, w] : *row) {
    if (id == e->second) return w;
  }
  return std::nullopt;
}

const std::vector<std::pair<int, double>>* HashtagEmotionLexicon::associations(
    std::string_view word) const {
  auto it = weights_.find(std::string(word));
  return it == weights_.end() ? nullptr : &it->second;
}

std::size_t HashtagEmotionLexicon::pair_count() const {
  std::size_t n = 0;
  for (const auto& [word, row] : weights_) n += row.size();
  return n;
}

std::string HashtagEmotionLexicon::serialize() const {
  std::string out = "#emotions:";
  for (const auto& e : emotions_) {
    out += '\t';
    out += e;
  }
  out += '\n';
  std::vector<const std::string*> words;
  for (const auto& [word, row] : weights_) words.push_back(&word);
  std::sort(words.begin(), words.end(), [](auto* a, auto* b) { return *a < *b; });
  for (const auto* word : words) {
    for (const auto& [id, w] : weights_.at(*word)) {
      out += *word;
      out += '\t';
      out += emotions_[static_cast<std::size_t>(id)];
      out += '\t';
      out += io::format_fixed_roundtrip(w, 6);
      out += '\n';
    }
  }
  return out;
}

void HashtagEmotionLexicon::save(const std::filesystem::path& path) const {
  io::write_file(path, serialize());
}

HashtagEmotionLexicon HashtagEmotionLexicon::parse(std::string_view content,
                                                   std::string_view source) {
  auto lines = io::split_lines(content);
  if (lines.empty() || !lines[0].starts_with("#emotions:")) {
    throw DataError(io::at_line(source, 1, "expected '#emotions:' header"));
  }
  std::vector<std::string> emotions;
  std::string_view names = lines[0].substr(std::string_view("#emotions:").size());
  if (!names.empty()) {
    if (names.front() != '\t') throw DataError(io::at_line(source, 1, "malformed header"));
    for (auto name : io::split(names.substr(1), '\t')) emotions.emplace_back(name);
  }
  HashtagEmotionLexicon lexicon;
  try {
    lexicon = HashtagEmotionLexicon(std::move(emotions));
  } catch (const std::invalid_argument& e) {
    throw DataError(io::at_line(source, 1, e.what()));
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (io::trim(line).empty()) continue;
    auto fields = io::split(line, '\t');
    double w = 0.0;
    if (fields.size() != 3 || fields[0].empty() || !io::parse_double(fields[2], w)) {
      throw DataError(io::at_line(source, i + 1, "expected word<TAB>emotion<TAB>weight"));
    }
    if (!seen.emplace(std::string(fields[0]), std::string(fields[1])).second) {
      throw DataError(io::at_line(source, i + 1, "duplicate (word, emotion) pair"));
    }
    try {
      lexicon.set_weight(fields[0], fields[1], w);
    } catch (const std::invalid_argument& e) {
      throw DataError(io::at_line(source, i + 1, e.what()));
    }
  }
  return lexicon;
}

HashtagEmotionLexicon HashtagEmotionLexicon::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.string());
}

HashtagEmotionLexicon lexicon_from_counts(const CooccurrenceCounts& counts,
                                          PmiThresholds thresholds) {
  HashtagEmotionLexicon lexicon(counts.emotions);
  for (const auto& [word, row] : counts.joint) {
    for (const auto& [e, joint] : row) {
      auto value = pmi(counts, word, counts.emotions[static_cast<std::size_t>(e)], thresholds);
      if (value && *value > 0.0) {
        lexicon.set_weight(word, counts.emotions[static_cast<std::size_t>(e)], *value);
      }
    }
  }
  return lexicon;
}

HashtagEmotionLexicon build_hashtag_lexicon(std::span<const corpus::Tweet> tweets,
                                            std::span<const std::string> emotion_hashtags,
                                            PmiThresholds thresholds) {
  if (emotion_hashtags.empty()) {
    throw std::invalid_argument("build_hashtag_lexicon: no emotion hashtags given");
  }
  return lexicon_from_counts(count_cooccurrences(tweets, emotion_hashtags), thresholds);
}

std::map<std::string, double> hashtag_feature_values(const HashtagEmotionLexicon& lexicon,
                                                     std::span<const textproc::Token> tokens) {
  std::vector<double> sums(lexicon.emotions().size(), 0.0);
  std::vector<bool> touched(sums.size(), false);
  for (const auto& token : tokens) {
    auto key = lexicon_key(token);
    if (!key) continue;
    const auto* row = lexicon.associations(*key);
    if (row == nullptr) continue;
    for (const auto& [id, w] : *row) {
      sums[static_cast<std::size_t>(id)] += w;
      touched[static_cast<std::size_t>(id)] = true;
    }
  }
  std::map<std::string, double> values;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (touched[i] && sums[i] != 0.0) values.emplace(lexicon.emotions()[i], sums[i]);
  }
  return values;
}

}  // namespace purpose::lexicons
