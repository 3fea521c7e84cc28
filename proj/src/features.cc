#include "purpose/features.h"

#include <stdexcept>

#include "purpose/error.h"
#include "purpose/io.h"

namespace purpose::features {

using textproc::Token;
using textproc::TokenKind;

void increment(FeatureVector& vector, std::string name, double by) {
  auto [it, inserted] = vector.try_emplace(std::move(name), 0.0);
  it->second += by;
  if (it->second == 0.0) vector.erase(it);
}

void merge_into(FeatureVector& into, const FeatureVector& from) {
  for (const auto& [name, value] : from) increment(into, name, value);
}

// ---------------------------------------------------------------- groups

const std::vector<FeatureGroup>& all_groups() {
  static const std::vector<FeatureGroup> groups = {
      FeatureGroup::kNgrams,     FeatureGroup::kPos,        FeatureGroup::kClusters,
      FeatureGroup::kAllcaps,    FeatureGroup::kEmolex,     FeatureGroup::kNegation,
      FeatureGroup::kPunctuation, FeatureGroup::kEmoticons, FeatureGroup::kHashtags,
      FeatureGroup::kElongated,  FeatureGroup::kHashtagPmi};
  return groups;
}

std::string_view group_name(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::kNgrams: return "ngrams";
    case FeatureGroup::kPos: return "pos";
    case FeatureGroup::kClusters: return "clusters";
    case FeatureGroup::kAllcaps: return "allcaps";
    case FeatureGroup::kEmolex: return "emolex";
    case FeatureGroup::kNegation: return "negation";
    case FeatureGroup::kPunctuation: return "punctuation";
    case FeatureGroup::kEmoticons: return "emoticons";
    case FeatureGroup::kHashtags: return "hashtags";
    case FeatureGroup::kElongated: return "elongated";
    case FeatureGroup::kHashtagPmi: return "hashtag_pmi";
  }
  return "unknown";
}

std::optional<FeatureGroup> parse_group(std::string_view name) {
  for (FeatureGroup g : all_groups()) {
    if (group_name(g) == name) return g;
  }
  return std::nullopt;
}

namespace {
// Feature name prefixes. The META namespace is shared by several groups, so
// those entries carry the full feature name.
constexpr std::string_view kPosPrefix = "POS:";
constexpr std::string_view kClusterPrefix = "CL:";
constexpr std::string_view kEmoPrefix = "EMO:";
constexpr std::string_view kHpmiPrefix = "HPMI:";
constexpr std::string_view kPuncPrefix = "PUNC:";
constexpr std::string_view kAllcapsName = "META:allcaps";
constexpr std::string_view kNegatedName = "META:negated_contexts";
constexpr std::string_view kEmoticonPos = "META:emoticon_pos";
constexpr std::string_view kEmoticonNeg = "META:emoticon_neg";
constexpr std::string_view kHashtagsName = "META:hashtags";
constexpr std::string_view kElongatedName = "META:elongated";

bool is_ngram_name(std::string_view name) {
  // W1..W4, SK3, SK4, C3..C5
  auto colon = name.find(':');
  if (colon == std::string_view::npos) return false;
  std::string_view head = name.substr(0, colon);
  return head == "W1" || head == "W2" || head == "W3" || head == "W4" || head == "SK3" ||
         head == "SK4" || head == "C3" || head == "C4" || head == "C5";
}
}  // namespace

std::optional<FeatureGroup> group_of(std::string_view name) {
  if (is_ngram_name(name)) return FeatureGroup::kNgrams;
  if (name.starts_with(kPosPrefix)) return FeatureGroup::kPos;
  if (name.starts_with(kClusterPrefix)) return FeatureGroup::kClusters;
  if (name.starts_with(kEmoPrefix)) return FeatureGroup::kEmolex;
  if (name.starts_with(kHpmiPrefix)) return FeatureGroup::kHashtagPmi;
  if (name.starts_with(kPuncPrefix)) return FeatureGroup::kPunctuation;
  if (name == kAllcapsName) return FeatureGroup::kAllcaps;
  if (name == kNegatedName) return FeatureGroup::kNegation;
  if (name == kEmoticonPos || name == kEmoticonNeg) return FeatureGroup::kEmoticons;
  if (name == kHashtagsName) return FeatureGroup::kHashtags;
  if (name == kElongatedName) return FeatureGroup::kElongated;
  return std::nullopt;
}

FeatureConfig FeatureConfig::all() {
  FeatureConfig config;
  config.enabled.insert(all_groups().begin(), all_groups().end());
  return config;
}

FeatureConfig FeatureConfig::without(std::span<const FeatureGroup> groups) const {
  FeatureConfig config = *this;
  for (FeatureGroup g : groups) config.enabled.erase(g);
  return config;
}

std::string FeatureConfig::describe() const {
  std::string out;
  for (FeatureGroup g : all_groups()) {
    if (!has(g)) continue;
    if (!out.empty()) out += ',';
    out += group_name(g);
  }
  return out;
}

FeatureConfig FeatureConfig::parse(std::string_view list) {
  FeatureConfig config;
  for (auto piece : io::split(list, ',')) {
    piece = io::trim(piece);
    if (piece.empty()) continue;
    auto g = parse_group(piece);
    if (!g) throw std::invalid_argument("unknown feature group '" + std::string(piece) + "'");
    config.enabled.insert(*g);
  }
  return config;
}

FeatureVector restrict(const FeatureVector& vector, const FeatureConfig& config) {
  FeatureVector out;
  for (const auto& [name, value] : vector) {
    auto g = group_of(name);
    if (g && config.has(*g)) out.emplace_hint(out.end(), name, value);
  }
  return out;
}

// ---------------------------------------------------------------- tokens

std::vector<Token> prepare_tokens(const corpus::Tweet& tweet, const Resources& resources) {
  auto tokens = textproc::tokenize(tweet.text, resources.emoticons);
  if (tweet.pos_tags) {
    if (tweet.pos_tags->size() != tokens.size()) {
      throw DataError("tweet " + tweet.id + ": " + std::to_string(tweet.pos_tags->size()) +
                      " POS tags for " + std::to_string(tokens.size()) + " tokens");
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) tokens[i].pos = (*tweet.pos_tags)[i].second;
  }
  return textproc::mark_negation(std::move(tokens), resources.negations);
}

// ---------------------------------------------------------------- groups

FeatureVector ngram_features(std::span<const Token> tokens) {
  FeatureVector out;
  std::vector<std::string> units;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::kPunctuation) continue;
    std::string unit = textproc::to_lower(t.surface);
    if (t.negated) unit += "_NEG";
    units.push_back(std::move(unit));
  }

  auto join = [&](std::size_t start, std::size_t n, std::size_t skip) {
    std::string s;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0) s += ' ';
      s += (k == skip) ? std::string("*") : units[start + k];
    }
    return s;
  };
  constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t start = 0; start + n <= units.size(); ++start) {
      out["W" + std::to_string(n) + ":" + join(start, n, kNoSkip)] = 1.0;
      if (n < 3) continue;
      for (std::size_t skip = 1; skip + 1 < n; ++skip) {
        out["SK" + std::to_string(n) + ":" + join(start, n, skip)] = 1.0;
      }
    }
  }

  for (const Token& t : tokens) {
    const std::string lower = textproc::to_lower(t.surface);
    const auto chars = textproc::utf8_chars(lower);
    for (std::size_t n = 3; n <= 5; ++n) {
      for (std::size_t start = 0; start + n <= chars.size(); ++start) {
        const std::size_t begin = static_cast<std::size_t>(chars[start].data() - lower.data());
        const std::size_t end = static_cast<std::size_t>(chars[start + n - 1].data() - lower.data()) +
                                chars[start + n - 1].size();
        out["C" + std::to_string(n) + ":" + lower.substr(begin, end - begin)] = 1.0;
      }
    }
  }
  return out;
}

FeatureVector emotion_lexicon_features(std::span<const Token> tokens,
                                       const lexicons::EmotionLexicon& lexicon) {
  FeatureVector out;
  for (const Token& t : tokens) {
    auto key = lexicons::lexicon_key(t);
    if (!key) continue;
    const auto* labels = lexicon.lookup(*key);
    if (labels == nullptr) continue;
    const bool caps = t.kind == TokenKind::kWord && textproc::is_allcaps(t.surface);
    for (int l : *labels) {
      std::string label(lexicons::kEmotionLexiconLabels[static_cast<std::size_t>(l)]);
      if (t.negated) label += "_NEG";
      increment(out, std::string(kEmoPrefix) + label);
      if (t.pos) increment(out, std::string(kEmoPrefix) + "pos_" + *t.pos + ":" + label);
      if (caps) increment(out, std::string(kEmoPrefix) + "allcaps:" + label);
      if (t.kind == TokenKind::kHashtag) increment(out, std::string(kEmoPrefix) + "hashtag:" + label);
    }
  }
  return out;
}

FeatureVector allcaps_features(std::span<const Token> tokens) {
  FeatureVector out;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::kWord && textproc::is_allcaps(t.surface)) {
      increment(out, std::string(kAllcapsName));
    }
  }
  return out;
}

FeatureVector punctuation_features(std::span<const Token> tokens) {
  FeatureVector out;
  for (const Token& t : tokens) {
    if (t.kind != TokenKind::kPunctuation) continue;
    bool bang = false;
    bool question = false;
    bool other = false;
    for (char c : t.surface) {
      if (c == '!') {
        bang = true;
      } else if (c == '?') {
        question = true;
      } else {
        other = true;
      }
    }
    if (other || (!bang && !question)) continue;
    if (bang && question) {
      increment(out, std::string(kPuncPrefix) + "mixed_run");
    } else if (bang) {
      increment(out, std::string(kPuncPrefix) + "bang_run");
    } else {
      increment(out, std::string(kPuncPrefix) + "question_run");
    }
  }
  return out;
}

FeatureVector emoticon_features(std::span<const Token> tokens) {
  FeatureVector out;
  for (const Token& t : tokens) {
    if (t.kind != TokenKind::kEmoticon) continue;
    if (t.polarity == textproc::Polarity::kPositive) out[std::string(kEmoticonPos)] = 1.0;
    if (t.polarity == textproc::Polarity::kNegative) out[std::string(kEmoticonNeg)] = 1.0;
  }
  return out;
}

FeatureVector hashtag_count_features(std::span<const Token> tokens) {
  FeatureVector out;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::kHashtag) increment(out, std::string(kHashtagsName));
  }
  return out;
}

FeatureVector elongated_features(std::span<const Token> tokens) {
  FeatureVector out;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::kWord && textproc::is_elongated(t.surface)) {
      increment(out, std::string(kElongatedName));
    }
  }
  return out;
}

FeatureVector negation_features(std::span<const Token> tokens,
                                const textproc::NegationList& negations) {
  FeatureVector out;
  const int contexts = textproc::count_negated_contexts(tokens, negations);
  if (contexts > 0) out[std::string(kNegatedName)] = contexts;
  return out;
}

FeatureVector surface_features(std::span<const Token> tokens,
                               const textproc::NegationList& negations) {
  FeatureVector out = allcaps_features(tokens);
  merge_into(out, punctuation_features(tokens));
  merge_into(out, hashtag_count_features(tokens));
  merge_into(out, elongated_features(tokens));
  merge_into(out, negation_features(tokens, negations));
  merge_into(out, emoticon_features(tokens));
  return out;
}

FeatureVector pos_features(std::span<const Token> tokens) {
  FeatureVector out;
  for (const Token& t : tokens) {
    if (t.pos) increment(out, std::string(kPosPrefix) + *t.pos);
  }
  return out;
}

FeatureVector cluster_features(std::span<const Token> tokens,
                               const textproc::ClusterMap& clusters) {
  FeatureVector out;
  for (const Token& t : tokens) {
    if (const std::string* path = clusters.lookup(t.surface)) {
      out[std::string(kClusterPrefix) + *path] = 1.0;
    }
  }
  return out;
}

FeatureVector hashtag_pmi_features(std::span<const Token> tokens,
                                   const lexicons::HashtagEmotionLexicon& lexicon) {
  FeatureVector out;
  for (const auto& [emotion, value] : lexicons::hashtag_feature_values(lexicon, tokens)) {
    out.emplace(std::string(kHpmiPrefix) + emotion, value);
  }
  return out;
}

FeatureVector extract(const corpus::Tweet& tweet, const Resources& resources,
                      const FeatureConfig& config) {
  if (config.enabled.empty()) throw std::invalid_argument("extract: no feature group enabled");
  const auto tokens = prepare_tokens(tweet, resources);
  FeatureVector out;
  if (config.has(FeatureGroup::kNgrams)) merge_into(out, ngram_features(tokens));
  if (config.has(FeatureGroup::kPos)) merge_into(out, pos_features(tokens));
  if (config.has(FeatureGroup::kClusters) && resources.clusters) {
    merge_into(out, cluster_features(tokens, *resources.clusters));
  }
  if (config.has(FeatureGroup::kAllcaps)) merge_into(out, allcaps_features(tokens));
  if (config.has(FeatureGroup::kEmolex) && resources.emotion_lexicon) {
    merge_into(out, emotion_lexicon_features(tokens, *resources.emotion_lexicon));
  }
  if (config.has(FeatureGroup::kNegation)) {
    merge_into(out, negation_features(tokens, resources.negations));
  }
  if (config.has(FeatureGroup::kPunctuation)) merge_into(out, punctuation_features(tokens));
  if (config.has(FeatureGroup::kEmoticons)) merge_into(out, emoticon_features(tokens));
  if (config.has(FeatureGroup::kHashtags)) merge_into(out, hashtag_count_features(tokens));
  if (config.has(FeatureGroup::kElongated)) merge_into(out, elongated_features(tokens));
  if (config.has(FeatureGroup::kHashtagPmi) && resources.hashtag_lexicon) {
    merge_into(out, hashtag_pmi_features(tokens, *resources.hashtag_lexicon));
  }
  return out;
}

// ---------------------------------------------------------------- TSV

std::string to_tsv_line(std::string_view tweet_id, const FeatureVector& vector) {
  std::string line(tweet_id);
  for (const auto& [name, value] : vector) {
    line += '\t';
    line += name;
    line += ':';
    line += io::format_double(value);
  }
  return line;
}

std::pair<std::string, FeatureVector> parse_tsv_line(std::string_view line) {
  auto fields = io::split(line, '\t');
  if (fields.empty() || fields[0].empty()) throw DataError("feature line without tweet id");
  FeatureVector vector;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const auto colon = fields[i].rfind(':');
    double value = 0.0;
    if (colon == std::string_view::npos || colon == 0 ||
        !io::parse_double(fields[i].substr(colon + 1), value)) {
      throw DataError("malformed feature '" + std::string(fields[i]) + "'");
    }
    vector[std::string(fields[i].substr(0, colon))] = value;
  }
  return {std::string(fields[0]), std::move(vector)};
}

}  // namespace purpose::features
