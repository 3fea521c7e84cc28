#ifndef PURPOSE_TESTS_PMI_ORACLE_H_
#define PURPOSE_TESTS_PMI_ORACLE_H_

// Brute-force PMI over a corpus of plain space-separated words and hashtags.
// Counts are recomputed per (word, emotion) pair by scanning every tweet,
// without the library tokenizer.

#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "purpose/corpus.h"

namespace purpose::testing {

inline std::set<std::string> oracle_words(const std::string& text,
                                          const std::vector<std::string>& emotions,
                                          std::set<std::string>* tags) {
  std::set<std::string> words;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    for (auto& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (token[0] == '#') {
      std::string name = token.substr(1);
      bool is_emotion = false;
      for (const auto& e : emotions) is_emotion = is_emotion || e == name;
      if (is_emotion) {
        if (tags) tags->insert(name);
        continue;
      }
      words.insert(name);
    } else {
      words.insert(token);
    }
  }
  return words;
}

// (word, emotion) -> PMI for every pair passing the thresholds with PMI > 0.
inline std::map<std::pair<std::string, std::string>, double> oracle_lexicon(
    const std::vector<corpus::Tweet>& tweets, const std::vector<std::string>& emotions,
    std::size_t min_word = 5, std::size_t min_joint = 2) {
  std::set<std::string> vocabulary;
  for (const auto& t : tweets) {
    for (const auto& w : oracle_words(t.text, emotions, nullptr)) vocabulary.insert(w);
  }
  std::map<std::pair<std::string, std::string>, double> out;
  const double n = static_cast<double>(tweets.size());
  for (const auto& w : vocabulary) {
    for (const auto& e : emotions) {
      double word_count = 0, emotion_count = 0, joint = 0;
      for (const auto& t : tweets) {
        std::set<std::string> tags;
        auto words = oracle_words(t.text, emotions, &tags);
        const bool has_w = words.count(w) > 0;
        const bool has_e = tags.count(e) > 0;
        word_count += has_w;
        emotion_count += has_e;
        joint += has_w && has_e;
      }
      if (word_count < static_cast<double>(min_word) || joint < static_cast<double>(min_joint)) {
        continue;
      }
      const double value = std::log2(joint * n / (word_count * emotion_count));
      if (value > 0) out[{w, e}] = value;
    }
  }
  return out;
}

// Ten tweets over two emotions. good: 6 tweets, 3 with #joy; bad: 5 tweets,
// 3 with #anger; vote co-occurs with #joy exactly at independence (PMI 0).
inline std::vector<corpus::Tweet> toy_pmi_corpus() {
  const std::vector<std::string> texts = {
      "good win #joy",      "good vote #joy", "good day #joy #anger", "good bad",
      "good bad #anger",    "bad vote #anger", "bad lose #anger",     "bad vote",
      "vote day #joy",      "vote good win"};
  std::vector<corpus::Tweet> tweets;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    corpus::Tweet t;
    t.id = "p" + std::to_string(i);
    t.text = texts[i];
    tweets.push_back(t);
  }
  return tweets;
}

}  // namespace purpose::testing

#endif  // PURPOSE_TESTS_PMI_ORACLE_H_
