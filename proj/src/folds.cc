#include "purpose/folds.h"

#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace purpose::evalharness {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over the combined value
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::size_t> FoldPlan::train_indices(int repeat, int fold) const {
  std::vector<std::size_t> out;
  const auto& row = assignment.at(static_cast<std::size_t>(repeat));
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::test_indices(int repeat, int fold) const {
  std::vector<std::size_t> out;
  const auto& row = assignment.at(static_cast<std::size_t>(repeat));
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] == fold) out.push_back(i);
  }
  return out;
}

FoldPlan stratified_folds(std::span<const int> labels, int k, int repeats, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_folds: k must be at least 2");
  if (repeats < 1) throw std::invalid_argument("stratified_folds: repeats must be at least 1");
  if (labels.empty()) throw std::invalid_argument("stratified_folds: no instances");
  if (static_cast<std::size_t>(k) > labels.size()) {
    throw std::invalid_argument("stratified_folds: k=" + std::to_string(k) + " exceeds " +
                                std::to_string(labels.size()) + " instances");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  FoldPlan plan;
  plan.k = k;
  plan.repeats = repeats;
  plan.seed = seed;
  for (int r = 0; r < repeats; ++r) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<int> assignment(labels.size(), -1);
    std::size_t deal = 0;
    for (auto [label, members] : by_class) {
      // Fisher-Yates with modulo draws: reproducible across standard libraries.
      for (std::size_t i = members.size(); i > 1; --i) {
        std::swap(members[i - 1], members[rng() % i]);
      }
      for (std::size_t idx : members) {
        assignment[idx] = static_cast<int>(deal % static_cast<std::size_t>(k));
        ++deal;
      }
    }
    plan.assignment.push_back(std::move(assignment));
  }
  return plan;
}

}  // namespace purpose::evalharness
