#ifndef PURPOSE_FOLDS_H_
#define PURPOSE_FOLDS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace purpose::evalharness {

// Seeded 64-bit mixer used to derive independent sub-seeds (per repeat, per
// fold, per class) so that parallel execution order never changes results.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

struct FoldPlan {
  int k = 0;
  int repeats = 0;
  std::uint64_t seed = 0;
  // assignment[r][i]: fold of instance i in repeat r.
  std::vector<std::vector<int>> assignment;

  std::vector<std::size_t> train_indices(int repeat, int fold) const;
  std::vector<std::size_t> test_indices(int repeat, int fold) const;
};

// Within each class (ascending label order) instances are shuffled with a
// generator seeded from (seed, repeat) and dealt round-robin to folds; the
// dealing position carries over between classes so fold sizes differ by at
// most one. Throws std::invalid_argument when k < 2, labels is empty or
// k exceeds the number of instances.
FoldPlan stratified_folds(std::span<const int> labels, int k, int repeats, std::uint64_t seed);

}  // namespace purpose::evalharness

#endif  // PURPOSE_FOLDS_H_
