#ifndef PURPOSE_EVALHARNESS_H_
#define PURPOSE_EVALHARNESS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "purpose/features.h"
#include "purpose/folds.h"
#include "purpose/learner.h"

namespace purpose::evalharness {

// [gold][predicted]
using ConfusionMatrix = std::vector<std::vector<std::size_t>>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold count
};

// Zero denominators give 0. Throws std::invalid_argument if not square.
std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& confusion);

// Max class frequency / total. Throws std::invalid_argument when empty.
double majority_baseline(std::span<const int> labels);

struct EvalOptions {
  int k = 10;
  int repeats = 10;
  std::uint64_t seed = 7;
  std::vector<double> c_grid = learner::kDefaultCGrid;
  int inner_folds = 5;
  learner::TrainOptions train;  // seed and config_hash are overridden per fold
  unsigned jobs = 0;            // 0: hardware concurrency
};

struct EvalReport {
  std::string config;
  std::vector<std::string> label_set;
  int k = 0;
  int repeats = 0;
  std::uint64_t seed = 0;
  // Repeat-major: index r * k + f.
  std::vector<double> fold_accuracies;
  std::vector<double> fold_c;
  // Mean of fold_accuracies.
  double mean_accuracy = 0.0;
  // Pooled over all test predictions of all repeats.
  ConfusionMatrix confusion;
  std::vector<ClassMetrics> per_class;
  double pooled_accuracy = 0.0;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
  double majority_baseline = 0.0;
};

// Vocabulary and C are derived from each training part alone. Folds run on up
// to `options.jobs` threads; results do not depend on scheduling.
EvalReport cross_validate(const learner::Dataset& dataset, const features::FeatureConfig& config,
                          const FoldPlan& plan, const EvalOptions& options);
EvalReport cross_validate(const learner::Dataset& dataset, const features::FeatureConfig& config,
                          const EvalOptions& options);

struct TTest {
  double t = 0.0;  // NaN when the differences have zero variance
  double p = 1.0;  // two-tailed
  int df = 0;
};

// Paired two-tailed Student t-test on a - b. Throws std::invalid_argument on
// a length mismatch or fewer than two pairs.
TTest paired_t_test(std::span<const double> a, std::span<const double> b);

// Two-tailed tail probability P(|T| >= |t|) for Student t with df degrees of
// freedom, via the regularized incomplete beta function.
double student_t_two_tailed(double t, double df);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double x, double a, double b);

struct AblationRow {
  std::vector<features::FeatureGroup> removed;
  std::string removed_name;  // group names joined by '+'
  EvalReport report;
  TTest test;  // reference minus ablated, paired per fold
};

struct AblationResult {
  EvalReport reference;
  std::vector<AblationRow> rows;
};

// Re-runs cross-validation with each entry of `removals` disabled, on the
// same fold plan as the reference run with `config`. Throws
// std::invalid_argument if a removed group is not enabled in `config`.
AblationResult ablate(const learner::Dataset& dataset, const features::FeatureConfig& config,
                      std::span<const std::vector<features::FeatureGroup>> removals,
                      const EvalOptions& options);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const AblationResult& result);

// Summary row (config, accuracy, baseline, micro P/R/F1).
std::string summary_tsv(std::span<const EvalReport> reports);
std::string per_class_tsv(const EvalReport& report);
std::string confusion_tsv(const EvalReport& report);
std::string ablation_tsv(const AblationResult& result);

}  // namespace purpose::evalharness

#endif  // PURPOSE_EVALHARNESS_H_
