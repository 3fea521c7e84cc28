#include "purpose/evalharness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "purpose/io.h"
#include "purpose/parallel.h"

namespace purpose::evalharness {

namespace {

using learner::Dataset;

std::string fixed(double value, int decimals) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string join_groups(std::span<const features::FeatureGroup> groups) {
  std::string out;
  for (auto g : groups) {
    if (!out.empty()) out += '+';
    out += features::group_name(g);
  }
  return out;
}

struct FoldResult {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double c = 0.0;
};

}  // namespace

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& confusion) {
  const std::size_t n = confusion.size();
  for (const auto& row : confusion) {
    if (row.size() != n) throw std::invalid_argument("per_class_metrics: matrix is not square");
  }
  std::vector<ClassMetrics> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t gold = 0;
    std::size_t predicted = 0;
    for (std::size_t j = 0; j < n; ++j) {
      gold += confusion[k][j];
      predicted += confusion[j][k];
    }
    const double tp = static_cast<double>(confusion[k][k]);
    ClassMetrics& m = out[k];
    m.support = gold;
    m.precision = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
    m.recall = gold == 0 ? 0.0 : tp / static_cast<double>(gold);
    m.f1 = m.precision + m.recall == 0.0 ? 0.0
                                         : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return out;
}

double majority_baseline(std::span<const int> labels) {
  if (labels.empty()) throw std::invalid_argument("majority_baseline: no labels");
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  std::size_t best = 0;
  for (const auto& [label, count] : counts) best = std::max(best, count);
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

EvalReport cross_validate(const Dataset& dataset, const features::FeatureConfig& config,
                          const FoldPlan& plan, const EvalOptions& options) {
  if (plan.assignment.empty() || plan.assignment.front().size() != dataset.size()) {
    throw std::invalid_argument("cross_validate: fold plan does not match the dataset");
  }
  const Dataset restricted = dataset.map_features(
      [&config](const features::FeatureVector& v) { return features::restrict(v, config); });
  const std::vector<int> labels = restricted.labels();
  const std::size_t classes = restricted.label_set().size();
  const std::string descriptor = config.describe();
  const std::size_t tasks = static_cast<std::size_t>(plan.k) * static_cast<std::size_t>(plan.repeats);

  const learner::GramMatrix gram{learner::IndexedData(restricted)};
  std::vector<FoldResult> results(tasks);
  parallel_for(tasks, options.jobs, [&](std::size_t task) {
    const int r = static_cast<int>(task) / plan.k;
    const int f = static_cast<int>(task) % plan.k;
    const auto train_idx = plan.train_indices(r, f);
    const auto test_idx = plan.test_indices(r, f);

    FoldResult& out = results[task];
    out.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
    std::set<int> seen;
    for (std::size_t i : train_idx) seen.insert(labels[i]);

    std::size_t correct = 0;
    const auto record = [&](std::size_t i, int predicted) {
      ++out.confusion[static_cast<std::size_t>(labels[i])][static_cast<std::size_t>(predicted)];
      if (predicted == labels[i]) ++correct;
    };
    if (seen.size() < 2) {
      // A training part with one label predicts that label.
      const int only = seen.empty() ? 0 : *seen.begin();
      out.c = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t i : test_idx) record(i, only);
    } else {
      learner::TrainOptions train_options = options.train;
      train_options.config_hash = learner::fnv1a(descriptor);
      train_options.seed = mix_seed(plan.seed, 2 * task + 1);
      out.c = learner::tune_c(gram, train_idx, options.c_grid, train_options, options.inner_folds);
      train_options.seed = mix_seed(plan.seed, 2 * task + 2);
      const auto model = learner::train_subset(gram, train_idx, out.c, train_options);
      for (std::size_t i : test_idx) record(i, model.predict(gram, i));
    }
    out.accuracy = test_idx.empty() ? 0.0
                                    : static_cast<double>(correct) / static_cast<double>(test_idx.size());
  });

  EvalReport report;
  report.config = descriptor;
  report.label_set = restricted.label_set();
  report.k = plan.k;
  report.repeats = plan.repeats;
  report.seed = plan.seed;
  report.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
  double sum = 0.0;
  for (const auto& fold : results) {
    report.fold_accuracies.push_back(fold.accuracy);
    report.fold_c.push_back(fold.c);
    sum += fold.accuracy;
    for (std::size_t g = 0; g < classes; ++g) {
      for (std::size_t p = 0; p < classes; ++p) report.confusion[g][p] += fold.confusion[g][p];
    }
  }
  report.mean_accuracy = sum / static_cast<double>(results.size());
  report.per_class = per_class_metrics(report.confusion);

  std::size_t total = 0;
  std::size_t diagonal = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  for (std::size_t g = 0; g < classes; ++g) {
    for (std::size_t p = 0; p < classes; ++p) {
      total += report.confusion[g][p];
      if (g == p) {
        diagonal += report.confusion[g][p];
      } else {
        false_positives += report.confusion[g][p];  // counted against column p
        false_negatives += report.confusion[g][p];  // counted against row g
      }
    }
  }
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  report.pooled_accuracy = ratio(diagonal, total);
  report.micro_precision = ratio(diagonal, diagonal + false_positives);
  report.micro_recall = ratio(diagonal, diagonal + false_negatives);
  report.micro_f1 = report.micro_precision + report.micro_recall == 0.0
                        ? 0.0
                        : 2.0 * report.micro_precision * report.micro_recall /
                              (report.micro_precision + report.micro_recall);
  report.majority_baseline = majority_baseline(labels);
  return report;
}

EvalReport cross_validate(const Dataset& dataset, const features::FeatureConfig& config,
                          const EvalOptions& options) {
  const auto labels = dataset.labels();
  return cross_validate(dataset, config,
                        stratified_folds(labels, options.k, options.repeats, options.seed), options);
}

// ---------------------------------------------------------------- t-test

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: a, b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete_beta: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return x;

  // Modified Lentz evaluation of the continued fraction for I_x(a, b); valid
  // for x < (a + 1) / (a + b + 2), the symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
  // covers the rest.
  const auto fraction = [](double x, double a, double b) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-16;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
      const double m2 = 2.0 * m;
      double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
      d = 1.0 + aa * d;
      if (std::fabs(d) < kTiny) d = kTiny;
      c = 1.0 + aa / c;
      if (std::fabs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      h *= d * c;
      aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
      d = 1.0 + aa * d;
      if (std::fabs(d) < kTiny) d = kTiny;
      c = 1.0 + aa / c;
      if (std::fabs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      const double delta = d * c;
      h *= delta;
      if (std::fabs(delta - 1.0) < kEps) break;
    }
    return h;
  };
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * fraction(x, a, b) / a;
  return 1.0 - front * fraction(1.0 - x, b, a) / b;
}

double student_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t_two_tailed: df must be positive");
  if (std::isnan(t)) return 1.0;
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(df / (df + t * t), 0.5 * df, 0.5);
}

TTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_t_test: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("paired_t_test: need at least two pairs");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = a[i] - b[i];
    mean += d[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  TTest out;
  out.df = static_cast<int>(n) - 1;
  if (ss == 0.0) {
    out.t = std::numeric_limits<double>::quiet_NaN();
    out.p = 1.0;
    return out;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  out.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  out.p = student_t_two_tailed(out.t, out.df);
  return out;
}

// ---------------------------------------------------------------- ablation

AblationResult ablate(const Dataset& dataset, const features::FeatureConfig& config,
                      std::span<const std::vector<features::FeatureGroup>> removals,
                      const EvalOptions& options) {
  for (const auto& removal : removals) {
    if (removal.empty()) throw std::invalid_argument("ablate: empty removal");
    for (auto g : removal) {
      if (!config.has(g)) {
        throw std::invalid_argument("ablate: group '" + std::string(features::group_name(g)) +
                                    "' is not enabled");
      }
    }
  }
  const auto labels = dataset.labels();
  const FoldPlan plan = stratified_folds(labels, options.k, options.repeats, options.seed);
  AblationResult result;
  result.reference = cross_validate(dataset, config, plan, options);
  for (const auto& removal : removals) {
    AblationRow row;
    row.removed = removal;
    row.removed_name = join_groups(removal);
    const auto reduced = config.without(removal);
    if (reduced.enabled.empty()) {
      throw std::invalid_argument("ablate: removing " + row.removed_name + " leaves no groups");
    }
    row.report = cross_validate(dataset, reduced, plan, options);
    row.test = paired_t_test(result.reference.fold_accuracies, row.report.fold_accuracies);
    result.rows.push_back(std::move(row));
  }
  return result;
}

// ---------------------------------------------------------------- reports

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["config"] = report.config;
  j["labels"] = report.label_set;
  j["k"] = report.k;
  j["repeats"] = report.repeats;
  j["seed"] = report.seed;
  j["mean_accuracy"] = report.mean_accuracy;
  j["majority_baseline"] = report.majority_baseline;
  j["pooled_accuracy"] = report.pooled_accuracy;
  j["micro"] = {{"precision", report.micro_precision},
                {"recall", report.micro_recall},
                {"f1", report.micro_f1}};
  j["fold_accuracies"] = report.fold_accuracies;
  j["fold_c"] = report.fold_c;
  j["confusion"] = report.confusion;
  auto per_class = nlohmann::json::array();
  for (std::size_t k = 0; k < report.per_class.size(); ++k) {
    const auto& m = report.per_class[k];
    per_class.push_back({{"label", report.label_set[k]},
                         {"support", m.support},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1}});
  }
  j["per_class"] = per_class;
  return j;
}

nlohmann::json to_json(const AblationResult& result) {
  nlohmann::json j;
  j["reference"] = to_json(result.reference);
  auto rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r;
    r["removed"] = row.removed_name;
    r["report"] = to_json(row.report);
    r["delta"] = result.reference.mean_accuracy - row.report.mean_accuracy;
    r["t"] = row.test.t;  // NaN serializes as null
    r["df"] = row.test.df;
    r["p"] = row.test.p;
    rows.push_back(std::move(r));
  }
  j["ablations"] = rows;
  return j;
}

std::string summary_tsv(std::span<const EvalReport> reports) {
  std::string out = "config\taccuracy\tmajority_baseline\tmicro_p\tmicro_r\tmicro_f1\n";
  for (const auto& r : reports) {
    out += r.config + '\t' + fixed(100.0 * r.mean_accuracy, 2) + '\t' +
           fixed(100.0 * r.majority_baseline, 2) + '\t' + fixed(r.micro_precision, 4) + '\t' +
           fixed(r.micro_recall, 4) + '\t' + fixed(r.micro_f1, 4) + '\n';
  }
  return out;
}

std::string per_class_tsv(const EvalReport& report) {
  std::string out = "label\tsupport\tprecision\trecall\tf1\n";
  for (std::size_t k = 0; k < report.per_class.size(); ++k) {
    const auto& m = report.per_class[k];
    out += report.label_set[k] + '\t' + std::to_string(m.support) + '\t' + fixed(m.precision, 4) +
           '\t' + fixed(m.recall, 4) + '\t' + fixed(m.f1, 4) + '\n';
  }
  out += "micro\t";
  std::size_t total = 0;
  for (const auto& m : report.per_class) total += m.support;
  out += std::to_string(total) + '\t' + fixed(report.micro_precision, 4) + '\t' +
         fixed(report.micro_recall, 4) + '\t' + fixed(report.micro_f1, 4) + '\n';
  return out;
}

std::string confusion_tsv(const EvalReport& report) {
  std::string out = "gold\\predicted";
  for (const auto& label : report.label_set) out += '\t' + label;
  out += '\n';
  for (std::size_t g = 0; g < report.confusion.size(); ++g) {
    out += report.label_set[g];
    for (std::size_t count : report.confusion[g]) out += '\t' + std::to_string(count);
    out += '\n';
  }
  return out;
}

std::string ablation_tsv(const AblationResult& result) {
  std::string out = "removed\taccuracy\tdelta\tt\tp\n";
  out += "none\t" + fixed(100.0 * result.reference.mean_accuracy, 2) + "\t0.00\tNA\tNA\n";
  for (const auto& row : result.rows) {
    out += row.removed_name + '\t' + fixed(100.0 * row.report.mean_accuracy, 2) + '\t' +
           fixed(100.0 * (row.report.mean_accuracy - result.reference.mean_accuracy), 2) + '\t' +
           fixed(row.test.t, 4) + '\t' + io::format_double(row.test.p) + '\n';
  }
  return out;
}

}  // namespace purpose::evalharness
