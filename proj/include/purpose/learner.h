#ifndef PURPOSE_LEARNER_H_
#define PURPOSE_LEARNER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "purpose/features.h"

namespace purpose::learner {

using features::FeatureVector;

struct Instance {
  std::string id;
  FeatureVector features;
  int label = 0;  // index into Dataset::label_set
};

// Instances plus the label set and the feature index built from them.
class Dataset {
 public:
  Dataset() = default;
  // Builds the vocabulary from the instances. Throws std::invalid_argument if
  // a label index is outside label_set.
  Dataset(std::vector<Instance> instances, std::vector<std::string> label_set);

  const std::vector<Instance>& instances() const { return instances_; }
  const std::vector<std::string>& label_set() const { return label_set_; }
  // Feature names in index order (sorted).
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::size_t size() const { return instances_.size(); }
  std::vector<int> labels() const;

  // The selected instances with a vocabulary rebuilt from them alone.
  Dataset subset(std::span<const std::size_t> indices) const;
  // Same instances with every vector passed through `fn`.
  template <typename Fn>
  Dataset map_features(Fn&& fn) const {
    std::vector<Instance> mapped = instances_;
    for (auto& inst : mapped) inst.features = fn(inst.features);
    return Dataset(std::move(mapped), label_set_);
  }

 private:
  std::vector<Instance> instances_;
  std::vector<std::string> label_set_;
  std::vector<std::string> vocabulary_;
};

struct TrainOptions {
  // Stop when the projected-gradient spread of a dual pass drops below this.
  double tolerance = 0.1;
  int max_iterations = 1000;
  std::uint64_t seed = 1;
  std::uint64_t config_hash = 0;
};

// One-vs-rest linear model. The bias is learned as the weight of a constant
// feature of value 1 and is regularized together with the weights.
struct LinearModel {
  std::vector<std::string> label_set;
  std::vector<std::string> vocabulary;
  std::vector<std::vector<double>> weights;  // [class][feature]
  std::vector<double> bias;                  // [class]
  double c = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;

  // Rebuilds the name -> index map; call after filling `vocabulary` by hand.
  void index_vocabulary();
  const std::unordered_map<std::string, int>& feature_index() const { return index_; }

 private:
  std::unordered_map<std::string, int> index_;
};

// Feature vectors mapped once to column indices of the dataset vocabulary, so
// repeated training on row subsets skips all string handling. Training on a
// subset matches training on Dataset::subset: columns absent from the subset
// keep weight 0 and are never read at prediction time.
class IndexedData {
 public:
  struct Entry {
    int column;
    double value;
  };

  // Throws DataError naming the instance on a non-finite value.
  explicit IndexedData(const Dataset& dataset);

  std::size_t size() const { return labels_.size(); }
  std::size_t columns() const { return columns_; }
  std::size_t classes() const { return classes_; }
  const std::vector<int>& labels() const { return labels_; }
  std::span<const Entry> row(std::size_t i) const;
  double squared_norm(std::size_t i) const { return squared_norm_[i]; }

 private:
  std::vector<int> labels_;
  std::size_t classes_ = 0;
  std::size_t columns_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
  std::vector<double> squared_norm_;
};

// Weights over IndexedData columns.
struct OneVsRest {
  std::vector<std::vector<double>> weights;  // [class][column]
  std::vector<double> bias;

  // Argmax decision value; ties go to the earlier class.
  int predict(std::span<const IndexedData::Entry> row) const;
};

OneVsRest train_subset(const IndexedData& data, std::span<const std::size_t> subset, double c,
                       const TrainOptions& options);

// K[i][j] = x_i . x_j + 1 over every row pair (the 1 is the bias feature).
// Repeated training on subsets of a small dataset then runs the same dual
// coordinate descent on dense rows instead of sparse gathers.
class GramMatrix {
 public:
  explicit GramMatrix(const IndexedData& data);

  std::size_t size() const { return labels_.size(); }
  std::size_t classes() const { return classes_; }
  const std::vector<int>& labels() const { return labels_; }
  double at(std::size_t i, std::size_t j) const { return k_[i * labels_.size() + j]; }

 private:
  std::vector<int> labels_;
  std::size_t classes_ = 0;
  std::vector<double> k_;
};

// One-vs-rest model in dual form: decision_k(x) = sum_i coef[k][i] K(x, row_i).
struct DualModel {
  std::vector<std::size_t> rows;
  std::vector<std::vector<double>> coef;  // [class][position in rows] = alpha * y

  // Argmax decision value for a row of the Gram matrix; ties go to the
  // earlier class.
  int predict(const GramMatrix& gram, std::size_t row) const;
};

// Same problem, solver and random draws as train_subset; weights agree up to
// floating-point rounding.
DualModel train_subset(const GramMatrix& gram, std::span<const std::size_t> subset, double c,
                       const TrainOptions& options);

// L2-regularized hinge loss per class, solved by dual coordinate descent.
// Throws DataError when fewer than two labels occur or a feature value is
// not finite, std::invalid_argument when c <= 0.
LinearModel train(const Dataset& dataset, double c, const TrainOptions& options = {});

// weight . vector + bias for each class in label_set order. Features outside
// the model vocabulary are ignored.
std::vector<double> decision_values(const LinearModel& model, const FeatureVector& vector);

// Argmax of decision_values; ties go to the earlier label.
int predict(const LinearModel& model, const FeatureVector& vector);
const std::string& predict_label(const LinearModel& model, const FeatureVector& vector);

inline const std::vector<double> kDefaultCGrid = {0.01, 0.1, 1.0, 10.0, 100.0};

// Inner stratified cross-validation (min(inner_folds, n) folds, one repeat)
// per grid value; returns the value with the highest mean accuracy, the
// smallest one on ties.
double tune_c(const Dataset& train_fold, std::span<const double> grid, const TrainOptions& options,
              int inner_folds = 5);
// Same over the rows `subset` of the Gram matrix, in that order.
double tune_c(const GramMatrix& gram, std::span<const std::size_t> subset,
              std::span<const double> grid, const TrainOptions& options, int inner_folds = 5);

// Little-endian binary format; see docs/model_format.md.
inline constexpr std::uint32_t kModelFormatVersion = 1;
std::string serialize_model(const LinearModel& model);
LinearModel deserialize_model(std::string_view bytes);
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

}  // namespace purpose::learner

#endif  // PURPOSE_LEARNER_H_
