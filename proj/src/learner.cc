#include "purpose/learner.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "purpose/error.h"
#include "purpose/folds.h"
#include "purpose/io.h"

namespace purpose::learner {

// ---------------------------------------------------------------- dataset

Dataset::Dataset(std::vector<Instance> instances, std::vector<std::string> label_set)
    : instances_(std::move(instances)), label_set_(std::move(label_set)) {
  std::set<std::string_view> names;
  for (const auto& inst : instances_) {
    if (inst.label < 0 || static_cast<std::size_t>(inst.label) >= label_set_.size()) {
      throw std::invalid_argument("instance " + inst.id + ": label index out of range");
    }
    for (const auto& [name, value] : inst.features) names.insert(name);
  }
  vocabulary_.assign(names.begin(), names.end());
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(instances_.size());
  for (const auto& inst : instances_) out.push_back(inst.label);
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<Instance> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(instances_.at(i));
  return Dataset(std::move(picked), label_set_);
}

void LinearModel::index_vocabulary() {
  index_.clear();
  index_.reserve(vocabulary.size());
  for (std::size_t i = 0; i < vocabulary.size(); ++i) index_.emplace(vocabulary[i], static_cast<int>(i));
}

// ---------------------------------------------------------------- indexing

IndexedData::IndexedData(const Dataset& dataset)
    : labels_(dataset.labels()), classes_(dataset.label_set().size()),
      columns_(dataset.vocabulary().size()) {
  std::unordered_map<std::string_view, int> column;
  column.reserve(dataset.vocabulary().size());
  for (std::size_t j = 0; j < dataset.vocabulary().size(); ++j) {
    column.emplace(dataset.vocabulary()[j], static_cast<int>(j));
  }
  offsets_.reserve(dataset.size() + 1);
  offsets_.push_back(0);
  for (const auto& inst : dataset.instances()) {
    double sq = 0.0;
    for (const auto& [name, value] : inst.features) {
      if (!std::isfinite(value)) {
        throw DataError("instance " + inst.id + ": non-finite value for feature '" + name + "'");
      }
      entries_.push_back({column.at(name), value});
      sq += value * value;
    }
    offsets_.push_back(entries_.size());
    squared_norm_.push_back(sq);
  }
}

std::span<const IndexedData::Entry> IndexedData::row(std::size_t i) const {
  return {entries_.data() + offsets_.at(i), entries_.data() + offsets_.at(i + 1)};
}

int OneVsRest::predict(std::span<const IndexedData::Entry> row) const {
  int best = 0;
  double best_value = 0.0;
  for (std::size_t k = 0; k < bias.size(); ++k) {
    double v = bias[k];
    for (const auto& e : row) v += weights[k][static_cast<std::size_t>(e.column)] * e.value;
    if (k == 0 || v > best_value) {
      best = static_cast<int>(k);
      best_value = v;
    }
  }
  return best;
}

// ---------------------------------------------------------------- solver

namespace {

// Dual coordinate descent for
//   min_w,b 0.5 (|w|^2 + b^2) + C sum_i max(0, 1 - y_i (w.x_i + b))
// with shrinking; the bias is the weight of an implicit constant feature 1.0.
// `Problem` supplies qd(i) = |x_i|^2 + 1, output(i) = w.x_i + b and
// step(i, d) for w += d x_i, b += d, with i a position in the subset.
template <typename Problem>
std::vector<double> solve_dual(Problem& problem, std::size_t l, const std::vector<signed char>& y,
                               double c, const TrainOptions& options, std::uint64_t seed) {
  std::vector<double> alpha(l, 0.0);
  std::vector<std::size_t> order(l);
  for (std::size_t i = 0; i < l; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::size_t active = l;
  double pg_max_old = kInf;
  double pg_min_old = -kInf;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double pg_max_new = -kInf;
    double pg_min_new = kInf;
    for (std::size_t i = 0; i < active; ++i) {
      std::swap(order[i], order[i + rng() % (active - i)]);
    }
    for (std::size_t s = 0; s < active; ++s) {
      const std::size_t i = order[s];
      const double g = problem.output(i) * y[i] - 1.0;

      double pg = 0.0;
      if (alpha[i] == 0.0) {
        if (g > pg_max_old) {
          --active;
          std::swap(order[s], order[active]);
          --s;
          continue;
        }
        if (g < 0.0) pg = g;
      } else if (alpha[i] == c) {
        if (g < pg_min_old) {
          --active;
          std::swap(order[s], order[active]);
          --s;
          continue;
        }
        if (g > 0.0) pg = g;
      } else {
        pg = g;
      }
      pg_max_new = std::max(pg_max_new, pg);
      pg_min_new = std::min(pg_min_new, pg);

      if (std::fabs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::min(std::max(alpha[i] - g / problem.qd(i), 0.0), c);
        problem.step(i, (alpha[i] - old) * y[i]);
      }
    }

    if (pg_max_new - pg_min_new <= options.tolerance) {
      if (active == l) break;
      // Converged on the shrunk problem: verify on the full one.
      active = l;
      pg_max_old = kInf;
      pg_min_old = -kInf;
      continue;
    }
    pg_max_old = pg_max_new <= 0.0 ? kInf : pg_max_new;
    pg_min_old = pg_min_new >= 0.0 ? -kInf : pg_min_new;
  }
  return alpha;
}

// Primal weights kept explicitly; rows read from the sparse data.
struct SparseProblem {
  const IndexedData& data;
  std::span<const std::size_t> subset;
  std::vector<double>& w;
  double& b;

  double qd(std::size_t i) const { return data.squared_norm(subset[i]) + 1.0; }
  double output(std::size_t i) const {
    double v = 0.0;
    for (const auto& e : data.row(subset[i])) v += w[static_cast<std::size_t>(e.column)] * e.value;
    return v + b;
  }
  void step(std::size_t i, double d) {
    for (const auto& e : data.row(subset[i])) w[static_cast<std::size_t>(e.column)] += d * e.value;
    b += d;
  }
};

// Outputs on the subset kept explicitly and updated through the Gram rows.
struct GramProblem {
  const std::vector<double>& k;  // l x l, row-major, subset order
  std::size_t l;
  std::vector<double> f;

  double qd(std::size_t i) const { return k[i * l + i]; }
  double output(std::size_t i) const { return f[i]; }
  void step(std::size_t i, double d) {
    const double* row = k.data() + i * l;
    double* out = f.data();
    for (std::size_t j = 0; j < l; ++j) out[j] += d * row[j];
  }
};

std::set<int> labels_present(const std::vector<int>& labels, std::span<const std::size_t> subset) {
  std::set<int> present;
  for (std::size_t i : subset) present.insert(labels.at(i));
  return present;
}

void check_trainable(const std::set<int>& present, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("train: C must be positive");
  if (present.size() < 2) {
    throw DataError("train: need at least two distinct labels, found " +
                    std::to_string(present.size()));
  }
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

OneVsRest train_subset(const IndexedData& data, std::span<const std::size_t> subset, double c,
                       const TrainOptions& options) {
  check_trainable(labels_present(data.labels(), subset), c);
  OneVsRest out;
  out.weights.resize(data.classes());
  out.bias.assign(data.classes(), 0.0);
  std::vector<signed char> y(subset.size());
  for (std::size_t k = 0; k < data.classes(); ++k) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
      y[i] = data.labels()[subset[i]] == static_cast<int>(k) ? 1 : -1;
    }
    out.weights[k].assign(data.columns(), 0.0);
    SparseProblem problem{data, subset, out.weights[k], out.bias[k]};
    solve_dual(problem, subset.size(), y, c, options, evalharness::mix_seed(options.seed, 1000 + k));
  }
  return out;
}

GramMatrix::GramMatrix(const IndexedData& data)
    : labels_(data.labels()), classes_(data.classes()), k_(data.size() * data.size(), 0.0) {
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = data.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const auto b = data.row(j);
      // Rows hold ascending columns: merge join.
      double dot = 0.0;
      std::size_t p = 0;
      std::size_t q = 0;
      while (p < a.size() && q < b.size()) {
        if (a[p].column < b[q].column) {
          ++p;
        } else if (b[q].column < a[p].column) {
          ++q;
        } else {
          dot += a[p++].value * b[q++].value;
        }
      }
      k_[i * n + j] = k_[j * n + i] = dot + 1.0;
    }
  }
}

int DualModel::predict(const GramMatrix& gram, std::size_t row) const {
  int best = 0;
  double best_value = 0.0;
  for (std::size_t k = 0; k < coef.size(); ++k) {
    double v = 0.0;
    for (std::size_t p = 0; p < rows.size(); ++p) v += coef[k][p] * gram.at(row, rows[p]);
    if (k == 0 || v > best_value) {
      best = static_cast<int>(k);
      best_value = v;
    }
  }
  return best;
}

DualModel train_subset(const GramMatrix& gram, std::span<const std::size_t> subset, double c,
                       const TrainOptions& options) {
  check_trainable(labels_present(gram.labels(), subset), c);
  const std::size_t l = subset.size();
  std::vector<double> k(l * l);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) k[i * l + j] = gram.at(subset[i], subset[j]);
  }
  DualModel out;
  out.rows.assign(subset.begin(), subset.end());
  out.coef.resize(gram.classes());
  std::vector<signed char> y(l);
  for (std::size_t cls = 0; cls < gram.classes(); ++cls) {
    for (std::size_t i = 0; i < l; ++i) {
      y[i] = gram.labels()[subset[i]] == static_cast<int>(cls) ? 1 : -1;
    }
    GramProblem problem{k, l, std::vector<double>(l, 0.0)};
    auto alpha =
        solve_dual(problem, l, y, c, options, evalharness::mix_seed(options.seed, 1000 + cls));
    for (std::size_t i = 0; i < l; ++i) alpha[i] *= y[i];
    out.coef[cls] = std::move(alpha);
  }
  return out;
}

LinearModel train(const Dataset& dataset, double c, const TrainOptions& options) {
  const IndexedData data(dataset);
  const auto rows = all_rows(dataset.size());
  OneVsRest solved = train_subset(data, rows, c, options);
  LinearModel model;
  model.label_set = dataset.label_set();
  model.vocabulary = dataset.vocabulary();
  model.weights = std::move(solved.weights);
  model.bias = std::move(solved.bias);
  model.c = c;
  model.seed = options.seed;
  model.config_hash = options.config_hash;
  model.index_vocabulary();
  return model;
}

std::vector<double> decision_values(const LinearModel& model, const FeatureVector& vector) {
  std::vector<double> values = model.bias;
  for (std::size_t k = 0; k < values.size(); ++k) {
    for (const auto& [name, value] : vector) {
      auto it = model.feature_index().find(name);
      if (it == model.feature_index().end()) continue;
      values[k] += model.weights[k][static_cast<std::size_t>(it->second)] * value;
    }
  }
  return values;
}

int predict(const LinearModel& model, const FeatureVector& vector) {
  const auto values = decision_values(model, vector);
  int best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  }
  return best;
}

const std::string& predict_label(const LinearModel& model, const FeatureVector& vector) {
  return model.label_set.at(static_cast<std::size_t>(predict(model, vector)));
}

// ---------------------------------------------------------------- tuning

double tune_c(const GramMatrix& gram, std::span<const std::size_t> subset,
              std::span<const double> grid, const TrainOptions& options, int inner_folds) {
  if (grid.empty()) throw std::invalid_argument("tune_c: empty grid");
  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() == 1) return sorted.front();

  std::vector<int> labels;
  labels.reserve(subset.size());
  for (std::size_t i : subset) labels.push_back(gram.labels().at(i));
  const int k = std::min<int>(inner_folds, static_cast<int>(labels.size()));
  const auto plan = evalharness::stratified_folds(labels, k, 1, options.seed);

  struct InnerFold {
    std::vector<std::size_t> train;  // rows of `data`
    std::vector<std::size_t> test;   // positions in `subset`
    std::set<int> train_labels;
  };
  std::vector<InnerFold> folds;
  for (int f = 0; f < k; ++f) {
    InnerFold fold;
    for (std::size_t p : plan.train_indices(0, f)) {
      fold.train.push_back(subset[p]);
      fold.train_labels.insert(labels[p]);
    }
    fold.test = plan.test_indices(0, f);
    folds.push_back(std::move(fold));
  }

  double best_c = sorted.front();
  double best_score = -1.0;
  for (double c : sorted) {
    double sum = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto& fold = folds[f];
      std::size_t correct = 0;
      if (fold.train_labels.size() < 2) {
        // Degenerate training part: the only label seen is the prediction.
        for (std::size_t p : fold.test) {
          if (fold.train_labels.count(labels[p]) > 0) ++correct;
        }
      } else {
        TrainOptions inner = options;
        inner.seed = evalharness::mix_seed(options.seed, 7919 + f);
        const auto model = train_subset(gram, fold.train, c, inner);
        for (std::size_t p : fold.test) {
          if (model.predict(gram, subset[p]) == labels[p]) ++correct;
        }
      }
      sum += static_cast<double>(correct) / static_cast<double>(fold.test.size());
    }
    const double score = sum / static_cast<double>(folds.size());
    if (score > best_score) {
      best_score = score;
      best_c = c;
    }
  }
  return best_c;
}

double tune_c(const Dataset& train_fold, std::span<const double> grid, const TrainOptions& options,
              int inner_folds) {
  if (grid.size() == 1) return grid.front();
  const GramMatrix gram{IndexedData(train_fold)};
  const auto rows = all_rows(train_fold.size());
  return tune_c(gram, rows, grid, options, inner_folds);
}

// ---------------------------------------------------------------- model I/O

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state) {
  for (unsigned char b : bytes) {
    state ^= b;
    state *= 0x100000001b3ULL;
  }
  return state;
}

namespace {

constexpr std::string_view kMagic = "PURPMODL";

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
void put_str(std::string& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t u(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(u(4)); }
  std::uint64_t u64() { return u(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::size_t len = u32();
    need(len);
    std::string s(bytes_.substr(pos_, len));
    pos_ += len;
    return s;
  }
  std::string_view raw(std::size_t len) {
    need(len);
    auto s = bytes_.substr(pos_, len);
    pos_ += len;
    return s;
  }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw DataError("model file truncated");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const LinearModel& model) {
  std::string out(kMagic);
  put_u32(out, kModelFormatVersion);
  put_u64(out, model.seed);
  put_u64(out, model.config_hash);
  put_f64(out, model.c);
  put_u32(out, static_cast<std::uint32_t>(model.label_set.size()));
  for (const auto& label : model.label_set) put_str(out, label);
  put_u32(out, static_cast<std::uint32_t>(model.vocabulary.size()));
  for (const auto& name : model.vocabulary) put_str(out, name);
  for (const auto& row : model.weights) {
    for (double w : row) put_f64(out, w);
  }
  for (double b : model.bias) put_f64(out, b);
  put_u64(out, fnv1a(out));
  return out;
}

LinearModel deserialize_model(std::string_view bytes) {
  Reader in(bytes);
  if (in.raw(kMagic.size()) != kMagic) throw DataError("not a model file (bad magic)");
  const std::uint32_t version = in.u32();
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format version " + std::to_string(version));
  }
  LinearModel model;
  model.seed = in.u64();
  model.config_hash = in.u64();
  model.c = in.f64();
  const std::uint32_t classes = in.u32();
  if (classes > in.remaining()) throw DataError("model file truncated");
  for (std::uint32_t k = 0; k < classes; ++k) model.label_set.push_back(in.str());
  const std::uint32_t features = in.u32();
  if (features > in.remaining()) throw DataError("model file truncated");
  for (std::uint32_t f = 0; f < features; ++f) model.vocabulary.push_back(in.str());
  const std::size_t weight_bytes = (static_cast<std::size_t>(classes) * features + classes) * 8;
  if (in.remaining() < weight_bytes + 8) throw DataError("model file truncated");
  model.weights.assign(classes, std::vector<double>(features));
  for (auto& row : model.weights) {
    for (double& w : row) w = in.f64();
  }
  model.bias.resize(classes);
  for (double& b : model.bias) b = in.f64();
  const std::size_t payload = in.position();
  const std::uint64_t checksum = in.u64();
  if (in.remaining() != 0) throw DataError("model file has trailing bytes");
  if (checksum != fnv1a(bytes.substr(0, payload))) throw DataError("model file checksum mismatch");
  model.index_vocabulary();
  if (model.feature_index().size() != model.vocabulary.size()) {
    throw DataError("model file has duplicate feature names");
  }
  return model;
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  io::write_file(path, serialize_model(model));
}

LinearModel load_model(const std::filesystem::path& path) {
  try {
    return deserialize_model(io::read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace purpose::learner
