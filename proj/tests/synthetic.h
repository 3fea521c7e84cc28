#ifndef PURPOSE_TESTS_SYNTHETIC_H_
#define PURPOSE_TESTS_SYNTHETIC_H_

// Synthetic datasets for classifier checks and an independent quadratic
// program solver for the binary hinge-loss SVM.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "purpose/learner.h"
#include "support.h"

namespace purpose::testing {

struct Point {
  std::vector<double> x;
  int y = 0;  // class index
};

inline features::FeatureVector dense_vector(const std::vector<double>& x) {
  features::FeatureVector v;
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (x[d] != 0.0) v["x" + std::to_string(d)] = x[d];
  }
  return v;
}

inline learner::Dataset to_dataset(const std::vector<Point>& points,
                                   std::vector<std::string> labels) {
  std::vector<learner::Instance> instances;
  for (std::size_t i = 0; i < points.size(); ++i) {
    instances.push_back({"i" + std::to_string(i), dense_vector(points[i].x), points[i].y});
  }
  return learner::Dataset(std::move(instances), std::move(labels));
}

// Gaussian blobs around `centers`; points farther than `max_radius` from
// their own center are redrawn, which keeps well-spread centers separable.
inline std::vector<Point> blobs(Gen& gen, const std::vector<std::vector<double>>& centers,
                                int per_class, double sd, double max_radius) {
  std::vector<Point> points;
  for (int c = 0; c < static_cast<int>(centers.size()); ++c) {
    for (int i = 0; i < per_class; ++i) {
      Point p;
      p.y = c;
      while (true) {
        p.x.clear();
        double r2 = 0.0;
        for (double m : centers[static_cast<std::size_t>(c)]) {
          const double v = gen.normal(m, sd);
          p.x.push_back(v);
          r2 += (v - m) * (v - m);
        }
        if (std::sqrt(r2) <= max_radius) break;
      }
      points.push_back(std::move(p));
    }
  }
  return points;
}

// 3 classes at the corners of a triangle of radius 5, spread 0.7, so every
// one-vs-rest split is linearly separable.
inline std::vector<Point> separable_three_class(Gen& gen, int per_class) {
  const std::vector<std::vector<double>> centers = {
      {5.0, 0.0}, {-2.5, 4.330127018922193}, {-2.5, -4.330127018922193}};
  return blobs(gen, centers, per_class, 0.7, 2.0);
}

// Binary hinge-loss SVM with the bias as a regularized constant feature,
// solved in the dual by accelerated projected gradient:
//   max sum(a) - 1/2 a'Qa,  0 <= a_i <= C,  Q_ij = y_i y_j (x_i . x_j + 1).
struct QpSolution {
  std::vector<double> w;
  double b = 0.0;
  double dual_objective = 0.0;

  double decision(const std::vector<double>& x) const {
    double s = b;
    for (std::size_t d = 0; d < w.size(); ++d) s += w[d] * x[d];
    return s;
  }
};

inline QpSolution solve_qp(const std::vector<Point>& points, int positive, double c,
                           int iterations = 20000) {
  const std::size_t n = points.size();
  const std::size_t dims = points.front().x.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = points[i].y == positive ? 1.0 : -1.0;
  std::vector<double> q(n * n);
  double lipschitz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 1.0;
      for (std::size_t d = 0; d < dims; ++d) dot += points[i].x[d] * points[j].x[d];
      q[i * n + j] = y[i] * y[j] * dot;
      row += std::abs(q[i * n + j]);
    }
    lipschitz = std::max(lipschitz, row);
  }
  std::vector<double> a(n, 0.0), prev(n, 0.0), z(n, 0.0), grad(n);
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double g = 1.0;
      for (std::size_t j = 0; j < n; ++j) g -= q[i * n + j] * z[j];
      grad[i] = g;
    }
    prev = a;
    for (std::size_t i = 0; i < n; ++i) a[i] = std::clamp(z[i] + grad[i] / lipschitz, 0.0, c);
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    for (std::size_t i = 0; i < n; ++i) z[i] = a[i] + (t - 1.0) / t_next * (a[i] - prev[i]);
    t = t_next;
  }
  QpSolution s;
  s.w.assign(dims, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dims; ++d) s.w[d] += a[i] * y[i] * points[i].x[d];
    s.b += a[i] * y[i];
  }
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin += a[i];
    for (std::size_t j = 0; j < n; ++j) quad += a[i] * q[i * n + j] * a[j];
  }
  s.dual_objective = lin - 0.5 * quad;
  return s;
}

// Primal objective 1/2 (|w|^2 + b^2) + C sum hinge for a binary split.
inline double primal_objective(const std::vector<double>& w, double b,
                               const std::vector<Point>& points, int positive, double c) {
  double reg = b * b;
  for (double v : w) reg += v * v;
  double loss = 0.0;
  for (const auto& p : points) {
    double s = b;
    for (std::size_t d = 0; d < w.size(); ++d) s += w[d] * p.x[d];
    const double y = p.y == positive ? 1.0 : -1.0;
    loss += std::max(0.0, 1.0 - y * s);
  }
  return 0.5 * reg + c * loss;
}

}  // namespace purpose::testing

#endif  // PURPOSE_TESTS_SYNTHETIC_H_
