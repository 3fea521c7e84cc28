#ifndef PURPOSE_TESTS_SUPPORT_H_
#define PURPOSE_TESTS_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "purpose/io.h"

namespace purpose::testing {

inline std::filesystem::path source_dir() { return PURPOSE_SOURCE_DIR; }
inline std::filesystem::path golden_path(std::string_view name) {
  return source_dir() / "tests" / "golden" / name;
}
inline std::filesystem::path data_path(std::string_view name) {
  return source_dir() / "tests" / "data" / name;
}
inline std::filesystem::path demo_path(std::string_view name) {
  return source_dir() / "data" / "demo" / name;
}

// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("purpose-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }
  std::filesystem::path write(std::string_view name, std::string_view content) const {
    auto p = path_ / name;
    io::write_file(p, content);
    return p;
  }

 private:
  std::filesystem::path path_;
};

// Seeded generator with the small helpers the property tests need.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace purpose::testing

#endif  // PURPOSE_TESTS_SUPPORT_H_
