#ifndef IRVOL_TESTS_SUPPORT_HPP
#define IRVOL_TESTS_SUPPORT_HPP

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <unistd.h>

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("irvol_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline double mean(const Eigen::VectorXd& x) { return x.mean(); }

inline double variance(const Eigen::VectorXd& x) {
  return (x.array() - x.mean()).square().sum() / static_cast<double>(x.size() - 1);
}

/// Standard error of a mean from non-overlapping batch means.
inline double batch_se(const Eigen::VectorXd& x, Eigen::Index batches = 100) {
  const Eigen::Index len = x.size() / batches;
  Eigen::VectorXd m(batches);
  for (Eigen::Index b = 0; b < batches; ++b) m[b] = x.segment(b * len, len).mean();
  return std::sqrt(variance(m) / static_cast<double>(batches));
}

}  // namespace testing

#endif  // IRVOL_TESTS_SUPPORT_HPP
