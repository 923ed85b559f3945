#ifndef IRVOL_RANDOM_HPP
#define IRVOL_RANDOM_HPP

#include <cstdint>
#include <random>

namespace irvol {

/// Seeded random source. Independent streams are derived from (seed, stream)
/// so parallel tasks never share state and results do not depend on the
/// number of threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  long poisson(double mean) { return std::poisson_distribution<long>(mean)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace irvol

#endif  // IRVOL_RANDOM_HPP
