#pragma once

#include <cstdint>
#include <random>

namespace dlab {

// Random stream owned by one worker. The engine is mt19937_64, whose output
// sequence is fixed by the standard; the variate transforms live here because
// the <random> distributions are implementation-defined, and reports must be
// reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for work item `index` under a master seed.
  static Rng stream(std::uint64_t master_seed, std::uint64_t index);

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Standard normal (Marsaglia polar method).
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fixed salts so that independent studies inside one run never share streams.
inline constexpr std::uint64_t kSaltConditional = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kSaltSearch = 0xc2b2ae3d27d4eb4fULL;

}  // namespace dlab
