#ifndef SMC_RNG_HPP
#define SMC_RNG_HPP

#include <cstdint>
#include <random>

namespace smc {

// Seedable generator with deterministic, platform-independent streams.
// std::normal_distribution is implementation-defined, so the Gaussian draw
// is done here with the Marsaglia polar method on explicitly constructed
// 53-bit uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform on [0, 1)
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  std::uint64_t uniform_below(std::uint64_t n);

  // standard normal
  double gaussian();

  // Derives an independent stream; mixing is splitmix64 so derived seeds do
  // not collide for nearby indices.
  static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace smc

#endif  // SMC_RNG_HPP
