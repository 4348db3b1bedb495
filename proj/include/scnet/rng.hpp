#ifndef SCNET_RNG_HPP
#define SCNET_RNG_HPP

#include <cmath>
#include <cstdint>

namespace scnet {

// Counter-based splittable random streams. A stream is identified by a
// master seed plus up to four tag/index words; draws are bit-reproducible
// across platforms (no dependence on libstdc++ distribution internals).
namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // burn-in decorrelates nearby seeds
    detail::splitmix64(state_);
    detail::splitmix64(state_);
  }

  Rng(std::uint64_t master, std::uint64_t tag, std::uint64_t i0 = 0,
      std::uint64_t i1 = 0, std::uint64_t i2 = 0, std::uint64_t i3 = 0)
      : state_(master) {
    mix(tag);
    mix(i0);
    mix(i1);
    mix(i2);
    mix(i3);
  }

  std::uint64_t next_u64() { return detail::splitmix64(state_); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  // standard normal via Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // avoid log(0)
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  void mix(std::uint64_t v) {
    state_ ^= v + 0x9e3779b97f4a7c15ULL + (state_ << 6) + (state_ >> 2);
    detail::splitmix64(state_);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stream tags for per-snapshot substreams.
namespace stream {
constexpr std::uint64_t kDeployment = 0x01;
constexpr std::uint64_t kShadowing = 0x02;
constexpr std::uint64_t kFading = 0x03;
constexpr std::uint64_t kUeDrop = 0x04;
constexpr std::uint64_t kInterfererPmi = 0x05;
}  // namespace stream

}  // namespace scnet

#endif
