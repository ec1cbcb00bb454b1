#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace cnc {

// Deterministic random source. All draws are hand-rolled on top of
// mt19937_64 so that results are identical across standard libraries
// (std::uniform_int_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Unbiased draw in [0, bound) via masked rejection. bound == 0 is invalid.
  std::uint64_t below(std::uint64_t bound);

  // Inclusive integer range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // [lo, hi).
  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::size_t pick_index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[pick_index(v.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[pick_index(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Named substream derivation: one root seed, independently reproducible
// per-component streams. substream_seed(root, "topology"),
// substream_seed(root, "workload", slot), ...
std::uint64_t substream_seed(std::uint64_t root, std::string_view name);
std::uint64_t substream_seed(std::uint64_t root, std::string_view name, std::uint64_t index);

}  // namespace cnc
