#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace mvsrc {

// Seeded generator with a fully specified output stream, so datasets and
// splits can be reproduced by any implementation:
//   * engine: std::mt19937_64 seeded with the 64-bit seed
//   * uniform(): (next() >> 11) * 2^-53, in [0, 1)
//   * normal(): Box-Muller on two uniforms u1, u2 (u1 mapped to (0, 1] as
//     1 - u1), returning r cos(theta) then r sin(theta) from the same pair
//   * below(n): floor(uniform() * n)
class Rng {
 public:
  static constexpr std::string_view kDescription =
      "mt19937_64; uniform=(u64>>11)*2^-53; normal=box-muller(pairs); below(n)=floor(uniform*n)";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double normal();
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mvsrc
