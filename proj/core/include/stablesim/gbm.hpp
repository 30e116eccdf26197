#pragma once

#include <cstdint>
#include <vector>

#include "stablesim/types.hpp"

namespace stablesim {

/// (master_seed, path_index) uniquely determines a path's entire randomness
/// stream, so path i is identical whether paths are generated serially or in
/// parallel and regardless of how many other paths exist.
struct PathSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

/// Deterministic stream of standard normals for one path.
///
/// The construction is frozen so regression fixtures stay valid:
///   - raw 64-bit values come from a SplitMix64 sequence whose initial state
///     hashes (master_seed, path_index) through the SplitMix64 finalizer;
///   - uniforms take the top 53 bits, u1 in (0,1] and u2 in [0,1);
///   - normals come from Box-Muller: r = sqrt(-2 ln u1),
///     z0 = r cos(2 pi u2), z1 = r sin(2 pi u2), z1 cached for the next call.
class NormalStream {
 public:
  explicit NormalStream(PathSeed seed);

  /// Next standard-normal draw.
  double next();

  /// Next raw 64-bit PRNG value (advances the stream).
  std::uint64_t next_raw();

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Exact-scheme GBM path: Y_0 = m.initial_cap and
/// Y_{t+1} = Y_t * exp(mu - sigma^2/2 + sigma * Z_t) for t = 0..n-1.
/// Returns n+1 values, all strictly positive.
std::vector<double> generate_cap_path(const MarketParams& m, PathSeed seed);

}  // namespace stablesim
