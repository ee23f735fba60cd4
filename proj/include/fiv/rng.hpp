#ifndef FIV_RNG_HPP
#define FIV_RNG_HPP

#include <cstdint>
#include <random>

#include "fiv/types.hpp"

namespace fiv {

/// Counter-based replication stream: (seed, rep) is mixed through splitmix64
/// into a mt19937_64 state, so replication i's draws never depend on how many
/// replications ran before it or on which worker executed it. Deterministic
/// within a build; not bit-portable across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t rep) : eng_(mix_state(seed, rep)) {}

  double normal() { return nd_(eng_); }

  VectorXd normal_vector(long n) {
    VectorXd v(n);
    for (long i = 0; i < n; ++i) v[i] = nd_(eng_);
    return v;
  }

  /// Row-major fill so a T x K draw is T consecutive K-vectors (one per period).
  MatrixXd normal_matrix(long rows, long cols) {
    MatrixXd m(rows, cols);
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c) m(r, c) = nd_(eng_);
    return m;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  static std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix_state(std::uint64_t seed, std::uint64_t rep) {
    std::uint64_t state = seed;
    std::uint64_t h = splitmix(state);
    state ^= rep * 0xd1b54a32d192ed03ULL;
    h ^= splitmix(state);
    return h;
  }

  std::mt19937_64 eng_;
  std::normal_distribution<double> nd_{0.0, 1.0};
};

}  // namespace fiv

#endif  // FIV_RNG_HPP
