#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace uccvqe {

// SplitMix64 finalizer. Used to derive well-mixed per-restart RNG streams from
// a user seed without any cross-stream correlation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic uniform stream on [0, 1). A thin xorshift-free generator built
// on splitmix64 so results do not depend on the standard library's
// distribution implementation.
class UniformStream {
  public:
    UniformStream(std::uint64_t seed, std::uint64_t stream_index)
        : state_(splitmix64(splitmix64(seed) ^ splitmix64(stream_index + 1))) {}

    double next() {
        state_ = splitmix64(state_);
        // 53 high bits -> double in [0, 1)
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }

    // uniform on [-scale, scale]
    double next_symmetric(double scale) { return scale * (2.0 * next() - 1.0); }

  private:
    std::uint64_t state_;
};

// Runs fn(0..n-1) on up to `jobs` threads. Results must be written to
// index-addressed slots by the caller; the first exception thrown by any
// worker is rethrown here after all workers join, so partial failures never
// leak detached threads.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

// Ordinary least-squares slope of y against x. Used for log-log growth fits.
double ols_slope(std::span<const double> x, std::span<const double> y);

} // namespace uccvqe
