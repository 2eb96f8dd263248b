#include "rispart/rng.hpp"

#include <cmath>

namespace rispart {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial,
                          StreamPurpose purpose) noexcept {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ mix64(point + 0x632BE59BD9B4E019ULL));
    h = mix64(h ^ mix64(trial + 0x85157AF5C2A1D3B7ULL));
    h = mix64(h ^ static_cast<std::uint64_t>(purpose));
    return h;
}

std::complex<double> RandomStream::complex_normal(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

}  // namespace rispart
