#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace chaoscalc {

/// Counter-based pseudo-random generator with explicit substreams.
///
/// State is (seed, counter); every output is a mix of the two, so streams are
/// reproducible bit-for-bit from the seed alone and cheap to split. The mixer
/// is the SplitMix64 finalizer. Gaussians come from Box-Muller on the mixed
/// uniforms; we deliberately avoid std::normal_distribution, whose output is
/// not pinned down by the standard.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform on (0, 1]; never returns 0 so log() below is always finite.
    double next_open_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform on [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log(next_open_unit()));
        double a = 2.0 * std::numbers::pi * next_unit();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    void fill_normal(std::vector<double>& out, std::size_t n) {
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = normal();
    }

    /// Independent substream derived from (seed, index). Children of distinct
    /// indices, and children vs. the parent, never share outputs.
    Rng child(std::uint64_t index) const {
        std::uint64_t z = seed_ ^ (0xD1B54A32D192ED03ull + index * 0x8CB92BA72F3D8DD7ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return Rng(z ^ (z >> 31));
    }

  private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace chaoscalc
