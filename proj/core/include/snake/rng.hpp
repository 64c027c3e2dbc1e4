#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace snake {

/// Counter-based pseudo-random stream (splitmix64). Streams are created from
/// explicit integer keys, never from global state, so any value drawn anywhere
/// in the engine is a pure function of (run seed, structural keys). That is
/// what makes parallel and serial schedules produce identical output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Builds a stream keyed by a list of integers (order matters).
    static Rng keyed(std::initializer_list<std::uint64_t> keys) {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::uint64_t k : keys) {
            h = mix(h ^ mix(k));
        }
        return Rng(h);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Knuth sampler; fine for the small rates used by the defect model.
    int poisson(double lambda) {
        if (lambda <= 0.0) {
            return 0;
        }
        const double limit = std::exp(-lambda);
        int count = 0;
        double p = 1.0;
        do {
            ++count;
            p *= next_double();
        } while (p > limit);
        return count - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = next_u64() % i;
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
};

}  // namespace snake
