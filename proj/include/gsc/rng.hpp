#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "gsc/errors.hpp"

namespace gsc::rng {

// splitmix64 finalizer; used to derive well-separated per-stream seeds.
inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic seed for stream `stream` of a master seed. Part of the
// reproducibility contract: reports are byte-identical across runs because
// every trial/fold/subject draws from its own derived stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix(mix(master) ^ mix(stream * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull));
}

// mt19937_64 with hand-rolled output transforms. The engine's integer output
// is standardized; std::uniform_real_distribution / std::normal_distribution
// are not, so portable byte-identical results require owning the transforms.
class Engine {
public:
    explicit Engine(std::uint64_t seed) : gen_(seed) {}

    // Uniform in (0, 1]; 53-bit resolution. Never returns 0, so log() is safe.
    double uniform01() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; one spare cached per pair.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Uniform integer in [0, bound) by rejection; bias-free.
    std::uint64_t uniform_int(std::uint64_t bound) {
        if (bound == 0) throw DataError("uniform_int: bound must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % bound;
    }

    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// k distinct indices from [0, n), uniformly without replacement, in draw order.
inline std::vector<std::size_t> sample_indices(Engine& eng, std::size_t n, std::size_t k) {
    if (k > n) throw DataError("sample_indices: k exceeds n");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(eng.uniform_int(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace gsc::rng
