#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gdh {

// splitmix64 step; used to derive decorrelated per-stream seeds from a base seed.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
    uint64_t s = base;
    splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ull * (stream + 1);
    splitmix64(s);
    return splitmix64(s);
}

// Seeded generator with hand-rolled scaling. mt19937_64 output is pinned by the
// standard; std::uniform_*_distribution is not, and manifests must be
// bit-reproducible across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0,n)
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }

    // [lo,hi] inclusive
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo) + 1));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace gdh
