#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace limefold {

// All randomness flows from one user-visible seed through named sub-streams,
// so independent pieces of work (one explained row, one CV shuffle) own
// non-overlapping deterministic streams. Draw helpers avoid the standard
// distributions so results do not depend on the standard library build.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t stream_seed(std::uint64_t base, const std::string& stream) {
    return splitmix64(base ^ fnv1a64(stream));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    double uniform() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        if (hi <= lo) return lo;
        return lo + uniform() * (hi - lo);
    }

    bool bernoulli(double p) { return uniform() < p; }

    int index(int n) {  // 0..n-1
        if (n <= 1) return 0;
        return static_cast<int>(uniform() * n);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace limefold
