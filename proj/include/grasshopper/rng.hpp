#pragma once

#include <cstdint>
#include <random>

namespace grasshopper {

// Reproducible generator used throughout: std::mt19937_64, whose output
// sequence is fixed by the standard. Derived draws avoid the
// implementation-defined std:: distributions so results match across
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform bit from the top of the word.
    int bit() { return static_cast<int>(engine_() >> 63); }
    // Uniform index in [0, n) by multiply-high.
    std::uint64_t index(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }
    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace grasshopper
