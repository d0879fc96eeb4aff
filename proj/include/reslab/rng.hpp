#pragma once

#include <array>
#include <cstdint>

namespace reslab {

// Philox4x32-10 counter-based generator (Salmon et al. 2011).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

// Stream tags keep Brownian and Poisson draws of one path independent.
enum class StreamTag : std::uint32_t { brownian = 0, poisson = 1, auxiliary = 2 };

// Sequential draws for a single path. The stream is a pure function of
// (seed, path id, tag), so any schedule over paths gives the same numbers.
class PathStream {
public:
    PathStream(std::uint64_t seed, std::uint64_t path, StreamTag tag) noexcept;

    // Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;
    double normal() noexcept;
    // Inversion sampler; intended for small means (jump_rate * dt).
    std::uint32_t poisson(double mean);

private:
    std::uint32_t next_word() noexcept;

    Philox4x32::Key key_{};
    Philox4x32::Counter counter_{};
    Philox4x32::Counter block_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace reslab
