#include "reslab/rng.hpp"

#include <cmath>
#include <numbers>

#include "reslab/errors.hpp"

namespace reslab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

PathStream::PathStream(std::uint64_t seed, std::uint64_t path, StreamTag tag) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      // words 0-1: block counter, word 2: path, word 3: high path bits and tag
      counter_{0u, 0u, static_cast<std::uint32_t>(path),
               (static_cast<std::uint32_t>(path >> 32) << 4) | static_cast<std::uint32_t>(tag)} {}

std::uint32_t PathStream::next_word() noexcept {
    if (used_ == 4) {
        block_ = Philox4x32::generate(counter_, key_);
        if (++counter_[0] == 0) ++counter_[1];
        used_ = 0;
    }
    return block_[used_++];
}

double PathStream::uniform() noexcept {
    const std::uint64_t hi = next_word() >> 5;  // 27 bits
    const std::uint64_t lo = next_word() >> 6;  // 26 bits
    const double u53 = static_cast<double>((hi << 26) | lo);
    return (u53 + 0.5) * 0x1.0p-53;
}

double PathStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
}

std::uint32_t PathStream::poisson(double mean) {
    if (!(mean >= 0.0) || mean > 500.0) {
        throw ConfigError("poisson mean per step must lie in [0, 500]");
    }
    if (mean == 0.0) return 0;
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint32_t k = 0;
    while (u > cdf && p > 0.0) {
        ++k;
        p *= mean / k;
        cdf += p;
    }
    return k;
}

}  // namespace reslab
