#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace reslab {

// Running mean/variance (Welford), mergeable in a fixed order.
struct SampleMoments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const SampleMoments& other) noexcept {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double n1 = static_cast<double>(count);
        const double n2 = static_cast<double>(other.count);
        const double delta = other.mean - mean;
        const double n = n1 + n2;
        mean += delta * n2 / n;
        m2 += other.m2 + delta * delta * n1 * n2 / n;
        count += other.count;
    }

    double variance() const noexcept {
        return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    }
    double std_error() const noexcept {
        return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

inline SampleMoments moments_of(std::span<const double> xs) noexcept {
    SampleMoments m;
    for (double x : xs) m.add(x);
    return m;
}

// Root-sum-square of two standard errors.
inline double combined_se(double a, double b) noexcept { return std::hypot(a, b); }

}  // namespace reslab
