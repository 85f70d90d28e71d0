#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ryscat {

using cxd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Frequency convention used everywhere: operator transforms follow
// x(w) = (1/sqrt(2*pi)) Integral dt e^{+i w t} x(t), so a mode evolving as
// e^{-i lambda t} contributes a resolvent pole at w = lambda.

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 0;

    double at(int i) const {
        if (points <= 1) return min;
        return min + (max - min) * static_cast<double>(i) / (points - 1);
    }
    double step() const { return points > 1 ? (max - min) / (points - 1) : 0.0; }
};

inline std::vector<double> linspace(const GridSpec& g) {
    std::vector<double> v(static_cast<std::size_t>(g.points));
    for (int i = 0; i < g.points; ++i) v[static_cast<std::size_t>(i)] = g.at(i);
    return v;
}

}  // namespace ryscat
