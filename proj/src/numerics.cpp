#include "nlphase/numerics.hpp"

#include <cmath>
#include <limits>

#include "nlphase/errors.hpp"

namespace nlphase::numerics {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        compensation_ += (sum_ - t) + x;
    else
        compensation_ += (x - t) + sum_;
    sum_ = t;
}

Minimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                double tolerance, int max_iterations) {
    if (!(hi > lo)) throw InvalidArgument("golden-section bracket must satisfy lo < hi");
    constexpr double kInvPhi = 0.6180339887498948482;
    auto eval = [&](double x) {
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = eval(c), fd = eval(d);
    for (int it = 0; it < max_iterations && (b - a) > tolerance; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = eval(d);
        }
    }
    // The bracket endpoints may beat the interior probes when the minimum
    // sits on the boundary of [lo, hi].
    Minimum best = fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
    for (double x : {lo, hi, 0.5 * (a + b)}) {
        const double v = eval(x);
        if (v < best.value) best = {x, v};
    }
    return best;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    std::vector<double> out(points);
    if (points == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

std::vector<double> periodic_grid(double lo, double hi, std::size_t points) {
    std::vector<double> out(points);
    const double step = (hi - lo) / static_cast<double>(points);
    for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
    return out;
}

double central_difference(const std::function<double(double)>& f, double x, double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

}  // namespace nlphase::numerics
