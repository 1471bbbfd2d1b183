#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace nlphase::numerics {

/// Neumaier-compensated running sum. Order of `add` calls fixes the result.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

struct Minimum {
    double x;
    double value;
};

/// Golden-section search for a minimum of `f` on [lo, hi]. Stops once the
/// bracket is narrower than `tolerance`. Non-finite values are treated as +inf.
Minimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                double tolerance, int max_iterations = 200);

/// `points` evenly spaced values from lo to hi inclusive (lo alone when points == 1).
std::vector<double> linspace(double lo, double hi, std::size_t points);

/// `points` values lo + i*(hi - lo)/points, i.e. a periodic grid excluding hi.
std::vector<double> periodic_grid(double lo, double hi, std::size_t points);

double central_difference(const std::function<double(double)>& f, double x, double step);

/// Evaluates fn(i) for i in [0, count) on up to hardware_concurrency threads.
/// Results are returned in index order regardless of scheduling.
template <typename Fn>
auto parallel_map(std::size_t count, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using Result = decltype(fn(std::size_t{}));
    std::vector<Result> out(count);
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
        });
    }
    pool.clear();
    return out;
}

}  // namespace nlphase::numerics
