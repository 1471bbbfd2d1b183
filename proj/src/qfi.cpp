#include "nlphase/qfi.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nlphase/errors.hpp"
#include "nlphase/numerics.hpp"

namespace nlphase::qfi {
namespace {

using boost::multiprecision::cpp_int;

void require_nonnegative_n(double n) {
    if (!std::isfinite(n) || n < 0.0)
        throw InvalidArgument("mean photon number must be finite and >= 0");
}

cpp_int falling_factorial(int n, int m) {
    cpp_int out = 1;
    for (int i = 0; i < m; ++i) out *= (n - i);
    return out;
}

// log of e^{-N} N^p / (p - 2)!, the p-dependent part of the series term
// without the (2p - 1)/2 factor.
double log_term_prefactor(double n, int p) {
    if (n == 0.0) return -std::numeric_limits<double>::infinity();
    return -n + p * std::log(n) - std::lgamma(static_cast<double>(p - 1));
}

double poisson_weight(double n, int p) {
    if (n == 0.0) return p == 0 ? 1.0 : 0.0;
    return std::exp(-n + p * std::log(n) - std::lgamma(static_cast<double>(p + 1)));
}

}  // namespace

double sector_qfi(int p) {
    if (p < 0) throw InvalidArgument("sector photon number must be >= 0, got " + std::to_string(p));
    const double x = p;
    return 0.5 * x * (x - 1.0) * (2.0 * x - 1.0);
}

Rational sector_normal_ordered_moment(int p, int m) {
    if (p < 0 || m < 0) throw InvalidArgument("sector and moment order must be >= 0");
    // |psi_p> puts C(p, j) / 2^p of its weight on |j>_A |p - j>_B.
    cpp_int numerator = 0;
    cpp_int binom = 1;
    for (int j = 0; j <= p; ++j) {
        if (j >= m) numerator += binom * falling_factorial(j, m);
        binom = binom * (p - j) / (j + 1);
    }
    const cpp_int denominator = cpp_int(1) << p;
    return Rational(numerator, denominator);
}

Rational sector_qfi_exact(int p) {
    if (p < 0) throw InvalidArgument("sector photon number must be >= 0, got " + std::to_string(p));
    const Rational o = sector_normal_ordered_moment(p, 2);
    const Rational o2 = sector_normal_ordered_moment(p, 4) + 4 * sector_normal_ordered_moment(p, 3) +
                        2 * sector_normal_ordered_moment(p, 2);
    return 4 * (o2 - o * o);
}

double sector_qfi_bruteforce(int p) {
    return static_cast<double>(sector_qfi_exact(p));
}

QfiResult phase_averaged_qfi(double mean_photon_number, double tolerance) {
    require_nonnegative_n(mean_photon_number);
    if (!(tolerance > 0.0)) throw InvalidArgument("QFI tolerance must be positive");
    const double n = mean_photon_number;

    QfiResult result;
    numerics::CompensatedSum total;
    numerics::CompensatedSum weights;
    for (int p = 0; p < 2; ++p) {
        const double w = poisson_weight(n, p);
        weights.add(w);
        result.terms.push_back({p, w, 0.0});
    }

    for (int p = 2;; ++p) {
        const double term = std::exp(log_term_prefactor(n, p)) * (2.0 * p - 1.0) / 2.0;
        total.add(term);
        const double w = poisson_weight(n, p);
        weights.add(w);
        result.terms.push_back({p, w, sector_qfi(p)});

        // Ratio of consecutive terms t_{q+1}/t_q = N(2q+1)/((q-1)(2q-1)) decreases
        // in q, so beyond p it is bounded by its value at q = p + 1.
        const double q = p + 1;
        const double ratio = n * (2.0 * q + 1.0) / ((q - 1.0) * (2.0 * q - 1.0));
        if (ratio < 1.0) {
            const double next = std::exp(log_term_prefactor(n, p + 1)) * (2.0 * q - 1.0) / 2.0;
            const double tail = next / (1.0 - ratio);
            if (tail < tolerance) {
                result.value = total.value();
                result.p_max = p;
                result.tail_bound = tail;
                result.weight_sum = weights.value();
                return result;
            }
        }
    }
}

double qfi_closed_form(double mean_photon_number) {
    require_nonnegative_n(mean_photon_number);
    const double n = mean_photon_number;
    return n * n * n + 1.5 * n * n;
}

double qcrb(double mean_photon_number) {
    require_nonnegative_n(mean_photon_number);
    if (mean_photon_number == 0.0)
        throw Uninformative("QCR bound is infinite at N = 0: vacuum carries no phase information");
    return 1.0 / std::sqrt(qfi_closed_form(mean_photon_number));
}

}  // namespace nlphase::qfi
