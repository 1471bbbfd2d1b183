#include <cmath>
#include <string>

#include "nlphase/errors.hpp"
#include "nlphase/fock_oracle.hpp"

namespace nlphase::oracle {
namespace {

void require_truncation(int n_max) {
    if (n_max < 0) throw InvalidArgument("truncation n_max must be >= 0");
}

void require_same_space(int a, int b) {
    if (a != b) throw InvalidArgument("states live in different truncations");
}

int occupation(Mode mode, int m, int n) { return mode == Mode::A ? m : n; }

// Falling factorial j (j-1) ... (j-m+1) in floating point; j <= n_max is small.
double falling(int j, int m) {
    double out = 1.0;
    for (int i = 0; i < m; ++i) out *= static_cast<double>(j - i);
    return out;
}

}  // namespace

PureState2M::PureState2M(int n_max) : basis_{n_max} {
    require_truncation(n_max);
    c_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_.dimension()));
}

PureState2M::PureState2M(int n_max, Eigen::VectorXcd coefficients)
    : basis_{n_max}, c_(std::move(coefficients)) {
    require_truncation(n_max);
    if (static_cast<std::size_t>(c_.size()) != basis_.dimension())
        throw InvalidArgument("coefficient vector does not match the truncated dimension");
}

Complex PureState2M::amplitude(int m, int n) const {
    if (!basis_.contains(m, n)) return {};
    return c_(static_cast<Eigen::Index>(TruncatedBasis::index(m, n)));
}

void PureState2M::set_amplitude(int m, int n, Complex value) {
    if (!basis_.contains(m, n))
        throw InvalidArgument("amplitude (" + std::to_string(m) + ", " + std::to_string(n) +
                              ") lies outside the truncation");
    c_(static_cast<Eigen::Index>(TruncatedBasis::index(m, n))) = value;
}

double PureState2M::sector_weight(int s) const {
    if (s < 0 || s > n_max()) return 0.0;
    const auto off = static_cast<Eigen::Index>(TruncatedBasis::sector_offset(s));
    return c_.segment(off, s + 1).squaredNorm();
}

MixedState2M::MixedState2M(int n_max) : basis_{n_max} {
    require_truncation(n_max);
    const auto d = static_cast<Eigen::Index>(basis_.dimension());
    rho_ = Eigen::MatrixXcd::Zero(d, d);
}

MixedState2M::MixedState2M(const PureState2M& pure) : basis_{pure.n_max()} {
    rho_ = pure.coefficients() * pure.coefficients().adjoint();
}

Complex MixedState2M::element(int m, int n, int m2, int n2) const {
    if (!basis_.contains(m, n) || !basis_.contains(m2, n2)) return {};
    return rho_(static_cast<Eigen::Index>(TruncatedBasis::index(m, n)),
                static_cast<Eigen::Index>(TruncatedBasis::index(m2, n2)));
}

double MixedState2M::max_hermiticity_error() const {
    return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double MixedState2M::sector_weight(int s) const {
    if (s < 0 || s > n_max()) return 0.0;
    const auto off = static_cast<Eigen::Index>(TruncatedBasis::sector_offset(s));
    return rho_.diagonal().segment(off, s + 1).real().sum();
}

double poisson_tail(double mean, int n_max) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidArgument("Poisson mean must be >= 0");
    if (mean == 0.0) return 0.0;
    const double log_mean = std::log(mean);
    double tail = 0.0;
    for (int k = n_max + 1;; ++k) {
        const double term = std::exp(-mean + k * log_mean - std::lgamma(k + 1.0));
        tail += term;
        // Past the mode the pmf decreases geometrically.
        if (k > mean && term <= 1e-18 * tail) break;
        if (k > mean && term == 0.0) break;
    }
    return tail;
}

int auto_truncation(double mean_photon_number) {
    if (!(mean_photon_number >= 0.0) || !std::isfinite(mean_photon_number))
        throw InvalidArgument("mean photon number must be finite and >= 0");
    const double n = mean_photon_number;
    int n_max = static_cast<int>(std::ceil(n + 6.0 * std::sqrt(n) + 10.0));
    // The top sector holds at most poisson_tail(n, n_max - 1) of the weight and
    // enters <X^2> with ladder factors up to ~4 n_max; keep that well inside the
    // x_moments edge check.
    auto admissible = [n](int k) {
        return poisson_tail(n, k) < kCoherentTailTolerance &&
               poisson_tail(n, k - 1) * (4.0 * k + 2.0) < 0.1 * kEdgeTolerance;
    };
    while (!admissible(n_max)) n_max = static_cast<int>(std::ceil(1.1 * n_max));
    return n_max;
}

PureState2M coherent_two_mode(Complex alpha_a, Complex alpha_b, int n_max) {
    require_truncation(n_max);
    const double mean_a = std::norm(alpha_a);
    const double mean_b = std::norm(alpha_b);
    const double tail = poisson_tail(mean_a + mean_b, n_max);
    if (tail >= kCoherentTailTolerance)
        throw TruncationError("n_max = " + std::to_string(n_max) +
                                  " truncates a coherent tail of mass " + std::to_string(tail),
                              tail);

    // Single-mode amplitudes in log-magnitude form so large N cannot overflow.
    auto single_mode = [n_max](Complex alpha) {
        std::vector<Complex> amp(static_cast<std::size_t>(n_max) + 1, Complex{});
        const double r = std::abs(alpha);
        const double arg = std::arg(alpha);
        amp[0] = std::exp(-0.5 * r * r);
        if (r == 0.0) return amp;
        const double log_r = std::log(r);
        for (int k = 1; k <= n_max; ++k) {
            const double log_mag = -0.5 * r * r + k * log_r - 0.5 * std::lgamma(k + 1.0);
            amp[static_cast<std::size_t>(k)] = std::polar(std::exp(log_mag), k * arg);
        }
        return amp;
    };
    const auto a = single_mode(alpha_a);
    const auto b = single_mode(alpha_b);

    PureState2M state(n_max);
    for (int s = 0; s <= n_max; ++s)
        for (int m = 0; m <= s; ++m)
            state.set_amplitude(m, s - m,
                                a[static_cast<std::size_t>(m)] * b[static_cast<std::size_t>(s - m)]);
    return state;
}

PureState2M psi_p_state(int p, int n_max) {
    require_truncation(n_max);
    if (p < 0) throw InvalidArgument("sector photon number must be >= 0");
    if (p > n_max)
        throw InvalidArgument("psi_p with p = " + std::to_string(p) + " exceeds n_max = " +
                              std::to_string(n_max));
    // Binomial(p, 1/2) probabilities by repeated halving of Pascal rows.
    std::vector<double> prob{1.0};
    for (int row = 1; row <= p; ++row) {
        std::vector<double> next(static_cast<std::size_t>(row) + 1, 0.0);
        for (int j = 0; j <= row; ++j) {
            const double left = j > 0 ? prob[static_cast<std::size_t>(j - 1)] : 0.0;
            const double right = j < row ? prob[static_cast<std::size_t>(j)] : 0.0;
            next[static_cast<std::size_t>(j)] = 0.5 * (left + right);
        }
        prob = std::move(next);
    }
    PureState2M state(n_max);
    for (int j = 0; j <= p; ++j)
        state.set_amplitude(j, p - j, std::sqrt(prob[static_cast<std::size_t>(j)]));
    return state;
}

Complex inner_product(const PureState2M& a, const PureState2M& b) {
    require_same_space(a.n_max(), b.n_max());
    return a.coefficients().dot(b.coefficients());
}

double fidelity(const PureState2M& a, const PureState2M& b) {
    return std::norm(inner_product(a, b));
}

double fidelity(const MixedState2M& rho, const PureState2M& psi) {
    require_same_space(rho.n_max(), psi.n_max());
    return (psi.coefficients().adjoint() * rho.density() * psi.coefficients())(0, 0).real();
}

namespace {

struct QuadratureSums {
    QuadratureMoments moments;
    double edge = 0.0;
};

// <c>, <c^2>, <c^dag c> for the chosen mode via Tr(rho c) = sum_i rho(i, i - e) sqrt(k).
// `coherence(j, i)` returns rho(i, j) = <i|rho|j>.
template <typename Coherence>
QuadratureSums quadrature_sums(int n_max, Mode mode, Coherence&& coherence) {
    Complex lower{}, lower2{};
    double number = 0.0;
    double edge = 0.0;
    for (int s = 0; s <= n_max; ++s) {
        const bool top = s == n_max;
        for (int m = 0; m <= s; ++m) {
            const int n = s - m;
            const int k = occupation(mode, m, n);
            const auto i = TruncatedBasis::index(m, n);
            const double diag = k * coherence(i, i).real();
            number += diag;
            if (top) edge += 2.0 * std::abs(diag);
            if (k >= 1) {
                const auto j = mode == Mode::A ? TruncatedBasis::index(m - 1, n)
                                               : TruncatedBasis::index(m, n - 1);
                lower += std::sqrt(static_cast<double>(k)) * coherence(j, i);
            }
            if (k >= 2) {
                const auto j = mode == Mode::A ? TruncatedBasis::index(m - 2, n)
                                               : TruncatedBasis::index(m, n - 2);
                const Complex term = std::sqrt(static_cast<double>(k) * (k - 1)) * coherence(j, i);
                lower2 += term;
                if (top) edge += 2.0 * std::abs(term);
            }
        }
    }
    // X^2 = c^2 + c^dag^2 + 2 c^dag c + 1
    return {{2.0 * lower.real(), 2.0 * lower2.real() + 2.0 * number + 1.0}, edge};
}

QuadratureMoments checked(const QuadratureSums& sums) {
    if (sums.edge > kEdgeTolerance * std::abs(sums.moments.second_moment))
        throw TruncationError("truncation edge terms (" + std::to_string(sums.edge) +
                                  ") exceed tolerance relative to <X^2>; increase n_max",
                              sums.edge);
    return sums.moments;
}

QuadratureSums pure_sums(const PureState2M& state, Mode mode) {
    const auto& c = state.coefficients();
    // rho(i, j) = c_i conj(c_j)
    return quadrature_sums(state.n_max(), mode, [&](std::size_t j, std::size_t i) {
        return std::conj(c(static_cast<Eigen::Index>(j))) * c(static_cast<Eigen::Index>(i));
    });
}

QuadratureSums mixed_sums(const MixedState2M& state, Mode mode) {
    const auto& rho = state.density();
    return quadrature_sums(state.n_max(), mode, [&](std::size_t j, std::size_t i) {
        return rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    });
}

}  // namespace

QuadratureMoments x_moments(const PureState2M& state, Mode mode) {
    return checked(pure_sums(state, mode));
}

QuadratureMoments x_moments(const MixedState2M& state, Mode mode) {
    return checked(mixed_sums(state, mode));
}

double edge_terms(const PureState2M& state, Mode mode) { return pure_sums(state, mode).edge; }

double edge_terms(const MixedState2M& state, Mode mode) { return mixed_sums(state, mode).edge; }

double mean_photon_number(const PureState2M& state, Mode mode) {
    return normal_ordered_expectation(state, mode, 1);
}

double mean_photon_number(const MixedState2M& state, Mode mode) {
    return normal_ordered_expectation(state, mode, 1);
}

double normal_ordered_expectation(const PureState2M& state, Mode mode, int m) {
    if (m < 0) throw InvalidArgument("normal-ordered moment order must be >= 0");
    double total = 0.0;
    for (int s = 0; s <= state.n_max(); ++s)
        for (int a = 0; a <= s; ++a) {
            const int k = occupation(mode, a, s - a);
            if (k >= m) total += std::norm(state.amplitude(a, s - a)) * falling(k, m);
        }
    return total;
}

double normal_ordered_expectation(const MixedState2M& state, Mode mode, int m) {
    if (m < 0) throw InvalidArgument("normal-ordered moment order must be >= 0");
    double total = 0.0;
    for (int s = 0; s <= state.n_max(); ++s)
        for (int a = 0; a <= s; ++a) {
            const int k = occupation(mode, a, s - a);
            if (k >= m) total += state.element(a, s - a, a, s - a).real() * falling(k, m);
        }
    return total;
}

nlohmann::json dump_json(const PureState2M& state, double threshold) {
    nlohmann::json amplitudes = nlohmann::json::array();
    for (int s = 0; s <= state.n_max(); ++s)
        for (int m = 0; m <= s; ++m) {
            const Complex c = state.amplitude(m, s - m);
            if (std::abs(c) > threshold) amplitudes.push_back({m, s - m, c.real(), c.imag()});
        }
    return {{"n_max", state.n_max()}, {"amplitudes", std::move(amplitudes)}};
}

}  // namespace nlphase::oracle
