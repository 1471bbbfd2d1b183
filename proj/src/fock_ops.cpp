#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include <Eigen/Eigenvalues>

#include "nlphase/errors.hpp"
#include "nlphase/fock_oracle.hpp"

namespace nlphase::oracle {
namespace {

int occupation(Mode mode, int m, int n) { return mode == Mode::A ? m : n; }

Eigen::MatrixXcd build_sector_unitary(int s) {
    const Eigen::Index dim = s + 1;
    if (dim == 1) return Eigen::MatrixXcd::Identity(1, 1);
    // a^dag b + b^dag a on |m, s-m>: <m+1, s-m-1| a^dag b |m, s-m> = sqrt((m+1)(s-m)).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sub(dim - 1);
    for (int m = 0; m < s; ++m) sub(m) = std::sqrt(static_cast<double>(m + 1) * (s - m));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw Error("beam-splitter generator diagonalization failed in sector " + std::to_string(s));
    const Eigen::MatrixXcd v = solver.eigenvectors().cast<Complex>();
    Eigen::VectorXcd phases(dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        phases(k) = std::polar(1.0, 0.25 * std::numbers::pi * solver.eigenvalues()(k));
    return v * phases.asDiagonal() * v.transpose();
}

// Phase factor vector f with state -> f .* state (pure) or f rho f^dag (mixed).
template <typename Generator>
Eigen::VectorXcd diagonal_phases(int n_max, Mode mode, double angle, Generator&& generator) {
    Eigen::VectorXcd f(static_cast<Eigen::Index>(TruncatedBasis{n_max}.dimension()));
    for (int s = 0; s <= n_max; ++s)
        for (int m = 0; m <= s; ++m)
            f(static_cast<Eigen::Index>(TruncatedBasis::index(m, s - m))) =
                std::polar(1.0, angle * generator(occupation(mode, m, s - m)));
    return f;
}

double nonlinear_generator(int n, int order, bool compensated) {
    double power = 1.0;
    for (int i = 0; i < order; ++i) power *= n;
    return compensated ? power - n : power;
}

void require_transmissivity(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw InvalidArgument("transmissivity must lie in [0, 1], got " + std::to_string(t));
}

// kraus[n][l] = sqrt(C(n, l)) T^{(n-l)/2} (1-T)^{l/2}
std::vector<std::vector<double>> kraus_table(int n_max, double t) {
    std::vector<std::vector<double>> binom(static_cast<std::size_t>(n_max) + 1);
    std::vector<std::vector<double>> table(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        auto& row = binom[static_cast<std::size_t>(n)];
        row.assign(static_cast<std::size_t>(n) + 1, 1.0);
        for (int l = 1; l < n; ++l)
            row[static_cast<std::size_t>(l)] = binom[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(l - 1)] +
                                               binom[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(l)];
        auto& k = table[static_cast<std::size_t>(n)];
        k.resize(static_cast<std::size_t>(n) + 1);
        for (int l = 0; l <= n; ++l)
            k[static_cast<std::size_t>(l)] = std::sqrt(row[static_cast<std::size_t>(l)]) *
                                             std::pow(t, 0.5 * (n - l)) * std::pow(1.0 - t, 0.5 * l);
    }
    return table;
}

MixedState2M damp_mode(const MixedState2M& state, Mode mode, double t) {
    if (t == 1.0) return state;
    const int n_max = state.n_max();
    const auto kraus = kraus_table(n_max, t);
    const auto& rho = state.density();
    MixedState2M out(n_max);
    auto& target = out.density();

    auto lowered = [mode](int m, int n, int l) {
        return mode == Mode::A ? TruncatedBasis::index(m - l, n) : TruncatedBasis::index(m, n - l);
    };

    for (int s2 = 0; s2 <= n_max; ++s2)
        for (int m2 = 0; m2 <= s2; ++m2) {
            const int n2 = s2 - m2;
            const int k2 = occupation(mode, m2, n2);
            const auto col = static_cast<Eigen::Index>(TruncatedBasis::index(m2, n2));
            const auto& kr2 = kraus[static_cast<std::size_t>(k2)];
            for (int s = 0; s <= n_max; ++s)
                for (int m = 0; m <= s; ++m) {
                    const int n = s - m;
                    const Complex value = rho(static_cast<Eigen::Index>(TruncatedBasis::index(m, n)), col);
                    if (value == Complex{}) continue;
                    const int k = occupation(mode, m, n);
                    const auto& kr = kraus[static_cast<std::size_t>(k)];
                    const int l_max = std::min(k, k2);
                    for (int l = 0; l <= l_max; ++l) {
                        const double w = kr[static_cast<std::size_t>(l)] * kr2[static_cast<std::size_t>(l)];
                        if (w == 0.0) continue;
                        target(static_cast<Eigen::Index>(lowered(m, n, l)),
                               static_cast<Eigen::Index>(lowered(m2, n2, l))) += w * value;
                    }
                }
        }
    return out;
}

}  // namespace

const Eigen::MatrixXcd& beam_splitter_sector(int s) {
    if (s < 0) throw InvalidArgument("sector index must be >= 0");
    // Blocks depend only on s; they are built on first use and never mutated.
    static std::mutex mutex;
    static std::vector<std::unique_ptr<const Eigen::MatrixXcd>> cache;
    std::lock_guard lock(mutex);
    if (cache.size() <= static_cast<std::size_t>(s)) cache.resize(static_cast<std::size_t>(s) + 1);
    auto& slot = cache[static_cast<std::size_t>(s)];
    if (!slot) slot = std::make_unique<const Eigen::MatrixXcd>(build_sector_unitary(s));
    return *slot;
}

PureState2M apply_bs_5050(const PureState2M& state) {
    PureState2M out = state;
    auto& c = out.coefficients();
    for (int s = 0; s <= state.n_max(); ++s) {
        const auto off = static_cast<Eigen::Index>(TruncatedBasis::sector_offset(s));
        c.segment(off, s + 1) = beam_splitter_sector(s) * state.coefficients().segment(off, s + 1);
    }
    return out;
}

MixedState2M apply_bs_5050(const MixedState2M& state) {
    MixedState2M out = state;
    auto& rho = out.density();
    for (int s = 0; s <= state.n_max(); ++s) {
        const auto off = static_cast<Eigen::Index>(TruncatedBasis::sector_offset(s));
        const auto& u = beam_splitter_sector(s);
        rho.middleRows(off, s + 1) = (u * rho.middleRows(off, s + 1)).eval();
    }
    for (int s = 0; s <= state.n_max(); ++s) {
        const auto off = static_cast<Eigen::Index>(TruncatedBasis::sector_offset(s));
        const auto& u = beam_splitter_sector(s);
        rho.middleCols(off, s + 1) = (rho.middleCols(off, s + 1) * u.adjoint()).eval();
    }
    return out;
}

PureState2M apply_linear_phase(const PureState2M& state, Mode mode, double theta) {
    const auto f = diagonal_phases(state.n_max(), mode, theta, [](int k) { return double(k); });
    return PureState2M(state.n_max(), f.cwiseProduct(state.coefficients()));
}

MixedState2M apply_linear_phase(const MixedState2M& state, Mode mode, double theta) {
    const auto f = diagonal_phases(state.n_max(), mode, theta, [](int k) { return double(k); });
    MixedState2M out(state.n_max());
    out.density() = f.asDiagonal() * state.density() * f.conjugate().asDiagonal();
    return out;
}

PureState2M apply_nonlinear_phase(const PureState2M& state, Mode mode, double phi, int order,
                                  bool compensated) {
    if (order < 1) throw InvalidArgument("nonlinearity order must be >= 1");
    const auto f = diagonal_phases(state.n_max(), mode, phi, [&](int k) {
        return nonlinear_generator(k, order, compensated);
    });
    return PureState2M(state.n_max(), f.cwiseProduct(state.coefficients()));
}

MixedState2M apply_nonlinear_phase(const MixedState2M& state, Mode mode, double phi, int order,
                                   bool compensated) {
    if (order < 1) throw InvalidArgument("nonlinearity order must be >= 1");
    const auto f = diagonal_phases(state.n_max(), mode, phi, [&](int k) {
        return nonlinear_generator(k, order, compensated);
    });
    MixedState2M out(state.n_max());
    out.density() = f.asDiagonal() * state.density() * f.conjugate().asDiagonal();
    return out;
}

MixedState2M apply_loss(const PureState2M& state, LossTarget target, double transmissivity) {
    return apply_loss(MixedState2M(state), target, transmissivity);
}

MixedState2M apply_loss(const MixedState2M& state, LossTarget target, double transmissivity) {
    require_transmissivity(transmissivity);
    switch (target) {
        case LossTarget::A: return damp_mode(state, Mode::A, transmissivity);
        case LossTarget::B: return damp_mode(state, Mode::B, transmissivity);
        case LossTarget::Both:
            return damp_mode(damp_mode(state, Mode::A, transmissivity), Mode::B, transmissivity);
    }
    return state;
}

std::vector<Eigen::MatrixXd> loss_kraus_operators(int n_max, double transmissivity) {
    require_transmissivity(transmissivity);
    if (n_max < 0) throw InvalidArgument("truncation n_max must be >= 0");
    const auto table = kraus_table(n_max, transmissivity);
    std::vector<Eigen::MatrixXd> ops;
    for (int l = 0; l <= n_max; ++l) {
        Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
        for (int n = l; n <= n_max; ++n)
            k(n - l, n) = table[static_cast<std::size_t>(n)][static_cast<std::size_t>(l)];
        ops.push_back(std::move(k));
    }
    return ops;
}

}  // namespace nlphase::oracle
