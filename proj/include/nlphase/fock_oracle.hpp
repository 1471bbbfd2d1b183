#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "nlphase/protocol.hpp"

/// Brute-force two-mode Fock-space simulation of the interferometer.
///
/// States live in the space spanned by |m>_A |n>_B with total photon number
/// m + n <= n_max. Both passive elements (beam splitter, phases) and the loss
/// channel map this space into itself, so no operation leaks out of the
/// truncation. Basis vectors are stored sector by sector: sector s = m + n
/// occupies indices [s(s+1)/2, s(s+1)/2 + s], ordered by m.
namespace nlphase::oracle {

using Complex = std::complex<double>;

enum class Mode { A, B };
enum class LossTarget { A, B, Both };

/// Index helpers for the sector-ordered truncated basis.
struct TruncatedBasis {
    int n_max = 0;

    std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(n_max + 2) / 2;
    }
    static std::size_t sector_offset(int s) noexcept {
        return static_cast<std::size_t>(s) * static_cast<std::size_t>(s + 1) / 2;
    }
    static std::size_t index(int m, int n) noexcept { return sector_offset(m + n) + m; }
    bool contains(int m, int n) const noexcept { return m >= 0 && n >= 0 && m + n <= n_max; }
};

class PureState2M {
public:
    /// The zero vector; callers fill amplitudes.
    explicit PureState2M(int n_max);
    PureState2M(int n_max, Eigen::VectorXcd coefficients);

    int n_max() const noexcept { return basis_.n_max; }
    const TruncatedBasis& basis() const noexcept { return basis_; }

    /// c[m][n]; zero outside the truncated support.
    Complex amplitude(int m, int n) const;
    void set_amplitude(int m, int n, Complex value);

    const Eigen::VectorXcd& coefficients() const noexcept { return c_; }
    Eigen::VectorXcd& coefficients() noexcept { return c_; }

    double norm_squared() const { return c_.squaredNorm(); }

    /// Probability of total photon number s.
    double sector_weight(int s) const;

private:
    TruncatedBasis basis_;
    Eigen::VectorXcd c_;
};

class MixedState2M {
public:
    explicit MixedState2M(int n_max);
    explicit MixedState2M(const PureState2M& pure);

    int n_max() const noexcept { return basis_.n_max; }
    const TruncatedBasis& basis() const noexcept { return basis_; }

    /// rho[m][n][m2][n2] = <m, n| rho |m2, n2>
    Complex element(int m, int n, int m2, int n2) const;

    const Eigen::MatrixXcd& density() const noexcept { return rho_; }
    Eigen::MatrixXcd& density() noexcept { return rho_; }

    double trace() const { return rho_.trace().real(); }
    double max_hermiticity_error() const;
    double sector_weight(int s) const;

private:
    TruncatedBasis basis_;
    Eigen::MatrixXcd rho_;
};

/// Tolerated Poisson tail mass beyond the truncation for coherent inputs.
inline constexpr double kCoherentTailTolerance = 1e-12;

/// Relative size of truncation-edge terms that triggers a TruncationError in x_moments.
inline constexpr double kEdgeTolerance = 1e-10;

/// P(Poisson(mean) > n_max).
double poisson_tail(double mean, int n_max);

/// Smallest admissible truncation for a coherent input of mean photon number N:
/// starts at ceil(N + 6 sqrt(N) + 10) and grows by 10% until the Poisson tail
/// is below kCoherentTailTolerance and the top-sector edge terms are negligible.
int auto_truncation(double mean_photon_number);

/// |alpha_a>_A |alpha_b>_B restricted to m + n <= n_max. Throws TruncationError
/// carrying the neglected mass when that exceeds kCoherentTailTolerance.
PureState2M coherent_two_mode(Complex alpha_a, Complex alpha_b, int n_max);

/// exp[i pi (a^dag b + b^dag a)/4], applied sector by sector. With this
/// convention U^dag b U = (b + i a)/sqrt(2) and |1,0> -> (|1,0> + i|0,1>)/sqrt(2).
PureState2M apply_bs_5050(const PureState2M& state);
MixedState2M apply_bs_5050(const MixedState2M& state);

/// The (s+1)x(s+1) beam-splitter block of sector s in the basis |m, s-m>, m = 0..s.
/// Blocks are built once per sector from the eigendecomposition of the
/// tridiagonal generator and shared between calls.
const Eigen::MatrixXcd& beam_splitter_sector(int s);

PureState2M apply_linear_phase(const PureState2M& state, Mode mode, double theta);
MixedState2M apply_linear_phase(const MixedState2M& state, Mode mode, double theta);

/// exp[i phi n^k] (uncompensated) or exp[i phi (n^k - n)] (compensated).
PureState2M apply_nonlinear_phase(const PureState2M& state, Mode mode, double phi, int order,
                                  bool compensated = true);
MixedState2M apply_nonlinear_phase(const MixedState2M& state, Mode mode, double phi, int order,
                                   bool compensated = true);

/// Amplitude-damping channel with transmissivity T, Kraus operators
/// K_l = sum_n sqrt(C(n, l)) T^{(n-l)/2} (1-T)^{l/2} |n - l><n|.
MixedState2M apply_loss(const PureState2M& state, LossTarget target, double transmissivity);
MixedState2M apply_loss(const MixedState2M& state, LossTarget target, double transmissivity);

/// Kraus operators of the single-mode channel on the truncated space {0..n_max}.
std::vector<Eigen::MatrixXd> loss_kraus_operators(int n_max, double transmissivity);

/// Magnitude of the <X^2> terms contributed by the top sector s = n_max, the
/// only elements whose neighbours the truncation removes.
double edge_terms(const PureState2M& state, Mode mode);
double edge_terms(const MixedState2M& state, Mode mode);

/// <X> and <X^2> for X = c + c^dag on the chosen mode, from the tri- and
/// pentadiagonal Fock matrix elements. Throws TruncationError when the edge
/// terms exceed kEdgeTolerance relative to <X^2>.
QuadratureMoments x_moments(const PureState2M& state, Mode mode);
QuadratureMoments x_moments(const MixedState2M& state, Mode mode);

double mean_photon_number(const PureState2M& state, Mode mode);
double mean_photon_number(const MixedState2M& state, Mode mode);

/// <c^dag^m c^m> on the chosen mode from the photon-number distribution.
double normal_ordered_expectation(const PureState2M& state, Mode mode, int m);
double normal_ordered_expectation(const MixedState2M& state, Mode mode, int m);

/// sum_j sqrt(p! / (j! (p-j)!)) 2^{-p/2} |j>_A |p-j>_B
PureState2M psi_p_state(int p, int n_max);

/// |<a|b>|^2 and <psi|rho|psi>. States must share n_max.
double fidelity(const PureState2M& a, const PureState2M& b);
double fidelity(const MixedState2M& rho, const PureState2M& psi);

Complex inner_product(const PureState2M& a, const PureState2M& b);

struct OracleOptions {
    bool compensated = true;
    int n_max = 0;  ///< 0 selects auto_truncation(N)
};

/// Coherent input -> BS -> nonlinear phase on A, linear phase on B -> optional
/// loss on both arms (before or after the phase elements) -> BS -> X on B.
QuadratureMoments end_to_end_moments(const ProtocolParams& params,
                                     const LossSpec& loss = LossSpec::none(),
                                     const OracleOptions& options = {});

/// The same pipeline with the phase-independent prefix (input state, first
/// beam splitter and, for BeforePhase, the loss channel) computed once.
/// Used for sweeps over (phi, theta) at fixed N.
class ProtocolSimulator {
public:
    ProtocolSimulator(double mean_photon_number, int order = 2,
                      const LossSpec& loss = LossSpec::none(), const OracleOptions& options = {});

    QuadratureMoments moments(double phi, double theta) const;

    int n_max() const noexcept { return n_max_; }
    double mean_photon_number() const noexcept { return mean_photon_number_; }
    const LossSpec& loss() const noexcept { return loss_; }

private:
    double mean_photon_number_;
    int order_;
    LossSpec loss_;
    OracleOptions options_;
    int n_max_;
    std::shared_ptr<const PureState2M> split_;        // after the first beam splitter
    std::shared_ptr<const MixedState2M> split_lossy_; // BeforePhase only
};

/// Debug dump: {"n_max": .., "amplitudes": [[m, n, re, im], ...]} for |c| above threshold.
nlohmann::json dump_json(const PureState2M& state, double threshold = 1e-12);

}  // namespace nlphase::oracle
