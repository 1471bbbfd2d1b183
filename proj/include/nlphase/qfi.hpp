#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

/// Phase-averaged quantum Fisher information of the coherent-state protocol.
///
/// Averaging the input over the unknown global phase leaves a Poisson mixture
/// of the sectors |psi_p> = BS |p, 0>, which are mutually orthogonal. The QFI
/// is then the Poisson-weighted sum of the pure-sector QFIs, each equal to four
/// times the variance of the generator n_A(n_A - 1) in that sector.
namespace nlphase::qfi {

using Rational = boost::multiprecision::cpp_rational;

/// (1/2) p (p - 1)(2p - 1)
double sector_qfi(int p);

/// Exact <a^dag^m a^m> on mode A of |psi_p>, summed over the binomial
/// occupation amplitudes of the sector state.
Rational sector_normal_ordered_moment(int p, int m);

/// 4(<O^2> - <O>^2) for O = a^dag^2 a^2, with O^2 = a^dag^4 a^4 + 4 a^dag^3 a^3
/// + 2 a^dag^2 a^2, evaluated exactly on |psi_p>.
Rational sector_qfi_exact(int p);

double sector_qfi_bruteforce(int p);

struct SectorTerm {
    int p;
    double weight;      ///< Poisson weight e^{-N} N^p / p!
    double sector_qfi;
};

struct QfiResult {
    double value = 0.0;
    int p_max = 0;
    double tail_bound = 0.0;  ///< upper bound on the neglected part of the series
    double weight_sum = 0.0;  ///< sum of Poisson weights over p <= p_max
    std::vector<SectorTerm> terms;
};

/// Sums the sector series upward from p = 2 until a geometric majorant of
/// the remaining terms drops below `tolerance` (absolute).
QfiResult phase_averaged_qfi(double mean_photon_number, double tolerance = 1e-12);

/// N^3 + (3/2) N^2, the resummed series.
double qfi_closed_form(double mean_photon_number);

/// Quantum Cramer-Rao bound F^{-1/2}. Throws Uninformative at N = 0.
double qcrb(double mean_photon_number);

}  // namespace nlphase::qfi
