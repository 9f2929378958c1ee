#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "gl3lab/kloosterman.hpp"
#include "gl3lab/spectral_params.hpp"

namespace gl3lab {

using cplx = std::complex<double>;

inline constexpr double kDefaultEpsilon = 0.1;

struct SieveTrialConfig {
    int B = 10;
    double T = 5.0;
    int N = 60;
    double C = 60.0;
    int trials = 100;
    std::uint64_t seed = 1;

    void validate() const;
};

enum class SieveVariant { multiplicative, additive };

// Standard complex Gaussian vector a_1..a_N (index 0 unused); the stream is
// determined by (seed, trial) alone.
std::vector<cplx> trial_coefficients(int N, std::uint64_t seed, std::uint64_t trial);

// int_{-T}^{T} sum_{b <= B} sum*_{x mod b} |sum_n a_n e(xn/b) w_n(y)|^2 dy with
// w_n(y) = n^{iy} or e(yn/C), integrated exactly in y.
double gallagher_lhs(const std::vector<cplx>& a, int B, double T, double C, SieveVariant v);
// (B^2 T + N) sum |a_n|^2, or (B^2 T + C) sum |a_n|^2 for the additive version
double gallagher_rhs(const std::vector<cplx>& a, int B, double T, double C, SieveVariant v);

struct SieveReport {
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    int worst_trial = -1;
    int trials = 0;
    std::uint64_t seed = 0;
};
SieveReport gallagher_check(const SieveTrialConfig& cfg, SieveVariant v);

struct ConversionReport {
    double mult_lhs = 0.0, mult_rhs = 0.0;  // int_{|t|<=T} |sum b_m m^{it}|^2 vs int_{|y|<=kT} |sum b_m e(my/M)|^2
    double add_lhs = 0.0, add_rhs = 0.0;    // the reverse direction
    double mult_ratio = 0.0, add_ratio = 0.0;
    double epsilon = kDefaultEpsilon;
};
// Both directions of the additive/multiplicative conversion for b supported on
// (M, 2M]. Requires T >= M^epsilon.
ConversionReport conversion_check(const ExpCoefficients& b, int M, double T, double epsilon = kDefaultEpsilon,
                                  double range_factor = 1.0);

// phase f with its Taylor coefficients at 0: taylor[k] = f^{(k)}(0) / k!
struct PhaseFunction {
    std::function<double(double)> f;
    std::vector<double> taylor;
};

// g(y) = 1 for |y| <= 1, 0 for |y| >= 2
double plateau_bump(double y);
// exp(-1/(1 - y^2)) on (-1, 1)
double standard_bump(double y);

struct LinearizeReport {
    double lhs = 0.0;       // int_{-1}^{1} |sum b_m e(m f(y))|^2 dy
    double rhs = 0.0;       // int q(y) |sum b_m e(m X y)|^2 dy
    double rhs_qk = 0.0;    // same with q_K
    double slack = 0.0;     // rhs - lhs
    double min_q = 0.0;     // min of q on the sample grid
    double domination = 0.0;  // min of q - |q_K| on the sample grid
    double decay_constant = 0.0;  // max (1+|y|)^4 (|q| + |y q'|) over |y| in [4, 40]
    int K = 0;
};

struct LinearWeight {
    std::vector<double> qk_samples;  // q_K on [-2, 2]
    double step = 0.0;
    double M1 = 0.0, M2 = 0.0;  // sup of |q_K| on |y| <= 1 and on 1 <= |y| <= 2

    double q_k(double y) const;
    double q(double y) const;  // e (M1 e^{-y^2} + M2 e^{-(y/2)^2})
    double q_prime(double y) const;
};

// q_K(y) = sum_{l <= K} (-1)^l / l! d^l/dy^l [g(y) r_K(y)^l] with r_K the Taylor
// polynomial of f/X - y through degree K+1, and its nonnegative majorant q. K <= 4.
LinearWeight linearize_weight(const PhaseFunction& f, double X, double Y, int K);
LinearizeReport check_linearization(const PhaseFunction& f, double X, double Y, int K, const ExpCoefficients& b);

struct OscReport {
    cplx numeric;
    cplx expansion;
    double err = 0.0;
    double constant = 0.0;  // err * Y^{K/2}
};
// I(lambda) = int g e^{i lambda f} against sum_{j <= K} I_j(lambda),
// I_j = (i lambda)^j / j! int g r_K^j e^{i lambda y} dy. f(0) = 0, f'(0) = 1.
OscReport osc_expand(const std::function<double(double)>& g, double lo, double hi, const PhaseFunction& f,
                     double lambda, int K, double Y);
cplx osc_integral(const std::function<double(double)>& g, double lo, double hi, const std::function<double(double)>& f,
                  double lambda);

struct MomentABReport {
    double value = 0.0;
    double bound = 0.0;       // (RSB + RDSA) T^eps sum |b_n|^2
    double fitted_constant = 0.0;
    double epsilon = kDefaultEpsilon;
};
// (RS/B) int g(v/T^eps) sum_{B < b <= 2B} sum*_{r mod b} |sum_{n <= M} b_n e(rn/b) e(vn/(ABD))|^2 dv
MomentABReport moment_ab(int A, int B, const FamilyTuple& fam, int M, const ExpCoefficients& b, double T,
                         double epsilon = kDefaultEpsilon);

struct SmallAReport {
    double fitted_constant = 0.0;  // max moment_ab / (Q^{1/2+eps} sum |a_n|^2)
    int cells = 0;
};
// Sweep over powers of two A, B with AB <= M T^eps/(SR) and A <= N T^eps/(RSD), N = Q^{1/2+eps}.
SmallAReport small_a_sweep(const FamilyTuple& fam, int M, double T, std::uint64_t seed,
                           double epsilon = kDefaultEpsilon);

}  // namespace gl3lab
