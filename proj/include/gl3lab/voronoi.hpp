#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "gl3lab/kloosterman.hpp"
#include "gl3lab/lfunctions.hpp"
#include "gl3lab/spectral_params.hpp"

namespace gl3lab {

using cplx = std::complex<double>;

// psi(x) = amplitude * exp(1 - 1/(1 - v^2) - envelope^2 v^2 / 2) with
// v = (2 log x - log(x_lo x_hi)) / log(x_hi / x_lo), zero outside (x_lo, x_hi).
// The Gaussian envelope in log x makes the Mellin transform decay like
// exp(-(t log(x_hi/x_lo) / (2 envelope))^2 / 2); envelope = 0 is the plain bump.
struct TestFunctionPsi {
    double x_lo = 1.0;
    double x_hi = 2.0;
    double envelope = 8.0;
    double amplitude = 1.0;
    int derivative_order_available = 4;

    void validate() const;
    double operator()(double x) const;
    // j-th derivative in x, j <= derivative_order_available
    double derivative(double x, int j) const;
};

enum class PrecisionMode { binary64, extended };

// psi-tilde(s) = int psi(x) x^s dx / x
cplx mellin_psi(const TestFunctionPsi& psi, cplx s);

// max over the sampled |t| <= t_max of |psi-tilde(sigma + it)| (1 + |t|)^4
double mellin_decay_constant(const TestFunctionPsi& psi, double sigma, double t_max);

// psi(x) = (1/2pi) int psi-tilde(sigma + it) x^{-sigma - it} dt, truncated at the adaptive height
struct MellinInverse {
    double value = 0.0;
    double height = 0.0;
};
MellinInverse mellin_inverse(const TestFunctionPsi& psi, double x, double sigma, double abs_tol = 1e-10);

struct VoronoiParams {
    LanglandsTriple triple;
    double sigma = 4.0;
    int k = 0;
    double T0 = 0.0;
    double U_scale = 1.0;  // M / (ABD)
    double V_scale = 0.0;  // <= 0: alpha - beta when T0 is alpha or beta, T when T0 is gamma

    void validate() const;
    double V() const;
};

// prod_j Gamma((1 + s + i a_j + k)/2) / Gamma((-s - i a_j + k)/2), as a log
cplx log_gamma_ratio(cplx s, const LanglandsTriple& t, int k);

// psi_k(x) = (1/2 pi i) int_(sigma) (pi^3 x)^{-s} gamma_ratio_k(s) psi-tilde(-s) ds on a tabulated
// contour; the height is where |integrand| falls below abs_tol * 1e-3 of its peak.
class VoronoiTransform {
public:
    VoronoiTransform(const LanglandsTriple& t, const TestFunctionPsi& psi, double sigma = -0.5,
                     double abs_tol = 1e-10, PrecisionMode mode = PrecisionMode::binary64);

    cplx psi_k(double x, int k) const;
    // Psi_pm = (psi_0 -+ i psi_1) / (2 pi^{3/2})
    std::pair<cplx, cplx> psi_pm(double x) const;
    double height() const { return height_; }
    double sigma() const { return sigma_; }

private:
    double sigma_ = -0.5, height_ = 0.0;
    PrecisionMode mode_ = PrecisionMode::binary64;
    std::vector<double> t_, w_;
    std::vector<cplx> f_[2];  // weight * gamma ratio * psi-tilde(-s) / 2 pi
};

// Single evaluations on the contour Re s = p.sigma.
cplx psi_k_transform(double x, const VoronoiParams& p, const TestFunctionPsi& psi);
std::pair<cplx, cplx> psi_pm(double x, const VoronoiParams& p, const TestFunctionPsi& psi);

struct VoronoiReport {
    cplx lhs, rhs;
    double rel_err = 0.0;
    double tail_bound = 0.0;
    double height = 0.0;
    long n2_cap = 0;
    long terms = 0;
    bool degenerate_c1 = false;  // c = 1 read with d-bar = 0
};

// sum_n A(m,n) e(n dbar/c) psi(n) against
// c sum_{n1 | cm} sum_{n2 <= cap} A(n2,n1)/(n1 n2) S(md, +-n2; mc/n1) Psi_pm(n2 n1^2 / (c^3 m)).
// The tail bound assumes |A(n2,n1)| <= d_3(n2) d_3(n1) and |S(a,b;q)| <= q and sums past the cap
// until |Psi_pm| has stayed below 1e-12 for 200 consecutive n2.
VoronoiReport verify_voronoi(const GL3CoefficientTable& table, const TestFunctionPsi& psi, long m, long d, long c,
                             long n2_cap, PrecisionMode mode = PrecisionMode::binary64);

// eta(y) = (y/M)^{-1/2} gamma(y/M); gamma is a TestFunctionPsi in units of M
struct EtaWeight {
    double M = 100.0;
    TestFunctionPsi gamma{0.5, 3.0, 8.0};

    double operator()(double y) const;
};

// Phi_k(x, v) = (1/2 pi i) int_(sigma) (pi^3 x)^{-s} gamma_ratio_k(s) phi-tilde_{T0}(-s) ds,
// phi-tilde_{T0}(-sigma - it) = int eta(y) y^{-i T0} e(v y U / M) y^{-sigma - it} dy / y.
// The value does not depend on the contour sigma > -1; large sigma is ill-conditioned in binary64,
// so evaluation uses `contour` and p.sigma enters only the truncation bound.
cplx phi_k(double x, double v, const VoronoiParams& p, const EtaWeight& eta, double contour = -0.5);
// the same after s -> s - i T0: the T0-free phi-tilde, the shifted triple and (pi^3 x)^{i T0}
cplx phi_k_shifted(double x, double v, const VoronoiParams& p, const EtaWeight& eta, double contour = -0.5);

// pi^{-3/2 - 3 sigma - 3it} gamma_ratio_k(sigma + it) for the triple shifted by -T0;
// unimodular at sigma = -1/2.
cplx gamma_unitary_factor(double t, double sigma, const LanglandsTriple& triple, double T0, int k);

struct PhiTruncationReport {
    std::vector<double> xs;
    std::vector<double> ratios;  // |Phi_k| / (U (U+T) (U+V) T^eps / (x M))^sigma
    double constant = 0.0;       // max ratio
    double epsilon = 0.1;
};
PhiTruncationReport phi_truncation_fit(const VoronoiParams& p, const EtaWeight& eta, double v,
                                       const std::vector<double>& xs, double epsilon = 0.1);

struct PhiBilinearReport {
    double lhs = 0.0;  // int g(v / T^eps) |sum b_m Phi_k(m/c, v)|^2 dv
    double rhs = 0.0;  // (M T^eps / U) int_{|t| <= T^eps U} |sum b_m m^{i T0} sqrt(m/c) m^{it}|^2 dt
    double ratio = 0.0;
    double epsilon = 0.1;
};
// g is the bump exp(-1/(1 - y^2)); Phi_k is taken on sigma = -1/2.
PhiBilinearReport phi_bilinear_check(const ExpCoefficients& b, double c, const VoronoiParams& p,
                                     const EtaWeight& eta, double epsilon = 0.1);

}  // namespace gl3lab
