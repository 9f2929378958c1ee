#pragma once

#include <complex>
#include <functional>

#include "gl3lab/quadrature.hpp"

namespace gl3lab {

using cplx = std::complex<double>;

// A nonzero complex number stored as log|z| and arg z; the exact zero is
// represented by log_magnitude = -inf.
struct LogValue {
    double log_magnitude = 0.0;
    double phase = 0.0;  // wrapped to (-pi, pi]

    static LogValue from_log(cplx logz);
    static LogValue from_value(cplx z);
    static LogValue zero();

    bool is_zero() const;
    cplx to_complex() const;
    LogValue operator*(const LogValue& o) const;
    LogValue operator/(const LogValue& o) const;
    LogValue pow(double e) const;
};

double wrap_phase(double phi);

// log Gamma(z) on the analytic branch that is real on the positive axis, cut
// along the negative axis. For Re z < -50 the reflection formula is used and
// the imaginary part is only correct modulo 2 pi.
cplx log_gamma(cplx z);
double log_gamma(double x);

// Riemann zeta by Euler-Maclaurin; s != 1.
cplx riemann_zeta(cplx s);

// K_{i tau}(x) for x > 0, and the scaled value e^{pi |tau| / 2} K_{i tau}(x).
double bessel_k_imag(double tau, double x);
double bessel_k_imag_scaled(double tau, double x);

// (J_{2ir}(x) - J_{-2ir}(x)) / (i cosh(pi r)). The quotient by i makes the
// value real for real r and x.
double bessel_j_kernel(double r, double x);

// g-hat(y) = int g(x) e(-x y) dx for g supported (or negligible) outside [a,b].
cplx fourier_hat(const std::function<double(double)>& g, double a, double b, double y, int nodes_per_unit = 24);

struct ContourSpec {
    double sigma = 0.0;
    double height_cutoff = 50.0;
    double node_density = 8.0;  // Gauss nodes per unit of height

    void validate() const;
};

// (1/2 pi i) int_{(sigma)} F(s) ds truncated to |Im s| <= height_cutoff.
cplx contour_integral(const std::function<cplx(cplx)>& F, const ContourSpec& spec);

}  // namespace gl3lab
