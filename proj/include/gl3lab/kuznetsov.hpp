#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "gl3lab/special_functions.hpp"

namespace gl3lab {

using cplx = std::complex<double>;

// P(r) = prod_{k=1}^{degree/2} (r^2 + ((2k-1)/2)^2) / S^2 and the weight exp(-((r-S)/D)^2) P(r).
struct SpectralWeight {
    double S = 30.0;
    double D = 3.0;
    int degree = 300;

    void validate() const;
    int factors() const { return degree / 2; }
};

// value * exp(log_scale)
struct ScaledValue {
    cplx value;
    double log_scale = 0.0;
    double error = 0.0;  // in the same units as value

    cplx to_complex() const;
};

LogValue p_poly(cplx r, const SpectralWeight& w);

// log max_r exp(-((r-S)/D)^2) P(r); every transform below is reported in this scale.
double weight_log_peak(const SpectralWeight& w);

// h_{m,n}(r) = sinh(r(pi + i log(m/n))) / sinh^2(pi r) P(r) (e^{pi r} E(r-S) - e^{-pi r} E(-r-S)),
// E(u) = exp(-(u/D)^2).
ScaledValue h_weight(double r, long m, long n, const SpectralWeight& w);
// |h / (2 E(r-S) P(r)) - (m/n)^{ir}| e^{2 pi r}, r > 0
double h_correction(double r, long m, long n, const SpectralWeight& w);

using BesselKernel = std::function<double(double r, double x)>;

// H(x) = (2i/pi) int_0^inf r h(r) (J_{2ir}(x) - J_{-2ir}(x)) / cosh(pi r) dr with a kernel
// returning (J_{2ir}(x) - J_{-2ir}(x)) / (i cosh(pi r)). error is the change under doubled density.
ScaledValue transform_H(double x, long m, long n, const SpectralWeight& w);
ScaledValue transform_H(double x, long m, long n, const SpectralWeight& w, const BesselKernel& kernel);

// H_0 = pi^{-2} int_R r tanh(pi r) h(r) dr
ScaledValue diagonal_H0(long m, long n, const SpectralWeight& w);

// k(r) = (4/pi^2) (1 + D r / S) P(S + D r) exp(-r^2) and its Fourier transform
// k-hat(y) = int k(r) e(-r y) dr, both in the weight_log_peak scale.
class KTransform {
public:
    explicit KTransform(const SpectralWeight& w);

    double k(double rho) const;
    cplx hat(double y) const;
    double log_scale() const { return log_scale_; }
    double rho_lo() const { return lo_; }
    double rho_hi() const { return hi_; }
    // |w| beyond which |k-hat(-w/pi)| < 1e-14 max |k-hat|, near the roundoff floor
    double v_cutoff() const { return v_cut_; }

private:
    SpectralWeight w_;
    double log_scale_ = 0.0, lo_ = 0.0, hi_ = 0.0, v_cut_ = 0.0;
    std::vector<double> nodes_, weights_;  // weights include k
};

// H_pm(4 pi sqrt(mn)/c) = S int k-hat(-v/pi) e^{2i S v / D} e(pm m e^{-v/D}/c) e(pm n e^{v/D}/c) dv
// over |v| <= v_cutoff (the adaptive cutoff when v_cutoff <= 0).
ScaledValue transform_H_pm(long c, long m, long n, const SpectralWeight& w, int sign, double v_cutoff = 0.0);
ScaledValue transform_H_pm(const KTransform& kt, long c, long m, long n, const SpectralWeight& w, int sign,
                           double v_cutoff = 0.0);

// max over y in [0, y_max] of |k-hat(y)| (1 + |y|)^6
double khat_decay_constant(const SpectralWeight& w, double y_max = 10.0);

struct KmnReport {
    double x = 0.0;
    cplx H, H_plus, H_minus;  // weight_log_peak scale
    double log_scale = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double quadrature_err = 0.0;
    double v_cutoff = 0.0;
    double H0_constant = 0.0;  // |H_0| / (S D), diagonal only
};

// H(4 pi sqrt(mn)/c) against H_+ + H_-. Requires |m - n| / m <= 1/R and S/D >= 2.
KmnReport verify_kmncalc(long m, long n, long c, const SpectralWeight& w, double R);

}  // namespace gl3lab
