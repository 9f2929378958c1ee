#include "gl3lab/special_functions.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace gl3lab {

namespace {

constexpr double pi = std::numbers::pi;

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr std::array<double, 10> stirling_coeffs = {
    1.0 / 12.0,          -1.0 / 360.0,          1.0 / 1260.0,       -1.0 / 1680.0,        1.0 / 1188.0,
    -691.0 / 360360.0,   1.0 / 156.0,           -3617.0 / 122400.0, 43867.0 / 244188.0,   -174611.0 / 125400.0};

// B_{2k} / (2k)!, k = 1..10
constexpr std::array<double, 10> euler_maclaurin_coeffs = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0};

cplx log_gamma_right(cplx z) {
    // Re z >= 1/2 here; shift until Stirling is accurate.
    cplx shift = 0.0;
    while (std::abs(z) < 18.0) {
        shift += std::log(z);
        z += 1.0;
    }
    cplx zinv = 1.0 / z;
    cplx zinv2 = zinv * zinv;
    cplx series = 0.0;
    cplx pw = zinv;
    for (double c : stirling_coeffs) {
        series += c * pw;
        pw *= zinv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * pi) + series - shift;
}

// log sin(w), stable for large |Im w|; correct modulo 2 pi i.
cplx log_sin(cplx w) {
    double b = w.imag();
    if (std::abs(b) < 1.0) return std::log(std::sin(w));
    if (b < 0) return std::conj(log_sin(std::conj(w)));
    const cplx I(0.0, 1.0);
    cplx e = std::exp(2.0 * I * w);  // |e| = exp(-2b) < 1
    return -I * w + std::log(1.0 - e) + std::log(0.5) + I * (pi / 2);
}

}  // namespace

double wrap_phase(double phi) {
    double r = std::remainder(phi, 2 * pi);
    if (r <= -pi) r += 2 * pi;
    return r;
}

LogValue LogValue::from_log(cplx logz) { return {logz.real(), wrap_phase(logz.imag())}; }

LogValue LogValue::from_value(cplx z) {
    if (z == cplx(0.0)) return zero();
    return {std::log(std::abs(z)), std::arg(z)};
}

LogValue LogValue::zero() { return {-std::numeric_limits<double>::infinity(), 0.0}; }

bool LogValue::is_zero() const { return std::isinf(log_magnitude) && log_magnitude < 0; }

cplx LogValue::to_complex() const {
    if (is_zero()) return 0.0;
    return std::polar(std::exp(log_magnitude), phase);
}

LogValue LogValue::operator*(const LogValue& o) const {
    if (is_zero() || o.is_zero()) return zero();
    return {log_magnitude + o.log_magnitude, wrap_phase(phase + o.phase)};
}

LogValue LogValue::operator/(const LogValue& o) const {
    if (o.is_zero()) throw std::domain_error("division by zero LogValue");
    if (is_zero()) return zero();
    return {log_magnitude - o.log_magnitude, wrap_phase(phase - o.phase)};
}

LogValue LogValue::pow(double e) const {
    if (is_zero()) return e > 0 ? zero() : throw std::domain_error("zero to nonpositive power");
    return {e * log_magnitude, wrap_phase(e * phase)};
}

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw UsageError("quadrature tolerances must be positive");
    if (max_refinements < 1) throw UsageError("max_refinements must be at least 1");
}

const GaussRule& gauss_legendre_rule(int order) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it != cache.end()) return *it->second;
    auto rule = std::make_unique<GaussRule>();
    rule->nodes.resize(order);
    rule->weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (order == 1) p0 = 1.0, p1 = x;
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= order; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        rule->nodes[i] = x;
        rule->weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    const GaussRule& ref = *rule;
    cache.emplace(order, std::move(rule));
    return ref;
}

cplx log_gamma(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw PoleAtNonpositiveInteger("log_gamma pole at " + std::to_string(z.real()));
    if (z.real() >= 0.5) return log_gamma_right(z);
    if (z.real() >= -50.0) {
        // upward recurrence keeps the analytic branch off the negative axis
        cplx shift = 0.0;
        while (z.real() < 0.5) {
            shift += std::log(z);
            z += 1.0;
        }
        return log_gamma_right(z) - shift;
    }
    return std::log(pi) - log_sin(pi * z) - log_gamma_right(1.0 - z);
}

double log_gamma(double x) {
    if (x > 0) return log_gamma_right(cplx(x, 0.0)).real();
    return log_gamma(cplx(x, 0.0)).real();
}

cplx riemann_zeta(cplx s) {
    if (s == cplx(1.0)) throw PoleAtNonpositiveInteger("zeta pole at s = 1");
    int N = 20 + static_cast<int>(std::ceil(std::abs(s)));
    CompensatedSum<cplx> acc;
    for (int n = 1; n < N; ++n) acc.add(std::exp(-s * std::log(static_cast<double>(n))));
    double logN = std::log(static_cast<double>(N));
    cplx Ns = std::exp(-s * logN);
    acc.add(Ns * static_cast<double>(N) / (s - 1.0));
    acc.add(0.5 * Ns);
    cplx rising = s;  // s (s+1) ... (s+2k-2)
    cplx Npow = Ns / static_cast<double>(N);
    for (size_t k = 0; k < euler_maclaurin_coeffs.size(); ++k) {
        acc.add(euler_maclaurin_coeffs[k] * rising * Npow);
        rising *= (s + (2.0 * k + 1.0)) * (s + (2.0 * k + 2.0));
        Npow /= static_cast<double>(N) * N;
    }
    return acc.value();
}

double bessel_k_imag_scaled(double tau, double x) {
    if (!(x > 0)) throw NonPositiveArgument("bessel_k_imag needs x > 0");
    tau = std::abs(tau);
    // Shift the line of integration to Im t = theta; the exponential factor
    // e^{-tau theta} then carries almost all of e^{-pi tau / 2}.
    // Heights: the saddle asin(tau/x) when tau < x, otherwise just under pi/2.
    double theta = 0.5 * pi * tau / (tau + 1.0);
    if (tau < x) theta = std::min(theta, std::asin(tau / x));
    double delta = 0.5 * pi - theta;
    double ct = std::cos(theta), st = std::sin(theta);
    // Step limited by the strip half-width delta and by the growth e^{x eta^2 / 2}
    // of the integrand when the line is moved off the saddle.
    double h = std::min(2 * pi * 0.9 * delta / 42.0, 0.6 / std::sqrt(x));
    double tmax = std::acosh(1.0 + 45.0 / (x * ct));
    int n = static_cast<int>(std::ceil(tmax / h));
    CompensatedSum<double> acc;
    double peak = x * ct;
    for (int k = -n; k <= n; ++k) {
        double t = k * h;
        double mag = std::exp(-(x * std::cosh(t) * ct - peak));
        acc.add(mag * std::cos(tau * t - x * std::sinh(t) * st));
    }
    return 0.5 * h * acc.value() * std::exp(tau * delta - peak);
}

double bessel_k_imag(double tau, double x) {
    return bessel_k_imag_scaled(tau, x) * std::exp(-0.5 * pi * std::abs(tau));
}

double bessel_j_kernel(double r, double x) {
    if (!(x > 0)) throw NonPositiveArgument("bessel_j_kernel needs x > 0");
    if (r == 0.0) return 0.0;
    double sgn = r < 0 ? -1.0 : 1.0;
    r = std::abs(r);
    const cplx I(0.0, 1.0);
    // I = Re int_0^inf e^{i x cosh v} cos(2 r v) dv along 0 -> V0 -> V0 + i phi -> inf + i phi.
    auto f = [&](cplx v) { return std::exp(I * x * std::cosh(v)) * std::cos(2.0 * r * v); };
    double v0 = std::asinh(pi * r / x) + 0.5;
    double phi = pi / 4;
    double chv0 = std::cosh(v0);

    int p1 = static_cast<int>(std::ceil((x * (chv0 - 1.0) + 2 * r * v0) / pi)) + 4;
    cplx seg1 = gauss_panels<cplx>([&](double v) { return f(cplx(v, 0.0)); }, 0.0, v0, p1);

    int p2 = static_cast<int>(std::ceil((x * chv0 * phi + 2 * r * phi) / pi)) + 4;
    cplx seg2 = I * gauss_panels<cplx>([&](double eta) { return f(cplx(v0, eta)); }, 0.0, phi, p2);

    double tend = std::max(v0 + 1.0, std::asinh((46.0 + 2 * r * phi) / (x * std::sin(phi))));
    int p3 = static_cast<int>(std::ceil((x * std::cosh(tend) * std::cos(phi) + 2 * r * (tend - v0)) / pi)) + 4;
    cplx seg3 = gauss_panels<cplx>([&](double t) { return f(cplx(t, phi)); }, v0, tend, p3);

    double integral = (seg1 + seg2 + seg3).real();
    return -sgn * std::tanh(pi * r) * (4.0 / pi) * integral;
}

cplx fourier_hat(const std::function<double(double)>& g, double a, double b, double y, int nodes_per_unit) {
    const cplx I(0.0, 1.0);
    double len = b - a;
    int panels = std::max(8, static_cast<int>(std::ceil(len * (nodes_per_unit / 20.0 + 2.0 * std::abs(y)))));
    return gauss_panels<cplx>([&](double x) { return g(x) * std::exp(-2.0 * pi * I * x * y); }, a, b, panels);
}

void ContourSpec::validate() const {
    if (!(height_cutoff > 0)) throw UsageError("height_cutoff must be positive");
    if (!(node_density > 0)) throw UsageError("node_density must be positive");
}

cplx contour_integral(const std::function<cplx(cplx)>& F, const ContourSpec& spec) {
    spec.validate();
    int panels = std::max(4, static_cast<int>(std::ceil(2 * spec.height_cutoff * spec.node_density / 20.0)));
    cplx v = gauss_panels<cplx>([&](double t) { return F(cplx(spec.sigma, t)); }, -spec.height_cutoff,
                                spec.height_cutoff, panels);
    return v / (2 * pi);
}

}  // namespace gl3lab
