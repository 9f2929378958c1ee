#include "gl3lab/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "gl3lab/errors.hpp"
#include "gl3lab/lfunctions.hpp"
#include "gl3lab/quadrature.hpp"
#include "gl3lab/special_functions.hpp"

namespace gl3lab {

namespace {

constexpr double pi = std::numbers::pi;

// int_{-L}^{L} e^{i w y} dy
double sinc_kernel(double w, double L) {
    if (std::abs(w * L) < 1e-8) return 2 * L * (1 - w * w * L * L / 6);
    return 2 * std::sin(w * L) / w;
}

// sum_{lo < b <= hi} c_b(d)
double ramanujan_total(long d, int lo, int hi) {
    double s = 0.0;
    for (int b = lo + 1; b <= hi; ++b) s += ramanujan_sum(d, b).real();
    return s;
}

double norm2(const std::vector<cplx>& a) {
    double s = 0.0;
    for (const cplx& x : a) s += std::norm(x);
    return s;
}

std::vector<cplx> dense(const ExpCoefficients& b) {
    std::vector<cplx> out(b.support_max + 1);
    for (const auto& [m, v] : b.values) out[m] = v;
    return out;
}

// sum_{m,n} a_m conj(a_n) K(m, n)
template <class Kernel>
double quadratic_form(const std::vector<cplx>& a, Kernel&& K) {
    CompensatedSum<double> acc;
    const int N = static_cast<int>(a.size()) - 1;
    for (int m = 1; m <= N; ++m) {
        if (a[m] == cplx{}) continue;
        for (int n = 1; n <= N; ++n) {
            if (a[n] == cplx{}) continue;
            acc.add((a[m] * std::conj(a[n])).real() * K(m, n));
        }
    }
    return acc.value();
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

double poly_deriv_eval(const std::vector<double>& c, int k, double y) {
    double s = 0.0;
    for (int i = static_cast<int>(c.size()) - 1; i >= k; --i) {
        double f = 1.0;
        for (int j = 0; j < k; ++j) f *= i - j;
        s = s * y + c[i] * f;
    }
    return s;
}

double poly_eval(const std::vector<double>& c, double y) { return poly_deriv_eval(c, 0, y); }

// g^{(i)}(y) for the plateau bump by central differences, i <= 4
double bump_derivative(int i, double y) {
    const double h = 2e-3;
    auto g = [](double x) { return plateau_bump(x); };
    switch (i) {
        case 0: return g(y);
        case 1: return (g(y - 2 * h) - 8 * g(y - h) + 8 * g(y + h) - g(y + 2 * h)) / (12 * h);
        case 2: return (-g(y - 2 * h) + 16 * g(y - h) - 30 * g(y) + 16 * g(y + h) - g(y + 2 * h)) / (12 * h * h);
        case 3: return (g(y + 2 * h) - 2 * g(y + h) + 2 * g(y - h) - g(y - 2 * h)) / (2 * h * h * h);
        default: return (g(y + 2 * h) - 4 * g(y + h) + 6 * g(y) - 4 * g(y - h) + g(y - 2 * h)) / (h * h * h * h);
    }
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void require_phase(const PhaseFunction& f, double slope) {
    if (f.taylor.size() < 2) throw HypothesisViolated("phase needs Taylor coefficients through degree 1");
    const double h = 1e-5;
    double d = (f.f(h) - f.f(-h)) / (2 * h);
    double scale = std::max(1.0, std::abs(slope));
    if (std::abs(f.f(0.0)) > 1e-9 * scale || std::abs(f.taylor[0]) > 1e-12 * scale)
        throw HypothesisViolated("phase must vanish at 0");
    if (std::abs(d - slope) > 1e-6 * scale || std::abs(f.taylor[1] - slope) > 1e-12 * scale)
        throw HypothesisViolated("phase has the wrong slope at 0");
}

// Taylor polynomial of f/X - y from degree 2 through K+1
std::vector<double> remainder_poly(const PhaseFunction& f, double X, int K) {
    std::vector<double> r(K + 2, 0.0);
    for (int j = 2; j <= K + 1 && j < static_cast<int>(f.taylor.size()); ++j) r[j] = f.taylor[j] / X;
    return r;
}

}  // namespace

void SieveTrialConfig::validate() const {
    if (B < 1 || N < 1 || trials < 1 || !(T > 0) || !(C > 0))
        throw UsageError("sieve configuration needs positive B, T, N, C and trials >= 1");
}

std::vector<cplx> trial_coefficients(int N, std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<cplx> a(N + 1);
    for (int n = 1; n <= N; ++n) {
        double u1 = 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        a[n] = std::polar(std::sqrt(-std::log(u1)), 2 * pi * u2);
    }
    return a;
}

double gallagher_lhs(const std::vector<cplx>& a, int B, double T, double C, SieveVariant v) {
    const int N = static_cast<int>(a.size()) - 1;
    std::vector<double> R(N);
    for (int d = 0; d < N; ++d) R[d] = ramanujan_total(d, 0, B);
    // sum over b and x of e(x(m-n)/b) is the Ramanujan total at m - n
    return quadratic_form(a, [&](int m, int n) {
        double w = v == SieveVariant::multiplicative ? std::log(static_cast<double>(m) / n) : 2 * pi * (m - n) / C;
        return R[std::abs(m - n)] * sinc_kernel(w, T);
    });
}

double gallagher_rhs(const std::vector<cplx>& a, int B, double T, double C, SieveVariant v) {
    double len = v == SieveVariant::multiplicative ? static_cast<double>(a.size() - 1) : C;
    return (static_cast<double>(B) * B * T + len) * norm2(a);
}

SieveReport gallagher_check(const SieveTrialConfig& cfg, SieveVariant v) {
    cfg.validate();
    std::vector<double> ratios(cfg.trials);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int t = next++; t < cfg.trials; t = next++) {
            auto a = trial_coefficients(cfg.N, cfg.seed, t);
            ratios[t] = gallagher_lhs(a, cfg.B, cfg.T, cfg.C, v) / gallagher_rhs(a, cfg.B, cfg.T, cfg.C, v);
        }
    };
    unsigned n_threads = std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    SieveReport rep;
    rep.seed = cfg.seed;
    rep.trials = cfg.trials;
    double total = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
        total += ratios[t];
        if (ratios[t] > rep.max_ratio) rep.max_ratio = ratios[t], rep.worst_trial = t;
    }
    rep.mean_ratio = total / cfg.trials;
    return rep;
}

ConversionReport conversion_check(const ExpCoefficients& b, int M, double T, double epsilon, double range_factor) {
    if (M < 1) throw HypothesisViolated("conversion_check needs M >= 1");
    if (T < std::pow(static_cast<double>(M), epsilon))
        throw HypothesisViolated("conversion_check needs T >= M^epsilon");
    for (const auto& [m, v] : b.values)
        if (v != cplx{} && (m <= M || m > 2 * M)) throw HypothesisViolated("coefficients must live on (M, 2M]");
    auto a = dense(b);
    auto mult = [&](double L) {
        return quadratic_form(a, [&](int m, int n) { return sinc_kernel(std::log(double(m) / n), L); });
    };
    auto add = [&](double L) {
        return quadratic_form(a, [&](int m, int n) { return sinc_kernel(2 * pi * (m - n) / double(M), L); });
    };
    ConversionReport rep;
    rep.epsilon = epsilon;
    rep.mult_lhs = mult(T);
    rep.mult_rhs = add(range_factor * T);
    rep.add_lhs = add(T);
    rep.add_rhs = mult(range_factor * T);
    rep.mult_ratio = rep.mult_rhs > 0 ? rep.mult_lhs / rep.mult_rhs : 0.0;
    rep.add_ratio = rep.add_rhs > 0 ? rep.add_lhs / rep.add_rhs : 0.0;
    return rep;
}

double plateau_bump(double y) { return smooth_step_down(std::abs(y) - 1.0); }

double standard_bump(double y) {
    if (std::abs(y) >= 1) return 0.0;
    return std::exp(-1.0 / (1 - y * y));
}

double LinearWeight::q(double y) const {
    return std::numbers::e * (M1 * std::exp(-y * y) + M2 * std::exp(-0.25 * y * y));
}

double LinearWeight::q_prime(double y) const {
    return std::numbers::e * (-2 * y * M1 * std::exp(-y * y) - 0.5 * y * M2 * std::exp(-0.25 * y * y));
}

double LinearWeight::q_k(double y) const {
    if (std::abs(y) >= 2) return 0.0;
    double pos = (y + 2) / step;
    size_t i = std::min(static_cast<size_t>(pos), qk_samples.size() - 2);
    double f = pos - i;
    return (1 - f) * qk_samples[i] + f * qk_samples[i + 1];
}

LinearWeight linearize_weight(const PhaseFunction& f, double X, double Y, int K) {
    if (K < 0 || K > 4) throw HypothesisViolated("linearize_weight supports 0 <= K <= 4");
    if (!(X > 0) || !(Y >= 1)) throw HypothesisViolated("linearize_weight needs X > 0 and Y >= 1");
    require_phase(f, X);
    auto r = remainder_poly(f, X, K);
    // powers r^l
    std::vector<std::vector<double>> rp{{1.0}};
    for (int l = 1; l <= K; ++l) rp.push_back(poly_mul(rp.back(), r));

    LinearWeight w;
    const int n = 2048;
    w.step = 4.0 / n;
    w.qk_samples.resize(n + 1);
    double fact = 1.0;
    std::vector<double> inv_fact(K + 1);
    for (int l = 0; l <= K; ++l) {
        if (l > 0) fact *= l;
        inv_fact[l] = 1.0 / fact;
    }
    for (int i = 0; i <= n; ++i) {
        double y = -2 + i * w.step;
        double acc = 0.0;
        for (int l = 0; l <= K; ++l) {
            double d = 0.0;
            for (int k = 0; k <= l; ++k) d += binom(l, k) * bump_derivative(k, y) * poly_deriv_eval(rp[l], l - k, y);
            acc += (l % 2 ? -1.0 : 1.0) * inv_fact[l] * d;
        }
        w.qk_samples[i] = acc;
        double a = std::abs(acc);
        if (std::abs(y) <= 1) w.M1 = std::max(w.M1, a);
        if (std::abs(y) >= 1) w.M2 = std::max(w.M2, a);
    }
    return w;
}

LinearizeReport check_linearization(const PhaseFunction& f, double X, double Y, int K, const ExpCoefficients& b) {
    LinearWeight w = linearize_weight(f, X, Y, K);
    auto a = dense(b);
    const int N = b.support_max;
    auto sum_at = [&](double phase_per_m) {
        cplx s{};
        for (int m = 1; m <= N; ++m)
            if (a[m] != cplx{}) s += a[m] * std::polar(1.0, 2 * pi * m * phase_per_m);
        return std::norm(s);
    };
    LinearizeReport rep;
    rep.K = K;
    int panels = std::max(50, static_cast<int>(4 * N * X));
    rep.lhs = gauss_panels<double>([&](double y) { return sum_at(f.f(y)); }, -1.0, 1.0, panels);
    const double L = 16.0;
    rep.rhs = gauss_panels<double>([&](double y) { return w.q(y) * sum_at(X * y); }, -L, L,
                                   static_cast<int>(panels * L));
    rep.rhs_qk = gauss_panels<double>([&](double y) { return w.q_k(y) * sum_at(X * y); }, -2.0, 2.0, 2 * panels);
    rep.slack = rep.rhs - rep.lhs;
    rep.min_q = std::numeric_limits<double>::infinity();
    rep.domination = std::numeric_limits<double>::infinity();
    for (double y = -2; y <= 2; y += 1.0 / 256) {
        rep.min_q = std::min(rep.min_q, w.q(y));
        rep.domination = std::min(rep.domination, w.q(y) - std::abs(w.q_k(y)));
    }
    for (double y = 4; y <= 40; y += 0.25)
        rep.decay_constant =
            std::max(rep.decay_constant, std::pow(1 + y, 4) * (std::abs(w.q(y)) + std::abs(y * w.q_prime(y))));
    return rep;
}

cplx osc_integral(const std::function<double(double)>& g, double lo, double hi, const std::function<double(double)>& f,
                  double lambda) {
    int panels = std::max(16, static_cast<int>(std::abs(lambda) * (hi - lo)));
    return gauss_panels<cplx>([&](double y) { return g(y) * std::polar(1.0, lambda * f(y)); }, lo, hi, panels);
}

OscReport osc_expand(const std::function<double(double)>& g, double lo, double hi, const PhaseFunction& f,
                     double lambda, int K, double Y) {
    if (K < 0) throw HypothesisViolated("K must be nonnegative");
    if (!(Y >= 1)) throw HypothesisViolated("osc_expand needs Y >= 1");
    require_phase(f, 1.0);
    OscReport rep;
    rep.numeric = osc_integral(g, lo, hi, f.f, lambda);
    auto r = remainder_poly(f, 1.0, K);
    int panels = std::max(16, static_cast<int>(std::abs(lambda) * (hi - lo)));
    cplx total{};
    cplx factor = 1.0;
    for (int j = 0; j <= K; ++j) {
        if (j > 0) factor *= cplx(0, lambda) / static_cast<double>(j);
        cplx Ij = gauss_panels<cplx>(
            [&](double y) { return g(y) * std::pow(poly_eval(r, y), j) * std::polar(1.0, lambda * y); }, lo, hi,
            panels);
        total += factor * Ij;
    }
    rep.expansion = total;
    rep.err = std::abs(rep.numeric - rep.expansion);
    rep.constant = rep.err * std::pow(Y, 0.5 * K);
    return rep;
}

MomentABReport moment_ab(int A, int B, const FamilyTuple& fam, int M, const ExpCoefficients& b, double T,
                         double epsilon) {
    if (A < 1 || B < 1 || M < 1) throw HypothesisViolated("moment_ab needs A, B, M >= 1");
    const double Te = std::pow(T, epsilon);
    const double R = fam.r, S = fam.s, D = fam.d;
    if (static_cast<double>(A) * B > M * Te / (S * R) * (1 + 1e-12))
        throw HypothesisViolated("AB exceeds M T^eps / (SR)");
    auto a = dense(b);
    if (static_cast<int>(a.size()) - 1 > M) a.resize(M + 1);
    const int N = static_cast<int>(a.size()) - 1;
    std::vector<double> G(std::max(N, 1)), Rt(std::max(N, 1));
    for (int d = 0; d < N; ++d) {
        double xi = Te * d / (static_cast<double>(A) * B * D);
        G[d] = Te * fourier_hat(plateau_bump, -2.0, 2.0, xi).real();
        Rt[d] = ramanujan_total(d, B, 2 * B);
    }
    MomentABReport rep;
    rep.epsilon = epsilon;
    rep.value = R * S / B * quadratic_form(a, [&](int m, int n) {
                    int d = std::abs(m - n);
                    return G[d] * Rt[d];
                });
    rep.bound = (R * S * B + R * D * S * A) * Te * norm2(a);
    rep.fitted_constant = rep.bound > 0 ? rep.value / rep.bound : 0.0;
    return rep;
}

SmallAReport small_a_sweep(const FamilyTuple& fam, int M, double T, std::uint64_t seed, double epsilon) {
    const double Te = std::pow(T, epsilon);
    const double N = std::pow(fam.q, 0.5 + epsilon);
    const double a_cap = N * Te / (fam.r * fam.s * fam.d);
    const double ab_cap = M * Te / (fam.s * fam.r);
    SmallAReport rep;
    auto coeffs = random_coefficients(M, seed);
    double mass = 0.0;
    for (const auto& [m, v] : coeffs.values) mass += std::norm(v);
    for (int A = 1; A <= a_cap && A <= ab_cap; A *= 2)
        for (int B = 1; static_cast<double>(A) * B <= ab_cap; B *= 2) {
            auto r = moment_ab(A, B, fam, M, coeffs, T, epsilon);
            rep.fitted_constant = std::max(rep.fitted_constant, r.value / (std::pow(fam.q, 0.5 + epsilon) * mass));
            ++rep.cells;
        }
    return rep;
}

}  // namespace gl3lab
