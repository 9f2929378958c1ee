#include "gl3lab/lfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gl3lab/errors.hpp"
#include "gl3lab/special_functions.hpp"

namespace gl3lab {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

// lambda(p^k) for k = 0..kmax
std::vector<double> prime_power_lambdas(double lp, int kmax) {
    std::vector<double> out(kmax + 1);
    out[0] = 1.0;
    if (kmax >= 1) out[1] = lp;
    for (int k = 2; k <= kmax; ++k) out[k] = lp * out[k - 1] - out[k - 2];
    return out;
}

// Schur polynomials s_{(a+b, b, 0)} at {x^2, 1, x^{-2}} for a + b <= kmax, indexed [a][b].
std::vector<std::vector<double>> sym2_local(double lp, int kmax) {
    double e = lp * lp - 1.0;  // e1 = e2, e3 = 1
    std::vector<double> h(kmax + 2);
    h[0] = 1.0;
    for (int k = 1; k <= kmax + 1; ++k) {
        double v = e * h[k - 1];
        if (k >= 2) v -= e * h[k - 2];
        if (k >= 3) v += h[k - 3];
        h[k] = v;
    }
    std::vector<std::vector<double>> out(kmax + 1, std::vector<double>(kmax + 1, 0.0));
    for (int a = 0; a <= kmax; ++a)
        for (int b = 0; a + b <= kmax; ++b) {
            int l1 = a + b, l2 = b;
            out[a][b] = h[l1] * h[l2] - (l2 >= 1 ? h[l1 + 1] * h[l2 - 1] : 0.0);
        }
    return out;
}

int exponent_of(long p, long& n) {
    int k = 0;
    while (n % p == 0) {
        n /= p;
        ++k;
    }
    return k;
}

}  // namespace

long MaassFormGL2::p_max() const { return lambda_p.empty() ? 1 : lambda_p.rbegin()->first; }

std::vector<long> MaassFormGL2::sanity_warnings() const {
    std::vector<long> out;
    for (const auto& [p, l] : lambda_p)
        if (std::abs(l) > 2.0 * std::pow(static_cast<double>(p), 7.0 / 64.0) + 0.01) out.push_back(p);
    return out;
}

std::vector<std::pair<long, int>> factorize(long n) {
    if (n < 1) throw ZeroIndex("factorize needs n >= 1");
    std::vector<std::pair<long, int>> out;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) out.push_back({p, exponent_of(p, n)});
    if (n > 1) out.push_back({n, 1});
    return out;
}

int mobius(long n) {
    int mu = 1;
    for (auto [p, k] : factorize(n)) {
        if (k > 1) return 0;
        mu = -mu;
    }
    return mu;
}

double hecke_extend(const MaassFormGL2& f, long n) {
    double v = 1.0;
    for (auto [p, k] : factorize(n)) {
        auto it = f.lambda_p.find(p);
        if (it == f.lambda_p.end())
            throw PrimeOutOfRange("no eigenvalue for p = " + std::to_string(p) + " in " + f.source_id);
        v *= prime_power_lambdas(it->second, k)[k];
    }
    return v;
}

GL3CoefficientTable::GL3CoefficientTable(long n_max, const LanglandsTriple& triple) : n_max_(n_max), triple_(triple) {
    if (n_max < 1) throw CoverageError("table needs n_max >= 1");
    rows_.resize(n_max + 1);
    for (long m = 1; m <= n_max; ++m) rows_[m].assign(n_max / m + 1, cplx{});
}

cplx GL3CoefficientTable::operator()(long m, long n) const {
    if (!covers(m, n))
        throw CoverageError("A(" + std::to_string(m) + "," + std::to_string(n) + ") outside mn <= " +
                            std::to_string(n_max_));
    return rows_[m][n];
}

void GL3CoefficientTable::set(long m, long n, cplx v) {
    if (!covers(m, n)) throw CoverageError("set outside table range");
    rows_[m][n] = v;
}

GL3CoefficientTable sym2_coeffs(const MaassFormGL2& f, long n_max) {
    GL3CoefficientTable table(n_max, {2 * f.t_j, 0.0, -2 * f.t_j});
    // smallest prime factor sieve
    std::vector<long> spf(n_max + 1, 0);
    for (long i = 2; i <= n_max; ++i)
        if (spf[i] == 0)
            for (long j = i; j <= n_max; j += i)
                if (spf[j] == 0) spf[j] = i;
    std::map<long, std::vector<std::vector<double>>> local;
    for (long p = 2; p <= n_max; ++p) {
        if (spf[p] != p) continue;
        auto it = f.lambda_p.find(p);
        if (it == f.lambda_p.end())
            throw PrimeOutOfRange("sym2 table to " + std::to_string(n_max) + " needs lambda(" + std::to_string(p) +
                                  ")");
        int kmax = 0;
        for (long q = p; q <= n_max; q *= p) ++kmax;
        local[p] = sym2_local(it->second, kmax);
    }
    auto exps = [&](long x) {
        std::map<long, int> e;
        while (x > 1) {
            long p = spf[x];
            x /= p;
            ++e[p];
        }
        return e;
    };
    for (long m = 1; m <= n_max; ++m) {
        auto em = exps(m);
        for (long n = 1; m * n <= n_max; ++n) {
            auto en = exps(n);
            for (auto [p, k] : em) en.try_emplace(p, 0);
            double v = 1.0;
            for (auto [p, b] : en) {
                auto ia = em.find(p);
                int a = ia == em.end() ? 0 : ia->second;
                v *= local.at(p)[a][b];
            }
            table.set(m, n, v);
        }
    }
    return table;
}

GL3CoefficientTable delta_table(long n_max, const LanglandsTriple& triple) {
    GL3CoefficientTable t(n_max, triple);
    t.set(1, 1, 1.0);
    return t;
}

HeckeResidual gl3_hecke_check(const GL3CoefficientTable& table, long m, long n) {
    long g = std::gcd(m, n);
    cplx with{}, without{};
    for (long d = 1; d <= g; ++d) {
        if (g % d) continue;
        cplx term = table(m / d, 1) * table(1, n / d);
        with += static_cast<double>(mobius(d)) * term;
        without += term;
    }
    cplx a = table(m, n);
    return {std::abs(a - with), std::abs(a - without)};
}

double molteni_ratio(const GL3CoefficientTable& table, const std::vector<long>& xs) {
    double a11 = std::norm(table.a11());
    if (a11 == 0.0) throw HypothesisViolated("A(1,1) = 0");
    double worst = 0.0;
    for (long x : xs) {
        if (x > table.n_max()) throw CoverageError("molteni_ratio beyond table range");
        double s = 0.0;
        for (long m = 1; m <= x; ++m)
            for (long n = 1; m * n <= x; ++n) s += std::norm(table(m, n));
        worst = std::max(worst, s / (a11 * x));
    }
    return worst;
}

cplx eisenstein_lambda(long n, cplx s) {
    if (n == 0) throw ZeroIndex("eisenstein_lambda at n = 0");
    n = std::abs(n);
    cplx acc{};
    for (long a = 1; a <= n; ++a)
        if (n % a == 0) acc += std::exp((s - 0.5) * std::log(static_cast<double>(a) / (n / a)));
    return acc;
}

cplx eisenstein_rho(cplx s) {
    return std::sqrt(pi) * std::exp(log_gamma(s - 0.5) - log_gamma(s)) * riemann_zeta(2.0 * s - 1.0) /
           riemann_zeta(2.0 * s);
}

cplx circle_residue(const std::function<cplx(cplx)>& F, cplx center, double radius, int nodes) {
    CompensatedSum<cplx> acc;
    for (int k = 0; k < nodes; ++k) {
        cplx e = std::polar(1.0, 2 * pi * (k + 0.5) / nodes);
        acc.add(F(center + radius * e) * (radius * e));
    }
    return acc.value() / static_cast<double>(nodes);
}

cplx epstein_lambda3(cplx w) {
    auto integrand = [&](double t) {
        double d = 0.0;
        for (int n = 1; n <= 8; ++n) d += 2 * std::exp(-pi * n * n * t);
        double th = 3 * d + 3 * d * d + d * d * d;
        return th * (std::exp(w * std::log(t)) + std::exp((1.5 - w) * std::log(t))) / t;
    };
    cplx tail = gauss_panels<cplx>(integrand, 1.0, 40.0, 40);
    return 1.0 / (w - 1.5) - 1.0 / w + tail;
}

cplx gl3_eisenstein_star(cplx s) { return epstein_lambda3(1.5 * s); }

std::vector<cplx> rankin_selberg_kappa(const LanglandsTriple& F, double t_j) {
    std::vector<cplx> out;
    for (double a : {F.alpha, F.beta, F.gamma})
        for (double sg : {1.0, -1.0}) out.push_back(-I * a + sg * I * t_j);
    return out;
}

double analytic_conductor(const std::vector<cplx>& kappa, double t) {
    double q = 1.0;
    for (cplx k : kappa) q *= std::abs(cplx(0.5, t) + k) + 3.0;
    return q;
}

namespace {

struct VIntegrand {
    std::vector<cplx> kappa;
    cplx s;
    double lx;
    cplx g0;

    VIntegrand(const std::vector<cplx>& k, double t, double x) : kappa(k), s(0.5, t), lx(std::log(x)) { g0 = lg(s); }

    cplx lg(cplx z) const {
        cplx v = -static_cast<double>(kappa.size()) * z / 2.0 * std::log(pi);
        for (cplx k : kappa) v += log_gamma((z + k) / 2.0);
        return v;
    }
    cplx log_f(cplx u) const { return -u * lx + lg(s + u) - g0 + u * u; }
    cplx operator()(cplx u) const { return std::exp(log_f(u)) / u; }
};

}  // namespace

cplx afe_v_weight_on(const std::vector<cplx>& kappa, double t, double x, double sigma) {
    if (!(x > 0)) throw NonPositiveArgument("afe_v_weight needs x > 0");
    VIntegrand F(kappa, t, x);
    double freq = std::abs(F.lx);
    for (cplx k : kappa) freq += 0.5 * std::log(2.0 + std::abs(F.s + k));
    ContourSpec spec{sigma, std::max(14.0, std::abs(sigma) + 14.0), std::max(8.0, 3.0 * freq)};
    cplx v1 = contour_integral(F, spec);
    spec.node_density *= 2;
    cplx v2 = contour_integral(F, spec);
    double mass = contour_integral([&](cplx u) { return cplx(std::abs(F(u))); }, spec).real();
    if (std::abs(v1 - v2) > 1e-9 * std::abs(v2) + 1e-13 * mass)
        throw ConvergenceFailure("V contour integral unstable under refinement", std::abs(v2), std::abs(v1 - v2));
    return v2;
}

double afe_saddle_sigma(const std::vector<cplx>& kappa, double t, double x) {
    VIntegrand F(kappa, t, x);
    double best = 2.0, best_v = F.log_f(2.0).real();
    for (double sg = 0.5; sg <= 8.0; sg += 0.125) {
        double v = F.log_f(sg).real();
        if (v < best_v) best = sg, best_v = v;
    }
    return best;
}

cplx afe_v_weight(const std::vector<cplx>& kappa, double t, double x) {
    if (!(x > 0)) throw NonPositiveArgument("afe_v_weight needs x > 0");
    if (x >= 1.0) return afe_v_weight_on(kappa, t, x, afe_saddle_sigma(kappa, t, x));
    // poles of the gamma ratio sit at Re u = -1/2 - Re kappa_j
    double min_re = 0.0;
    for (cplx k : kappa) min_re = std::min(min_re, k.real());
    double left = -0.5 * (0.5 + min_re);
    if (left >= 0) throw HypothesisViolated("gamma ratio has poles in Re u >= 0");
    return 1.0 + afe_v_weight_on(kappa, t, x, left);
}

double smooth_step_down(double u) {
    if (u <= 0) return 1.0;
    if (u >= 1) return 0.0;
    double a = std::exp(-1.0 / (1.0 - u)), b = std::exp(-1.0 / u);
    return a / (a + b);
}

double AFEWindow::w0(double x) const {
    if (x0 <= 0) return 0.0;
    return smooth_step_down(x / x0 - 1.0);
}

double AFEWindow::operator()(double x) const {
    if (x <= 0 || x0 <= 0) return 0.0;
    return w0(x) * std::pow(x, -sigma_shift);
}

long AFEWindow::support_max() const {
    if (x0 <= 0) return 0;
    long n = static_cast<long>(std::floor(2 * x0));
    while (n >= 1 && (*this)(static_cast<double>(n)) == 0.0) --n;
    return n;
}

AFEWindow afe_window(double q_cap, double epsilon) {
    if (!(q_cap > 0)) throw NonPositiveArgument("afe_window needs Q > 0");
    if (!(epsilon > 0 && epsilon < 0.5)) throw HypothesisViolated("epsilon must lie in (0, 1/2)");
    AFEWindow w;
    w.q_cap = q_cap;
    w.epsilon = epsilon;
    w.sigma_shift = epsilon;
    w.x0 = std::pow(q_cap, 0.5 + epsilon);
    // sup x^j |W^{(j)}| by five-point differences on a log grid
    const int samples = 600;
    double lo = std::min(1.0, 0.5 * w.x0), hi = 2.2 * w.x0;
    for (int i = 0; i < samples; ++i) {
        double x = lo * std::pow(hi / lo, i / (samples - 1.0));
        double h = 0.02 * std::min(x, w.x0);
        double f[5];
        for (int k = -2; k <= 2; ++k) f[k + 2] = w(x + k * h);
        double d[5] = {f[2], (f[3] - f[1]) / (2 * h), (f[3] - 2 * f[2] + f[1]) / (h * h),
                       (f[4] - 2 * f[3] + 2 * f[1] - f[0]) / (2 * h * h * h),
                       (f[4] - 4 * f[3] + 6 * f[2] - 4 * f[1] + f[0]) / (h * h * h * h)};
        for (int j = 0; j <= 4; ++j)
            w.derivative_bounds[j] = std::max(w.derivative_bounds[j], std::pow(x, j) * std::abs(d[j]));
    }
    return w;
}

AFEWindow zero_window() { return AFEWindow{}; }

GL2Coefficients coefficients_of(const MaassFormGL2& f) {
    return [f](long n) { return cplx(hecke_extend(f, n)); };
}

GL2Coefficients coefficients_of(const EisensteinTau& e) {
    return [e](long n) { return eisenstein_lambda(n, cplx(0.5, e.tau)); };
}

cplx rs_dirichlet(const GL3CoefficientTable& table, const GL2Coefficients& lam, cplx s, const AFEWindow& window) {
    long N = window.support_max();
    if (N < 1) return 0.0;
    if (N > table.n_max())
        throw CoverageError("window reaches n = " + std::to_string(N) + " but the table stops at " +
                            std::to_string(table.n_max()));
    std::vector<cplx> lv(N + 1);
    for (long n = 1; n <= N; ++n) lv[n] = lam(n);
    CompensatedSum<cplx> acc;
    for (long m1 = 1; m1 * m1 <= N; ++m1)
        for (long m2 = 1; m1 * m1 * m2 <= N; ++m2) {
            double n = static_cast<double>(m1 * m1 * m2);
            acc.add(table(m1, m2) * lv[m2] * window(n) * std::exp(-s * std::log(n)));
        }
    return acc.value();
}

cplx rs_dirichlet(const GL3CoefficientTable& table, const MaassFormGL2& f, cplx s, const AFEWindow& window) {
    return rs_dirichlet(table, coefficients_of(f), s, window);
}

cplx rs_dirichlet(const GL3CoefficientTable& table, const EisensteinTau& e, cplx s, const AFEWindow& window) {
    return rs_dirichlet(table, coefficients_of(e), s, window);
}

cplx rs_coefficient(const GL3CoefficientTable& table, const GL2Coefficients& lam, long m) {
    if (m < 1) throw ZeroIndex("rs_coefficient needs m >= 1");
    cplx acc{};
    for (long l = 1; l * l <= m; ++l)
        if (m % (l * l) == 0) {
            long n = m / (l * l);
            acc += lam(n) * table(l, n);
        }
    return acc;
}

MomentReport moment_spectral(const FamilyTuple& fam, const std::vector<MaassFormGL2>& forms,
                             const GL3CoefficientTable& table, const AFEWindow& window, const QuadratureSpec& quad) {
    MomentReport rep;
    rep.comparison = std::sqrt(fam.q) * std::norm(table.a11());
    std::vector<const MaassFormGL2*> chosen;
    for (const auto& f : forms)
        if (f.t_j >= fam.s && f.t_j <= fam.s + fam.d) chosen.push_back(&f);
    std::sort(chosen.begin(), chosen.end(), [](const MaassFormGL2* a, const MaassFormGL2* b) {
        return a->t_j != b->t_j ? a->t_j < b->t_j : a->source_id < b->source_id;
    });
    if (chosen.empty()) {
        rep.warning = EmptyFamily("no forms with t_j in [" + std::to_string(fam.s) + ", " +
                                  std::to_string(fam.s + fam.d) + "]")
                          .what();
        return rep;
    }
    long N = window.support_max();
    if (N > table.n_max()) throw CoverageError("window exceeds table range");
    CompensatedSum<double> total;
    for (const MaassFormGL2* f : chosen) {
        auto lam = coefficients_of(*f);
        std::vector<cplx> lv(N + 1), c(N + 1);
        for (long n = 1; n <= N; ++n) lv[n] = lam(n);
        for (long l = 1; l * l <= N; ++l)
            for (long n = 1; l * l * n <= N; ++n) c[l * l * n] += lv[n] * table(l, n);
        std::vector<double> logs(N + 1);
        for (long n = 1; n <= N; ++n) {
            logs[n] = std::log(static_cast<double>(n));
            c[n] *= window(static_cast<double>(n)) * std::exp(-(0.5 + I * (f->t_j + fam.t0)) * logs[n]);
        }
        auto integrand = [&](double t) {
            cplx acc{};
            for (long n = 1; n <= N; ++n) acc += c[n] * std::polar(1.0, -t * logs[n]);
            return std::norm(acc);
        };
        double v = fam.r > 0 ? integrate<double>(integrand, -fam.r, fam.r, quad).value : 0.0;
        total.add(f->harmonic_weight.value_or(1.0) * v);
        ++rep.forms_used;
    }
    rep.value = total.value();
    return rep;
}

}  // namespace gl3lab
