#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gl3lab/quadrature.hpp"
#include "gl3lab/spectral_params.hpp"

namespace gl3lab {

using cplx = std::complex<double>;

enum class Parity { even, odd };

struct MaassFormGL2 {
    double t_j = 0.0;
    Parity parity = Parity::even;
    std::map<long, double> lambda_p;  // primes only; lambda(1) = 1 is implicit
    std::string source_id;
    std::optional<double> harmonic_weight;  // alpha_j; 1 when absent

    long p_max() const;
    // primes with |lambda(p)| > 2 p^{7/64} + 0.01
    std::vector<long> sanity_warnings() const;
};

std::vector<std::pair<long, int>> factorize(long n);
int mobius(long n);

// lambda(n) by multiplicativity and lambda(p^{k+1}) = lambda(p) lambda(p^k) - lambda(p^{k-1}).
double hecke_extend(const MaassFormGL2& f, long n);

// A(m, n) for m n <= n_max. Entries inside the range that were never set are 0;
// lookups outside throw CoverageError.
class GL3CoefficientTable {
public:
    GL3CoefficientTable() = default;
    GL3CoefficientTable(long n_max, const LanglandsTriple& triple);

    long n_max() const { return n_max_; }
    const LanglandsTriple& triple() const { return triple_; }
    cplx a11() const { return rows_.empty() ? cplx{} : rows_[1][1]; }
    bool covers(long m, long n) const { return m >= 1 && n >= 1 && m * n <= n_max_; }

    cplx operator()(long m, long n) const;
    void set(long m, long n, cplx v);

private:
    long n_max_ = 0;
    LanglandsTriple triple_{};
    std::vector<std::vector<cplx>> rows_;  // rows_[m][n], n <= n_max / m
};

// Gelbart-Jacquet lift: A(p^a, p^b) = s_{(a+b, b, 0)}(x^2, 1, x^{-2}) with
// lambda(p) = x + 1/x, extended multiplicatively. Langlands triple (2t, 0, -2t).
GL3CoefficientTable sym2_coeffs(const MaassFormGL2& f, long n_max);

// The table with A(1,1) = 1 and every other entry 0.
GL3CoefficientTable delta_table(long n_max, const LanglandsTriple& triple);

struct HeckeResidual {
    double with_mobius = 0.0;     // |A(m,n) - sum_{d|(m,n)} mu(d) A(m/d,1) A(1,n/d)|
    double without_mobius = 0.0;  // same without mu(d)
};
HeckeResidual gl3_hecke_check(const GL3CoefficientTable& table, long m, long n);

// Largest sum_{mn <= x} |A(m,n)|^2 / (|A(1,1)|^2 x) over the given x values.
double molteni_ratio(const GL3CoefficientTable& table, const std::vector<long>& xs);

// Eisenstein series on SL(2,Z)
struct EisensteinTau {
    double tau = 0.0;
};
cplx eisenstein_lambda(long n, cplx s);  // sum_{ad=|n|} (a/d)^{s-1/2}
cplx eisenstein_rho(cplx s);             // sqrt(pi) Gamma(s-1/2) zeta(2s-1) / (Gamma(s) zeta(2s))

// (1/2 pi i) times the integral of F over the circle |s - center| = radius.
cplx circle_residue(const std::function<cplx(cplx)>& F, cplx center, double radius, int nodes = 128);

// pi^{-w} Gamma(w) sum_{v in Z^3, v != 0} |v|^{-2w}, by theta splitting.
cplx epstein_lambda3(cplx w);
// E*(s) = pi^{-3s/2} Gamma(3s/2) zeta(3s) E(I, s) for the SL(3,Z) maximal parabolic
// series summed over all primitive vectors; equals epstein_lambda3(3s/2).
cplx gl3_eisenstein_star(cplx s);

// Approximate functional equation
std::vector<cplx> rankin_selberg_kappa(const LanglandsTriple& F, double t_j);
double analytic_conductor(const std::vector<cplx>& kappa, double t);

// V_{f,t}(x) = (1/2 pi i) int_(sigma) x^{-u} gamma(1/2+it+u)/gamma(1/2+it) e^{u^2} du/u,
// gamma(s) = prod pi^{-(s+kappa)/2} Gamma((s+kappa)/2). For x >= 1 the contour
// goes through the real saddle of the integrand (sigma in [1/2, 8]); for x < 1 it
// sits left of 0 and the residue 1 is added back.
cplx afe_v_weight(const std::vector<cplx>& kappa, double t, double x);
cplx afe_v_weight_on(const std::vector<cplx>& kappa, double t, double x, double sigma);
double afe_saddle_sigma(const std::vector<cplx>& kappa, double t, double x);

struct AFEWindow {
    double q_cap = 0.0;
    double epsilon = 0.1;
    double sigma_shift = 0.1;  // W(x) = W0(x) x^{-sigma_shift}
    double x0 = 0.0;           // W0 = 1 below x0 = Q^{1/2+eps}, 0 above 2 x0
    std::array<double, 5> derivative_bounds{};  // sup x^j |W^{(j)}(x)|, j <= 4

    double operator()(double x) const;
    double w0(double x) const;
    long support_max() const;  // largest integer with W != 0
    bool is_zero() const { return x0 <= 0.0; }
};
AFEWindow afe_window(double q_cap, double epsilon = 0.1);
AFEWindow zero_window();

double smooth_step_down(double u);  // 1 for u <= 0, 0 for u >= 1, C^infinity

using GL2Coefficients = std::function<cplx(long)>;
GL2Coefficients coefficients_of(const MaassFormGL2& f);
GL2Coefficients coefficients_of(const EisensteinTau& e);

// sum_{m1,m2} A(m1,m2) lambda(m2) W(m1^2 m2) (m1^2 m2)^{-s}
cplx rs_dirichlet(const GL3CoefficientTable& table, const GL2Coefficients& lam, cplx s, const AFEWindow& window);
cplx rs_dirichlet(const GL3CoefficientTable& table, const MaassFormGL2& f, cplx s, const AFEWindow& window);
cplx rs_dirichlet(const GL3CoefficientTable& table, const EisensteinTau& e, cplx s, const AFEWindow& window);

// lambda_{F x u}(m) = sum_{l^2 n = m} lambda(n) A(l, n)
cplx rs_coefficient(const GL3CoefficientTable& table, const GL2Coefficients& lam, long m);

struct MomentReport {
    double value = 0.0;
    double comparison = 0.0;  // Q^{1/2} |A(1,1)|^2
    int forms_used = 0;
    std::string warning;
};

// sum_j alpha_j int_{-R}^{R} |sum_n lambda_{F x u_j}(n) W(n) n^{-1/2-it-it_j-iT0}|^2 dt over
// the forms with t_j in [S, S+D]. An empty family gives value 0 and a warning.
MomentReport moment_spectral(const FamilyTuple& fam, const std::vector<MaassFormGL2>& forms,
                             const GL3CoefficientTable& table, const AFEWindow& window,
                             const QuadratureSpec& quad = {});

}  // namespace gl3lab
