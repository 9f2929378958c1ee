#include "gl3lab/kloosterman.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gl3lab/errors.hpp"

namespace gl3lab {

namespace {

void require_modulus(long c) {
    if (c < 1) throw NonPositiveModulus("modulus must be >= 1, got " + std::to_string(c));
}

double unit_uniform(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

// sum over m of coef[m] e(k m / c) for all k mod c, each term through the table
std::vector<cplx> twisted_sums(const std::vector<std::pair<long, cplx>>& terms, const RootTable& roots) {
    long c = roots.modulus();
    std::vector<cplx> out(c);
    for (long k = 0; k < c; ++k) {
        cplx s = 0.0;
        for (const auto& [m, v] : terms) s += v * roots(k * m);
        out[k] = s;
    }
    return out;
}

}  // namespace

void ExpCoefficients::set(int m, cplx v) {
    if (m < 1) throw ZeroIndex("coefficient index must be >= 1");
    values[m] = v;
    support_max = std::max(support_max, m);
}

ExpCoefficients ExpCoefficients::scaled(cplx lambda) const {
    ExpCoefficients out = *this;
    for (auto& kv : out.values) kv.second *= lambda;
    return out;
}

ExpCoefficients random_coefficients(int m_max, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ExpCoefficients c;
    for (int m = 1; m <= m_max; ++m) {
        // Box-Muller
        double u1 = 1.0 - unit_uniform(rng), u2 = unit_uniform(rng);
        double rad = std::sqrt(-std::log(u1));
        c.set(m, std::polar(rad, 2 * std::numbers::pi * u2));
    }
    return c;
}

RootTable::RootTable(long c) : c_(c) {
    require_modulus(c);
    roots_.resize(c);
    for (long k = 0; k < c; ++k) {
        // exact values on the axes, sin/cos of a reduced angle elsewhere
        long k4 = 4 * k;
        if (k4 % c == 0) {
            static const cplx axis[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            roots_[k] = axis[k4 / c];
        } else {
            double th = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(c);
            roots_[k] = {std::cos(th), std::sin(th)};
        }
    }
}

cplx RootTable::operator()(long k) const { return roots_[mod(k, c_)]; }

long gcd(long a, long b) {
    a = std::labs(a);
    b = std::labs(b);
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long mod(long a, long c) {
    long r = a % c;
    return r < 0 ? r + c : r;
}

long mod_inverse(long a, long c) {
    require_modulus(c);
    if (c == 1) return 0;
    long g = c, x = 0, x1 = 1, a1 = mod(a, c);
    long g1 = a1;
    while (g1) {
        long q = g / g1;
        long t = g - q * g1;
        g = g1;
        g1 = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw NonCoprime(std::to_string(a) + " is not invertible modulo " + std::to_string(c));
    return mod(x, c);
}

bool divides_power(long r, long b) {
    if (r < 1 || b < 1) return false;
    long g;
    while (r > 1 && (g = gcd(r, b)) > 1)
        while (r % g == 0) r /= g;
    return r == 1;
}

cplx kloosterman_sum(long a, long b, const RootTable& roots) {
    long c = roots.modulus();
    cplx s = 0.0;
    for (long x = 0; x < c; ++x) {
        if (gcd(x, c) != 1) continue;
        long xb = mod_inverse(x, c);
        s += roots(mod(a, c) * x + mod(b, c) * xb);
    }
    return s;
}

cplx kloosterman_sum(long a, long b, long c) { return kloosterman_sum(a, b, RootTable(c)); }

cplx ramanujan_sum(long n, long c) { return kloosterman_sum(0, n, c); }

SumReport verify_lemma_9_2(long b, long r, const ExpCoefficients& c) {
    require_modulus(b);
    require_modulus(r);
    if (!divides_power(r, b)) throw HypothesisViolated("r must divide a power of b");
    RootTable big(b * r), small(b);
    SumReport rep;
    for (long x = 0; x < b; ++x) {
        cplx inner = 0.0;
        for (const auto& [m, v] : c.values) inner += v * kloosterman_sum(r * x, m, big);
        rep.lhs += std::norm(inner);
    }
    std::vector<std::pair<long, cplx>> terms;
    for (const auto& [m, v] : c.values)
        if (m % r == 0) terms.emplace_back(m / r, v);
    auto tw = twisted_sums(terms, small);
    double acc = 0.0;
    for (long y = 0; y < b; ++y)
        if (gcd(y, b) == 1) acc += std::norm(tw[y]);
    rep.rhs = static_cast<double>(b * r * r) * acc;
    rep.abs_err = std::abs(rep.lhs - rep.rhs);
    rep.slack = rep.rhs - rep.lhs;
    return rep;
}

SumReport verify_lemma_9_3(long s, const ExpCoefficients& b) {
    require_modulus(s);
    RootTable roots(s);
    SumReport rep;
    cplx lhs = 0.0;
    std::vector<std::pair<long, cplx>> terms;
    for (const auto& [m, v] : b.values) {
        lhs += v * kloosterman_sum(0, m, roots);
        terms.emplace_back(m, v);
    }
    rep.lhs = std::norm(lhs);
    auto tw = twisted_sums(terms, roots);
    double acc = 0.0;
    for (long h = 0; h < s; ++h)
        if (gcd(h, s) == 1) acc += std::norm(tw[h]);
    rep.rhs = static_cast<double>(s) * acc;
    rep.abs_err = std::abs(rep.lhs - rep.rhs);
    rep.slack = rep.rhs - rep.lhs;
    return rep;
}

SumReport verify_lemma_9_4(long b, long s, long r, const ExpCoefficients& a) {
    require_modulus(b);
    require_modulus(s);
    require_modulus(r);
    if (gcd(b, s) != 1) throw HypothesisViolated("b and s must be coprime");
    if (!divides_power(r, b)) throw HypothesisViolated("r must divide a power of b");
    RootTable rs(s), rbr(b * r), rbs(b * s);
    SumReport rep;
    std::vector<cplx> ram;
    for (const auto& [m, v] : a.values) ram.push_back(v * kloosterman_sum(0, m, rs));
    for (long x = 0; x < b; ++x) {
        if (gcd(x, b) != 1) continue;
        cplx inner = 0.0;
        size_t i = 0;
        for (const auto& [m, v] : a.values) inner += ram[i++] * kloosterman_sum(r * x, m, rbr);
        rep.lhs += std::norm(inner);
    }
    std::vector<std::pair<long, cplx>> terms;
    for (const auto& [m, v] : a.values)
        if (m % r == 0) terms.emplace_back(m / r, v);
    auto tw = twisted_sums(terms, rbs);
    double acc = 0.0;
    for (long x = 0; x < b * s; ++x)
        if (gcd(x, b * s) == 1) acc += std::norm(tw[x]);
    rep.rhs = static_cast<double>(b * r * r * s) * acc;
    rep.abs_err = std::abs(rep.lhs - rep.rhs);
    rep.slack = rep.rhs - rep.lhs;
    return rep;
}

double multiplicativity_residual(long b, long s, long r, long x, long y, long n) {
    if (gcd(s, b * r) != 1) throw HypothesisViolated("s must be coprime to br");
    long sbar = mod_inverse(s, b * r);
    cplx lhs = kloosterman_sum(x * y * r * s, n, b * r * s);
    cplx rhs = kloosterman_sum(mod(y * r * x, b * r) * sbar, n, b * r) * kloosterman_sum(0, n, s);
    return std::abs(lhs - rhs);
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<long> primes_up_to(long n) {
    std::vector<long> out;
    for (long p = 2; p <= n; ++p)
        if (is_prime(p)) out.push_back(p);
    return out;
}

WeilSweep weil_sweep(long p_max) {
    WeilSweep w;
    for (long p : primes_up_to(p_max)) {
        RootTable roots(p);
        double bound = 2 * std::sqrt(static_cast<double>(p));
        for (long a = 0; a < p; ++a)
            for (long b = 0; b < p; ++b) {
                if (a == 0 && b == 0) continue;  // S(0,0;p) = p - 1, outside the bound's hypothesis
                double r = std::abs(kloosterman_sum(a, b, roots)) / bound;
                ++w.sums;
                if (r > w.worst_ratio) w = {r, p, a, b, w.sums};
            }
    }
    return w;
}

}  // namespace gl3lab
