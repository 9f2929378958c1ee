#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace gl3lab {

using cplx = std::complex<double>;

struct ExpCoefficients {
    std::map<int, cplx> values;  // finite support, indices >= 1
    int support_max = 0;

    void set(int m, cplx v);
    ExpCoefficients scaled(cplx lambda) const;
};

// Standard complex Gaussian entries on 1..m_max; reproducible from the seed.
ExpCoefficients random_coefficients(int m_max, std::uint64_t seed);

// e(k/c) for k = 0..c-1.
class RootTable {
public:
    explicit RootTable(long c);
    cplx operator()(long k) const;  // any integer k
    long modulus() const { return c_; }

private:
    long c_;
    std::vector<cplx> roots_;
};

long gcd(long a, long b);
// inverse of a modulo c, (a, c) = 1
long mod_inverse(long a, long c);
long mod(long a, long c);
bool divides_power(long r, long b);  // r | b^infinity

cplx kloosterman_sum(long a, long b, long c);
cplx kloosterman_sum(long a, long b, const RootTable& roots);
cplx ramanujan_sum(long n, long c);

struct SumReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;  // |lhs - rhs| for identities
    double slack = 0.0;    // rhs - lhs for inequalities
};

// sum_{x mod b} |sum_m c_m S(rx, m; br)|^2 = b r^2 sum*_{y mod b} |sum_{r | m} c_m e(y (m/r) / b)|^2
SumReport verify_lemma_9_2(long b, long r, const ExpCoefficients& c);
// |sum_m b_m S(0, m; s)|^2 <= s sum*_{h mod s} |sum_m b_m e(hm/s)|^2
SumReport verify_lemma_9_3(long s, const ExpCoefficients& b);
// sum*_{x mod b} |sum_m a_m S(0,m;s) S(rx,m;br)|^2 <= b r^2 s sum*_{x mod bs} |sum_{r | m} a_m e(x (m/r)/(bs))|^2
SumReport verify_lemma_9_4(long b, long s, long r, const ExpCoefficients& a);

// |S(x y r s, n; b r s) - S(y r x sbar, n; br) S(0, n; s)| with sbar = s^{-1} mod br.
double multiplicativity_residual(long b, long s, long r, long x, long y, long n);

struct WeilSweep {
    double worst_ratio = 0.0;  // max |S(a,b;p)| / (2 sqrt p)
    long worst_p = 0, worst_a = 0, worst_b = 0;
    long sums = 0;
};
// every prime p <= p_max and every (a, b) mod p except (0, 0)
WeilSweep weil_sweep(long p_max);

std::vector<long> primes_up_to(long n);
bool is_prime(long n);

}  // namespace gl3lab
