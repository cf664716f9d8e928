#ifndef MARKOFF_LOCAL_HPP
#define MARKOFF_LOCAL_HPP

#include <optional>
#include <vector>

#include "markoff/rational.hpp"

namespace markoff {
namespace local {

struct ModulusTooLarge : std::runtime_error {
    explicit ModulusTooLarge(const std::string& w) : std::runtime_error(w) {}
};
struct UnsupportedLevel : std::runtime_error {
    explicit UnsupportedLevel(const std::string& w) : std::runtime_error(w) {}
};
struct DegeneratePair : std::runtime_error {
    explicit DegeneratePair(const std::string& w) : std::runtime_error(w) {}
};

// Legendre symbol (a/p) for an odd prime p.
int legendre(i128 a, u64 p);
// Jacobi symbol (a/n) for odd n >= 1.
int jacobi(i128 a, i128 n);
// Kronecker symbol (a/n), n any integer.
int kronecker(i128 a, i128 n);

// The primitive real characters mod 4 and mod 8.
int chi4(i128 x);
int chi8(i128 x);

// |{x mod q : x1^2+x2^2+x3^2 - x1 x2 x3 = k}| exactly, for any q in [1, 10^7].
// Prime powers are counted by recursive Hensel decomposition, composites by CRT.
i64 count_mod(i64 q, i64 k);

// Solution count mod p of x1^2+x2^2+x3^2 - alpha x1 x2 x3 = beta, closed form.
i64 Np_closed(u64 p, i64 alpha, i64 beta);

// False iff (p=2 and k = 3 mod 4) or (p=3 and k = +-3 mod 9).
bool local_solvable(u64 p, i64 k);

// An explicit solution of M = k mod p^n for p >= 5, from the trace construction.
struct SolutionModPn {
    u64 modulus;
    u64 x1, x2, x3;
};
SolutionModPn explicit_solution_mod(u64 p, int n, i64 k);

// Local density delta_p(k) = lim |V_k(Z/p^l)| / p^(2l), closed forms.
// k in {0, 4} is unsupported (the valuation mu is infinite there).
Rational delta_p_odd(u64 p, i64 k);
Rational delta_2(i64 k);
Rational delta_p(u64 p, i64 k);

// The term N_l(k) of the series delta_p(k) = 1 + sum_l N_l(k).
Rational Nl_terms(u64 p, i64 k, int l);

struct LocalDensityProfile {
    i64 k = 0;
    u64 L = 0;
    std::vector<std::pair<u64, Rational>> factors;
    Rational truncated_product;
};
// Product of delta_p(k) over primes p <= L, exact.
LocalDensityProfile delta_truncated(i64 k, u64 L);

// Pair densities delta_p(a1,a2) for the surface f_{a1}(x) = f_{a2}(y),
// f_a(x1,x2) = x1^2 + x2^2 + a x1 x2 + a^2. Requires a1 != +-a2, a_j != +-2.
struct PairDensity {
    i64 a1 = 0, a2 = 0;
    u64 p = 0;
    Rational value;
    i128 D1 = 0, D2 = 0;  // discriminants a_j^2 - 4
};
Rational delta_pair_odd(u64 p, i64 a1, i64 a2);
Rational delta_pair_two(i64 a1, i64 a2);
// The series terms N_l(a1,a2) (delta_p = 1 + sum_l N_l).
Rational pair_Nl_odd(u64 p, i64 a1, i64 a2, int l);
Rational pair_Nl_two(i64 a1, i64 a2, int l);

}  // namespace local
}  // namespace markoff

#endif
