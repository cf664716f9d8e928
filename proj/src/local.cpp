#include "markoff/local.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace markoff {
namespace local {

int jacobi(i128 a, i128 n) {
    if (n <= 0 || n % 2 == 0) throw std::invalid_argument("jacobi: n must be odd positive");
    a %= n;
    if (a < 0) a += n;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i128 r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

int legendre(i128 a, u64 p) {
    if (p < 3 || !is_prime_u64(p)) throw InvalidPrime("legendre needs an odd prime");
    return jacobi(a, static_cast<i128>(p));
}

int kronecker(i128 a, i128 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v > 0) {
        if (a % 2 == 0) return 0;
        i128 r = ((a % 8) + 8) % 8;
        int two = (r == 1 || r == 7) ? 1 : -1;
        if (v % 2 == 1) result *= two;
    }
    return result * jacobi(a, n);
}

int chi4(i128 x) {
    i128 r = ((x % 4) + 4) % 4;
    if (r == 1) return 1;
    if (r == 3) return -1;
    return 0;
}

int chi8(i128 x) {
    i128 r = ((x % 8) + 8) % 8;
    if (r == 1 || r == 7) return 1;
    if (r == 3 || r == 5) return -1;
    return 0;
}

// ---------------------------------------------------------------------------
// Exact point counts mod prime powers by recursive Hensel decomposition.
// ---------------------------------------------------------------------------

namespace {

// Dense integer cubic in three variables, coefficients mod m.
struct Poly3 {
    // monomial exponents (e1,e2,e3), e1+e2+e3 <= 3
    static constexpr int kTerms = 20;
    static const std::array<std::array<int, 3>, kTerms>& exps() {
        static const std::array<std::array<int, 3>, kTerms> e = [] {
            std::array<std::array<int, 3>, kTerms> out{};
            int idx = 0;
            for (int e1 = 0; e1 <= 3; ++e1)
                for (int e2 = 0; e1 + e2 <= 3; ++e2)
                    for (int e3 = 0; e1 + e2 + e3 <= 3; ++e3) out[idx++] = {e1, e2, e3};
            return out;
        }();
        return e;
    }
    static int index_of(int e1, int e2, int e3) {
        const auto& E = exps();
        for (int i = 0; i < kTerms; ++i)
            if (E[i][0] == e1 && E[i][1] == e2 && E[i][2] == e3) return i;
        return -1;
    }

    std::array<u64, kTerms> c{};  // residues in [0, m)

    u64 eval(u64 x1, u64 x2, u64 x3, u64 m) const {
        u64 p1[4], p2[4], p3[4];
        p1[0] = p2[0] = p3[0] = 1 % m;
        for (int i = 1; i <= 3; ++i) {
            p1[i] = mulmod_u64(p1[i - 1], x1 % m, m);
            p2[i] = mulmod_u64(p2[i - 1], x2 % m, m);
            p3[i] = mulmod_u64(p3[i - 1], x3 % m, m);
        }
        u128 acc = 0;
        const auto& E = exps();
        for (int i = 0; i < kTerms; ++i) {
            if (c[i] == 0) continue;
            u64 t = mulmod_u64(mulmod_u64(p1[E[i][0]], p2[E[i][1]], m), p3[E[i][2]], m);
            acc += mulmod_u64(c[i], t, m);
        }
        return static_cast<u64>(acc % m);
    }

    // gradient mod p at a point
    std::array<u64, 3> grad_mod_p(u64 x1, u64 x2, u64 x3, u64 p) const {
        std::array<u64, 3> g{0, 0, 0};
        const auto& E = exps();
        u64 px[3][4];
        u64 xs[3] = {x1 % p, x2 % p, x3 % p};
        for (int v = 0; v < 3; ++v) {
            px[v][0] = 1 % p;
            for (int i = 1; i <= 3; ++i) px[v][i] = px[v][i - 1] * xs[v] % p;
        }
        for (int i = 0; i < kTerms; ++i) {
            u64 ci = c[i] % p;
            if (ci == 0) continue;
            for (int v = 0; v < 3; ++v) {
                int ev = E[i][v];
                if (ev == 0) continue;
                u64 t = ci * (static_cast<u64>(ev)) % p;
                for (int w = 0; w < 3; ++w) t = t * px[w][w == v ? E[i][w] - 1 : E[i][w]] % p;
                g[v] = (g[v] + t) % p;
            }
        }
        return g;
    }
};

constexpr int kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

// g(y) = f(x0 + p*y) with coefficients reduced mod m.
Poly3 shift_poly(const Poly3& f, const std::array<u64, 3>& x0, u64 p, u64 m) {
    Poly3 g;
    const auto& E = Poly3::exps();
    u64 powp[4] = {1 % m, p % m, p * p % m, p * p % m * p % m};
    u64 powx[3][4];
    for (int v = 0; v < 3; ++v) {
        powx[v][0] = 1 % m;
        for (int i = 1; i <= 3; ++i) powx[v][i] = mulmod_u64(powx[v][i - 1], x0[v] % m, m);
    }
    for (int t = 0; t < Poly3::kTerms; ++t) {
        if (f.c[t] == 0) continue;
        int e1 = E[t][0], e2 = E[t][1], e3 = E[t][2];
        for (int i = 0; i <= e1; ++i)
            for (int j = 0; j <= e2; ++j)
                for (int k = 0; k <= e3; ++k) {
                    u64 coef = f.c[t];
                    coef = mulmod_u64(coef, static_cast<u64>(kBinom[e1][i] * kBinom[e2][j] *
                                                             kBinom[e3][k]) %
                                                m,
                                      m);
                    coef = mulmod_u64(coef, powx[0][e1 - i], m);
                    coef = mulmod_u64(coef, powx[1][e2 - j], m);
                    coef = mulmod_u64(coef, powx[2][e3 - k], m);
                    coef = mulmod_u64(coef, powp[i + j + k], m);
                    int idx = Poly3::index_of(i, j, k);
                    g.c[idx] = (g.c[idx] + coef) % m;
                }
    }
    return g;
}

i128 pow_i128(u64 base, int e) {
    i128 r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

i128 count_prime_power(Poly3 f, u64 p, int l, i64& node_budget) {
    if (l <= 0) return 1;
    u64 m = static_cast<u64>(pow_i128(p, l));
    for (auto& ci : f.c) ci %= m;

    // pull out p-content: f = p^cv * f'
    int cv = l;
    for (u64 ci : f.c) {
        if (ci == 0) continue;
        int v = 0;
        while (ci % p == 0 && v < cv) {
            ci /= p;
            ++v;
        }
        cv = std::min(cv, v);
        if (cv == 0) break;
    }
    if (cv >= l) return pow_i128(p, 3 * l);
    if (cv > 0) {
        Poly3 g = f;
        u64 pc = static_cast<u64>(pow_i128(p, cv));
        for (auto& ci : g.c) ci /= pc;
        return pow_i128(p, 3 * cv) * count_prime_power(g, p, l - cv, node_budget);
    }

    if (--node_budget <= 0) throw ModulusTooLarge("count_mod: recursion budget exhausted");

    i128 total = 0;
    u64 p2 = p * p;
    if (l == 1) {
        for (u64 x1 = 0; x1 < p; ++x1)
            for (u64 x2 = 0; x2 < p; ++x2)
                for (u64 x3 = 0; x3 < p; ++x3)
                    if (f.eval(x1, x2, x3, p) == 0) ++total;
        return total;
    }
    i128 nonsing_lift = pow_i128(p, 2 * (l - 1));
    for (u64 x1 = 0; x1 < p; ++x1)
        for (u64 x2 = 0; x2 < p; ++x2)
            for (u64 x3 = 0; x3 < p; ++x3) {
                if (f.eval(x1, x2, x3, p) != 0) continue;
                auto g = f.grad_mod_p(x1, x2, x3, p);
                if (g[0] != 0 || g[1] != 0 || g[2] != 0) {
                    total += nonsing_lift;
                    continue;
                }
                if (f.eval(x1, x2, x3, p2) != 0) continue;  // singular, no lift
                if (l == 2) {
                    total += pow_i128(p, 3);
                    continue;
                }
                Poly3 h = shift_poly(f, {x1, x2, x3}, p, m);
                for (auto& ci : h.c) {
                    assert(ci % p2 == 0);
                    ci /= p2;
                }
                total += pow_i128(p, 3) * count_prime_power(h, p, l - 2, node_budget);
            }
    return total;
}

Poly3 markoff_poly(i64 k, u64 m) {
    Poly3 f;
    f.c[Poly3::index_of(2, 0, 0)] = 1 % m;
    f.c[Poly3::index_of(0, 2, 0)] = 1 % m;
    f.c[Poly3::index_of(0, 0, 2)] = 1 % m;
    f.c[Poly3::index_of(1, 1, 1)] = m - 1 % m;
    i64 kr = ((k % static_cast<i64>(m)) + static_cast<i64>(m)) % static_cast<i64>(m);
    f.c[Poly3::index_of(0, 0, 0)] = (m - static_cast<u64>(kr)) % m;
    return f;
}

}  // namespace

i64 count_mod(i64 q, i64 k) {
    if (q < 1 || q > 10000000) throw ModulusTooLarge("count_mod modulus must be in [1, 10^7]");
    if (q == 1) return 1;
    i128 total = 1;
    i64 rest = q;
    for (i64 p = 2; p * p <= rest; ++p) {
        if (rest % p) continue;
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        i64 budget = 2000000;
        u64 m = static_cast<u64>(pow_i128(static_cast<u64>(p), e));
        total *= count_prime_power(markoff_poly(k, m), static_cast<u64>(p), e, budget);
    }
    if (rest > 1) {
        i64 budget = 2000000;
        total *= count_prime_power(markoff_poly(k, static_cast<u64>(rest)),
                                   static_cast<u64>(rest), 1, budget);
    }
    return static_cast<i64>(total);
}

i64 Np_closed(u64 p, i64 alpha, i64 beta) {
    if (p < 3 || !is_prime_u64(p)) throw InvalidPrime("Np_closed needs an odd prime");
    i64 pp = static_cast<i64>(p);
    if (((alpha % pp) + pp) % pp == 0) return pp * pp + pp * legendre(-i128{beta}, p);
    i128 a2b = i128{alpha} * alpha * beta - 4;
    return pp * pp + 1 + legendre(a2b, p) * (3 + legendre(beta, p)) * pp;
}

bool local_solvable(u64 p, i64 k) {
    if (p == 2) return ((k % 4) + 4) % 4 != 3;
    if (p == 3) {
        i64 r = ((k % 9) + 9) % 9;
        return r != 3 && r != 6;
    }
    return true;
}

SolutionModPn explicit_solution_mod(u64 p, int n, i64 k) {
    if (p < 5 || !is_prime_u64(p)) throw InvalidPrime("explicit_solution_mod needs p >= 5");
    if (n < 1 || n > 18) throw std::invalid_argument("explicit_solution_mod: n out of range");
    i128 q128 = pow_i128(p, n);
    if (q128 > i128{1} << 62) throw ModulusTooLarge("p^n too large");
    u64 q = static_cast<u64>(q128);
    u64 e = 2 % q;
    u64 f = invmod_u64(2, q);
    u64 ef_diff = (e + q - f) % q;  // gcd(e - f, p) = 1 for p >= 5
    u64 c = invmod_u64(mulmod_u64(ef_diff, ef_diff, q), q);
    u64 km4 = static_cast<u64>((((k - 4) % static_cast<i64>(q)) + static_cast<i64>(q)) %
                               static_cast<i64>(q));
    u64 x1 = (2 % q + q - mulmod_u64(km4, c, q)) % q;
    u64 x2 = (e + f) % q;
    u64 x3 = (ef_diff + mulmod_u64(f, x1, q)) % q;
    // verify M(x) = k mod q before returning
    u64 kr = static_cast<u64>(((k % static_cast<i64>(q)) + static_cast<i64>(q)) %
                              static_cast<i64>(q));
    u64 s = (mulmod_u64(x1, x1, q) + mulmod_u64(x2, x2, q)) % q;
    s = (s + mulmod_u64(x3, x3, q)) % q;
    u64 prod = mulmod_u64(mulmod_u64(x1, x2, q), x3, q);
    if ((s + q - prod) % q != kr)
        throw std::logic_error("explicit_solution_mod: construction failed verification");
    return SolutionModPn{q, x1, x2, x3};
}

// ---------------------------------------------------------------------------
// Closed-form local densities.
// ---------------------------------------------------------------------------

Rational delta_p_odd(u64 p, i64 k) {
    if (p < 3 || !is_prime_u64(p)) throw InvalidPrime("delta_p_odd needs an odd prime");
    if (k == 0 || k == 4) throw UnsupportedLevel("delta_p not defined in closed form at k=0,4");
    int chi_km4 = legendre(i128{k} - 4, p);
    int chi_k = legendre(k, p);
    Rational n1 = Rational(chi_km4 * (3 + chi_k), static_cast<i128>(p)) +
                  Rational(1, i128{static_cast<i64>(p)} * static_cast<i64>(p));
    i128 prod = i128{k} * (i128{k} - 4);
    int mu = valuation(prod, p);
    if (mu == 0) return Rational(1) + n1;

    int beta = (((k % static_cast<i64>(p)) + static_cast<i64>(p)) % static_cast<i64>(p) == 0)
                   ? 0
                   : 1;  // p^mu || (k - 4*beta)
    i128 base = i128{k} - 4 * beta;
    Rational s;
    if (mu % 2 == 1) {
        s = Rational(1, static_cast<i128>(p)) - Rational::pow_int(p, -(mu + 1) / 2) -
            Rational::pow_int(p, -(mu + 3) / 2);
    } else {
        // even mu: the character sees (4 - 4*beta - k)-style arguments, i.e.
        // -k/p^mu on the k side and (k-4)/p^mu on the k-4 side
        i128 unit = base;
        for (int i = 0; i < mu; ++i) unit /= static_cast<i128>(p);
        if (beta == 0) unit = -unit;
        s = Rational(1, static_cast<i128>(p)) -
            Rational::pow_int(p, -mu / 2 - 1) * Rational(1 - legendre(unit, p));
    }
    if (beta == 1) s *= Rational(4);
    return Rational(1) + n1 + s;
}

namespace {

// (8/w)_J - (-8/w)_J for odd w; equals chi8(w) * (1 - chi4(w)).
int e8(i128 w) { return chi8(w) * (1 - chi4(w)); }

// cos((w+1)pi/4) for odd w: +1 at w=7, -1 at w=3 (mod 8), else 0.
int c8(i128 w) { return chi8(w) * (1 - chi4(w)) / 2; }

int sign_pow_parity(i128 w) { return (((w % 2) + 2) % 2 == 0) ? 1 : -1; }  // (-1)^w

}  // namespace

Rational delta_2(i64 k) {
    if (k == 0 || k == 4) throw UnsupportedLevel("delta_2 not defined in closed form at k=0,4");
    if (((k % 2) + 2) % 2 == 1) {
        return Rational(3, 8) * Rational(1 + chi4(k)) * Rational(2 - chi8(k));
    }
    int v = valuation(k, 2);
    if (v == 1) return Rational(1);
    if (v == 2) {
        // 4 || k: eta >= 3 with 2^eta || (k-4); w = (4-k)/2^eta odd
        int eta = valuation(i128{k} - 4, 2);
        i128 w = (4 - i128{k}) / pow_i128(2, eta);
        if (eta == 3) return Rational(1);
        if (eta == 4)
            return Rational(2) - Rational(chi4(w), 4) + Rational(e8(w), 4);
        if (eta == 5) return Rational(2) + Rational(sign_pow_parity(w), 4);
        if (eta % 2 == 0) {
            return Rational(13, 4) - Rational::pow_int(2, -(eta - 6) / 2) -
                   Rational(chi4(w)) * Rational::pow_int(2, -(eta - 4) / 2) +
                   Rational(e8(w)) * Rational::pow_int(2, -(eta - 2) / 2);
        }
        return Rational(13, 4) - Rational(3) * Rational::pow_int(2, -(eta - 5) / 2);
    }
    // 8 | k: eta = v >= 3; w = k / 2^eta odd
    int eta = v;
    i128 w = i128{k} / pow_i128(2, eta);
    if (eta == 3) return Rational(7, 4) + Rational(3 * chi4(w), 4);
    if (eta == 4) return Rational(5, 4) + Rational(chi4(w), 8) + Rational(c8(w), 8);
    if (eta == 5) return Rational(11, 8);
    if (eta % 2 == 0) {
        return Rational(1) + Rational::pow_int(2, -eta / 2) +
               Rational(chi4(w) - c8(w)) * Rational::pow_int(2, -(eta + 2) / 2);
    }
    return Rational(1) + Rational(3) * Rational::pow_int(2, -(eta + 1) / 2);
}

Rational delta_p(u64 p, i64 k) { return p == 2 ? delta_2(k) : delta_p_odd(p, k); }

// ---------------------------------------------------------------------------
// Series terms N_l(k).
// ---------------------------------------------------------------------------

namespace {

Rational Nl_odd(u64 p, i64 k, int l) {
    // Prop-style closed forms for odd p
    if (l == 1) {
        int chi_km4 = legendre(i128{k} - 4, p);
        int chi_k = legendre(k, p);
        return Rational(chi_km4 * (3 + chi_k), static_cast<i128>(p)) +
               Rational(1, i128{static_cast<i64>(p)} * static_cast<i64>(p));
    }
    i128 km4 = i128{k} - 4;
    i128 kk = i128{k};
    i128 plm1 = pow_i128(p, l - 1);
    auto divides = [](i128 m, i128 n) { return n % m == 0; };
    if (l % 2 == 1) {
        // l >= 3 odd; the k-divisibility side carries an extra chi(-1)
        if (km4 != 0 && divides(plm1, km4))
            return Rational(4) * Rational::pow_int(p, -(l + 1) / 2) *
                   Rational(legendre(km4 / plm1, p));
        if (kk != 0 && divides(plm1, kk))
            return Rational::pow_int(p, -(l + 1) / 2) *
                   Rational(legendre(-1, p) * legendre(kk / plm1, p));
        return Rational(0);
    }
    // l >= 2 even
    i128 prod = kk * km4;
    if (prod == 0) return Rational(0);  // k in {0,4} unsupported upstream
    int vp = valuation(prod, p);
    auto eta = [&](int ll, i128 m) { return m != 0 && divides(pow_i128(p, ll), m) ? 1 : 0; };
    if (vp == l - 1) {
        return Rational(-1) * Rational::pow_int(p, -(l + 2) / 2) *
               Rational(4 * eta(l - 1, km4) + eta(l - 1, kk));
    }
    if (vp >= l) {
        return Rational::pow_int(p, -l / 2) * (Rational(1) - Rational(1, static_cast<i128>(p))) *
               Rational(4 * eta(l, km4) + eta(l, kk));
    }
    return Rational(0);
}

// cos((w+1)/4 * pi) restricted to the cases where the combined N_l term is
// rational; returns the pair (value without sqrt2 factor, has_sqrt2).
struct CosVal {
    int num = 0;      // in {-1, 0, 1}
    bool sqrt2 = false;  // value is num * sqrt(2)/2 when set
};
CosVal cos_quarter(i128 w) {
    i128 r = ((w % 8) + 8) % 8;
    switch (static_cast<int>(r)) {
        case 7: return {1, false};
        case 3: return {-1, false};
        case 1: case 5: return {0, false};
        case 0: case 6: return {1, true};
        case 2: case 4: return {-1, true};
    }
    return {0, false};
}

// N_l(k) for p=2, l >= 6: hat-k is k/2^(l-3) or (4-k)/2^(l-3) by divisibility.
Rational Nl_two_tail(i64 k, int l) {
    i128 pl3 = pow_i128(2, l - 3);
    i128 kk = i128{k}, km4 = kk - 4;
    bool div_k = kk != 0 && kk % pl3 == 0;
    bool div_km4 = km4 != 0 && km4 % pl3 == 0;
    if (!div_k && !div_km4) return Rational(0);
    // for l >= 6 the two cases are mutually exclusive (2^(l-3) does not divide 4)
    i128 hat = div_k ? kk / pl3 : (4 - kk) / pl3;
    int coef_exp = div_k ? 0 : std::min(3, l - 5);
    // the k side alternates sign with the small-l boundary: (-1)^min(3, l-5)
    int sign = div_k ? (std::min(3, l - 5) % 2 == 0 ? 1 : -1) : 1;
    CosVal c = cos_quarter(hat);
    if (c.num == 0) return Rational(0);
    int par = ((l + hat) % 2 + 2) % 2;
    if (par != 0) return Rational(0);  // [1 + (-1)^(l+hat)] = 0
    // combined value: sign * 2^(coef_exp - (l+1)/2) * cos * 2
    // odd hat: cos in {-1,0,1}, l odd -> exponent integral
    // even hat: cos = +-sqrt2/2, l even -> exponent becomes integral after sqrt2
    if (!c.sqrt2) {
        return Rational(sign * c.num * 2) * Rational::pow_int(2, coef_exp) *
               Rational(1, pow_i128(2, (l + 1) / 2));
    }
    // 2^(-(l+1)/2) * sqrt2/2 * 2 = 2^(-l/2) with l even
    return Rational(sign * c.num) * Rational::pow_int(2, coef_exp) *
           Rational(1, pow_i128(2, l / 2));
}

Rational Nl_two(i64 k, int l) {
    i64 r4 = ((k % 4) + 4) % 4;
    switch (l) {
        case 0:
            return Rational(1);
        case 1:
            return Rational((k % 2 == 0) ? 1 : -1, 4);
        case 2: {
            // (1/4) cos(k pi/2) + (3/4) sin(k pi/2)
            if (r4 == 0) return Rational(1, 4);
            if (r4 == 1) return Rational(3, 4);
            if (r4 == 2) return Rational(-1, 4);
            return Rational(-3, 4);
        }
        case 3: {
            if (r4 != 1) return Rational(0);
            i128 t = (i128{k} + 3) / 4;
            return Rational(3 * ((((t % 2) + 2) % 2 == 0) ? 1 : -1), 4);
        }
        case 4: {
            if (k % 4 != 0 || k == 0) return Rational(0);
            if (valuation(k, 2) == 2) return Rational(chi4(i128{k} / 4), 2);
            i128 t = i128{k} / 8;
            return Rational((t % 2 == 0) ? -1 : 1, 4);
        }
        case 5: {
            if (k == 0 || k % 8 != 0) return Rational(0);
            return Rational(3 * chi4(i128{k} / 8), 4);
        }
        default:
            return Nl_two_tail(k, l);
    }
}

}  // namespace

Rational Nl_terms(u64 p, i64 k, int l) {
    if (l < 0) throw std::invalid_argument("Nl_terms: l must be >= 0");
    if (l == 0) return Rational(1);
    if (p == 2) return Nl_two(k, l);
    if (!is_prime_u64(p)) throw InvalidPrime("Nl_terms needs a prime");
    return Nl_odd(p, k, l);
}

LocalDensityProfile delta_truncated(i64 k, u64 L) {
    if (L < 2) throw std::invalid_argument("delta_truncated: L must be >= 2");
    if (k == 0 || k == 4) throw UnsupportedLevel("delta_truncated not defined at k=0,4");
    LocalDensityProfile prof;
    prof.k = k;
    prof.L = L;
    prof.truncated_product = Rational(1);
    for (u64 p = 2; p <= L; ++p) {
        if (!is_prime_u64(p)) continue;
        Rational d = delta_p(p, k);
        prof.factors.emplace_back(p, d);
        prof.truncated_product *= d;
    }
    return prof;
}

// ---------------------------------------------------------------------------
// Pair densities for V_{a1,a2}: f_{a1}(x) = f_{a2}(y).
// ---------------------------------------------------------------------------

namespace {

void check_pair(i64 a1, i64 a2) {
    if (a1 == a2 || a1 == -a2) throw DegeneratePair("pair density needs a1 != +-a2");
    if (a1 == 2 || a1 == -2 || a2 == 2 || a2 == -2)
        throw DegeneratePair("pair density needs a_j != +-2");
}

// Exact values in Q + Q*S_p(1), where S_p(1)^2 = chi(-1) p.
struct GaussVal {
    Rational r;  // rational part
    Rational s;  // coefficient of S_p(1)

    GaussVal() = default;
    explicit GaussVal(Rational rr) : r(rr) {}
    GaussVal(Rational rr, Rational ss) : r(rr), s(ss) {}

    GaussVal mul(const GaussVal& o, u64 p) const {
        Rational sp2 = Rational(legendre(-1, p)) * Rational(static_cast<i128>(p));
        return GaussVal(r * o.r + s * o.s * sp2, r * o.s + s * o.r);
    }
    GaussVal conj(u64 p) const {
        // conj(S_p(1)) = chi(-1) S_p(1)
        return GaussVal(r, s * Rational(legendre(-1, p)));
    }
    GaussVal scale(const Rational& c) const { return GaussVal(r * c, s * c); }
};

// Y_l^(j)(alpha): twisted complete character sums, in closed form.
GaussVal Y_sum(u64 p, int j, i128 alpha, int l) {
    i128 pl = pow_i128(p, l);
    i128 plm1 = pow_i128(p, l - 1);
    if (j == 0) {
        if (l == 1) {
            if (alpha % static_cast<i128>(p) == 0) return GaussVal(Rational(i128{static_cast<i64>(p)} - 1));
            return GaussVal(Rational(-1));
        }
        if (alpha % pl == 0) return GaussVal(Rational(plm1) * Rational(i128{static_cast<i64>(p)} - 1));
        if (alpha % plm1 == 0) return GaussVal(Rational(-1) * Rational(plm1));
        return GaussVal(Rational(0));
    }
    // j == 1
    if (l == 1) return GaussVal(Rational(0), Rational(legendre(alpha, p)));
    if (alpha % plm1 == 0 && alpha % pl != 0)
        return GaussVal(Rational(0), Rational(plm1) * Rational(legendre(alpha / plm1, p)));
    return GaussVal(Rational(0));
}

// The S_l(b D_j) factor split as p-power magnitude, chi(C_j) sign, and an
// S_p(1) flag; b is an implicit unit whose chi(b) is tracked by the caller.
struct SFactor {
    Rational mag;     // power of p
    int chi_c = 1;    // chi(C_j) or 1
    bool has_sp = false;  // carries one S_p(1)
    bool chi_b = false;   // carries one chi(b)
};

SFactor s_factor(u64 p, i128 D, int l) {
    SFactor f;
    int eta = D == 0 ? l : std::min(valuation(D, p), l);
    if (eta >= l) {
        f.mag = Rational(pow_i128(p, l));
        return f;
    }
    i128 C = D / pow_i128(p, eta);
    if ((l - eta) % 2 == 0) {
        f.mag = Rational(pow_i128(p, (l + eta) / 2));
    } else {
        f.mag = Rational(pow_i128(p, (l + eta - 1) / 2));
        f.chi_c = legendre(C, p);
        f.has_sp = true;
        f.chi_b = true;
    }
    return f;
}

}  // namespace

Rational pair_Nl_odd(u64 p, i64 a1, i64 a2, int l) {
    if (p < 3 || !is_prime_u64(p)) throw InvalidPrime("pair_Nl_odd needs an odd prime");
    check_pair(a1, a2);
    if (l < 1) throw std::invalid_argument("pair_Nl_odd: l must be >= 1");
    i128 D1 = i128{a1} * a1 - 4;
    i128 D2 = i128{a2} * a2 - 4;
    i128 sigma = 4 * (D1 - D2);

    // N_l = p^{-3l} sum*_b e(4b(D1-D2)/p^l) conj(S_l(b D1)) S_l(b D2)
    SFactor f1 = s_factor(p, D1, l);
    SFactor f2 = s_factor(p, D2, l);
    int chi_b_power = (f1.chi_b ? 1 : 0) + (f2.chi_b ? 1 : 0);
    GaussVal combined(f1.mag * f2.mag * Rational(f1.chi_c * f2.chi_c));
    // conj on the first factor's S_p(1)
    if (f1.has_sp && f2.has_sp) {
        // conj(S)S = |S|^2 = p
        combined = combined.scale(Rational(static_cast<i128>(p)));
    } else if (f1.has_sp) {
        combined = GaussVal(Rational(0), combined.r * Rational(legendre(-1, p)));
    } else if (f2.has_sp) {
        combined = GaussVal(Rational(0), combined.r);
    }
    GaussVal b_sum = Y_sum(p, chi_b_power % 2, sigma, l);
    GaussVal total = combined.mul(b_sum, p);
    if (!total.s.is_zero()) throw std::logic_error("pair_Nl_odd: nonreal term");
    return total.r * Rational(1, pow_i128(p, 3 * l));
}

Rational delta_pair_odd(u64 p, i64 a1, i64 a2) {
    if (p < 3 || !is_prime_u64(p)) throw InvalidPrime("delta_pair_odd needs an odd prime");
    check_pair(a1, a2);
    i128 D1 = i128{a1} * a1 - 4;
    i128 D2 = i128{a2} * a2 - 4;
    int eta1 = D1 % static_cast<i128>(p) == 0 ? valuation(D1, p) : 0;
    int eta2 = D2 % static_cast<i128>(p) == 0 ? valuation(D2, p) : 0;
    int mu = valuation(D1 - D2, p);
    int lmax = std::max({eta1, eta2, mu}) + 3;
    Rational d(1);
    for (int l = 1; l <= lmax; ++l) d += pair_Nl_odd(p, a1, a2, l);
    return d;
}

namespace {

// Exact arithmetic in Z[zeta_8]: c0 + c1 z + c2 z^2 + c3 z^3 with z^4 = -1.
// Here z = e(1/8), i = z^2, sqrt2 = z - z^3.
struct Zeta8 {
    std::array<Rational, 4> c{Rational(0), Rational(0), Rational(0), Rational(0)};

    static Zeta8 zero() { return Zeta8{}; }
    static Zeta8 rat(Rational r) {
        Zeta8 v;
        v.c[0] = r;
        return v;
    }
    static Zeta8 root(int j) {  // z^j
        Zeta8 v;
        j = ((j % 8) + 8) % 8;
        v.c[j % 4] = Rational(j < 4 ? 1 : -1);
        return v;
    }
    Zeta8 operator+(const Zeta8& o) const {
        Zeta8 v;
        for (int i = 0; i < 4; ++i) v.c[i] = c[i] + o.c[i];
        return v;
    }
    Zeta8 operator*(const Zeta8& o) const {
        Zeta8 v;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Rational term = c[i] * o.c[j];
                int e = i + j;
                if (e >= 4) {
                    e -= 4;
                    term = -term;
                }
                v.c[e] += term;
            }
        return v;
    }
    Zeta8 conj() const {  // complex conjugation: z -> z^7 = -z^3
        Zeta8 v;
        v.c[0] = c[0];
        v.c[1] = -c[3];
        v.c[2] = -c[2];
        v.c[3] = -c[1];
        return v;
    }
    Zeta8 scale(const Rational& r) const {
        Zeta8 v;
        for (int i = 0; i < 4; ++i) v.c[i] = c[i] * r;
        return v;
    }
    bool is_rational() const { return c[1].is_zero() && c[2].is_zero() && c[3].is_zero(); }
};

// F_l(c) for c = b * m with b an odd unit given mod 8 and m a fixed integer.
Zeta8 gauss_F(int l, i64 b_mod8, i128 m) {
    if (m == 0) return Zeta8::rat(Rational(pow_i128(2, l)));
    int theta = valuation(m, 2);
    if (theta >= l) return Zeta8::rat(Rational(pow_i128(2, l)));
    if (theta == l - 1) return Zeta8::zero();
    i128 mhat = m / pow_i128(2, theta);
    i64 unit = static_cast<i64>((((i128{b_mod8} * mhat) % 8) + 8) % 8);
    // F = 2^((l+theta)/2) chi8(unit)^(l+theta) (1 + chi4(unit) i); for odd
    // l+theta the half power is sqrt2 = z - z^3 and the chi8 factor survives
    Zeta8 val = Zeta8::rat(Rational(1)) + Zeta8::root(2).scale(Rational(chi4(unit)));
    if ((l + theta) % 2 == 1) {
        val = val * (Zeta8::root(1) + Zeta8::root(3).scale(Rational(-1)));
        if (chi8(unit) == -1) val = val.scale(Rational(-1));
    }
    return val.scale(Rational(pow_i128(2, (l + theta) / 2)));
}

// Q_l(b; a) of the two-variable Gauss sum, b odd given mod 8.
Zeta8 gauss_Q(int l, i64 b_mod8, i64 a) {
    if (a % 2 != 0) {
        Rational v(pow_i128(2, l));
        if (l % 2 == 1) v = -v;
        return Zeta8::rat(v);
    }
    i128 A = (i128{a} / 2) * (i128{a} / 2) - 1;
    return gauss_F(l, b_mod8, 1) * gauss_F(l, b_mod8, A).conj();
}

}  // namespace

Rational pair_Nl_two(i64 a1, i64 a2, int l) {
    check_pair(a1, a2);
    if (l < 1) throw std::invalid_argument("pair_Nl_two: l must be >= 1");
    i128 sigma = i128{a1} * a1 - i128{a2} * a2;
    Zeta8 total;
    if (l <= 3) {
        for (i64 b = 1; b < pow_i128(2, l); b += 2) {
            int e = static_cast<int>((((i128{b} * sigma * pow_i128(2, 3 - l)) % 8) + 8) % 8);
            total = total + gauss_Q(l, b % 8, a1) * gauss_Q(l, b % 8, a2).conj() *
                                Zeta8::root(e);
        }
    } else {
        if (valuation(sigma, 2) < l - 3) return Rational(0);
        i128 shat = sigma / pow_i128(2, l - 3);
        for (i64 r : {1, 3, 5, 7}) {
            int e = static_cast<int>((((i128{r} * shat) % 8) + 8) % 8);
            total = total + gauss_Q(l, r, a1) * gauss_Q(l, r, a2).conj() * Zeta8::root(e);
        }
        total = total.scale(Rational(pow_i128(2, l - 3)));
    }
    if (!total.is_rational()) throw std::logic_error("pair_Nl_two: nonreal term");
    return total.c[0] * Rational(1, pow_i128(2, 4 * l));
}

Rational delta_pair_two(i64 a1, i64 a2) {
    check_pair(a1, a2);
    i128 sigma = i128{a1} * a1 - i128{a2} * a2;
    int lmax = valuation(sigma, 2) + 3;
    Rational d(1);
    for (int l = 1; l <= lmax; ++l) d += pair_Nl_two(a1, a2, l);
    return d;
}

}  // namespace local
}  // namespace markoff
