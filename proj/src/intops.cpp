#include "markoff/intops.hpp"

#include <algorithm>
#include <cmath>

namespace markoff {

std::string to_string_i128(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 x = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
    std::string out;
    while (x > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
        x /= 10;
    }
    if (neg) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

i128 parse_i128(const std::string& s) {
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    if (i >= s.size()) throw std::invalid_argument("empty integer literal");
    // accumulate negatively so INT128_MIN parses without overflow
    i128 v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal: " + s);
        v = checked_sub(checked_mul(v, 10), s[i] - '0');
    }
    return neg ? v : checked_neg(v);
}

u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

i128 isqrt_i128(i128 n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative");
    if (n <= static_cast<i128>(UINT64_MAX)) return isqrt_u64(static_cast<u64>(n));
    u128 un = static_cast<u128>(n);
    u128 r = static_cast<u128>(std::sqrt(static_cast<double>(un)));
    // double sqrt of a 128-bit value can be off by a few ulps; fix up exactly
    for (int it = 0; it < 80 && r > 0 && r > un / r; ++it) --r;
    while (r > 0 && r > un / r) r = un / r;  // coarse clamp if still high
    while ((r + 1) <= un / (r + 1)) ++r;
    return static_cast<i128>(r);
}

bool is_square_i128(i128 n, i128* root) {
    if (n < 0) return false;
    // quick residue filter mod 64
    static const bool sq64[64] = {
        true,  true,  false, false, true,  false, false, false, false, true,  false,
        false, false, false, false, false, true,  true,  false, false, false, false,
        false, false, false, true,  false, false, false, false, false, false, false,
        true,  false, false, true,  false, false, false, false, true,  false, false,
        false, false, false, false, false, true,  false, false, false, false, false,
        false, false, true,  false, false, false, false, false, false};
    if (!sq64[static_cast<u64>(static_cast<u128>(n) & 63)]) return false;
    i128 r = isqrt_i128(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod_u64(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

u64 invmod_u64(u64 a, u64 m) {
    i64 t = 0, new_t = 1;
    i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
    while (new_r != 0) {
        i64 q = r / new_r;
        i64 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw std::invalid_argument("invmod: not invertible");
    if (t < 0) t += static_cast<i64>(m);
    return static_cast<u64>(t);
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
        u64 x = powmod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

int valuation(i128 n, u64 p) {
    if (n == 0) throw std::invalid_argument("valuation of zero");
    if (p < 2) throw std::invalid_argument("valuation: p < 2");
    int v = 0;
    i128 m = iabs(n);
    while (m % static_cast<i128>(p) == 0) {
        m /= static_cast<i128>(p);
        ++v;
    }
    return v;
}

}  // namespace markoff
