#ifndef MARKOFF_INTOPS_HPP
#define MARKOFF_INTOPS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace markoff {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

struct OverflowError : std::runtime_error {
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidPrime : std::runtime_error {
    explicit InvalidPrime(const std::string& what) : std::runtime_error(what) {}
};

inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("i128 add overflow");
    return r;
}
inline i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("i128 sub overflow");
    return r;
}
inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("i128 mul overflow");
    return r;
}
inline i128 checked_neg(i128 a) { return checked_sub(0, a); }

inline i128 iabs(i128 a) { return a < 0 ? -a : a; }

std::string to_string_i128(i128 v);
// Parses an optionally signed decimal integer; throws std::invalid_argument on junk.
i128 parse_i128(const std::string& s);

// Exact floor square root of n >= 0, with the post-check r*r <= n < (r+1)*(r+1).
u64 isqrt_u64(u64 n);
i128 isqrt_i128(i128 n);

// True iff n is a perfect square; if so *root gets the non-negative root.
bool is_square_i128(i128 n, i128* root = nullptr);

u64 gcd_u64(u64 a, u64 b);

u64 mulmod_u64(u64 a, u64 b, u64 m);
u64 powmod_u64(u64 base, u64 exp, u64 m);
// Modular inverse of a mod m for gcd(a,m) = 1; throws std::invalid_argument otherwise.
u64 invmod_u64(u64 a, u64 m);

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(u64 n);

// p-adic valuation v_p(n) for n != 0; throws std::invalid_argument on n = 0.
int valuation(i128 n, u64 p);

}  // namespace markoff

#endif
