#include <doctest.h>

#include "markoff/intops.hpp"
#include "markoff/rational.hpp"

using namespace markoff;

TEST_CASE("isqrt exact at boundaries") {
    CHECK(isqrt_u64(0) == 0);
    CHECK(isqrt_u64(1) == 1);
    CHECK(isqrt_u64(3) == 1);
    CHECK(isqrt_u64(4) == 2);
    CHECK(isqrt_u64(UINT64_MAX) == 4294967295ull);
    for (u64 n : {24ull, 25ull, 26ull, 99999999999998ull, 99999999999999ull}) {
        u64 r = isqrt_u64(n);
        CHECK(r * r <= n);
        CHECK((r + 1) * (r + 1) > n);
    }
    i128 big = (i128{1} << 100) + 12345;
    i128 r = isqrt_i128(big);
    CHECK(r * r <= big);
    CHECK((r + 1) * (r + 1) > big);
}

TEST_CASE("is_square catches near misses") {
    i128 root;
    CHECK(is_square_i128(0, &root));
    CHECK(root == 0);
    CHECK(is_square_i128(i128{99999999} * 99999999, &root));
    CHECK(root == 99999999);
    CHECK_FALSE(is_square_i128(i128{99999999} * 99999999 + 1));
    CHECK_FALSE(is_square_i128(-4));
    CHECK_FALSE(is_square_i128(i128{1} << 101));  // odd power of two
    CHECK(is_square_i128(i128{1} << 100));
}

TEST_CASE("checked arithmetic raises on overflow") {
    i128 big = i128{1} << 126;
    CHECK_THROWS_AS(checked_mul(big, 4), OverflowError);
    CHECK_THROWS_AS(checked_add(big, big), OverflowError);
    CHECK(checked_mul(big, 1) == big);
}

TEST_CASE("i128 decimal round trip") {
    for (const char* s : {"0", "-1", "170141183460469231731687303715884105727",
                          "-170141183460469231731687303715884105728", "12345678901234567890"}) {
        CHECK(to_string_i128(parse_i128(s)) == s);
    }
    CHECK_THROWS(parse_i128("12x"));
}

TEST_CASE("miller-rabin against trial division") {
    auto slow = [](u64 n) {
        if (n < 2) return false;
        for (u64 d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    };
    for (u64 n = 0; n < 2000; ++n) CHECK(is_prime_u64(n) == slow(n));
    CHECK(is_prime_u64(2147483647ull));
    CHECK_FALSE(is_prime_u64(2147483647ull * 97));
}

TEST_CASE("rational normalizes and round-trips") {
    Rational a(6, -8);
    CHECK(a.num() == -3);
    CHECK(a.den() == 4);
    CHECK(a.str() == "-3/4");
    CHECK(Rational::parse("-3/4") == a);
    CHECK(Rational::parse("7") == Rational(7));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(3, 4) * Rational(2, 3)) == Rational(1, 2));
    CHECK(Rational::pow_int(2, -3) == Rational(1, 8));
    CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("valuation") {
    CHECK(valuation(48, 2) == 4);
    CHECK(valuation(-48, 2) == 4);
    CHECK(valuation(1, 7) == 0);
    CHECK_THROWS(valuation(0, 2));
}
