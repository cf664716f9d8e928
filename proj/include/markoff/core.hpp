#ifndef MARKOFF_CORE_HPP
#define MARKOFF_CORE_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "markoff/intops.hpp"

namespace markoff {
namespace core {

// An integer point (x1,x2,x3); all arithmetic on components is overflow-checked.
struct Triple {
    i128 x1 = 0, x2 = 0, x3 = 0;

    Triple() = default;
    Triple(i128 a, i128 b, i128 c) : x1(a), x2(b), x3(c) {}

    i128& operator[](int j) {
        return j == 1 ? x1 : (j == 2 ? x2 : x3);
    }
    i128 operator[](int j) const {
        return j == 1 ? x1 : (j == 2 ? x2 : x3);
    }
    bool operator==(const Triple& o) const { return x1 == o.x1 && x2 == o.x2 && x3 == o.x3; }
    bool operator!=(const Triple& o) const { return !(*this == o); }
    bool operator<(const Triple& o) const {
        if (x1 != o.x1) return x1 < o.x1;
        if (x2 != o.x2) return x2 < o.x2;
        return x3 < o.x3;
    }
    std::string str() const {
        return "(" + to_string_i128(x1) + "," + to_string_i128(x2) + "," + to_string_i128(x3) + ")";
    }
};

// The level M(x) = k, stored exactly; |k| < 2^62 so descent intermediates fit.
struct SurfaceLevel {
    i64 k = 0;
    SurfaceLevel() = default;
    SurfaceLevel(i64 v) : k(v) {}  // NOLINT: implicit by design
    bool operator==(const SurfaceLevel& o) const { return k == o.k; }
};

constexpr i64 kMaxAbsLevel = (i64{1} << 62) - 1;

enum class SignClass { AllNonNegative, OneNegative };

// Narrow-equivalence normal form: sorted absolute values plus the sign class.
// OneNegative only when all a_i > 0 and the product of the coordinates is negative;
// the surviving minus sits on the smallest entry (embedding (-a1,a2,a3)).
struct CanonicalPoint {
    i128 a1 = 0, a2 = 0, a3 = 0;
    SignClass sign = SignClass::AllNonNegative;

    Triple embed() const {
        return sign == SignClass::OneNegative ? Triple(-a1, a2, a3) : Triple(a1, a2, a3);
    }
    bool operator==(const CanonicalPoint& o) const {
        return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && sign == o.sign;
    }
    bool operator!=(const CanonicalPoint& o) const { return !(*this == o); }
    bool operator<(const CanonicalPoint& o) const {
        if (a1 != o.a1) return a1 < o.a1;
        if (a2 != o.a2) return a2 < o.a2;
        if (a3 != o.a3) return a3 < o.a3;
        return sign < o.sign;
    }
};

enum class MoveKind { Permutation, DoubleSign, Vieta };

// One generator of the Markoff group Gamma. For Permutation, perm[i] is the source
// index of target slot i (result[i] = p[perm[i]]). For DoubleSign, coordinates i and j
// are negated. For Vieta, coordinate j is replaced by (product of the others) - x_j.
struct Move {
    MoveKind kind;
    std::array<int, 3> perm{1, 2, 3};
    int i = 0, j = 0;

    static Move permutation(int s1, int s2, int s3) {
        Move m{MoveKind::Permutation, {s1, s2, s3}, 0, 0};
        return m;
    }
    static Move double_sign(int i, int j) { return Move{MoveKind::DoubleSign, {1, 2, 3}, i, j}; }
    static Move vieta(int j) { return Move{MoveKind::Vieta, {1, 2, 3}, 0, j}; }
};

Triple apply_move(const Triple& p, const Move& m);

// Ordered list of moves; replaying from `start` must land exactly on `end`.
struct GammaWord {
    Triple start;
    Triple end;
    std::vector<Move> moves;

    Triple replay() const;
    std::string str() const;
};

// Fundamental representatives of Gamma\V_k per the sign of k, sorted
// lexicographically. cayley_truncated is set only for k = 4.
struct FundamentalSet {
    SurfaceLevel k;
    std::vector<Triple> reps;
    bool cayley_truncated = false;
};

struct CayleyUnbounded : std::runtime_error {
    CayleyUnbounded() : std::runtime_error("k=4 has infinitely many orbits; pass a Cayley bound") {}
};
struct DescentStuck : std::runtime_error {
    explicit DescentStuck(const std::string& w) : std::runtime_error(w) {}
};

// x1^2 + x2^2 + x3^2 - x1 x2 x3, exactly.
i128 evaluate(const Triple& p);

// Vieta involution at coordinate j in {1,2,3}.
Triple vieta(const Triple& p, int j);

// (1+x1+x2+x3)(1+x2-x1-x3)(1+x3-x1-x2)(1+x1-x2-x3); the common discriminant of
// the three Bhargava forms.
i128 delta(const Triple& p);
// The expanded form (1+x2^2-x1^2-x3^2)^2 - 4(x1 x3 - x2)^2; equal to delta().
i128 delta_expanded(const Triple& p);

// Coefficients (a,b,c) of a u^2 + b uv + c v^2.
struct QuadForm {
    i128 a = 0, b = 0, c = 0;
    i128 discriminant() const { return checked_sub(checked_mul(b, b), checked_mul(4, checked_mul(a, c))); }
    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
};

// The three Bhargava-cube slicing forms Q1, Q2, Q3; all share discriminant delta(p).
std::array<QuadForm, 3> bhargava_forms(const Triple& p);

struct Canonicalized {
    CanonicalPoint point;
    GammaWord word;  // permutations and double signs only; maps p to point.embed()
};
Canonicalized canonicalize(const Triple& p);

struct Reduced {
    Triple representative;
    GammaWord word;  // maps the input to the representative
};
// Descend to the fundamental representative: canonicalize, then apply the Vieta
// move on the largest coordinate while it strictly decreases Delta, re-canonicalizing
// after each step; stop when no Delta-decreasing move exists.
Reduced reduce(const Triple& p);

// All representatives of Gamma\V_k from the descent boxes. k in {0,1,2,3} returns
// the hand-verified small-level lists; k = 4 needs cayley_bound.
FundamentalSet enumerate_fundamental(SurfaceLevel k,
                                     std::optional<i64> cayley_bound = std::nullopt);

// Which of the three small-coordinate representation forms k >= 5 satisfies:
// a point with |x_j| = 0, 1, 2 exists iff k = u^2+v^2, 4(k-1) = u^2+3v^2,
// k-4 = u^2 respectively. Exact O(sqrt k) tests.
struct SmallCoordForms {
    bool sum_two_squares = false;
    bool four_k_minus1_form = false;
    bool k_minus4_square = false;
    bool any() const { return sum_two_squares || four_k_minus1_form || k_minus4_square; }
};
SmallCoordForms small_coordinate_forms(i64 k);

struct ClassNumber {
    bool infinite = false;      // k = 4 only
    i64 value = 0;              // number of orbits when finite
    bool upper_bound_only = false;  // exceptional k >= 5: value is h^+ >= h
    bool finite_orbit_flag = false; // k = 1: single orbit, and it is finite
};
ClassNumber class_number(SurfaceLevel k);

struct ParametricLine {
    i64 w = 0;  // k = 4 + w^2; the family is (2, t, t+w)
    std::string family;
};
// Present iff k - 4 is a perfect square.
std::optional<ParametricLine> parametric_line(SurfaceLevel k);

}  // namespace core
}  // namespace markoff

#endif
