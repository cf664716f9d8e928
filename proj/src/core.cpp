#include "markoff/core.hpp"

#include <algorithm>
#include <tuple>

namespace markoff {
namespace core {

i128 evaluate(const Triple& p) {
    i128 s = checked_add(checked_add(checked_mul(p.x1, p.x1), checked_mul(p.x2, p.x2)),
                         checked_mul(p.x3, p.x3));
    i128 prod = checked_mul(checked_mul(p.x1, p.x2), p.x3);
    return checked_sub(s, prod);
}

Triple vieta(const Triple& p, int j) {
    Triple q = p;
    int a = j == 1 ? 2 : 1;
    int b = j == 3 ? 2 : 3;
    q[j] = checked_sub(checked_mul(p[a], p[b]), p[j]);
    return q;
}

i128 delta(const Triple& p) {
    i128 f1 = checked_add(checked_add(checked_add(i128{1}, p.x1), p.x2), p.x3);
    i128 f2 = checked_sub(checked_sub(checked_add(i128{1}, p.x2), p.x1), p.x3);
    i128 f3 = checked_sub(checked_sub(checked_add(i128{1}, p.x3), p.x1), p.x2);
    i128 f4 = checked_sub(checked_sub(checked_add(i128{1}, p.x1), p.x2), p.x3);
    return checked_mul(checked_mul(f1, f2), checked_mul(f3, f4));
}

i128 delta_expanded(const Triple& p) {
    i128 b = checked_sub(checked_sub(checked_add(i128{1}, checked_mul(p.x2, p.x2)),
                                     checked_mul(p.x1, p.x1)),
                         checked_mul(p.x3, p.x3));
    i128 m = checked_sub(checked_mul(p.x1, p.x3), p.x2);
    return checked_sub(checked_mul(b, b), checked_mul(4, checked_mul(m, m)));
}

std::array<QuadForm, 3> bhargava_forms(const Triple& p) {
    auto sq = [](i128 v) { return checked_mul(v, v); };
    QuadForm q1{checked_sub(checked_mul(p.x2, p.x3), p.x1),
                checked_sub(checked_sub(checked_add(i128{1}, sq(p.x1)), sq(p.x2)), sq(p.x3)),
                checked_sub(checked_mul(p.x2, p.x3), p.x1)};
    QuadForm q2{checked_sub(checked_mul(p.x1, p.x3), p.x2),
                checked_sub(checked_sub(checked_add(i128{1}, sq(p.x2)), sq(p.x1)), sq(p.x3)),
                checked_sub(checked_mul(p.x1, p.x3), p.x2)};
    QuadForm q3{checked_sub(checked_mul(p.x1, p.x2), p.x3),
                checked_sub(checked_sub(checked_add(i128{1}, sq(p.x3)), sq(p.x1)), sq(p.x2)),
                checked_sub(checked_mul(p.x1, p.x2), p.x3)};
    return {q1, q2, q3};
}

Triple apply_move(const Triple& p, const Move& m) {
    switch (m.kind) {
        case MoveKind::Permutation:
            return Triple(p[m.perm[0]], p[m.perm[1]], p[m.perm[2]]);
        case MoveKind::DoubleSign: {
            Triple q = p;
            q[m.i] = checked_neg(q[m.i]);
            q[m.j] = checked_neg(q[m.j]);
            return q;
        }
        case MoveKind::Vieta:
            return vieta(p, m.j);
    }
    return p;
}

Triple GammaWord::replay() const {
    Triple p = start;
    for (const Move& m : moves) p = apply_move(p, m);
    return p;
}

std::string GammaWord::str() const {
    std::string out;
    for (const Move& m : moves) {
        if (!out.empty()) out += " ";
        switch (m.kind) {
            case MoveKind::Permutation:
                out += "P" + std::to_string(m.perm[0]) + std::to_string(m.perm[1]) +
                       std::to_string(m.perm[2]);
                break;
            case MoveKind::DoubleSign:
                out += "S" + std::to_string(m.i) + std::to_string(m.j);
                break;
            case MoveKind::Vieta:
                out += "V" + std::to_string(m.j);
                break;
        }
    }
    return out;
}

Canonicalized canonicalize(const Triple& p) {
    Canonicalized out;
    out.word.start = p;
    Triple cur = p;

    // sort by absolute value with a stable source permutation
    std::array<int, 3> src{1, 2, 3};
    std::stable_sort(src.begin(), src.end(),
                     [&](int a, int b) { return iabs(p[a]) < iabs(p[b]); });
    if (src != std::array<int, 3>{1, 2, 3}) {
        Move m = Move::permutation(src[0], src[1], src[2]);
        cur = apply_move(cur, m);
        out.word.moves.push_back(m);
    }

    // clear signs with double flips; a zero coordinate absorbs any single minus
    auto flip = [&](int i, int j) {
        Move m = Move::double_sign(i, j);
        cur = apply_move(cur, m);
        out.word.moves.push_back(m);
    };
    std::array<bool, 4> neg{false, cur.x1 < 0, cur.x2 < 0, cur.x3 < 0};
    int negc = int(neg[1]) + int(neg[2]) + int(neg[3]);
    if (negc == 2) {
        int a = 0, b = 0;
        for (int i = 1; i <= 3; ++i)
            if (neg[i]) (a == 0 ? a : b) = i;
        flip(a, b);
    } else if (negc == 1 || negc == 3) {
        // reduce to exactly one minus, placed on a zero coordinate if any
        if (negc == 3) {
            flip(2, 3);
        }
        int where = cur.x1 < 0 ? 1 : (cur.x2 < 0 ? 2 : 3);
        int zero = cur.x1 == 0 ? 1 : (cur.x2 == 0 ? 2 : (cur.x3 == 0 ? 3 : 0));
        if (zero != 0) {
            if (zero != where) flip(std::min(where, zero), std::max(where, zero));
            // minus now sits on the zero coordinate; normalize -0 to 0
            if (cur.x1 == 0) cur.x1 = 0;
        } else if (where != 1) {
            // attach the surviving minus to the smallest absolute value (slot 1)
            flip(1, where);
        }
    }

    CanonicalPoint c;
    c.a1 = iabs(cur.x1);
    c.a2 = iabs(cur.x2);
    c.a3 = iabs(cur.x3);
    c.sign = (cur.x1 < 0) ? SignClass::OneNegative : SignClass::AllNonNegative;
    out.point = c;
    out.word.end = c.embed();
    return out;
}

namespace {

// One descent step from a canonical embedding: try the Vieta move at the largest
// coordinate first (the only candidate per the gauge sign analysis), falling back
// to the other two slots for degenerate small-coordinate points.
bool descend_once(Triple& cur, std::vector<Move>& moves) {
    i128 d0 = delta(cur);
    for (int j : {3, 2, 1}) {
        Triple nxt = vieta(cur, j);
        if (delta(nxt) < d0) {
            moves.push_back(Move::vieta(j));
            cur = nxt;
            return true;
        }
    }
    return false;
}

constexpr int kDescentCap = 1000000;

}  // namespace

Reduced reduce(const Triple& p) {
    Reduced out;
    out.word.start = p;
    Canonicalized c = canonicalize(p);
    Triple cur = c.point.embed();
    out.word.moves = c.word.moves;

    for (int step = 0;; ++step) {
        if (step > kDescentCap) throw DescentStuck("descent exceeded iteration cap");
        if (!descend_once(cur, out.word.moves)) break;
        Canonicalized cc = canonicalize(cur);
        cur = cc.point.embed();
        for (const Move& m : cc.word.moves) out.word.moves.push_back(m);
    }
    out.representative = cur;
    out.word.end = cur;
    return out;
}

namespace {

void push_sorted_rep(std::vector<Triple>& reps, i128 u1, i128 u2, i128 u3) {
    reps.emplace_back(u1, u2, u3);
}

std::vector<Triple> fundamental_positive(i64 k) {
    // 3 <= u1 <= u2 <= u3, u1^2 + u2^2 + u3^2 + u1 u2 u3 = k
    std::vector<Triple> reps;
    for (i64 u1 = 3;; ++u1) {
        i128 min_val = checked_add(checked_mul(3, checked_mul(u1, u1)),
                                   checked_mul(checked_mul(u1, u1), u1));
        if (min_val > k) break;
        // u3 >= u2 forces u2^2 (u1 + 2) <= k - u1^2
        i128 num = k - i128{u1} * u1;
        i128 u2max = isqrt_i128(num / (u1 + 2));
        for (i64 u2 = u1; u2 <= static_cast<i64>(u2max); ++u2) {
            // u3^2 + (u1 u2) u3 + (u1^2 + u2^2 - k) = 0
            i128 b = i128{u1} * u2;
            i128 c = i128{u1} * u1 + i128{u2} * u2 - k;
            i128 disc = b * b - 4 * c;
            i128 s;
            if (disc < 0 || !is_square_i128(disc, &s)) continue;
            if ((s - b) % 2 != 0) continue;
            i128 u3 = (s - b) / 2;
            if (u3 >= u2) push_sorted_rep(reps, u1, u2, u3);
        }
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

std::vector<Triple> fundamental_negative(i64 k) {
    // 3 <= u1 <= u2 <= u3 <= u1 u2 / 2, u1^2 + u2^2 + u3^2 - u1 u2 u3 = k < 0
    std::vector<Triple> reps;
    i128 absk = -i128{k};
    for (i64 u1 = 3;; ++u1) {
        // u2 <= sqrt((u1^2 + |k|) / (u1 - 2)); u1 range ends once u1 > that bound
        i128 bound2 = (i128{u1} * u1 + absk) / (u1 - 2);
        i128 u2max = isqrt_i128(bound2);
        if (u1 > u2max) break;
        for (i64 u2 = u1; u2 <= static_cast<i64>(u2max); ++u2) {
            // u3^2 - (u1 u2) u3 + (u1^2 + u2^2 + |k|) = 0; take the root <= u1 u2 / 2
            i128 b = i128{u1} * u2;
            i128 c = i128{u1} * u1 + i128{u2} * u2 + absk;
            i128 disc = b * b - 4 * c;
            i128 s;
            if (disc < 0 || !is_square_i128(disc, &s)) continue;
            if ((b - s) % 2 != 0) continue;
            i128 u3 = (b - s) / 2;
            if (u3 >= u2 && 2 * u3 <= b) push_sorted_rep(reps, u1, u2, u3);
        }
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

}  // namespace

FundamentalSet enumerate_fundamental(SurfaceLevel k, std::optional<i64> cayley_bound) {
    if (iabs(k.k) > kMaxAbsLevel) throw OverflowError("level out of supported range");
    FundamentalSet out;
    out.k = k;
    if (k.k == 4) {
        if (!cayley_bound) throw CayleyUnbounded();
        out.cayley_truncated = true;
        out.reps.emplace_back(0, 0, 2);
        if (*cayley_bound >= 1) out.reps.emplace_back(1, 1, 2);
        for (i64 a = 2; a <= *cayley_bound; ++a) out.reps.emplace_back(2, a, a);
        return out;
    }
    if (k.k == 0) {
        out.reps = {Triple(0, 0, 0), Triple(3, 3, 3)};
        return out;
    }
    if (k.k == 1) {
        out.reps = {Triple(0, 0, 1)};
        return out;
    }
    if (k.k == 2) {
        out.reps = {Triple(0, 1, 1)};
        return out;
    }
    if (k.k == 3) return out;
    out.reps = k.k > 0 ? fundamental_positive(k.k) : fundamental_negative(k.k);
    return out;
}

SmallCoordForms small_coordinate_forms(i64 k) {
    SmallCoordForms f;
    if (k < 5) return f;
    for (i128 u = 0; 2 * u * u <= k; ++u) {
        if (is_square_i128(k - u * u)) {
            f.sum_two_squares = true;
            break;
        }
    }
    i128 target = 4 * (i128{k} - 1);
    for (i128 v = 0; 3 * v * v <= target; ++v) {
        if (is_square_i128(target - 3 * v * v)) {
            f.four_k_minus1_form = true;
            break;
        }
    }
    f.k_minus4_square = is_square_i128(i128{k} - 4);
    return f;
}

ClassNumber class_number(SurfaceLevel k) {
    ClassNumber out;
    if (k.k == 4) {
        out.infinite = true;
        return out;
    }
    if (k.k >= 0 && k.k <= 3) {
        static const i64 small_h[4] = {2, 1, 1, 0};
        out.value = small_h[k.k];
        out.finite_orbit_flag = (k.k == 1);
        return out;
    }
    FundamentalSet f = enumerate_fundamental(k);
    out.value = static_cast<i64>(f.reps.size());
    if (k.k >= 5) {
        // for exceptional k the box count is only an upper bound for h
        out.upper_bound_only = small_coordinate_forms(k.k).any();
    }
    return out;
}

std::optional<ParametricLine> parametric_line(SurfaceLevel k) {
    i128 d = i128{k.k} - 4;
    i128 w;
    if (d < 0 || !is_square_i128(d, &w)) return std::nullopt;
    ParametricLine line;
    line.w = static_cast<i64>(w);
    line.family = "(2, t, t+" + to_string_i128(w) + ")";
    return line;
}

}  // namespace core
}  // namespace markoff
