#include "markoff/classify.hpp"

#include <algorithm>

#include "markoff/oracle.hpp"

namespace markoff {
namespace classify {

AdmissibleCheck is_admissible(i64 k) {
    AdmissibleCheck out;
    i64 r4 = ((k % 4) + 4) % 4;
    if (r4 == 3) {
        out.admissible = false;
        out.obstruction = Obstruction::Mod4;
        return out;
    }
    i64 r9 = ((k % 9) + 9) % 9;
    if (r9 == 3 || r9 == 6) {
        out.admissible = false;
        out.obstruction = Obstruction::Mod9;
    }
    return out;
}

WitnessForms is_exceptional(i64 k) {
    if (k < 5) throw std::invalid_argument("is_exceptional requires k >= 5");
    core::SmallCoordForms f = core::small_coordinate_forms(k);
    return WitnessForms{f.sum_two_squares, f.four_k_minus1_form, f.k_minus4_square};
}

std::optional<core::Triple> exceptional_witness_point(i64 k) {
    oracle::RepresentationReport r = oracle::representations(k);
    if (r.sum_two_squares) return core::Triple(0, r.u1, r.v1);
    if (r.four_k_minus1_form) {
        // 4(k-1) = u^2 + 3v^2 with u = v (mod 2); (1, (u+v)/2, v) lies on V_k
        return core::Triple(1, (i128{r.u2} + r.v2) / 2, r.v2);
    }
    if (r.k_minus4_square) return core::Triple(0, 2, r.u3);
    return std::nullopt;
}

ClassificationRecord classify(i64 k, std::optional<i64> cayley_bound) {
    ClassificationRecord rec;
    rec.k = k;
    AdmissibleCheck adm = is_admissible(k);
    if (!adm.admissible) {
        rec.verdict = Verdict::NonAdmissible;
        rec.obstruction = adm.obstruction;
        rec.h_known = true;
        rec.h = 0;
        return rec;
    }
    if (k >= 0 && k <= 4) {
        rec.verdict = Verdict::SpecialSmall;
        core::ClassNumber cn = core::class_number(k);
        rec.h_known = true;
        rec.h_infinite = cn.infinite;
        rec.h = cn.value;
        if (k == 4 && !cayley_bound) {
            // verdict stands; callers that need representatives must pass a bound
        }
        return rec;
    }
    if (k >= 5) {
        WitnessForms w = is_exceptional(k);
        if (w.any()) {
            rec.verdict = Verdict::Exceptional;
            rec.witnesses = w;
            core::ClassNumber cn = core::class_number(k);
            rec.h_known = true;
            rec.h = cn.value;
            rec.h_upper_bound_only = true;
            return rec;
        }
    }
    rec.verdict = Verdict::Generic;
    core::ClassNumber cn = core::class_number(k);
    rec.h_known = true;
    rec.h = cn.value;
    rec.hasse_failure = (cn.value == 0);
    return rec;
}

ZariskiFlag zariski_flag(i64 k, const ClassificationRecord& record) {
    // exceptional k carry small-coordinate points even when the descent box is
    // empty, so h = 0 certifies emptiness only away from that verdict
    bool empty = record.h_known && !record.h_infinite && record.h == 0 &&
                 record.verdict != Verdict::Exceptional;
    if (empty) return ZariskiFlag::Empty;
    i128 root;
    bool square = k >= 0 && is_square_i128(i128{k}, &root);
    if (!square) {
        // Eq.-zariski range: k >= 5 nonsquare or k < 0 with points => dense;
        // the nonsquare levels 2 and 3 below 5 are settled by the oracle box
        if (k >= 5 || k < 0) return ZariskiFlag::ZariskiDense;
    }
    // squares (and tiny k): decide by certificate points in a small box
    i64 B = static_cast<i64>(isqrt_u64(static_cast<u64>(std::max<i64>(k, 0)) + 9)) * 3 + 20;
    for (const core::Triple& p : oracle::brute_points(k, std::min<i64>(B, 5000))) {
        if (oracle::certifies_infinite_orbit(p)) return ZariskiFlag::ZariskiDense;
    }
    return ZariskiFlag::FiniteOrbitOnly;
}

std::vector<ClassificationRecord> sieve_classify_range(i64 kmin, i64 kmax) {
    if (kmin < 0 || kmax < kmin) throw std::invalid_argument("bad range");
    size_t n = static_cast<size_t>(kmax - kmin + 1);
    if (n > (u64{1} << 31)) throw RangeTooLarge("range too large");

    // representation sieves over the window
    std::vector<unsigned char> s2(n, 0), f41(n, 0), sq4(n, 0);
    for (i64 u = 0; u * u <= kmax; ++u) {
        for (i64 v = u; u * u + v * v <= kmax; ++v) {
            i64 k = u * u + v * v;
            if (k >= kmin) s2[static_cast<size_t>(k - kmin)] = 1;
        }
        i64 k = u * u + 4;
        if (k >= kmin && k <= kmax) sq4[static_cast<size_t>(k - kmin)] = 1;
    }
    // 4(k-1) = u^2 + 3 v^2 needs u = v (mod 2)
    i128 tmax = 4 * (i128{kmax} - 1);
    for (i64 v = 0; 3 * i128{v} * v <= tmax; ++v) {
        for (i64 u = v % 2; i128{u} * u + 3 * i128{v} * v <= tmax; u += 2) {
            i128 t = i128{u} * u + 3 * i128{v} * v;
            i64 k = static_cast<i64>(t / 4) + 1;
            if (k >= kmin && k <= kmax) f41[static_cast<size_t>(k - kmin)] = 1;
        }
    }

    // class numbers by one pass over the fundamental-domain lattice
    std::vector<u64> h(n, 0);
    for (i64 u1 = 3;; ++u1) {
        i128 base = 3 * i128{u1} * u1 + i128{u1} * u1 * u1;
        if (base > kmax) break;
        i128 lim2 = (i128{kmax} - i128{u1} * u1) / (u1 + 2);
        i64 u2max = static_cast<i64>(isqrt_i128(lim2));
        for (i64 u2 = u1; u2 <= u2max; ++u2) {
            i128 c0 = i128{u1} * u1 + i128{u2} * u2;
            i128 b = i128{u1} * u2;
            // value(u3) = c0 + u3^2 + b u3, increasing in u3
            i128 disc = b * b - 4 * (c0 - kmax);
            i128 u3hi = (isqrt_i128(disc) - b) / 2;
            for (i64 u3 = u2; u3 <= static_cast<i64>(u3hi); ++u3) {
                i128 val = c0 + i128{u3} * u3 + b * u3;
                if (val < kmin) continue;
                if (val > kmax) break;
                ++h[static_cast<size_t>(static_cast<i64>(val) - kmin)];
            }
        }
    }

    std::vector<ClassificationRecord> out;
    out.reserve(n);
    for (i64 k = kmin; k <= kmax; ++k) {
        ClassificationRecord rec;
        rec.k = k;
        AdmissibleCheck adm = is_admissible(k);
        size_t i = static_cast<size_t>(k - kmin);
        if (!adm.admissible) {
            rec.verdict = Verdict::NonAdmissible;
            rec.obstruction = adm.obstruction;
            rec.h_known = true;
        } else if (k <= 4) {
            rec.verdict = Verdict::SpecialSmall;
            core::ClassNumber cn = core::class_number(k);
            rec.h_known = true;
            rec.h_infinite = cn.infinite;
            rec.h = cn.value;
        } else if (s2[i] || f41[i] || sq4[i]) {
            rec.verdict = Verdict::Exceptional;
            rec.witnesses = WitnessForms{s2[i] != 0, f41[i] != 0, sq4[i] != 0};
            rec.h_known = true;
            rec.h = static_cast<i64>(h[i]);
            rec.h_upper_bound_only = true;
        } else {
            rec.verdict = Verdict::Generic;
            rec.h_known = true;
            rec.h = static_cast<i64>(h[i]);
            rec.hasse_failure = (rec.h == 0);
        }
        out.push_back(rec);
    }
    return out;
}

std::string verdict_name(const ClassificationRecord& rec) {
    switch (rec.verdict) {
        case Verdict::NonAdmissible:
            return rec.obstruction == Obstruction::Mod4 ? "non-admissible(mod4)"
                                                        : "non-admissible(mod9)";
        case Verdict::Exceptional:
            return "exceptional";
        case Verdict::Generic:
            return "generic";
        case Verdict::SpecialSmall:
            return "special";
    }
    return "?";
}

}  // namespace classify
}  // namespace markoff
