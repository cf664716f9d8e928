#include "markoff/oracle.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace markoff {
namespace oracle {

using core::CanonicalPoint;
using core::Triple;

std::vector<Triple> brute_points(i64 k, i64 B) {
    if (B < 0 || B > 5000) throw BoundTooLarge("brute_points bound must be in [0, 5000]");
    std::vector<Triple> out;
    for (i64 x1 = -B; x1 <= B; ++x1) {
        for (i64 x2 = -B; x2 <= B; ++x2) {
            // x3^2 - (x1 x2) x3 + (x1^2 + x2^2 - k) = 0
            i128 b = i128{x1} * x2;
            i128 c = i128{x1} * x1 + i128{x2} * x2 - k;
            i128 disc = b * b - 4 * c;
            i128 s;
            if (disc < 0 || !is_square_i128(disc, &s)) continue;
            for (i128 sgn : {s, -s}) {
                if ((b + sgn) % 2 != 0) break;
                i128 x3 = (b + sgn) / 2;
                if (iabs(x3) <= B) out.emplace_back(x1, x2, x3);
                if (s == 0) break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

OrbitDecomposition orbit_decompose(i64 k, i64 B) {
    OrbitDecomposition out;
    out.k = k;
    out.bound = B;
    out.working_bound = 4 * B;
    out.points = brute_points(k, B);

    const i128 W = out.working_bound;
    auto in_box = [&](const CanonicalPoint& c) { return c.a3 <= W; };

    std::set<CanonicalPoint> seen;
    for (const Triple& p : out.points) {
        CanonicalPoint start = core::canonicalize(p).point;
        if (seen.count(start)) continue;
        Orbit orb;
        std::queue<CanonicalPoint> frontier;
        frontier.push(start);
        seen.insert(start);
        while (!frontier.empty()) {
            CanonicalPoint c = frontier.front();
            frontier.pop();
            orb.members.push_back(c);
            Triple t = c.embed();
            for (int j = 1; j <= 3; ++j) {
                CanonicalPoint n = core::canonicalize(core::vieta(t, j)).point;
                if (!in_box(n)) {
                    orb.frontier_exited = true;
                    continue;
                }
                if (!seen.count(n)) {
                    seen.insert(n);
                    frontier.push(n);
                }
            }
        }
        orb.representative = orb.members.front();
        orb.min_delta = core::delta(orb.representative.embed());
        for (const CanonicalPoint& c : orb.members) {
            i128 d = core::delta(c.embed());
            if (d < orb.min_delta || (d == orb.min_delta && c < orb.representative)) {
                orb.min_delta = d;
                orb.representative = c;
            }
        }
        out.orbits.push_back(std::move(orb));
    }

    // Components that reduce() to the same representative were split by the box.
    std::set<Triple> reduced;
    for (const Orbit& orb : out.orbits) {
        Triple rep = core::reduce(orb.representative.embed()).representative;
        if (!reduced.insert(rep).second)
            throw WorkingBoxExceeded("orbit split by working box at k=" + std::to_string(k));
    }
    return out;
}

i64 count_mod_triple_loop(i64 q, i64 k) { return count_general_mod(q, 1, k); }

i64 count_general_mod(i64 q, i64 alpha, i64 beta) {
    if (q < 1 || q > 512) throw BoundTooLarge("triple loop modulus must be in [1, 512]");
    i64 a = ((alpha % q) + q) % q;
    i64 b = ((beta % q) + q) % q;
    i64 count = 0;
    for (i64 x1 = 0; x1 < q; ++x1) {
        for (i64 x2 = 0; x2 < q; ++x2) {
            i64 s12 = (x1 * x1 + x2 * x2) % q;
            i64 m12 = (a * ((x1 * x2) % q)) % q;
            for (i64 x3 = 0; x3 < q; ++x3) {
                i64 v = (s12 + x3 * x3 % q + q * q - m12 * x3 % q) % q;
                if (v == b) ++count;
            }
        }
    }
    return count;
}

RepresentationReport representations(i64 k) {
    RepresentationReport r;
    for (i64 u = 0; 2 * u * u <= k; ++u) {
        i128 rest = i128{k} - i128{u} * u;
        i128 root;
        if (is_square_i128(rest, &root)) {
            r.sum_two_squares = true;
            r.u1 = u;
            r.v1 = static_cast<i64>(root);
            break;
        }
    }
    i128 target = 4 * (i128{k} - 1);
    for (i64 v = 0; 3 * i128{v} * v <= target; ++v) {
        i128 root;
        if (is_square_i128(target - 3 * i128{v} * v, &root)) {
            r.four_k_minus1_form = true;
            r.u2 = static_cast<i64>(root);
            r.v2 = v;
            break;
        }
    }
    i128 root;
    if (k >= 4 && is_square_i128(i128{k} - 4, &root)) {
        r.k_minus4_square = true;
        r.u3 = static_cast<i64>(root);
    }
    return r;
}

bool certifies_infinite_orbit(const Triple& p) {
    for (int j = 1; j <= 3; ++j) {
        int a = j == 1 ? 2 : 1;
        int b = j == 3 ? 2 : 3;
        i128 fixed = iabs(p[j]);
        if (fixed > 2) {
            if (p[a] != 0 || p[b] != 0) return true;
        } else if (fixed == 2) {
            // induced map is parabolic; fixed line is u = v (up to the sign of x_j)
            i128 u = p[a], v = p[b];
            if (p[j] < 0) v = -v;
            if (u != v) return true;
        }
    }
    return false;
}

}  // namespace oracle
}  // namespace markoff
