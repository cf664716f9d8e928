#ifndef MARKOFF_ORACLE_HPP
#define MARKOFF_ORACLE_HPP

#include <vector>

#include "markoff/core.hpp"

namespace markoff {
namespace oracle {

struct BoundTooLarge : std::runtime_error {
    explicit BoundTooLarge(const std::string& w) : std::runtime_error(w) {}
};
struct WorkingBoxExceeded : std::runtime_error {
    explicit WorkingBoxExceeded(const std::string& w) : std::runtime_error(w) {}
};

// All integer solutions of M = k with max |x_j| <= B, by solving the quadratic
// in x3 exactly for each (x1, x2). B <= 5000.
std::vector<core::Triple> brute_points(i64 k, i64 B);

struct Orbit {
    std::vector<core::CanonicalPoint> members;  // canonical forms reached inside the box
    core::CanonicalPoint representative;        // Delta-minimal, ties lexicographic
    i128 min_delta = 0;
    bool frontier_exited = false;  // a Gamma-move left the working box during BFS
};

struct OrbitDecomposition {
    i64 k = 0;
    i64 bound = 0;          // the solution box B
    i64 working_bound = 0;  // BFS box, 4B
    std::vector<core::Triple> points;
    std::vector<Orbit> orbits;
};

// BFS over Gamma-moves from each unvisited solution, restricted to a working box
// of size 4B. Distinct components with equal reduce() representatives raise
// WorkingBoxExceeded instead of silently reporting a split orbit.
OrbitDecomposition orbit_decompose(i64 k, i64 B);

// Exhaustive triple loop; q <= 512.
i64 count_mod_triple_loop(i64 q, i64 k);

// Exhaustive count of x1^2+x2^2+x3^2 - alpha x1 x2 x3 = beta (mod q); q <= 512.
i64 count_general_mod(i64 q, i64 alpha, i64 beta);

struct RepresentationReport {
    bool sum_two_squares = false;
    i64 u1 = 0, v1 = 0;  // k = u^2 + v^2 witness
    bool four_k_minus1_form = false;
    i64 u2 = 0, v2 = 0;  // 4(k-1) = u^2 + 3 v^2 witness
    bool k_minus4_square = false;
    i64 u3 = 0;          // k - 4 = u^2 witness
};
// Direct (u,v) search for the three exceptional forms, with witnesses.
RepresentationReport representations(i64 k);

// True iff some Gamma-move through `p` generates an infinite orbit: a coordinate
// with |x_j| > 2 and the other pair nonzero, or |x_j| = 2 with the pair off the
// fixed line u = v of the induced parabolic.
bool certifies_infinite_orbit(const core::Triple& p);

}  // namespace oracle
}  // namespace markoff

#endif
