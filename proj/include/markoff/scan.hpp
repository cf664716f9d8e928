#ifndef MARKOFF_SCAN_HPP
#define MARKOFF_SCAN_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "markoff/classify.hpp"
#include "markoff/core.hpp"
#include "markoff/rational.hpp"

namespace markoff {
namespace scan {

struct ConfigViolation : std::runtime_error {
    explicit ConfigViolation(const std::string& w) : std::runtime_error(w) {}
};
struct CheckpointError : std::runtime_error {
    explicit CheckpointError(const std::string& w) : std::runtime_error(w) {}
};

// --- class-number sweeps ----------------------------------------------------

// h(k) for 5 <= k <= K (index k), one pass over the fundamental-domain lattice.
std::vector<std::uint16_t> sweep_class_numbers(i64 K);
// h(k) for -K <= k <= -1 (index |k|).
std::vector<std::uint16_t> sweep_class_numbers_negative(i64 K);

// --- census ------------------------------------------------------------------

struct ChunkStat {
    i64 id = 0;
    i64 lo = 0, hi = 0;  // inclusive k-range
    u64 admissible = 0, exceptional = 0, generic = 0, hf = 0;
    std::array<u64, 3> hf_mod3{};
    std::array<u64, 4> hf_mod4{};
    std::array<u64, 9> hf_mod9{};
    std::vector<u64> h_hist;  // over generic k, index h
};

struct CensusAggregate {
    i64 K = 0;
    i64 kmin = 5;
    i64 chunk_width = 100800;
    u64 admissible_count = 0, exceptional_count = 0, generic_count = 0, hf_count = 0;
    std::array<u64, 3> hf_mod3{};
    std::array<u64, 4> hf_mod4{};
    std::array<u64, 9> hf_mod9{};
    std::vector<u64> h_histogram;
    std::vector<ChunkStat> chunks;  // in id order

    // 100 * A_HF(K) / A(K) with A(K) = #{1 <= k <= K admissible}
    double hf_percentage() const;
};

struct CensusOptions {
    i64 kmin = 5;
    i64 chunk_width = 100800;
    int threads = 1;
    std::string checkpoint_path;  // empty: no checkpointing
    bool resume = false;
    std::string flags;  // recorded verbatim in checkpoints
};

CensusAggregate census(i64 K, const CensusOptions& opts = CensusOptions{});

// Classify one chunk and tally it; the unit of parallel work.
ChunkStat census_chunk(i64 id, i64 lo, i64 hi);

// --- checkpoint file ---------------------------------------------------------

std::string checkpoint_serialize(const CensusAggregate& partial,
                                 const std::vector<ChunkStat>& done,
                                 const std::string& flags);
void checkpoint_write_atomic(const std::string& path, const std::string& payload);
// Returns the completed chunks recorded for this (K, kmin, chunk_width) setup.
std::vector<ChunkStat> checkpoint_load(const std::string& path, i64 K, i64 kmin,
                                       i64 chunk_width);

// --- certified Hasse-failure families ----------------------------------------

enum class Family {
    Hf1TwoNuSqPlus,   // k = 4 + 2 nu^2
    Hf1TwoNuSqMinus,  // k = 4 - 2 nu^2
    Hf1TwoEllSq,      // k = 4 + 2 ell^2, ell >= 13 prime
    F12NuSq,          // k = 4 + 12 nu^2
    F20NuSq,          // k = 4 + 20 nu^2
    Hf1Combined,      // positive members of the first and third, merged ascending
};
std::optional<Family> family_from_name(const std::string& name);

struct FamilyMember {
    i64 k = 0;
    i64 nu = 0;
    std::string tag;  // which hypothesis certified it
};
std::vector<FamilyMember> family_generators(Family family, int limit);

// --- strong approximation obstruction -----------------------------------------

struct NotOnCayleyShiftedSurface : std::runtime_error {
    NotOnCayleyShiftedSurface() : std::runtime_error("evaluate(p) - 4 = 0") {}
};

struct ObstructionCoord {
    int j = 0;
    i128 residue = 0;  // x_j^2 - 4 mod 4|d|
    int symbol = 0;    // kronecker(4d, residue)
    bool in_S = false;
};
struct ObstructionReport {
    i128 k = 0, d = 0, w = 0;
    bool identity_ok = false;  // w^2 - 4d = (x1^2-4)(x2^2-4)
    std::array<ObstructionCoord, 3> coords;
    bool all_in_S = false;
};
ObstructionReport strong_approx_obstruction(const core::Triple& p);

// --- exact counts vs the asymptotic formulas ----------------------------------

struct CountComparisonRow {
    i64 a = 0;
    i64 exact = 0;
    double formula = 0.0;
    double residual = 0.0;
    double residual_over_sqrtK = 0.0;
};
struct CountComparison {
    i64 K = 0;
    std::vector<CountComparisonRow> rows;
    i64 r_plus = 0;
    i64 r_minus = 0;
};
CountComparison exact_counts_vs_asymptotics(i64 K, const std::vector<i64>& a_values);

// --- sector counts and the variance experiment --------------------------------

struct VarianceConfig {
    i64 K = 1000000;
    i64 A = 200;
    u64 L = 13;   // prime cutoff, floored at 13 at desk scale
    int B = 1;    // series depth parameter (kept for reporting)
};

// b_A(k) for 1 <= k <= K (index k), with A = [ceil(sqrt(A)), A].
std::vector<std::uint32_t> sector_histogram(i64 K, i64 A);
// r_a(k): lattice points of the scaled sector with f_a = k.
i64 sector_counts(i64 K, i64 A, i64 k);

struct VarianceReport {
    VarianceConfig config;
    double sum_b = 0.0;
    double mean_ratio = 0.0;  // sum_b / (C K log A)
    double variance = 0.0;    // (1/K) sum (b(k) - C logA delta^(m)(k))^2
    double variance_over_log2 = 0.0;
    i64 k_used = 0;
};
VarianceReport variance_experiment(const VarianceConfig& config);

// (1/4) log(3/2), the sector volume constant.
double sector_constant();

}  // namespace scan
}  // namespace markoff

#endif
