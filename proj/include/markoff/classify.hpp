#ifndef MARKOFF_CLASSIFY_HPP
#define MARKOFF_CLASSIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "markoff/core.hpp"

namespace markoff {
namespace classify {

struct RangeTooLarge : std::runtime_error {
    explicit RangeTooLarge(const std::string& w) : std::runtime_error(w) {}
};

enum class Verdict { NonAdmissible, Exceptional, Generic, SpecialSmall };
enum class Obstruction { None, Mod4, Mod9 };

struct WitnessForms {
    bool sum_two_squares = false;
    bool four_k_minus1_form = false;
    bool k_minus4_square = false;
    bool any() const { return sum_two_squares || four_k_minus1_form || k_minus4_square; }
};

struct ClassificationRecord {
    i64 k = 0;
    Verdict verdict = Verdict::Generic;
    Obstruction obstruction = Obstruction::None;  // set for NonAdmissible
    WitnessForms witnesses;                       // set for Exceptional
    bool h_known = false;
    bool h_infinite = false;   // k = 4
    i64 h = 0;
    bool h_upper_bound_only = false;  // exceptional k >= 5
    bool hasse_failure = false;       // Generic with h = 0
};

struct AdmissibleCheck {
    bool admissible = true;
    Obstruction obstruction = Obstruction::None;
};
// false iff k = 3 (mod 4) or k = +-3 (mod 9), using non-negative remainders.
AdmissibleCheck is_admissible(i64 k);

// Which of the three representation forms hold for k >= 5; nonempty <=> exceptional.
WitnessForms is_exceptional(i64 k);

// Constructs a point on V_k with some |x_j| <= 2 from a representation witness.
std::optional<core::Triple> exceptional_witness_point(i64 k);

ClassificationRecord classify(i64 k, std::optional<i64> cayley_bound = std::nullopt);

enum class ZariskiFlag { Empty, FiniteOrbitOnly, ZariskiDense };
ZariskiFlag zariski_flag(i64 k, const ClassificationRecord& record);

// Batch classification over [kmin, kmax], 0 <= kmin <= kmax; identical verdicts
// to per-k classify, with sieves for the representation forms and one lattice
// sweep for the class numbers.
std::vector<ClassificationRecord> sieve_classify_range(i64 kmin, i64 kmax);

std::string verdict_name(const ClassificationRecord& rec);

}  // namespace classify
}  // namespace markoff

#endif
