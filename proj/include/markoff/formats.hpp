#ifndef MARKOFF_FORMATS_HPP
#define MARKOFF_FORMATS_HPP

#include <string>
#include <vector>

#include "markoff/classify.hpp"
#include "markoff/core.hpp"
#include "markoff/scan.hpp"

namespace markoff {
namespace formats {

extern const char* kToolVersion;
extern const char* kClassifySchema;  // "# markoff classify csv v1"
extern const char* kScanSchema;      // "# markoff scan csv v1"

// One per-k output row. CSV columns: k,verdict,h,reps,hasse_failure,flags.
// h is a decimal integer or "inf"; reps are semicolon-joined "u1,u2,u3" ascending;
// flags are comma-free tokens joined by ';'.
struct OutputRecord {
    i64 k = 0;
    std::string verdict;
    bool h_infinite = false;
    i64 h = 0;
    std::vector<core::Triple> reps;
    bool hasse_failure = false;
    std::vector<std::string> flags;

    bool operator==(const OutputRecord& o) const;
};

OutputRecord make_record(const classify::ClassificationRecord& rec,
                         const std::vector<core::Triple>& reps,
                         const std::vector<std::string>& extra_flags = {});

std::string format_record(const OutputRecord& rec);        // one CSV line, no newline
OutputRecord parse_record(const std::string& line);        // inverse of format_record

std::string classify_csv_header();
std::string scan_csv_header();
// scan CSV row: k,verdict,h,hasse_failure
std::string format_scan_row(const classify::ClassificationRecord& rec);
classify::ClassificationRecord parse_scan_row(const std::string& line);

std::string aggregate_to_json(const scan::CensusAggregate& agg, const std::string& flags);

std::string record_to_json(const OutputRecord& rec);

}  // namespace formats
}  // namespace markoff

#endif
