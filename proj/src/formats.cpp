#include "markoff/formats.hpp"

#include <sstream>

#include <json.hpp>

namespace markoff {
namespace formats {

using nlohmann::json;

const char* kToolVersion = "markoff 1.0.0";
const char* kClassifySchema = "# markoff classify csv v1";
const char* kScanSchema = "# markoff scan csv v1";

bool OutputRecord::operator==(const OutputRecord& o) const {
    return k == o.k && verdict == o.verdict && h_infinite == o.h_infinite && h == o.h &&
           reps == o.reps && hasse_failure == o.hasse_failure && flags == o.flags;
}

OutputRecord make_record(const classify::ClassificationRecord& rec,
                         const std::vector<core::Triple>& reps,
                         const std::vector<std::string>& extra_flags) {
    OutputRecord out;
    out.k = rec.k;
    out.verdict = classify::verdict_name(rec);
    out.h_infinite = rec.h_infinite;
    out.h = rec.h;
    out.reps = reps;
    out.hasse_failure = rec.hasse_failure;
    out.flags = extra_flags;
    if (rec.h_upper_bound_only) out.flags.push_back("h-upper-bound");
    if (rec.verdict == classify::Verdict::Exceptional) {
        if (rec.witnesses.sum_two_squares) out.flags.push_back("w:u2+v2");
        if (rec.witnesses.four_k_minus1_form) out.flags.push_back("w:u2+3v2");
        if (rec.witnesses.k_minus4_square) out.flags.push_back("w:k-4-square");
    }
    return out;
}

namespace {

std::string join_reps(const std::vector<core::Triple>& reps) {
    std::string out;
    for (const core::Triple& t : reps) {
        if (!out.empty()) out += ";";
        out += to_string_i128(t.x1) + "," + to_string_i128(t.x2) + "," + to_string_i128(t.x3);
    }
    return out;
}

std::vector<core::Triple> split_reps(const std::string& s) {
    std::vector<core::Triple> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto c1 = item.find(',');
        auto c2 = item.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument("bad rep triple: " + item);
        out.emplace_back(parse_i128(item.substr(0, c1)),
                         parse_i128(item.substr(c1 + 1, c2 - c1 - 1)),
                         parse_i128(item.substr(c2 + 1)));
    }
    return out;
}

std::vector<std::string> split_field(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// CSV fields here never contain commas except the quoted reps column
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string classify_csv_header() {
    return std::string(kClassifySchema) + "\nk,verdict,h,reps,hasse_failure,flags";
}
std::string scan_csv_header() { return std::string(kScanSchema) + "\nk,verdict,h,hasse_failure"; }

std::string format_record(const OutputRecord& rec) {
    std::string h = rec.h_infinite ? "inf" : std::to_string(rec.h);
    std::string flags;
    for (const std::string& f : rec.flags) {
        if (!flags.empty()) flags += ";";
        flags += f;
    }
    return std::to_string(rec.k) + "," + rec.verdict + "," + h + ",\"" + join_reps(rec.reps) +
           "\"," + (rec.hasse_failure ? "1" : "0") + "," + flags;
}

OutputRecord parse_record(const std::string& line) {
    std::vector<std::string> f = split_csv(line);
    if (f.size() != 6) throw std::invalid_argument("classify row needs 6 fields");
    OutputRecord rec;
    rec.k = static_cast<i64>(parse_i128(f[0]));
    rec.verdict = f[1];
    if (f[2] == "inf") {
        rec.h_infinite = true;
    } else {
        rec.h = static_cast<i64>(parse_i128(f[2]));
    }
    rec.reps = split_reps(f[3]);
    rec.hasse_failure = f[4] == "1";
    rec.flags = split_field(f[5], ';');
    return rec;
}

std::string format_scan_row(const classify::ClassificationRecord& rec) {
    std::string h = rec.h_infinite ? "inf" : std::to_string(rec.h);
    return std::to_string(rec.k) + "," + classify::verdict_name(rec) + "," + h + "," +
           (rec.hasse_failure ? "1" : "0");
}

classify::ClassificationRecord parse_scan_row(const std::string& line) {
    std::vector<std::string> f = split_csv(line);
    if (f.size() != 4) throw std::invalid_argument("scan row needs 4 fields");
    classify::ClassificationRecord rec;
    rec.k = static_cast<i64>(parse_i128(f[0]));
    std::string v = f[1];
    if (v.rfind("non-admissible", 0) == 0) {
        rec.verdict = classify::Verdict::NonAdmissible;
        rec.obstruction = v.find("mod4") != std::string::npos ? classify::Obstruction::Mod4
                                                              : classify::Obstruction::Mod9;
    } else if (v == "exceptional") {
        rec.verdict = classify::Verdict::Exceptional;
    } else if (v == "generic") {
        rec.verdict = classify::Verdict::Generic;
    } else {
        rec.verdict = classify::Verdict::SpecialSmall;
    }
    rec.h_known = true;
    if (f[2] == "inf") {
        rec.h_infinite = true;
    } else {
        rec.h = static_cast<i64>(parse_i128(f[2]));
    }
    rec.hasse_failure = f[3] == "1";
    return rec;
}

std::string aggregate_to_json(const scan::CensusAggregate& agg, const std::string& flags) {
    json j;
    j["tool"] = kToolVersion;
    j["kind"] = "census-aggregate";
    j["flags"] = flags;
    j["K"] = agg.K;
    j["kmin"] = agg.kmin;
    j["chunk_width"] = agg.chunk_width;
    j["admissible_count"] = agg.admissible_count;
    j["exceptional_count"] = agg.exceptional_count;
    j["generic_count"] = agg.generic_count;
    j["hf_count"] = agg.hf_count;
    j["hf_percentage"] = agg.hf_percentage();
    j["hf_mod3"] = agg.hf_mod3;
    j["hf_mod4"] = agg.hf_mod4;
    j["hf_mod9"] = agg.hf_mod9;
    j["h_histogram"] = agg.h_histogram;
    json chunks = json::array();
    for (const scan::ChunkStat& st : agg.chunks) {
        json c;
        c["id"] = st.id;
        c["lo"] = st.lo;
        c["hi"] = st.hi;
        c["admissible"] = st.admissible;
        c["hf"] = st.hf;
        chunks.push_back(c);
    }
    j["chunks"] = chunks;
    return j.dump(2);
}

std::string record_to_json(const OutputRecord& rec) {
    json j;
    j["tool"] = kToolVersion;
    j["k"] = rec.k;
    j["verdict"] = rec.verdict;
    if (rec.h_infinite) {
        j["h"] = "inf";
    } else {
        j["h"] = rec.h;
    }
    json reps = json::array();
    for (const core::Triple& t : rec.reps)
        reps.push_back({to_string_i128(t.x1), to_string_i128(t.x2), to_string_i128(t.x3)});
    j["reps"] = reps;
    j["hasse_failure"] = rec.hasse_failure;
    j["flags"] = rec.flags;
    return j.dump(2);
}

}  // namespace formats
}  // namespace markoff
