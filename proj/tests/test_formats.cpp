#include <doctest.h>

#include <random>

#include "markoff/formats.hpp"

using namespace markoff;

TEST_CASE("classify record CSV round trip") {
    formats::OutputRecord rec;
    rec.k = 329;
    rec.verdict = "generic";
    rec.h = 2;
    rec.reps = {core::Triple(3, 8, 8), core::Triple(4, 4, 11)};
    rec.flags = {"zariski:dense"};
    CHECK(formats::parse_record(formats::format_record(rec)) == rec);

    formats::OutputRecord inf;
    inf.k = 4;
    inf.verdict = "special";
    inf.h_infinite = true;
    inf.flags = {"line:w=0"};
    CHECK(formats::parse_record(formats::format_record(inf)) == inf);

    formats::OutputRecord hf;
    hf.k = 46;
    hf.verdict = "generic";
    hf.hasse_failure = true;
    CHECK(formats::parse_record(formats::format_record(hf)) == hf);
}

TEST_CASE("round trip on generated records") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<i64> dk(-5000, 5000);
    for (int i = 0; i < 200; ++i) {
        i64 k = dk(rng);
        auto rec = classify::classify(k, i64{8});
        std::vector<core::Triple> reps;
        if (rec.verdict != classify::Verdict::NonAdmissible && k != 4)
            reps = core::enumerate_fundamental(k).reps;
        auto out = formats::make_record(rec, reps);
        CHECK(formats::parse_record(formats::format_record(out)) == out);
    }
}

TEST_CASE("scan rows parse back") {
    auto rec = classify::classify(46);
    auto parsed = formats::parse_scan_row(formats::format_scan_row(rec));
    CHECK(parsed.k == 46);
    CHECK(parsed.verdict == classify::Verdict::Generic);
    CHECK(parsed.hasse_failure);
    auto rec3 = classify::classify(3);
    auto parsed3 = formats::parse_scan_row(formats::format_scan_row(rec3));
    CHECK(parsed3.verdict == classify::Verdict::NonAdmissible);
    CHECK(parsed3.obstruction == classify::Obstruction::Mod4);
}

TEST_CASE("aggregate json carries the tool version and counts") {
    scan::CensusAggregate agg = scan::census(5000);
    std::string j = formats::aggregate_to_json(agg, "test");
    CHECK(j.find("markoff") != std::string::npos);
    CHECK(j.find("hf_count") != std::string::npos);
    CHECK(j.find("h_histogram") != std::string::npos);
}
