#include <doctest.h>

#include <cstdio>
#include <random>

#include "markoff/formats.hpp"
#include "markoff/scan.hpp"

using namespace markoff;

TEST_CASE("sweep matches enumerate_fundamental on table rows and random samples") {
    auto h = scan::sweep_class_numbers(10000);
    CHECK(h[329] == 2);
    CHECK(h[341] == 1);
    CHECK(h[378] == 1);
    CHECK(h[9454] == 11);
    CHECK(h[54] == 1);
    CHECK(h[46] == 0);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<i64> d(5, 10000);
    for (int i = 0; i < 1000; ++i) {
        i64 k = d(rng);
        CHECK(h[static_cast<size_t>(k)] == core::enumerate_fundamental(k).reps.size());
    }
}

TEST_CASE("negative sweep matches enumerate_fundamental") {
    auto h = scan::sweep_class_numbers_negative(4000);
    CHECK(h[2] == 1);     // k = -2
    CHECK(h[3691] == 9);  // k = -3691
    std::mt19937_64 rng(18);
    std::uniform_int_distribution<i64> d(1, 4000);
    for (int i = 0; i < 1000; ++i) {
        i64 a = d(rng);
        CHECK(h[static_cast<size_t>(a)] == core::enumerate_fundamental(-a).reps.size());
    }
}

TEST_CASE("census chunk determinism: 1 chunk vs many") {
    scan::CensusOptions one;
    one.chunk_width = 100800;
    scan::CensusAggregate a = scan::census(20000, one);
    scan::CensusOptions many;
    many.chunk_width = 313;
    many.threads = 2;
    scan::CensusAggregate b = scan::census(20000, many);
    CHECK(a.admissible_count == b.admissible_count);
    CHECK(a.exceptional_count == b.exceptional_count);
    CHECK(a.generic_count == b.generic_count);
    CHECK(a.hf_count == b.hf_count);
    CHECK(a.hf_mod3 == b.hf_mod3);
    CHECK(a.hf_mod4 == b.hf_mod4);
    CHECK(a.hf_mod9 == b.hf_mod9);
    CHECK(a.h_histogram == b.h_histogram);
    CHECK(a.admissible_count == a.generic_count + a.exceptional_count);
    u64 sum = 0;
    for (u64 c : a.h_histogram) sum += c;
    CHECK(sum == a.generic_count);
    CHECK(a.h_histogram[0] == a.hf_count);
}

TEST_CASE("checkpoint round trip resumes to identical aggregates") {
    std::string path = "test_checkpoint.json";
    scan::CensusOptions opts;
    opts.chunk_width = 700;
    opts.checkpoint_path = path;
    scan::CensusAggregate full = scan::census(9000, opts);

    // simulate an interrupted run: keep only half the chunks in the checkpoint
    std::vector<scan::ChunkStat> half(full.chunks.begin(),
                                      full.chunks.begin() + full.chunks.size() / 2);
    scan::CensusAggregate partial;
    partial.K = 9000;
    partial.kmin = 5;
    partial.chunk_width = 700;
    scan::checkpoint_write_atomic(path, scan::checkpoint_serialize(partial, half, ""));

    scan::CensusOptions resume = opts;
    resume.resume = true;
    scan::CensusAggregate resumed = scan::census(9000, resume);
    CHECK(resumed.hf_count == full.hf_count);
    CHECK(resumed.admissible_count == full.admissible_count);
    CHECK(resumed.h_histogram == full.h_histogram);
    CHECK(resumed.chunks.size() == full.chunks.size());
    std::remove(path.c_str());

    CHECK_THROWS_AS(scan::checkpoint_load("no_such_file.json", 9000, 5, 700),
                    scan::CheckpointError);
}

TEST_CASE("family generators pinned minima") {
    auto hf1 = scan::family_generators(scan::Family::Hf1Combined, 3);
    REQUIRE(!hf1.empty());
    CHECK(hf1[0].k == 342);
    auto f12 = scan::family_generators(scan::Family::F12NuSq, 2);
    REQUIRE(!f12.empty());
    CHECK(f12[0].k == 16432);
    CHECK(f12[0].nu == 37);
    auto f20 = scan::family_generators(scan::Family::F20NuSq, 2);
    REQUIRE(!f20.empty());
    CHECK(f20[0].k == 33624);
    CHECK(f20[0].nu == 41);
    auto ell = scan::family_generators(scan::Family::Hf1TwoEllSq, 4);
    CHECK(ell[0].k == 342);   // ell = 13
    CHECK(ell[1].k == 1062);  // ell = 23
    auto plus = scan::family_generators(scan::Family::Hf1TwoNuSqPlus, 2);
    CHECK(plus[0].nu == 23);
    CHECK(plus[0].k == 1062);
    auto minus = scan::family_generators(scan::Family::Hf1TwoNuSqMinus, 2);
    CHECK(minus[0].k == 4 - 2 * 23 * 23);
}

TEST_CASE("family members classify as hasse failures") {
    for (auto fam : {scan::Family::Hf1TwoNuSqPlus, scan::Family::Hf1TwoNuSqMinus,
                     scan::Family::Hf1TwoEllSq, scan::Family::F12NuSq, scan::Family::F20NuSq}) {
        for (const auto& m : scan::family_generators(fam, 3)) {
            CAPTURE(m.k);
            auto rec = classify::classify(m.k);
            CHECK(rec.hasse_failure);
        }
    }
}

TEST_CASE("strong approximation obstruction report") {
    auto rep = scan::strong_approx_obstruction(core::Triple(3, 3, 4));
    CHECK(rep.k == -2);
    CHECK(rep.d == -6);
    CHECK(rep.identity_ok);
    CHECK(rep.all_in_S);
    auto rep2 = scan::strong_approx_obstruction(core::Triple(-3, 4, 5));
    CHECK(rep2.k == 110);
    CHECK(rep2.identity_ok);
    CHECK(rep2.all_in_S);
    CHECK_THROWS_AS(scan::strong_approx_obstruction(core::Triple(0, 0, 2)),
                    scan::NotOnCayleyShiftedSurface);
    // every surface point passes membership: sample a few orbit images
    core::Triple p(3, 3, 4);
    for (int j = 0; j < 6; ++j) {
        p = core::vieta(p, 1 + j % 3);
        auto r = scan::strong_approx_obstruction(p);
        CHECK(r.identity_ok);
        CHECK(r.all_in_S);
    }
}

TEST_CASE("exact counts vs asymptotics") {
    auto cmp = scan::exact_counts_vs_asymptotics(1000000, {3, 4, 10});
    // two countings of the same sets
    auto hp = scan::sweep_class_numbers(1000000);
    u64 total = 0;
    for (u64 i = 5; i < hp.size(); ++i) total += hp[i];
    CHECK(cmp.r_plus == static_cast<i64>(total));
    auto hn = scan::sweep_class_numbers_negative(1000000);
    u64 ntotal = 0;
    for (u64 i = 1; i < hn.size(); ++i) ntotal += hn[i];
    CHECK(cmp.r_minus == static_cast<i64>(ntotal));
    // residuals at the O(sqrt K) scale
    for (const auto& row : cmp.rows) CHECK(std::abs(row.residual_over_sqrtK) < 10.0);
}

TEST_CASE("sector histogram basics") {
    // r_a(a^2) counts the origin; b_A sums over a
    auto b = scan::sector_histogram(100000, 20);
    CHECK(b[25] >= 1);  // a=5 contributes (0,0)
    i64 direct = scan::sector_counts(100000, 20, 25);
    CHECK(direct == b[25]);
    u64 sum_b = 0;
    for (u64 v : b) sum_b += v;
    // coarse sanity: mean value C K log A within a factor of 2
    double expect = scan::sector_constant() * 100000.0 * std::log(20.0);
    CHECK(static_cast<double>(sum_b) > 0.5 * expect);
    CHECK(static_cast<double>(sum_b) < 2.0 * expect);
}

TEST_CASE("variance experiment config guards and trend") {
    scan::VarianceConfig bad;
    bad.K = 1000000;
    bad.A = 30;  // below the (log10 K)^2 = 36 window
    CHECK_THROWS_AS(scan::variance_experiment(bad), scan::ConfigViolation);

    // the experiment reports the deviation from C log A delta^(m)(k); at desk
    // scale the asymptotic shrinking of variance/(log A)^2 is out of reach, so
    // only the mean value and finiteness are asserted here
    for (i64 A : {100, 200}) {
        scan::VarianceConfig cfg;
        cfg.K = 300000;
        cfg.A = A;
        auto rep = scan::variance_experiment(cfg);
        CHECK(rep.mean_ratio > 0.8);
        CHECK(rep.mean_ratio < 1.2);
        CHECK(rep.variance > 0.0);
        CHECK(rep.k_used == cfg.K - 1);  // k = 4 skipped
        CHECK(rep.config.L == 13);       // floored prime cutoff
    }
}
