#include "markoff/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "markoff/local.hpp"

namespace markoff {
namespace scan {

using nlohmann::json;

static const char* kToolVersion = "markoff 1.0.0";

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

void bump(std::vector<std::uint16_t>& h, size_t i) {
    if (h[i] == UINT16_MAX) throw std::overflow_error("class-number counter saturated");
    ++h[i];
}

// MARKOFF_MEMORY_BUDGET_MB caps the large counter arrays (default 2048).
void check_memory_budget(u64 bytes) {
    u64 budget_mb = 2048;
    if (const char* env = std::getenv("MARKOFF_MEMORY_BUDGET_MB")) {
        char* end = nullptr;
        u64 v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) budget_mb = v;
    }
    if (bytes > budget_mb * 1024 * 1024)
        throw classify::RangeTooLarge("memory budget exceeded; raise MARKOFF_MEMORY_BUDGET_MB");
}

u64 admissible_upto(i64 K) {
    // #{1 <= k <= K : k admissible}; 21 admissible residues per 36
    if (K <= 0) return 0;
    u64 full = static_cast<u64>(K / 36), count = full * 21;
    for (i64 k = K - K % 36 + 1; k <= K; ++k)
        if (classify::is_admissible(k).admissible) ++count;
    return count;
}

}  // namespace

std::vector<std::uint16_t> sweep_class_numbers(i64 K) {
    if (K < 5 || K > 100000000) throw std::invalid_argument("sweep bound out of range");
    check_memory_budget(2 * (static_cast<u64>(K) + 1));
    std::vector<std::uint16_t> h(static_cast<size_t>(K) + 1, 0);
    for (i64 u1 = 3;; ++u1) {
        i128 base = 3 * i128{u1} * u1 + i128{u1} * u1 * u1;
        if (base > K) break;
        i64 u2max = static_cast<i64>(isqrt_i128((i128{K} - i128{u1} * u1) / (u1 + 2)));
        for (i64 u2 = u1; u2 <= u2max; ++u2) {
            i128 c0 = i128{u1} * u1 + i128{u2} * u2;
            i128 b = i128{u1} * u2;
            for (i64 u3 = u2;; ++u3) {
                i128 val = c0 + i128{u3} * u3 + b * u3;
                if (val > K) break;
                bump(h, static_cast<size_t>(static_cast<i64>(val)));
            }
        }
    }
    return h;
}

std::vector<std::uint16_t> sweep_class_numbers_negative(i64 K) {
    if (K < 1 || K > 100000000) throw std::invalid_argument("sweep bound out of range");
    check_memory_budget(2 * (static_cast<u64>(K) + 1));
    std::vector<std::uint16_t> h(static_cast<size_t>(K) + 1, 0);
    for (i64 u1 = 3;; ++u1) {
        i128 u2lim = (i128{u1} * u1 + K) / (u1 - 2);
        i64 u2max = static_cast<i64>(isqrt_i128(u2lim));
        if (u1 > u2max) break;
        for (i64 u2 = u1; u2 <= u2max; ++u2) {
            i128 b = i128{u1} * u2;
            i128 c0 = i128{u1} * u1 + i128{u2} * u2;
            for (i64 u3 = u2; 2 * i128{u3} <= b; ++u3) {
                i128 val = c0 + i128{u3} * u3 - b * u3;
                if (val >= 0) continue;
                if (val < -i128{K}) continue;
                bump(h, static_cast<size_t>(static_cast<i64>(-val)));
            }
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Census
// ---------------------------------------------------------------------------

ChunkStat census_chunk(i64 id, i64 lo, i64 hi) {
    ChunkStat st;
    st.id = id;
    st.lo = lo;
    st.hi = hi;
    size_t n = static_cast<size_t>(hi - lo + 1);
    check_memory_budget(3 * static_cast<u64>(n));

    std::vector<unsigned char> exc(n, 0);
    // k = u^2 + v^2
    for (i64 u = 0; i128{u} * u * 2 <= hi; ++u) {
        i64 vlo = u;
        if (i128{u} * u + i128{vlo} * vlo < lo) {
            i128 need = lo - i128{u} * u;
            vlo = std::max<i64>(u, static_cast<i64>(isqrt_i128(need > 0 ? need - 1 : 0)));
        }
        for (i64 v = vlo; i128{u} * u + i128{v} * v <= hi; ++v) {
            i64 k = static_cast<i64>(i128{u} * u + i128{v} * v);
            if (k >= lo) exc[static_cast<size_t>(k - lo)] = 1;
        }
    }
    // 4(k-1) = u^2 + 3 v^2, u = v (mod 2)
    i128 tlo = 4 * (i128{lo} - 1), thi = 4 * (i128{hi} - 1);
    for (i64 v = 0; 3 * i128{v} * v <= thi; ++v) {
        i128 rem = tlo - 3 * i128{v} * v;
        i64 ustart = v % 2;
        if (rem > 0) {
            i64 r = static_cast<i64>(isqrt_i128(rem - 1));
            ustart = std::max<i64>(ustart, r - 2);
            if ((ustart % 2) != (v % 2)) ++ustart;
        }
        for (i64 u = ustart; i128{u} * u + 3 * i128{v} * v <= thi; u += 2) {
            i128 t = i128{u} * u + 3 * i128{v} * v;
            if (t < tlo) continue;
            i64 k = static_cast<i64>(t / 4) + 1;
            if (k >= lo && k <= hi) exc[static_cast<size_t>(k - lo)] = 1;
        }
    }
    // k = u^2 + 4
    for (i64 u = 0; i128{u} * u + 4 <= hi; ++u) {
        i64 k = static_cast<i64>(i128{u} * u) + 4;
        if (k >= lo) exc[static_cast<size_t>(k - lo)] = 1;
    }

    // windowed class-number sweep
    std::vector<std::uint16_t> h(n, 0);
    for (i64 u1 = 3;; ++u1) {
        i128 base = 3 * i128{u1} * u1 + i128{u1} * u1 * u1;
        if (base > hi) break;
        i64 u2max = static_cast<i64>(isqrt_i128((i128{hi} - i128{u1} * u1) / (u1 + 2)));
        for (i64 u2 = u1; u2 <= u2max; ++u2) {
            i128 c0 = i128{u1} * u1 + i128{u2} * u2;
            i128 b = i128{u1} * u2;
            i64 u3 = u2;
            i128 low_gap = i128{lo} - c0;
            if (low_gap > 0) {
                // first u3 with c0 + u3^2 + b u3 >= lo
                i128 disc = b * b + 4 * low_gap;
                i64 r = static_cast<i64>((isqrt_i128(disc) - b) / 2);
                u3 = std::max<i64>(u2, r - 2);
            }
            for (;; ++u3) {
                i128 val = c0 + i128{u3} * u3 + b * u3;
                if (val > hi) break;
                if (val >= lo) bump(h, static_cast<size_t>(static_cast<i64>(val) - lo));
            }
        }
    }

    for (i64 k = lo; k <= hi; ++k) {
        size_t i = static_cast<size_t>(k - lo);
        if (!classify::is_admissible(k).admissible) continue;
        ++st.admissible;
        if (exc[i]) {
            ++st.exceptional;
            continue;
        }
        ++st.generic;
        u64 hk = h[i];
        if (st.h_hist.size() <= hk) st.h_hist.resize(hk + 1, 0);
        ++st.h_hist[hk];
        if (hk == 0) {
            ++st.hf;
            ++st.hf_mod3[static_cast<size_t>(k % 3)];
            ++st.hf_mod4[static_cast<size_t>(k % 4)];
            ++st.hf_mod9[static_cast<size_t>(k % 9)];
        }
    }
    return st;
}

namespace {

void merge_chunk(CensusAggregate& agg, const ChunkStat& st) {
    agg.admissible_count += st.admissible;
    agg.exceptional_count += st.exceptional;
    agg.generic_count += st.generic;
    agg.hf_count += st.hf;
    for (size_t i = 0; i < 3; ++i) agg.hf_mod3[i] += st.hf_mod3[i];
    for (size_t i = 0; i < 4; ++i) agg.hf_mod4[i] += st.hf_mod4[i];
    for (size_t i = 0; i < 9; ++i) agg.hf_mod9[i] += st.hf_mod9[i];
    if (agg.h_histogram.size() < st.h_hist.size()) agg.h_histogram.resize(st.h_hist.size(), 0);
    for (size_t i = 0; i < st.h_hist.size(); ++i) agg.h_histogram[i] += st.h_hist[i];
}

json chunk_to_json(const ChunkStat& st) {
    json j;
    j["id"] = st.id;
    j["lo"] = st.lo;
    j["hi"] = st.hi;
    j["admissible"] = st.admissible;
    j["exceptional"] = st.exceptional;
    j["generic"] = st.generic;
    j["hf"] = st.hf;
    j["hf_mod3"] = st.hf_mod3;
    j["hf_mod4"] = st.hf_mod4;
    j["hf_mod9"] = st.hf_mod9;
    j["h_hist"] = st.h_hist;
    return j;
}

ChunkStat chunk_from_json(const json& j) {
    ChunkStat st;
    st.id = j.at("id").get<i64>();
    st.lo = j.at("lo").get<i64>();
    st.hi = j.at("hi").get<i64>();
    st.admissible = j.at("admissible").get<u64>();
    st.exceptional = j.at("exceptional").get<u64>();
    st.generic = j.at("generic").get<u64>();
    st.hf = j.at("hf").get<u64>();
    st.hf_mod3 = j.at("hf_mod3").get<std::array<u64, 3>>();
    st.hf_mod4 = j.at("hf_mod4").get<std::array<u64, 4>>();
    st.hf_mod9 = j.at("hf_mod9").get<std::array<u64, 9>>();
    st.h_hist = j.at("h_hist").get<std::vector<u64>>();
    return st;
}

u64 fnv1a(const std::string& s) {
    u64 h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

double CensusAggregate::hf_percentage() const {
    u64 adm = admissible_upto(K);
    return adm == 0 ? 0.0 : 100.0 * static_cast<double>(hf_count) / static_cast<double>(adm);
}

std::string checkpoint_serialize(const CensusAggregate& partial,
                                 const std::vector<ChunkStat>& done, const std::string& flags) {
    json j;
    j["tool"] = kToolVersion;
    j["kind"] = "scan-checkpoint";
    j["version"] = 1;
    j["K"] = partial.K;
    j["kmin"] = partial.kmin;
    j["chunk_width"] = partial.chunk_width;
    j["flags"] = flags;
    json arr = json::array();
    for (const ChunkStat& st : done) arr.push_back(chunk_to_json(st));
    j["completed"] = arr;
    std::string payload = j.dump();
    json wrapper;
    wrapper["payload"] = j;
    wrapper["checksum"] = fnv1a(payload);
    return wrapper.dump(2);
}

void checkpoint_write_atomic(const std::string& path, const std::string& payload) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CheckpointError("cannot write " + tmp);
        out << payload;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw CheckpointError("cannot rename checkpoint into place");
}

std::vector<ChunkStat> checkpoint_load(const std::string& path, i64 K, i64 kmin,
                                       i64 chunk_width) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot read " + path);
    json wrapper = json::parse(in);
    json payload = wrapper.at("payload");
    u64 sum = wrapper.at("checksum").get<u64>();
    if (fnv1a(payload.dump()) != sum) throw CheckpointError("checkpoint checksum mismatch");
    if (payload.at("K").get<i64>() != K || payload.at("kmin").get<i64>() != kmin ||
        payload.at("chunk_width").get<i64>() != chunk_width)
        throw CheckpointError("checkpoint does not match the requested scan");
    std::vector<ChunkStat> out;
    for (const json& cj : payload.at("completed")) out.push_back(chunk_from_json(cj));
    return out;
}

CensusAggregate census(i64 K, const CensusOptions& opts) {
    if (K < 5) throw std::invalid_argument("census needs K >= 5");
    if (opts.kmin < 0 || opts.kmin > K) throw std::invalid_argument("bad kmin");
    if (opts.chunk_width < 1) throw std::invalid_argument("bad chunk width");
    CensusAggregate agg;
    agg.K = K;
    agg.kmin = std::max<i64>(opts.kmin, 5);
    agg.chunk_width = opts.chunk_width;

    i64 nchunks = (K - agg.kmin) / agg.chunk_width + 1;
    std::vector<ChunkStat> done;
    std::vector<bool> have(static_cast<size_t>(nchunks), false);
    if (opts.resume && !opts.checkpoint_path.empty()) {
        for (ChunkStat& st : checkpoint_load(opts.checkpoint_path, K, agg.kmin,
                                             agg.chunk_width)) {
            if (st.id >= 0 && st.id < nchunks && !have[static_cast<size_t>(st.id)]) {
                have[static_cast<size_t>(st.id)] = true;
                done.push_back(std::move(st));
            }
        }
    }

    std::mutex mu;
    std::atomic<i64> next{0};
    int nthreads = std::max(1, opts.threads);
    std::vector<std::thread> pool;
    std::exception_ptr err;
    auto worker = [&]() {
        try {
            for (;;) {
                i64 id = next.fetch_add(1);
                if (id >= nchunks) return;
                {
                    std::lock_guard<std::mutex> g(mu);
                    if (have[static_cast<size_t>(id)]) continue;
                }
                i64 lo = agg.kmin + id * agg.chunk_width;
                i64 hi = std::min<i64>(K, lo + agg.chunk_width - 1);
                ChunkStat st = census_chunk(id, lo, hi);
                std::lock_guard<std::mutex> g(mu);
                have[static_cast<size_t>(id)] = true;
                done.push_back(std::move(st));
                if (!opts.checkpoint_path.empty()) {
                    checkpoint_write_atomic(opts.checkpoint_path,
                                            checkpoint_serialize(agg, done, opts.flags));
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> g(mu);
            if (!err) err = std::current_exception();
        }
    };
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);

    std::sort(done.begin(), done.end(),
              [](const ChunkStat& a, const ChunkStat& b) { return a.id < b.id; });
    for (const ChunkStat& st : done) merge_chunk(agg, st);
    agg.chunks = std::move(done);
    return agg;
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

namespace {

// all prime factors of n lie in the residue set `res` mod `m`
bool prime_factors_in(i64 n, i64 m, std::initializer_list<i64> res) {
    if (n < 1) return false;
    for (i64 p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            bool ok = false;
            for (i64 r : res)
                if (((p % m) + m) % m == ((r % m) + m) % m) ok = true;
            if (!ok) return false;
            n /= p;
        }
    }
    if (n > 1) {
        bool ok = false;
        for (i64 r : res)
            if (((n % m) + m) % m == ((r % m) + m) % m) ok = true;
        return ok;
    }
    return true;
}

bool hf1_nu_ok(i64 nu) {
    // prime factors in {+-1} mod 8 and nu in {0, +-3, +-4} mod 9
    i64 r9 = nu % 9;
    bool mod9 = r9 == 0 || r9 == 3 || r9 == 6 || r9 == 4 || r9 == 5;
    return mod9 && nu > 1 && prime_factors_in(nu, 8, {1, -1});
}

}  // namespace

std::optional<Family> family_from_name(const std::string& name) {
    if (name == "hf1") return Family::Hf1Combined;
    if (name == "hf1_2nu2_plus") return Family::Hf1TwoNuSqPlus;
    if (name == "hf1_2nu2_minus") return Family::Hf1TwoNuSqMinus;
    if (name == "hf1_2ell2") return Family::Hf1TwoEllSq;
    if (name == "f12" || name == "f12nu2") return Family::F12NuSq;
    if (name == "f20" || name == "f20nu2") return Family::F20NuSq;
    return std::nullopt;
}

std::vector<FamilyMember> family_generators(Family family, int limit) {
    if (limit < 1) throw std::invalid_argument("family limit must be >= 1");
    std::vector<FamilyMember> out;
    auto emit = [&](i64 k, i64 nu, const std::string& tag) {
        out.push_back(FamilyMember{k, nu, tag});
    };
    switch (family) {
        case Family::Hf1TwoNuSqPlus:
            for (i64 nu = 3; static_cast<int>(out.size()) < limit && nu < 4000000; nu += 2)
                if (hf1_nu_ok(nu)) emit(4 + 2 * nu * nu, nu, "k=4+2nu^2");
            break;
        case Family::Hf1TwoNuSqMinus:
            for (i64 nu = 3; static_cast<int>(out.size()) < limit && nu < 4000000; nu += 2)
                if (hf1_nu_ok(nu)) emit(4 - 2 * nu * nu, nu, "k=4-2nu^2");
            break;
        case Family::Hf1TwoEllSq:
            for (i64 l = 13; static_cast<int>(out.size()) < limit && l < 4000000; l += 2) {
                i64 r9 = l % 9;
                if ((r9 == 4 || r9 == 5) && is_prime_u64(static_cast<u64>(l)))
                    emit(4 + 2 * l * l, l, "k=4+2ell^2");
            }
            break;
        case Family::F12NuSq:
            // nu = 5 (mod 16): the reference enumeration of this family
            for (i64 nu = 5; static_cast<int>(out.size()) < limit && nu < 4000000; nu += 16)
                if (prime_factors_in(nu, 12, {1, -1})) emit(4 + 12 * nu * nu, nu, "k=4+12nu^2");
            break;
        case Family::F20NuSq:
            for (i64 nu = 3; static_cast<int>(out.size()) < limit && nu < 4000000; ++nu) {
                i64 r9 = nu % 9;
                if ((r9 == 4 || r9 == 5) && prime_factors_in(nu, 20, {1, -1}))
                    emit(4 + 20 * nu * nu, nu, "k=4+20nu^2");
            }
            break;
        case Family::Hf1Combined: {
            auto a = family_generators(Family::Hf1TwoNuSqPlus, limit);
            auto b = family_generators(Family::Hf1TwoEllSq, limit);
            std::vector<FamilyMember> merged;
            merged.reserve(a.size() + b.size());
            merged.insert(merged.end(), a.begin(), a.end());
            merged.insert(merged.end(), b.begin(), b.end());
            std::sort(merged.begin(), merged.end(),
                      [](const FamilyMember& x, const FamilyMember& y) { return x.k < y.k; });
            merged.erase(std::unique(merged.begin(), merged.end(),
                                     [](const FamilyMember& x, const FamilyMember& y) {
                                         return x.k == y.k;
                                     }),
                         merged.end());
            if (static_cast<int>(merged.size()) > limit) merged.resize(limit);
            return merged;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Strong approximation obstruction
// ---------------------------------------------------------------------------

ObstructionReport strong_approx_obstruction(const core::Triple& p) {
    ObstructionReport rep;
    rep.k = core::evaluate(p);
    rep.d = rep.k - 4;
    if (rep.d == 0) throw NotOnCayleyShiftedSurface();
    rep.w = checked_sub(checked_mul(2, p.x3), checked_mul(p.x1, p.x2));
    i128 lhs = checked_sub(checked_mul(rep.w, rep.w), checked_mul(4, rep.d));
    i128 rhs = checked_mul(checked_sub(checked_mul(p.x1, p.x1), 4),
                           checked_sub(checked_mul(p.x2, p.x2), 4));
    rep.identity_ok = (lhs == rhs);
    i128 mod = 4 * iabs(rep.d);
    rep.all_in_S = true;
    for (int j = 1; j <= 3; ++j) {
        ObstructionCoord c;
        c.j = j;
        i128 val = checked_sub(checked_mul(p[j], p[j]), 4);
        c.residue = ((val % mod) + mod) % mod;
        c.symbol = local::kronecker(4 * rep.d, c.residue);
        c.in_S = (c.symbol == 0 || c.symbol == 1);
        rep.coords[static_cast<size_t>(j - 1)] = c;
        if (!c.in_S) rep.all_in_S = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Exact counts vs asymptotics
// ---------------------------------------------------------------------------

namespace {

i64 count_Na(i64 a, i64 K) {
    // pairs a <= m <= n with a^2 + m^2 + n^2 + a m n <= K
    i64 total = 0;
    for (i64 m = a;; ++m) {
        i128 c0 = i128{a} * a + i128{m} * m;
        if (c0 + i128{m} * m + i128{a} * m * m > K) break;
        // n range: m <= n <= floor of larger root of n^2 + (am) n + (c0 - K)
        i128 b = i128{a} * m;
        i128 disc = b * b - 4 * (c0 - K);
        i64 nhi = static_cast<i64>((isqrt_i128(disc) - b) / 2);
        if (nhi >= m) total += nhi - m + 1;
    }
    return total;
}

i64 count_r_plus(i64 K) {
    i64 total = 0;
    for (i64 a = 3;; ++a) {
        i128 base = 3 * i128{a} * a + i128{a} * a * a;
        if (base > K) break;
        total += count_Na(a, K);
    }
    return total;
}

i64 count_r_minus(i64 K) {
    // triples 3 <= u1 <= u2 <= u3 <= u1 u2/2 with -K <= M < 0
    i64 total = 0;
    for (i64 u1 = 3;; ++u1) {
        i128 u2lim = (i128{u1} * u1 + K) / (u1 - 2);
        i64 u2max = static_cast<i64>(isqrt_i128(u2lim));
        if (u1 > u2max) break;
        for (i64 u2 = u1; u2 <= u2max; ++u2) {
            i128 b = i128{u1} * u2;
            i128 c0 = i128{u1} * u1 + i128{u2} * u2;
            // value decreasing in u3 on [u2, b/2]; want -K <= val <= -1
            i128 disc1 = b * b - 4 * (c0 + 1);
            if (disc1 < 0) continue;
            // smallest u3 with val <= -1
            i128 s1 = isqrt_i128(disc1);
            i64 lo = static_cast<i64>((b - s1 + 1) / 2);
            while (c0 + i128{lo} * lo - b * lo > -1) ++lo;
            while (lo > u2 && c0 + i128{lo - 1} * (lo - 1) - b * (lo - 1) <= -1) --lo;
            lo = std::max(lo, u2);
            i64 hi = static_cast<i64>(b / 2);
            i128 disc2 = b * b - 4 * (c0 + i128{K});
            if (disc2 >= 0) {
                // largest u3 on the left branch with val >= -K
                i128 s2 = isqrt_i128(disc2);
                i64 cap = static_cast<i64>((b - s2) / 2);
                while (c0 + i128{cap} * cap - b * cap < -i128{K}) --cap;
                while (cap + 1 <= hi && c0 + i128{cap + 1} * (cap + 1) - b * (cap + 1) >= -i128{K})
                    ++cap;
                hi = std::min(hi, cap);
            }
            if (hi >= lo) total += hi - lo + 1;
        }
    }
    return total;
}

}  // namespace

CountComparison exact_counts_vs_asymptotics(i64 K, const std::vector<i64>& a_values) {
    if (K < 1000) throw std::invalid_argument("comparison needs K >= 1000");
    CountComparison out;
    out.K = K;
    for (i64 a : a_values) {
        CountComparisonRow row;
        row.a = a;
        row.exact = count_Na(a, K);
        double da = std::sqrt(static_cast<double>(a) * a - 4.0);
        row.formula = std::log((std::sqrt(a - 2.0) + std::sqrt(a + 2.0)) / 2.0) *
                      (static_cast<double>(K) - static_cast<double>(a) * a) / da;
        row.residual = static_cast<double>(row.exact) - row.formula;
        row.residual_over_sqrtK = row.residual / std::sqrt(static_cast<double>(K));
        out.rows.push_back(row);
    }
    out.r_plus = count_r_plus(K);
    out.r_minus = count_r_minus(K);
    return out;
}

// ---------------------------------------------------------------------------
// Sector counts and variance experiment
// ---------------------------------------------------------------------------

double sector_constant() { return 0.25 * std::log(1.5); }

namespace {

// enumerate sector lattice points for one a; calls f(k) for each point with f_a = k <= K
template <typename F>
void for_sector_points(i64 K, i64 a, F&& f) {
    i128 d = i128{a} * a - 4;
    // x2 = 0 admits only x1 = 0
    if (i128{a} * a <= K) f(static_cast<i64>(a) * a);
    for (i64 x2 = 1;; ++x2) {
        i128 dx2sq = d * x2 * x2;
        // lower ray: smallest integer T with T^2 >= 4 d x2^2
        i128 T = isqrt_i128(4 * dx2sq);
        if (T * T < 4 * dx2sq) ++T;
        i64 x1lo = static_cast<i64>((T - a * x2 + ((T - a * x2) % 2 + 2) % 2) / 2);
        while (2 * i128{x1lo} + i128{a} * x2 < T) ++x1lo;
        while (x1lo > 0 && 2 * (i128{x1lo} - 1) + i128{a} * x2 >= T) --x1lo;
        x1lo = std::max<i64>(x1lo, 0);
        // upper ray
        i128 U = isqrt_i128(9 * dx2sq);
        i64 x1hi = static_cast<i64>((U - a * x2) / 2);
        while (2 * i128{x1hi} + i128{a} * x2 > U) --x1hi;
        // g <= K cap
        i128 V = isqrt_i128(4 * i128{K} + dx2sq);
        i64 x1cap = static_cast<i64>((V - a * x2) / 2);
        while (2 * i128{x1cap} + i128{a} * x2 > V) --x1cap;
        x1hi = std::min(x1hi, x1cap);
        if (x1hi < x1lo) {
            if (3 * dx2sq > 4 * i128{K}) break;  // lower ray left the disc g <= K
            continue;
        }
        for (i64 x1 = x1lo; x1 <= x1hi; ++x1) {
            i128 k = i128{x1} * x1 + i128{x2} * x2 + i128{a} * x1 * x2 + i128{a} * a;
            if (k <= K) f(static_cast<i64>(k));
        }
    }
}

}  // namespace

std::vector<std::uint32_t> sector_histogram(i64 K, i64 A) {
    if (K < 1 || K > 10000000) throw ConfigViolation("sector histogram needs 1 <= K <= 10^7");
    if (A < 9) throw ConfigViolation("sector histogram needs A >= 9");
    std::vector<std::uint32_t> b(static_cast<size_t>(K) + 1, 0);
    i64 alo = static_cast<i64>(isqrt_u64(static_cast<u64>(A)));
    if (alo * alo < A) ++alo;
    for (i64 a = alo; a <= A; ++a)
        for_sector_points(K, a, [&](i64 k) { ++b[static_cast<size_t>(k)]; });
    return b;
}

i64 sector_counts(i64 K, i64 A, i64 k) {
    if (k < 1 || k > K) return 0;
    std::int64_t alo = static_cast<i64>(isqrt_u64(static_cast<u64>(A)));
    if (alo * alo < A) ++alo;
    i64 total = 0;
    for (i64 a = alo; a <= A; ++a)
        for_sector_points(K, a, [&](i64 kk) { total += (kk == k) ? 1 : 0; });
    return total;
}

VarianceReport variance_experiment(const VarianceConfig& config) {
    // desk-scale reading of the secondary-parameter window (log K)^2 < A
    double logK = std::log10(static_cast<double>(config.K));
    if (static_cast<double>(config.A) <= logK * logK)
        throw ConfigViolation("need A > (log10 K)^2");
    if (config.K < 100) throw ConfigViolation("variance experiment needs K >= 100");
    u64 L = std::max<u64>(config.L, 13);  // desk-scale floor

    VarianceReport rep;
    rep.config = config;
    rep.config.L = L;
    std::vector<std::uint32_t> b = sector_histogram(config.K, config.A);
    double logA = std::log(static_cast<double>(config.A));
    double C = sector_constant();

    double sum = 0.0, var = 0.0;
    i64 used = 0;
    for (i64 k = 1; k <= config.K; ++k) {
        sum += b[static_cast<size_t>(k)];
        if (k == 4) continue;  // closed-form densities undefined at k = 0, 4
        double dm = 1.0;
        for (u64 p = 2; p <= L; ++p) {
            if (!is_prime_u64(p)) continue;
            dm *= local::delta_p(p, k).to_double();
        }
        double dev = static_cast<double>(b[static_cast<size_t>(k)]) - C * logA * dm;
        var += dev * dev;
        ++used;
    }
    rep.sum_b = sum;
    rep.mean_ratio = sum / (C * static_cast<double>(config.K) * logA);
    rep.variance = var / static_cast<double>(config.K);
    rep.variance_over_log2 = rep.variance / (logA * logA);
    rep.k_used = used;
    return rep;
}

}  // namespace scan
}  // namespace markoff
