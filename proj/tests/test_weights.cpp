#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wba/weights.hpp"

using namespace wba;

TEST_CASE("partial sums: closed families") {
    WeightSequence c = WeightSequence::constant();
    CHECK(c.partial_sum(5) == doctest::Approx(5.0).epsilon(1e-15));
    WeightSequence h = WeightSequence::harmonic();
    CHECK(h.partial_sum(3) == doctest::Approx(11.0 / 6.0).epsilon(1e-14));
    WeightSequence p = WeightSequence::power(-0.5);
    // direct-summation oracle says S_{10^6} ~ 2 sqrt(10^6)
    CHECK(std::abs(p.partial_sum(1000000) - 2000.0) / 2000.0 < 0.002);
}

TEST_CASE("partial sums: random access equals sequential") {
    WeightSequence p = WeightSequence::power(-0.3);
    double direct = 0.0;
    for (std::uint64_t k = 0; k < 40000; ++k) direct += p.weight(k);
    WeightSequence q = WeightSequence::power(-0.3);
    CHECK(q.partial_sum(40000) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(q.partial_sum(7) == doctest::Approx(p.partial_sum(7)).epsilon(1e-15));
}

TEST_CASE("asymptotic ratio") {
    WeightSequence c = WeightSequence::constant();
    for (std::uint64_t n : {0ull, 5ull, 1000ull}) CHECK(c.ratio(n) == 1.0);
    WeightSequence h = WeightSequence::harmonic();
    CHECK(h.ratio(2) == doctest::Approx(11.0 / 6.0).epsilon(1e-14));
    WeightSequence p = WeightSequence::power(-0.5);
    CHECK(std::abs(p.ratio(1000000) - 2.0) < 0.01);
}

TEST_CASE("ratio >= 1 and power-family trend") {
    for (double d : {-0.2, -0.5, -0.9}) {
        WeightSequence p = WeightSequence::power(d);
        double prev_err = std::numeric_limits<double>::infinity();
        for (std::uint64_t n : {1000ull, 10000ull, 100000ull, 1000000ull}) {
            double r = p.ratio(n);
            CHECK(r >= 1.0);
            double err = std::abs(r - 1.0 / (1.0 + d));
            CHECK(err < prev_err);  // monotone approach to the limit
            prev_err = err;
        }
    }
}

TEST_CASE("classification") {
    RatioDiagnostics b = classify(WeightSequence::power(-0.5), 1u << 20);
    CHECK(b.kind == RatioDiagnostics::Kind::bounded);
    CHECK(b.G == doctest::Approx(2.0).epsilon(1e-12));
    RatioDiagnostics u = classify(WeightSequence::harmonic(), 1u << 20);
    CHECK(u.kind == RatioDiagnostics::Kind::unbounded);
    // harmonic ratio(n) is exactly the harmonic number H_{n+1}
    WeightSequence h = WeightSequence::harmonic();
    double H = 0.0;
    for (int k = 1; k <= 101; ++k) H += 1.0 / k;
    CHECK(h.ratio(100) == doctest::Approx(H).epsilon(1e-13));

    std::vector<double> geo;
    for (int k = 0; k < 200; ++k) geo.push_back(std::pow(0.5, k));
    CHECK_THROWS_AS(classify(WeightSequence::explicit_list(geo), 190),
                    Error);  // summable list rejected

    std::vector<double> hp;
    for (int k = 0; k < 100000; ++k) hp.push_back(1.0 / (k + 1));
    RatioDiagnostics e = classify(WeightSequence::explicit_list(hp), 90000);
    CHECK(e.kind == RatioDiagnostics::Kind::unknown);
    CHECK(e.empirical_sup > 10.0);
    CHECK(e.tail_growth > 0.0);
}

TEST_CASE("explicit list validation") {
    CHECK_THROWS_AS(WeightSequence::explicit_list({1.0, -0.5}), Error);
    CHECK_THROWS_AS(WeightSequence::explicit_list({0.5, 0.7}), Error);
    CHECK_THROWS_AS(WeightSequence::explicit_list({}), Error);
}

TEST_CASE("ubar schedule: harmonic certificates") {
    UbarSchedule sched = build_ubar_schedule(WeightSequence::harmonic(), 6);
    REQUIRE(sched.entries.size() == 6);
    CHECK(sched.certified);
    double prev_ln_m = -1.0;
    for (std::size_t k = 1; k <= 6; ++k) {
        const UbarEntry& e = sched.entries[k - 1];
        double cert = std::pow(2.0, -static_cast<double>(k));
        CHECK(e.cert_count <= cert);
        CHECK(e.cert_gap <= cert);
        CHECK(e.cert_index <= cert);
        CHECK(e.ln_n <= e.ln_m);
        CHECK(e.ln_n > prev_ln_m);  // n_{k+1} > m_k
        prev_ln_m = e.ln_m;
    }
    // first two entries are materializable and match the oracle
    CHECK(sched.entries[0].exact);
    CHECK(sched.entries[0].n == 4);
    CHECK(sched.entries[0].m == 18);
    CHECK(sched.entries[1].n == 4549);
    CHECK(sched.entries[1].m == 91378);
}

TEST_CASE("ubar schedule: telescoping gap estimate") {
    UbarSchedule sched = build_ubar_schedule(WeightSequence::harmonic(), 6);
    const std::size_t k0 = 4;
    for (std::size_t k = k0; k <= 6; ++k) {
        double gaps = 0.0;
        for (std::size_t l = 1; l <= k; ++l)
            gaps += sched.entries[l - 1].S_m - sched.entries[l - 1].S_n;
        double bound = std::pow(2.0, -static_cast<double>(k0) + 2.0)
                       + sched.entries[k0 - 2].S_m / sched.entries[k - 1].S_m;
        CHECK(gaps / sched.entries[k - 1].S_m <= bound);
    }
}

TEST_CASE("ubar schedule: explicit harmonic prefix agrees with the family") {
    std::vector<double> hp;
    hp.reserve(10000000);
    for (std::uint64_t k = 0; k < 10000000; ++k)
        hp.push_back(1.0 / static_cast<double>(k + 1));
    UbarSchedule ex = build_ubar_schedule(WeightSequence::explicit_list(std::move(hp)), 2,
                                          10000000.0);
    UbarSchedule fam = build_ubar_schedule(WeightSequence::harmonic(), 2);
    REQUIRE(ex.entries.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(ex.entries[k].n == fam.entries[k].n);
        CHECK(ex.entries[k].m == fam.entries[k].m);
    }
}

TEST_CASE("ubar schedule: preconditions and horizon") {
    CHECK_THROWS_AS(build_ubar_schedule(WeightSequence::constant(), 3), PreconditionError);
    UbarSchedule partial = build_ubar_schedule(WeightSequence::harmonic(), 4, 100000.0);
    CHECK(partial.horizon_exhausted);
    CHECK(partial.entries.size() < 4);
}

TEST_CASE("raw pairs interleave and stay materializable") {
    UbarSchedule raw = build_raw_pairs(WeightSequence::harmonic(), 4, 8, 100000000ull);
    REQUIRE(raw.entries.size() == 4);
    CHECK(!raw.certified);
    std::uint64_t prev_m = 0;
    for (const UbarEntry& e : raw.entries) {
        CHECK(e.exact);
        CHECK(e.n > prev_m);
        CHECK(e.n <= e.m);
        prev_m = e.m;
    }
}

TEST_CASE("log-scale partial sums agree with direct sums") {
    WeightSequence h = WeightSequence::harmonic();
    REQUIRE(h.has_log_scale());
    for (std::uint64_t n : {100ull, 10000ull, 100000ull}) {
        double direct = h.partial_sum(n);
        double viaLog = h.partial_sum_log(std::log(static_cast<double>(n)));
        CHECK(viaLog == doctest::Approx(direct).epsilon(1e-10));
        CHECK(std::exp(h.log_index_for_sum(direct))
              == doctest::Approx(static_cast<double>(n)).epsilon(1e-8));
    }
}
