#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wba/verify.hpp"

using namespace wba;

namespace {

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("cylinder counts match the exact binomial oracle") {
    Sft full = Sft::full_shift(2);
    Potential ind = Potential::indicator(full, 1);
    LevelSetQuery q{&full, &ind, 0.5, 0.1, 16, 20, nullptr};
    CountingReport r = count_level_cylinders(q);
    REQUIRE(r.depths.size() == 5);
    for (std::size_t i = 0; i < r.depths.size(); ++i) {
        int n = r.depths[i];
        std::uint64_t expect = 0;
        for (int k = 0; k <= n; ++k) {
            double avg = static_cast<double>(k) / n;
            if (std::abs(avg - 0.5) <= 0.1) expect += binom(n, k);
        }
        CHECK(r.counts[i] == expect);
    }
    CHECK(r.h_top == doctest::Approx(std::log(2.0)));
    CHECK(r.slope <= std::log(2.0) + 1e-6);
    CHECK(r.slope > 0.9 * std::log(2.0));  // the level around the argmax is fat
}

TEST_CASE("level sets outside the spectrum are empty") {
    Sft gm = Sft::golden_mean();
    Potential ind = Potential::indicator(gm, 1);
    LevelSetQuery out{&gm, &ind, 0.8, 0.05, 8, 12, nullptr};
    CountingReport r = count_level_cylinders(out);
    for (std::uint64_t c : r.counts) CHECK(c == 0);
    CHECK(r.slope == 0.0);
    // alpha = 0.6 > alpha^+ = 0.5 with a window that still misses every word
    // (odd-length alternating words come closest, at 5/9 < 0.56)
    LevelSetQuery edge{&gm, &ind, 0.6, 0.04, 8, 12, nullptr};
    CountingReport re = count_level_cylinders(edge);
    for (std::uint64_t c : re.counts) CHECK(c == 0);
}

TEST_CASE("counting slope tracks the spectrum at an off-center level") {
    Sft full = Sft::full_shift(2);
    Potential ind = Potential::indicator(full, 1);
    LevelSetQuery q{&full, &ind, 0.3, 0.02, 14, 21, nullptr};
    CountingReport r = count_level_cylinders(q);
    double H = spectrum_point(full, ind, 0.3);
    // finite-depth counts carry polynomial prefactors; generous tolerance
    CHECK(std::abs(r.slope - H) < 0.12);
}

TEST_CASE("constant weights reproduce plain counts exactly") {
    Sft gm = Sft::golden_mean();
    Potential ind = Potential::indicator(gm, 1);
    WeightSequence c = WeightSequence::constant();
    LevelSetQuery plain{&gm, &ind, 0.3, 0.05, 8, 14, nullptr};
    LevelSetQuery weighted{&gm, &ind, 0.3, 0.05, 8, 14, &c};
    CountingReport rp = count_level_cylinders(plain);
    CountingReport rw = count_level_cylinders(weighted);
    REQUIRE(rp.counts.size() == rw.counts.size());
    for (std::size_t i = 0; i < rp.counts.size(); ++i)
        CHECK(rp.counts[i] == rw.counts[i]);
    CHECK(rp.slope == doctest::Approx(rw.slope));
}

TEST_CASE("invalid queries are rejected") {
    Sft full = Sft::full_shift(2);
    Potential ind = Potential::indicator(full, 1);
    LevelSetQuery bad{&full, &ind, 0.5, 0.1, 12, 8, nullptr};
    CHECK_THROWS_AS(count_level_cylinders(bad), PreconditionError);
    LevelSetQuery neg{&full, &ind, 0.5, -0.1, 8, 12, nullptr};
    CHECK_THROWS_AS(count_level_cylinders(neg), PreconditionError);
}

TEST_CASE("averaging suite: bounded weights admit reverse bounds") {
    Theorem1Report r = run_theorem1_suite(WeightSequence::power(-0.5), 1u << 16);
    CHECK(r.bounded_case);
    CHECK(r.diag.G == doctest::Approx(2.0));
    CHECK(r.reverse_holds);
    CHECK(r.min_slack > 0.0);
    CHECK(r.pass);
}

TEST_CASE("averaging suite: harmonic weights flatten the counterexample") {
    Theorem1Report r = run_theorem1_suite(WeightSequence::harmonic(), 1u << 16);
    CHECK(!r.bounded_case);
    CHECK(r.k0 == 5);
    CHECK(r.weighted_sup <= 0.05);
    REQUIRE(r.plain_at_m.size() >= 6);
    // plain averages keep oscillating towards -1 / +1
    CHECK(r.plain_at_m[2] < -0.9);
    CHECK(r.plain_at_m[3] > 0.9);
    CHECK(r.plain_at_m[4] < -0.9);
    CHECK(r.plain_at_m[5] > 0.9);
    CHECK(r.pass);
}

TEST_CASE("weighted and plain counting slopes agree near the spectrum") {
    Sft full = Sft::full_shift(2);
    Potential ind = Potential::indicator(full, 1);
    WeightSequence h = WeightSequence::harmonic();
    SpectrumEqualityReport r =
        run_spectrum_equality_suite(full, ind, h, {0.3, 0.5, 0.7}, 0.05, 12, 18);
    REQUIRE(r.alphas.size() == 3);
    // finite-depth window counts jump as integer frequencies enter/leave the
    // window, so the plain slope carries more noise than the weighted gap
    CHECK(r.max_plain_discrepancy < 0.1);
    CHECK(r.max_weighted_discrepancy < 0.05);
    for (std::size_t i = 0; i < r.alphas.size(); ++i)
        CHECK(r.H_values[i]
              == doctest::Approx(spectrum_point(full, ind, r.alphas[i])).epsilon(1e-9));
}

TEST_CASE("packing suite on a short harmonic schedule") {
    Sft full = Sft::full_shift(2);
    Potential ind = Potential::indicator(full, 1);
    WeightSequence h = WeightSequence::harmonic();
    PackingReport r = run_packing_suite(full, ind, h, 0.5, {}, {0, 1}, 3, 4, 2024);
    REQUIRE(r.m_checkpoints.size() == 3);
    for (std::size_t i = 0; i + 1 < r.m_checkpoints.size(); ++i)
        CHECK(r.m_checkpoints[i] < r.m_checkpoints[i + 1]);
    CHECK(r.averages_pass);
    CHECK(r.entropy_pass);
    CHECK(r.pass);
    CHECK(r.worst_average_margin > 0.0);
    CHECK(r.worst_entropy_rel < 0.05);
}
