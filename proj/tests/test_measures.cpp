#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wba/measures.hpp"

using namespace wba;

namespace {

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("scheme families match the binomial oracle") {
    Sft full = Sft::full_shift(2);
    Potential ind = Potential::indicator(full, 1);
    // X: avg in (0.55, 0.65) over 12 positions -> exactly 7 ones
    ConcatenationScheme sch = build_scheme(full, ind, 0.5, 0.05, 0.05, 12, false);
    CHECK(sch.X.size() == binom(12, 7));
    CHECK(sch.Y.size() == binom(12, 5));
    for (const Word& w : sch.X) {
        int ones = 0;
        for (int s : w) ones += s;
        CHECK(ones == 7);
    }
}

TEST_CASE("scheme families on the golden mean") {
    Sft gm = Sft::golden_mean();
    Potential ind = Potential::indicator(gm, 1);
    ConcatenationScheme sch = build_scheme(gm, ind, 0.25, 0.05, 0.05, 12, false);
    // words with exactly k ones, none adjacent: C(12 - k + 1, k)
    CHECK(sch.X.size() == binom(9, 4));
    CHECK(sch.Y.size() == binom(11, 2));
    CHECK_THROWS_AS(build_scheme(gm, ind, 0.4, 0.05, 0.05, 12, false), PreconditionError);
}

TEST_CASE("p tuning hits the target exactly on symmetric families") {
    Sft full = Sft::full_shift(2);
    Potential ind = Potential::indicator(full, 1);
    ConcatenationScheme sch = build_scheme(full, ind, 0.5, 0.05, 0.05, 12, false);
    CHECK(sch.integral_x_only == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
    CHECK(sch.integral_y_only == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
    double p = tune_p(sch, 0.5);
    CHECK(p == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(scheme_integral(sch, p) - 0.5) <= 1e-9);
    // bracket failure reports both integrals
    CHECK_THROWS_AS(tune_p(sch, 0.9), Error);
}

TEST_CASE("sampling: determinism, admissibility, family composition") {
    Sft gm = Sft::golden_mean();
    Potential ind = Potential::indicator(gm, 1);
    ConcatenationScheme sch = build_scheme(gm, ind, 0.25, 0.05, 0.05, 12, false);
    tune_p(sch, 0.25);
    Rng r1 = Rng::split(5, 0), r2 = Rng::split(5, 0);
    Word a = sample_concatenation(sch, 300, r1);
    CHECK(a == sample_concatenation(sch, 300, r2));
    for (int s = 0; s < 100; ++s) {
        Rng rng = Rng::split(777, static_cast<std::uint64_t>(s));
        gm.validate(sample_concatenation(sch, 200, rng, true));
    }
    // p = 1 drives long-run averages above t, p = 0 below
    sch.p = 1.0;
    Rng rx = Rng::split(9, 0);
    Word wx = sample_concatenation(sch, 20000, rx);
    CHECK(ind.word_average(wx) > 0.25);
    sch.p = 0.0;
    Rng ry = Rng::split(9, 1);
    Word wy = sample_concatenation(sch, 20000, ry);
    CHECK(ind.word_average(wy) < 0.25);
}

TEST_CASE("concatenation cylinder masses are consistent and normalized") {
    Sft full = Sft::full_shift(2);
    Potential ind = Potential::indicator(full, 1);
    ConcatenationScheme sch = build_scheme(full, ind, 0.5, 0.12, 0.05, 4, false);
    REQUIRE(sch.X.size() == 4);  // exactly three-of-four ones
    REQUIRE(sch.Y.size() == 4);
    tune_p(sch, 0.5);
    for (int len : {4, 6, 8}) {
        double total = 0.0;
        for (const Word& w : full.enumerate_words(len)) {
            try {
                double v = concatenation_local_entropy(
                    sch, w, {static_cast<std::size_t>(len)})[0];
                total += std::exp(-v * len);
            } catch (const Error&) {
                // zero-mass word
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("block entropy accounting") {
    Sft full = Sft::full_shift(2);
    Potential ind = Potential::indicator(full, 1);
    ConcatenationScheme sch = build_scheme(full, ind, 0.5, 0.12, 0.05, 4, false);
    tune_p(sch, 0.5);
    CHECK(block_entropy_rate(sch)
          == doctest::Approx((std::log(2.0) + std::log(4.0)) / 4.0).epsilon(1e-9));
    // the sampled local entropy at block ends equals the accounting rate
    Rng rng = Rng::split(3, 0);
    Word w = sample_concatenation(sch, 64, rng);
    std::vector<double> tr = concatenation_local_entropy(sch, w, {16, 32, 64});
    for (double v : tr) CHECK(v == doctest::Approx(block_entropy_rate(sch)).epsilon(1e-9));
}

TEST_CASE("packing scheme validation") {
    Sft full = Sft::full_shift(2);
    CHECK_THROWS_AS(build_packing(full, {}, {}, {{2, 6}}), PreconditionError);
    CHECK_THROWS_AS(build_packing(full, {}, {0, 1}, {{2, 3}}), PreconditionError);
    CHECK_THROWS_AS(build_packing(full, {}, {0, 1}, {{2, 6}, {5, 12}}), PreconditionError);
    Sft gm = Sft::golden_mean();
    CHECK_THROWS_AS(build_packing(gm, {}, {1, 1}, {{2, 8}}), Error);  // bad anchor
    PackingScheme ps = build_packing(gm, {}, {0, 1, 0, 0, 0}, {{3, 10}, {12, 20}});
    CHECK(anchor_average(ps, Potential::indicator(gm, 1)) == doctest::Approx(0.2));
    CHECK(anchor_symbol(ps, 5) == 0);
    CHECK(anchor_symbol(ps, 6) == 1);
}

TEST_CASE("packing samples copy the anchor and stay admissible") {
    Sft gm = Sft::golden_mean();
    PackingScheme ps = build_packing(gm, {}, {0, 1, 0, 0, 0}, {{6, 14}, {18, 30}});
    for (int s = 0; s < 1000; ++s) {
        Rng rng = Rng::split(31337, static_cast<std::uint64_t>(s));
        Word w = sample_packing(ps, 40, rng);
        gm.validate(w);
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(w[i] == anchor_symbol(ps, i));
        for (std::size_t i = 14; i < 18; ++i)
            CHECK(w[i] == anchor_symbol(ps, i));
        for (std::size_t i = 30; i < 40; ++i)
            CHECK(w[i] == anchor_symbol(ps, i));
    }
    Rng r1 = Rng::split(4, 0), r2 = Rng::split(4, 0);
    CHECK(sample_packing(ps, 40, r1) == sample_packing(ps, 40, r2));
}

TEST_CASE("packing cylinder masses sum to one") {
    Sft full = Sft::full_shift(2);
    PackingScheme ps = build_packing(full, {}, {0, 1}, {{2, 6}, {8, 14}});
    double total = 0.0;
    int supported = 0;
    for (const Word& w : full.enumerate_words(14)) {
        try {
            double v = packing_local_entropy(ps, w, {14})[0];
            total += std::exp(-v * 14.0);
            ++supported;
        } catch (const Error&) {
        }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(supported == 1024);  // free symbols: 1 + 3 + 1 + 5
}

TEST_CASE("packing local entropy approaches h_top when blocks dominate") {
    Sft full = Sft::full_shift(2);
    // middle blocks cover nearly everything
    PackingScheme ps = build_packing(full, {}, {0, 1},
                                     {{2, 200}, {202, 2000}, {2002, 20000}});
    Rng rng = Rng::split(77, 0);
    Word w = sample_packing(ps, 20000, rng);
    std::vector<double> tr = packing_local_entropy(ps, w, {200, 2000, 20000});
    CHECK(std::abs(tr[2] - std::log(2.0)) / std::log(2.0) < 0.05);
    // checkpoints must be block ends
    CHECK_THROWS_AS(packing_local_entropy(ps, w, {150}), PreconditionError);
}

TEST_CASE("weighted average check") {
    Sft full = Sft::full_shift(2);
    Potential ind = Potential::indicator(full, 1);
    Word w = word_from_string("0101010101", 2);
    CHECK(weighted_average_check(w, WeightSequence::constant(), ind, 10)
          == doctest::Approx(0.5));
    double hv = weighted_average_check(w, WeightSequence::harmonic(), ind, 10);
    double direct = 0.0, S = 0.0;
    for (int k = 0; k < 10; ++k) {
        direct += (k % 2) / static_cast<double>(k + 1);
        S += 1.0 / (k + 1);
    }
    CHECK(hv == doctest::Approx(direct / S).epsilon(1e-12));
    CHECK_THROWS_AS(weighted_average_check(w, WeightSequence::constant(), ind, 11),
                    PreconditionError);
}
