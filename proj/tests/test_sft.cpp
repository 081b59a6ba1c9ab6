#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "wba/sft.hpp"

using namespace wba;

TEST_CASE("full shift and golden mean basics") {
    Sft full = Sft::full_shift(2);
    CHECK(full.aperiodicity_exponent() == 1);
    CHECK(full.perron_root() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(full.count_words(4) == 16);
    CHECK(full.topological_entropy() == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    Sft gm = Sft::golden_mean();
    CHECK(gm.aperiodicity_exponent() == 2);
    CHECK(gm.perron_root() == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(std::abs(gm.topological_entropy() - 0.4812118251) < 1e-9);

    Sft full3 = Sft::full_shift(3);
    CHECK(full3.topological_entropy() == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("rejects reducible and periodic matrices") {
    CHECK_THROWS_AS(Sft::from_adjacency({{0, 1}, {1, 0}}), Error);   // period 2
    CHECK_THROWS_AS(Sft::from_adjacency({{1, 0}, {0, 1}}), Error);   // reducible
    CHECK_THROWS_AS(Sft::from_adjacency({{1, 1}, {1}}), Error);     // not square
    CHECK_THROWS_AS(Sft::from_adjacency({{1}}), Error);              // K < 2
}

TEST_CASE("word counts follow Fibonacci on the golden mean") {
    Sft gm = Sft::golden_mean();
    std::uint64_t f1 = 1, f2 = 2;  // F_2, F_3
    for (int n = 1; n <= 20; ++n) {
        CHECK(gm.count_words(n) == f2);  // F_{n+2}
        std::uint64_t fib = f1 + f2;
        f1 = f2;
        f2 = fib;
    }
    std::vector<Word> w3 = gm.enumerate_words(3);
    REQUIRE(w3.size() == 5);
    CHECK(word_to_string(w3[0]) == "000");
    CHECK(word_to_string(w3[1]) == "001");
    CHECK(word_to_string(w3[2]) == "010");
    CHECK(word_to_string(w3[3]) == "100");
    CHECK(word_to_string(w3[4]) == "101");
    CHECK(gm.enumerate_words(10).size() == 144);
}

TEST_CASE("word count growth approaches log lambda") {
    for (const Sft& s : {Sft::full_shift(2), Sft::golden_mean(), Sft::full_shift(3)}) {
        double slope = (std::log(static_cast<double>(s.count_words(20)))
                        - std::log(static_cast<double>(s.count_words(10))))
                       / 10.0;
        CHECK(std::abs(slope - s.topological_entropy()) <= 0.01);
    }
}

TEST_CASE("enumeration cap") {
    Sft full = Sft::full_shift(2);
    CHECK_THROWS_AS(full.enumerate_words(10, 100), CapExceededError);
}

TEST_CASE("admissibility") {
    Sft gm = Sft::golden_mean();
    CHECK(gm.admissible(word_from_string("010010", 2)));
    CHECK(!gm.admissible(word_from_string("0110", 2)));
    CHECK_THROWS_AS(gm.validate(word_from_string("11", 2)), Error);
}

TEST_CASE("connectors and admissible concatenation") {
    Sft gm = Sft::golden_mean();
    Word c = gm.connector(1, 1, 1);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == 0);
    std::vector<Word> parts{{1}, {1}};
    CHECK(word_to_string(gm.admissible_concatenation(parts)) == "101");

    Sft full = Sft::full_shift(2);
    std::vector<Word> fparts{{1, 1}, {0, 0}};
    CHECK(word_to_string(full.admissible_concatenation(fparts)) == "1100");

    std::vector<Word> three{{1}, {1}, {1}};
    Word joined = gm.admissible_concatenation(three);
    CHECK(joined.size() == 3 + 2 * (gm.aperiodicity_exponent() - 1));
    gm.validate(joined);
}

TEST_CASE("parry measure structure") {
    for (const Sft& s : {Sft::full_shift(2), Sft::golden_mean(), Sft::full_shift(3)}) {
        double total = 0.0;
        for (int i = 0; i < s.alphabet_size(); ++i) {
            total += s.parry_stationary(i);
            double row = 0.0, back = 0.0;
            for (int j = 0; j < s.alphabet_size(); ++j) {
                row += s.parry_transition(i, j);
                back += s.parry_stationary(j) * s.parry_transition(j, i);
            }
            CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(back == doctest::Approx(s.parry_stationary(i)).epsilon(1e-10));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(s.parry_entropy() - s.topological_entropy()) < 1e-9);
    }
}

TEST_CASE("parry sampling: determinism and symbol frequency") {
    Sft gm = Sft::golden_mean();
    Rng r1(424242), r2(424242);
    Word a = gm.parry_sample(1000, r1);
    Word b = gm.parry_sample(1000, r2);
    CHECK(a == b);
    gm.validate(a);

    Rng r3(7);
    Word big = gm.parry_sample(1000000, r3);
    std::uint64_t zeros = 0;
    for (int sym : big) zeros += sym == 0;
    double freq = static_cast<double>(zeros) / 1e6;
    CHECK(std::abs(freq - gm.parry_stationary(0)) < 0.002);  // pi_0 ~ 0.7236
}

TEST_CASE("parry sampling: uniform over full-shift cells") {
    Sft full = Sft::full_shift(2);
    Rng rng(99);
    std::map<Word, int> cells;
    const int draws = 25600;
    for (int i = 0; i < draws; ++i) ++cells[full.parry_sample(8, rng)];
    double chi2 = 0.0;
    const double expect = draws / 256.0;
    for (int c = 0; c < 256; ++c) {
        Word w(8);
        for (int b = 0; b < 8; ++b) w[b] = (c >> b) & 1;
        double diff = cells[w] - expect;
        chi2 += diff * diff / expect;
    }
    CHECK(chi2 < 330.0);  // 255 dof, p ~ 0.001 cutoff
    CHECK(chi2 > 180.0);
}

TEST_CASE("parry cylinder masses are consistent") {
    Sft gm = Sft::golden_mean();
    for (const Word& w : gm.enumerate_words(4)) {
        double mass = std::exp(gm.parry_log_mass(w));
        double ext = 0.0;
        for (int sym = 0; sym < 2; ++sym) {
            Word e = w;
            e.push_back(sym);
            if (gm.admissible(e)) ext += std::exp(gm.parry_log_mass(e));
        }
        CHECK(ext == doctest::Approx(mass).epsilon(1e-12));
    }
}

TEST_CASE("word string round trip") {
    Word w = word_from_string("0102", 3);
    CHECK(word_to_string(w) == "0102");
    CHECK_THROWS_AS(word_from_string("012", 2), ConfigError);
    CHECK_THROWS_AS(word_from_string("0a!", 12), ConfigError);
}
