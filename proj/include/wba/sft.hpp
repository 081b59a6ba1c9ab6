#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wba/common.hpp"

namespace wba {

// A finite admissible word over the SFT alphabet {0, .., K-1}.
using Word = std::vector<int>;

// Aperiodic irreducible subshift of finite type: alphabet of size K, 0/1
// adjacency matrix A, smallest r with A^r strictly positive, and Perron
// data (spectral radius, positive left/right eigenvectors normalized so
// sum u_i v_i = 1).  Immutable after construction.
class Sft {
public:
    static Sft from_adjacency(const std::vector<std::vector<int>>& adjacency);

    // convenience builders
    static Sft full_shift(int K);
    static Sft golden_mean();

    int alphabet_size() const { return K_; }
    bool edge(int i, int j) const { return adj_[static_cast<std::size_t>(i) * K_ + j] != 0; }
    int aperiodicity_exponent() const { return r_; }

    double perron_root() const { return lambda_; }
    const std::vector<double>& left_eigenvector() const { return u_; }
    const std::vector<double>& right_eigenvector() const { return v_; }

    double topological_entropy() const { return std::log(lambda_); }

    bool admissible(std::span<const int> word) const;
    void validate(std::span<const int> word) const;  // throws on violation

    // number of admissible n-words (sum of entries of A^{n-1}); saturates at
    // uint64 max
    std::uint64_t count_words(int n) const;

    // lexicographic enumeration; throws CapExceededError if the count
    // exceeds cap (default from SFT_ENUM_CAP env var, else 2^26)
    std::vector<Word> enumerate_words(int n, std::uint64_t cap = default_enum_cap()) const;
    static std::uint64_t default_enum_cap();

    // streaming lexicographic visit (same cap semantics, no materialization)
    void for_each_word(int n, const std::function<void(const Word&)>& fn,
                       std::uint64_t cap = default_enum_cap()) const;

    // number of admissible interior words of length `len` connecting a to b,
    // i.e. paths a -> ... -> b with len intermediate symbols
    std::uint64_t connector_count(int a, int b, int len) const;

    // lexicographically smallest connecting word of length len >= r-1
    Word connector(int a, int b, int len) const;

    // parts joined by length r-1 connectors (lexicographically smallest)
    Word admissible_concatenation(std::span<const Word> parts) const;

    // Parry measure (measure of maximal entropy)
    double parry_transition(int i, int j) const;
    double parry_stationary(int i) const;
    double parry_entropy() const;  // = log lambda up to numerical error
    Word parry_sample(int n, Rng& rng) const;
    double parry_log_mass(std::span<const int> word) const;  // log of cylinder mass

private:
    Sft() = default;

    int K_ = 0;
    std::vector<std::uint8_t> adj_;
    int r_ = 0;
    double lambda_ = 0.0;
    std::vector<double> u_, v_;
    std::vector<double> parry_row_cum_;  // K x K cumulative transition rows
    std::vector<double> parry_pi_cum_;
};

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s, int alphabet_size);

}  // namespace wba
