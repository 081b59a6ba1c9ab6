#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wba/averaging.hpp"
#include "wba/potential.hpp"

namespace wba {

// Block-i.i.d. concatenation measure: admissible N-words whose phi-averages
// sit in the windows around t+2eps (family X) and t-2eps (family Y), mixed
// with probability p and joined by length r-1 connectors.
struct ConcatenationScheme {
    Sft sft;
    Potential phi;
    double t, eps, delta;
    int N;
    std::vector<Word> X, Y;  // lexicographic order
    double p = 0.5;
    double target_log_x, target_log_y;  // N (H(t +/- 2eps) - delta)
    double integral_x_only, integral_y_only;  // exact, at p = 1 and p = 0
    bool cardinality_met = false;
};

// Exhaustive enumeration + window filter.  When enforce_cardinality is set,
// a family falling short of its e^{N(H - delta)} target is an error;
// otherwise the shortfall is only recorded in cardinality_met.
ConcatenationScheme build_scheme(const Sft& s, const Potential& phi, double t,
                                 double eps, double delta, int N,
                                 bool enforce_cardinality = true);

// exact integral of phi under the block law at mixing probability p
// (interior positions plus boundary/connector windows)
double scheme_integral(const ConcatenationScheme& sch, double p);

// bisect p so |integral - t| <= 1e-9; stores p in the scheme and returns it
double tune_p(ConcatenationScheme& sch, double t);

// entropy rate of the block-choice process: (H(p) + p log|X| + (1-p) log|Y|)
// per period of N + r - 1 symbols
double block_entropy_rate(const ConcatenationScheme& sch);

// i.i.d. block draws truncated at n; phase_shift realizes the shift-averaged
// measure by dropping a uniform prefix in [0, period)
Word sample_concatenation(const ConcatenationScheme& sch, std::size_t n, Rng& rng,
                          bool phase_shift = false);

// exact -(1/n) log mass of [word|_n] under the (unshifted) block law
std::vector<double> concatenation_local_entropy(const ConcatenationScheme& sch,
                                                const Word& word,
                                                const std::vector<std::size_t>& checkpoints);

// Packing measure: copy an eventually periodic anchor outside the schedule
// blocks; inside block [n_k, m_k) place an entry pad of r symbols, a
// Parry-sampled middle block, and an exit pad of r-1 symbols, pads uniform
// over the admissible joins.
struct PackingScheme {
    Sft sft;
    Word preperiod, period;  // anchor symbols; period repeats forever
    std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;  // (n_k, m_k)
    int r;
};

PackingScheme build_packing(const Sft& s, Word preperiod, Word period,
                            std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks);

int anchor_symbol(const PackingScheme& ps, std::uint64_t pos);

// anchor's exact Birkhoff average of phi over one period (depth must divide
// cleanly into the periodic structure; computed on the wrapped word)
double anchor_average(const PackingScheme& ps, const Potential& phi);

Word sample_packing(const PackingScheme& ps, std::size_t n, Rng& rng);

// exact -(1/n) log mass of [word|_n]; checkpoints must be block ends m_k
std::vector<double> packing_local_entropy(const PackingScheme& ps, const Word& word,
                                          const std::vector<std::uint64_t>& checkpoints);

// weighted Birkhoff average (1/S_n) sum s_k phi(sigma^k word) at depth n
double weighted_average_check(const Word& word, const WeightSequence& w,
                              const Potential& phi, std::size_t n);

}  // namespace wba
