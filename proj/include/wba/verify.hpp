#pragma once

#include "wba/measures.hpp"
#include "wba/thermo.hpp"

namespace wba {

// Cylinder-count proxy for level-set entropy: count admissible n-words whose
// (plain or weighted) phi-average lies in [alpha - eps, alpha + eps].
struct LevelSetQuery {
    const Sft* sft;
    const Potential* phi;
    double alpha;
    double eps;
    int n0, n1;                            // depth range, inclusive
    const WeightSequence* weights = nullptr;  // null: plain averages
};

struct CountingReport {
    std::vector<int> depths;
    std::vector<std::uint64_t> counts;
    double slope;   // through-origin least squares of log count vs n over the
                    // top third of depths (transient discarded)
    double h_top;
};

CountingReport count_level_cylinders(const LevelSetQuery& q);

struct Theorem1Report {
    RatioDiagnostics diag;
    bool bounded_case;
    // bounded: reverse-sandwich inequalities on convergent test sequences
    bool reverse_holds = false;
    double min_slack = 0.0;
    // unbounded: certified counterexample
    std::size_t k0 = 0;          // first entry from which |weighted| <= 0.05
    double weighted_sup = 0.0;   // sup bound on |weighted| from k0 on
    std::vector<double> plain_at_m;  // closed-form plain averages at m_k
    bool pass = false;
};

Theorem1Report run_theorem1_suite(const WeightSequence& w, std::uint64_t horizon);

// weighted vs plain counting slopes against the spectrum curve (exploratory:
// finite-depth weighted counts are a heuristic proxy)
struct SpectrumEqualityReport {
    std::vector<double> alphas, plain_slopes, weighted_slopes, H_values;
    double max_plain_discrepancy = 0.0;     // |plain slope - H(alpha)|
    double max_weighted_discrepancy = 0.0;  // |weighted slope - plain slope|
};

SpectrumEqualityReport run_spectrum_equality_suite(const Sft& s, const Potential& phi,
                                                   const WeightSequence& w,
                                                   const std::vector<double>& alphas,
                                                   double eps, int n0, int n1);

// packing-measure ingredients: weighted averages near alpha within the
// recomputed schedule bound, and local entropy near h_top at late checkpoints
struct PackingReport {
    std::vector<std::uint64_t> m_checkpoints;
    double worst_average_margin;  // min over samples of bound - |avg - alpha|
    double worst_entropy_rel;     // max |trace/h_top - 1| at k >= 3
    bool averages_pass = false;
    bool entropy_pass = false;
    bool pass = false;
};

PackingReport run_packing_suite(const Sft& s, const Potential& phi,
                                const WeightSequence& w, double alpha,
                                const Word& preperiod, const Word& period,
                                std::size_t block_count, int seeds,
                                std::uint64_t seed0);

}  // namespace wba
