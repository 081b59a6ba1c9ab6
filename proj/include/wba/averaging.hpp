#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wba/weights.hpp"

namespace wba {

// Bounded real sequence a_n with a declared bound B >= sup |a_n|.
struct BoundedSequence {
    std::function<double(std::uint64_t)> value;
    double bound = 1.0;
};

double plain_average(const BoundedSequence& a, std::uint64_t n);
double weighted_average(const BoundedSequence& a, const WeightSequence& w, std::uint64_t n);

// |sum s_k a_k - (sum_{k<=n-2} (sum_{l<=k} a_l)(s_k - s_{k+1}) + s_{n-1} sum a_k)|
double summation_by_parts_residual(const BoundedSequence& a, const WeightSequence& w,
                                   std::uint64_t n);

// Empirical liminf/limsup proxies: extrema of the running averages over the
// tail window [N/2, N].
struct TailExtrema {
    double liminf_plain, limsup_plain;
    double liminf_weighted, limsup_weighted;
};
TailExtrema sandwich_bounds(const BoundedSequence& a, const WeightSequence& w,
                            std::uint64_t horizon);

// Bounded-ratio reversal: limsup_plain <= G*limsup_w + (1-G)*liminf_w (and
// the symmetric liminf inequality), on tail extrema with slack delta.
struct ReverseReport {
    double G;
    TailExtrema extrema;
    double upper_slack;  // G*hi_w + (1-G)*lo_w + delta - hi_plain
    double lower_slack;  // lo_plain - (G*lo_w + (1-G)*hi_w - delta)
    bool holds;
};
ReverseReport bar_reverse_bounds(const BoundedSequence& a, const WeightSequence& w,
                                 std::uint64_t horizon, double delta);

// Running trace of both averages at chosen checkpoints.
struct AverageTrace {
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> plain, weighted, S, ratio;
};
AverageTrace make_trace(const BoundedSequence& a, const WeightSequence& w,
                        const std::vector<std::uint64_t>& checkpoints);

// Blockwise -1/0/+1 sequence over a UBAR schedule: -1 on odd entries' blocks
// [n_k, m_k), +1 on even entries' blocks, 0 in between.  Block boundaries
// may exceed integer range (log-scale schedules); averages at boundaries are
// evaluated in closed form from the schedule's partial sums.
class CounterexampleSequence {
public:
    // requires a certified schedule with >= 2 entries
    explicit CounterexampleSequence(UbarSchedule schedule);

    const UbarSchedule& schedule() const { return schedule_; }

    // sign of entry k (1-based): -1 for odd k, +1 for even k
    static int entry_sign(std::size_t k) { return k % 2 == 1 ? -1 : +1; }

    // a_l for materializable l (requires exact schedule entries covering l)
    int value(std::uint64_t l) const;

    // closed-form averages at the block end m_k (1-based k)
    double plain_average_at(std::size_t k) const;
    double weighted_average_at(std::size_t k) const;

    // upper bound on sup_{n in [n_k, m_k]} |weighted average|; the bound is
    // monotone within blocks so block ends dominate
    double weighted_block_bound(std::size_t k) const;

    // smallest entry index k0 such that every block bound from k0 on is
    // <= tol; returns 0 if none
    std::size_t first_entry_within(double tol) const;

private:
    UbarSchedule schedule_;
    std::vector<double> boundary_weighted_;  // sum s_l a_l at m_k, via S-gaps
};

}  // namespace wba
