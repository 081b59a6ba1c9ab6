#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "wba/common.hpp"

namespace wba {

enum class WeightFamily { constant, power, harmonic, explicit_list };

// Monotone decreasing positive weights s_n with cached partial sums
// S_n = sum_{k<n} s_k.  Partial sums use compensated accumulation; a dense
// head plus strided checkpoints keep queries O(1) amortized for sequential
// access patterns.
//
// Thread contract: concurrent reads of already-materialized prefixes are
// safe; extending the cache is exclusive to one owner.
class WeightSequence {
public:
    static WeightSequence constant();
    static WeightSequence power(double d);  // requires -1 < d <= 0
    static WeightSequence harmonic();       // s_n = 1/(n+1)
    static WeightSequence explicit_list(std::vector<double> values);

    WeightFamily family() const { return family_; }
    double exponent() const { return d_; }  // power family only

    // Largest n for which s_n is defined (explicit lists are finite).
    std::uint64_t max_index() const;

    double weight(std::uint64_t n) const;  // s_n
    double partial_sum(std::uint64_t n) const;  // S_n

    // S_{n+1} / ((n+1) s_n); always >= 1 for monotone decreasing weights.
    double ratio(std::uint64_t n) const;

    // Closed-form partial sums at log-scale indices.  Only the constant and
    // harmonic families support this; it is what makes UBAR schedules with
    // 2^-k certificates representable (harmonic indices reach exp(4000)).
    bool has_log_scale() const;
    double partial_sum_log(double ln_n) const;       // S at n = e^{ln_n}
    double log_index_for_sum(double target_S) const; // inverse of the above
    double ratio_log(double ln_n) const;             // ratio at n = e^{ln_n}

private:
    WeightSequence(WeightFamily f, double d, std::vector<double> values);

    void extend_cache(std::uint64_t n) const;

    WeightFamily family_;
    double d_ = 0.0;
    std::vector<double> explicit_;

    // cache state (mutable: extension is logically const)
    static constexpr std::uint64_t kDenseCap = 1u << 21;
    static constexpr std::uint64_t kStride = 1u << 12;
    mutable std::vector<double> dense_;        // S_0 .. S_{|dense|-1}
    mutable std::vector<double> checkpoints_;  // S at multiples of kStride
    mutable std::uint64_t frontier_ = 0;       // largest n with S_n known
    mutable KahanSum acc_;                     // running sum up to frontier_
};

struct RatioDiagnostics {
    enum class Kind { bounded, unbounded, unknown };
    Kind kind;
    double G = std::numeric_limits<double>::quiet_NaN();  // sup ratio, bounded case
    double empirical_sup = 0.0;     // sup of ratio(n) over the scanned prefix
    std::uint64_t sup_at = 0;
    double tail_growth = 0.0;       // ratio(N) - ratio(N/2), trend indicator
};

// Known families classify analytically; explicit lists report the empirical
// sup and growth trend without claiming a limsup.
RatioDiagnostics classify(const WeightSequence& w, std::uint64_t horizon);

struct UbarEntry {
    double ln_n, ln_m;     // natural logs of the indices
    double S_n, S_m;
    double ratio_at_n;     // M_k
    double cert_count;     // k / S_{n_k}
    double cert_gap;       // (S_{m_k} - S_{n_k}) / S_{m_k}
    double cert_index;     // n_k / m_k
    bool exact;            // indices fit in integers
    std::uint64_t n = 0, m = 0;  // valid when exact
};

// Interleaved index schedule n_k <= m_k < n_{k+1} witnessing unbounded
// asymptotic ratio.  `certified` means the entries were thinned so the k-th
// entry satisfies all three 2^-k certificates.
struct UbarSchedule {
    std::vector<UbarEntry> entries;
    bool certified = false;
    bool horizon_exhausted = false;  // fewer entries than requested fit
};

// Thinned schedule with 2^-k certificates: record-breaking ratio indices,
// minimal m with S_{m+1} - S_n >= S_n M^{-1/2}, then greedy thinning.
// Precondition: unbounded classification (harmonic) or an explicit list
// whose empirical ratio keeps growing.  horizon may be +infinity for
// families with log-scale closed forms.
UbarSchedule build_ubar_schedule(const WeightSequence& w, std::size_t count,
                                 double horizon = std::numeric_limits<double>::infinity());

// Un-thinned construction pairs (record index, minimal m), restarting at
// m_k + 1.  Indices stay materializable; used where actual words must be
// sampled along the schedule.  Not certified.
UbarSchedule build_raw_pairs(const WeightSequence& w, std::size_t count,
                             std::uint64_t start, std::uint64_t horizon);

}  // namespace wba
