#include "wba/averaging.hpp"

#include <algorithm>
#include <cmath>

namespace wba {

double plain_average(const BoundedSequence& a, std::uint64_t n) {
    if (n == 0) throw PreconditionError("average requires n >= 1");
    KahanSum s;
    for (std::uint64_t k = 0; k < n; ++k) s.add(a.value(k));
    return s.sum / static_cast<double>(n);
}

double weighted_average(const BoundedSequence& a, const WeightSequence& w, std::uint64_t n) {
    if (n == 0) throw PreconditionError("average requires n >= 1");
    if (w.family() == WeightFamily::constant) return plain_average(a, n);
    KahanSum s;
    for (std::uint64_t k = 0; k < n; ++k) s.add(w.weight(k) * a.value(k));
    return s.sum / w.partial_sum(n);
}

double summation_by_parts_residual(const BoundedSequence& a, const WeightSequence& w,
                                   std::uint64_t n) {
    if (n < 2) throw PreconditionError("summation by parts requires n >= 2");
    KahanSum lhs;
    for (std::uint64_t k = 0; k < n; ++k) lhs.add(w.weight(k) * a.value(k));
    KahanSum rhs, prefix;
    for (std::uint64_t k = 0; k + 2 <= n; ++k) {
        prefix.add(a.value(k));
        rhs.add(prefix.sum * (w.weight(k) - w.weight(k + 1)));
    }
    prefix.add(a.value(n - 1));
    rhs.add(w.weight(n - 1) * prefix.sum);
    return std::abs(lhs.sum - rhs.sum);
}

TailExtrema sandwich_bounds(const BoundedSequence& a, const WeightSequence& w,
                            std::uint64_t horizon) {
    if (horizon < 2) throw PreconditionError("horizon too small");
    TailExtrema e;
    e.liminf_plain = e.liminf_weighted = std::numeric_limits<double>::infinity();
    e.limsup_plain = e.limsup_weighted = -std::numeric_limits<double>::infinity();
    KahanSum plain, weighted, S;
    for (std::uint64_t k = 0; k < horizon; ++k) {
        double v = a.value(k);
        double s = w.weight(k);
        plain.add(v);
        weighted.add(s * v);
        S.add(s);
        std::uint64_t n = k + 1;
        if (n < horizon / 2) continue;
        double p = plain.sum / static_cast<double>(n);
        double q = weighted.sum / S.sum;
        e.liminf_plain = std::min(e.liminf_plain, p);
        e.limsup_plain = std::max(e.limsup_plain, p);
        e.liminf_weighted = std::min(e.liminf_weighted, q);
        e.limsup_weighted = std::max(e.limsup_weighted, q);
    }
    return e;
}

ReverseReport bar_reverse_bounds(const BoundedSequence& a, const WeightSequence& w,
                                 std::uint64_t horizon, double delta) {
    RatioDiagnostics diag = classify(w, horizon);
    if (diag.kind != RatioDiagnostics::Kind::bounded)
        throw PreconditionError("reverse bounds require bounded asymptotic ratio");
    ReverseReport r;
    r.G = diag.G;
    r.extrema = sandwich_bounds(a, w, horizon);
    const TailExtrema& e = r.extrema;
    r.upper_slack = r.G * e.limsup_weighted + (1.0 - r.G) * e.liminf_weighted + delta
                    - e.limsup_plain;
    r.lower_slack = e.liminf_plain
                    - (r.G * e.liminf_weighted + (1.0 - r.G) * e.limsup_weighted - delta);
    r.holds = r.upper_slack >= 0.0 && r.lower_slack >= 0.0;
    return r;
}

AverageTrace make_trace(const BoundedSequence& a, const WeightSequence& w,
                        const std::vector<std::uint64_t>& checkpoints) {
    AverageTrace t;
    t.checkpoints = checkpoints;
    std::sort(t.checkpoints.begin(), t.checkpoints.end());
    KahanSum plain, weighted, S;
    std::uint64_t k = 0;
    for (std::uint64_t cp : t.checkpoints) {
        if (cp == 0) throw PreconditionError("checkpoints must be >= 1");
        for (; k < cp; ++k) {
            double v = a.value(k);
            double s = w.weight(k);
            plain.add(v);
            weighted.add(s * v);
            S.add(s);
        }
        t.plain.push_back(plain.sum / static_cast<double>(cp));
        t.weighted.push_back(weighted.sum / S.sum);
        t.S.push_back(S.sum);
        t.ratio.push_back(w.ratio(cp - 1));
    }
    return t;
}

CounterexampleSequence::CounterexampleSequence(UbarSchedule schedule)
    : schedule_(std::move(schedule)) {
    if (!schedule_.certified)
        throw PreconditionError("counterexample requires a certified (thinned) schedule");
    if (schedule_.entries.size() < 2)
        throw PreconditionError("counterexample requires a schedule with >= 2 entries");
    double w = 0.0;
    for (std::size_t k = 1; k <= schedule_.entries.size(); ++k) {
        const UbarEntry& e = schedule_.entries[k - 1];
        w += entry_sign(k) * (e.S_m - e.S_n);
        boundary_weighted_.push_back(w);
    }
}

int CounterexampleSequence::value(std::uint64_t l) const {
    for (std::size_t k = 1; k <= schedule_.entries.size(); ++k) {
        const UbarEntry& e = schedule_.entries[k - 1];
        if (!e.exact) {
            // entry boundaries beyond integer range; any representable l is
            // below them
            return 0;
        }
        if (l < e.n) return 0;
        if (l < e.m) return entry_sign(k);
    }
    return 0;
}

double CounterexampleSequence::plain_average_at(std::size_t k) const {
    const double ln_mk = schedule_.entries.at(k - 1).ln_m;
    double sum = 0.0;
    for (std::size_t l = 1; l <= k; ++l) {
        const UbarEntry& e = schedule_.entries[l - 1];
        sum += entry_sign(l) * (std::exp(e.ln_m - ln_mk) - std::exp(e.ln_n - ln_mk));
    }
    return sum;
}

double CounterexampleSequence::weighted_average_at(std::size_t k) const {
    return boundary_weighted_.at(k - 1) / schedule_.entries.at(k - 1).S_m;
}

double CounterexampleSequence::weighted_block_bound(std::size_t k) const {
    const UbarEntry& e = schedule_.entries.at(k - 1);
    double carried = k >= 2 ? std::abs(boundary_weighted_[k - 2]) : 0.0;
    return (carried + (e.S_m - e.S_n)) / e.S_m;
}

std::size_t CounterexampleSequence::first_entry_within(double tol) const {
    std::size_t k0 = 0;
    for (std::size_t k = schedule_.entries.size(); k >= 1; --k) {
        if (weighted_block_bound(k) <= tol) k0 = k; else break;
    }
    return k0;
}

}  // namespace wba
