#include "wba/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wba {

namespace {
constexpr double kEulerGamma = 0.5772156649015329;
// Largest index handled with exact integer arithmetic inside schedule
// construction; beyond this the harmonic family switches to closed forms.
constexpr std::uint64_t kExactScheduleCap = 1000000;
}  // namespace

WeightSequence::WeightSequence(WeightFamily f, double d, std::vector<double> values)
    : family_(f), d_(d), explicit_(std::move(values)) {
    dense_.push_back(0.0);
    checkpoints_.push_back(0.0);
}

WeightSequence WeightSequence::constant() {
    return WeightSequence(WeightFamily::constant, 0.0, {});
}

WeightSequence WeightSequence::power(double d) {
    if (!(d > -1.0 && d <= 0.0))
        throw ConfigError("power family requires -1 < d <= 0");
    if (d == 0.0) return constant();
    return WeightSequence(WeightFamily::power, d, {});
}

WeightSequence WeightSequence::harmonic() {
    return WeightSequence(WeightFamily::harmonic, -1.0, {});
}

WeightSequence WeightSequence::explicit_list(std::vector<double> values) {
    if (values.empty()) throw ConfigError("explicit weight list is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0))
            throw Error("invalid weights: s_" + std::to_string(i) + " is not positive");
        if (i > 0 && values[i] > values[i - 1])
            throw Error("invalid weights: s_" + std::to_string(i) + " exceeds s_" +
                        std::to_string(i - 1) + " (weights must be nonincreasing)");
    }
    return WeightSequence(WeightFamily::explicit_list, 0.0, std::move(values));
}

std::uint64_t WeightSequence::max_index() const {
    if (family_ == WeightFamily::explicit_list) return explicit_.size() - 1;
    return std::numeric_limits<std::uint64_t>::max();
}

double WeightSequence::weight(std::uint64_t n) const {
    switch (family_) {
        case WeightFamily::constant: return 1.0;
        case WeightFamily::power: return std::pow(static_cast<double>(n + 1), d_);
        case WeightFamily::harmonic: return 1.0 / static_cast<double>(n + 1);
        case WeightFamily::explicit_list:
            if (n >= explicit_.size())
                throw Error("invalid weights: index " + std::to_string(n) +
                            " beyond explicit list of length " + std::to_string(explicit_.size()));
            return explicit_[n];
    }
    return 0.0;
}

void WeightSequence::extend_cache(std::uint64_t n) const {
    while (frontier_ < n) {
        acc_.add(weight(frontier_));
        ++frontier_;
        if (frontier_ < kDenseCap && dense_.size() == frontier_)
            dense_.push_back(acc_.sum);
        if (frontier_ % kStride == 0 && checkpoints_.size() == frontier_ / kStride)
            checkpoints_.push_back(acc_.sum);
    }
}

double WeightSequence::partial_sum(std::uint64_t n) const {
    if (family_ == WeightFamily::constant) return static_cast<double>(n);
    if (n > frontier_) {
        if (family_ == WeightFamily::explicit_list && n > explicit_.size())
            throw Error("partial sum index beyond explicit weight list");
        extend_cache(n);
        return acc_.sum;
    }
    if (n < dense_.size()) return dense_[n];
    std::uint64_t cp = n / kStride;
    KahanSum s;
    s.sum = checkpoints_[cp];
    for (std::uint64_t k = cp * kStride; k < n; ++k) s.add(weight(k));
    return s.sum;
}

double WeightSequence::ratio(std::uint64_t n) const {
    return partial_sum(n + 1) / (static_cast<double>(n + 1) * weight(n));
}

bool WeightSequence::has_log_scale() const {
    return family_ == WeightFamily::constant || family_ == WeightFamily::harmonic;
}

double WeightSequence::partial_sum_log(double ln_n) const {
    switch (family_) {
        case WeightFamily::constant:
            return std::exp(ln_n);
        case WeightFamily::harmonic: {
            // H_n = ln n + gamma + 1/(2n) - 1/(12n^2) + O(n^-4)
            double inv = std::exp(-ln_n);
            return ln_n + kEulerGamma + 0.5 * inv - inv * inv / 12.0;
        }
        default:
            throw PreconditionError("no closed-form partial sums for this family");
    }
}

double WeightSequence::log_index_for_sum(double target_S) const {
    switch (family_) {
        case WeightFamily::constant:
            return std::log(target_S);
        case WeightFamily::harmonic: {
            double L = target_S - kEulerGamma;
            for (int i = 0; i < 6; ++i) {
                double inv = std::exp(-L);
                L = target_S - kEulerGamma - 0.5 * inv + inv * inv / 12.0;
            }
            return L;
        }
        default:
            throw PreconditionError("no closed-form partial sums for this family");
    }
}

double WeightSequence::ratio_log(double ln_n) const {
    switch (family_) {
        case WeightFamily::constant:
            return 1.0;
        case WeightFamily::harmonic:
            // S_{n+1}/((n+1) s_n) = S_{n+1}; the +1 shift is below double
            // resolution at the scales where this path is used
            return partial_sum_log(ln_n) + std::exp(-ln_n);
        default:
            throw PreconditionError("no closed-form partial sums for this family");
    }
}

RatioDiagnostics classify(const WeightSequence& w, std::uint64_t horizon) {
    RatioDiagnostics d;
    switch (w.family()) {
        case WeightFamily::constant:
            d.kind = RatioDiagnostics::Kind::bounded;
            d.G = 1.0;
            d.empirical_sup = 1.0;
            return d;
        case WeightFamily::power:
            d.kind = RatioDiagnostics::Kind::bounded;
            d.G = 1.0 / (1.0 + w.exponent());
            d.empirical_sup = w.ratio(std::min<std::uint64_t>(horizon, 1000000));
            d.sup_at = std::min<std::uint64_t>(horizon, 1000000);
            return d;
        case WeightFamily::harmonic:
            d.kind = RatioDiagnostics::Kind::unbounded;
            d.empirical_sup = w.ratio(std::min<std::uint64_t>(horizon, 1000000));
            d.sup_at = std::min<std::uint64_t>(horizon, 1000000);
            return d;
        case WeightFamily::explicit_list: {
            std::uint64_t N = std::min<std::uint64_t>(horizon, w.max_index());
            if (N < 1) throw PreconditionError("classification horizon too small");
            // a geometrically decaying tail means the series is summable;
            // such weights are outside the model
            double S_half = w.partial_sum(N / 2);
            double S_full = w.partial_sum(N);
            if (S_full - S_half <= 1e-12 * S_full)
                throw Error("invalid weights: explicit list looks summable "
                            "(vanishing tail increments)");
            d.kind = RatioDiagnostics::Kind::unknown;
            for (std::uint64_t n = 0; n < N; ++n) {
                double r = w.ratio(n);
                if (r > d.empirical_sup) { d.empirical_sup = r; d.sup_at = n; }
            }
            d.tail_growth = w.ratio(N - 1) - w.ratio(N / 2);
            return d;
        }
    }
    return d;
}

namespace {

// Minimal m >= n with S_{m+1} - S_n >= gap_target, by bisection on the
// monotone partial sums.  Returns nullopt if no such m <= hi exists.
std::optional<std::uint64_t> minimal_m(const WeightSequence& w, std::uint64_t n,
                                       double S_n, double gap_target, std::uint64_t hi) {
    double target = S_n + gap_target;
    if (w.partial_sum(hi + 1) < target) return std::nullopt;
    std::uint64_t lo = n;  // candidate range [lo, hi]
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (w.partial_sum(mid + 1) >= target) hi = mid; else lo = mid + 1;
    }
    return lo;
}

UbarEntry make_exact_entry(const WeightSequence& w, std::size_t level,
                           std::uint64_t n, std::uint64_t m, double M) {
    UbarEntry e;
    e.n = n; e.m = m; e.exact = true;
    e.ln_n = std::log(static_cast<double>(n));
    e.ln_m = std::log(static_cast<double>(m));
    e.S_n = w.partial_sum(n);
    e.S_m = w.partial_sum(m);
    e.ratio_at_n = M;
    e.cert_count = static_cast<double>(level) / e.S_n;
    e.cert_gap = (e.S_m - e.S_n) / e.S_m;
    e.cert_index = static_cast<double>(n) / static_cast<double>(m);
    return e;
}

// Certificate predicate for the thinned construction at a given level.
// Exact-arithmetic variant; n must be a ratio record (for harmonic every
// index is).
bool exact_certs_ok(const WeightSequence& w, std::size_t level, std::uint64_t n,
                    UbarEntry* out) {
    double S_n = w.partial_sum(n);
    double tol = std::pow(2.0, -static_cast<double>(level));
    if (static_cast<double>(level) / S_n > tol) return false;
    double M = S_n / (static_cast<double>(n) * w.weight(n - 1));
    if (M <= 1.0) return false;
    // m search upper bound: generous geometric cap
    std::uint64_t hi = std::max<std::uint64_t>(n * 64, 1u << 20);
    std::optional<std::uint64_t> m;
    for (; hi < (1ull << 40); hi *= 4) {
        m = minimal_m(w, n, S_n, S_n / std::sqrt(M), hi);
        if (m) break;
        if (w.family() == WeightFamily::explicit_list && hi >= w.max_index()) break;
    }
    if (!m) return false;
    UbarEntry e = make_exact_entry(w, level, n, *m, M);
    if (e.cert_gap > tol || e.cert_index > tol) return false;
    if (out) *out = e;
    return true;
}

// Harmonic thinned entry at log scale: minimal ln n with all three
// certificates, via the closed-form partial sums.
UbarEntry analytic_entry(const WeightSequence& w, std::size_t level, double ln_lo) {
    double tol = std::pow(2.0, -static_cast<double>(level));
    auto certs = [&](double ln_n, UbarEntry* out) {
        double S_n = w.partial_sum_log(ln_n);
        double M = w.ratio_log(ln_n);
        double S_m = S_n + S_n / std::sqrt(M);
        double ln_m = w.log_index_for_sum(S_m);
        UbarEntry e;
        e.exact = false;
        e.ln_n = ln_n; e.ln_m = ln_m;
        e.S_n = S_n; e.S_m = w.partial_sum_log(ln_m);
        e.ratio_at_n = M;
        e.cert_count = static_cast<double>(level) / S_n;
        e.cert_gap = (e.S_m - e.S_n) / e.S_m;
        e.cert_index = std::exp(ln_n - ln_m);
        if (out) *out = e;
        return e.cert_count <= tol && e.cert_gap <= tol && e.cert_index <= tol;
    };
    double lo = ln_lo, hi = std::max(ln_lo * 2 + 16.0, 64.0);
    while (!certs(hi, nullptr)) { lo = hi; hi *= 2.0; }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (certs(mid, nullptr)) hi = mid; else lo = mid;
    }
    UbarEntry e;
    certs(hi, &e);
    return e;
}

}  // namespace

UbarSchedule build_ubar_schedule(const WeightSequence& w, std::size_t count, double horizon) {
    RatioDiagnostics diag = classify(w, std::min<double>(horizon, 1e6) >= 1
                                            ? static_cast<std::uint64_t>(std::min<double>(horizon, 1e6))
                                            : 1);
    if (diag.kind == RatioDiagnostics::Kind::bounded)
        throw PreconditionError("weights have bounded asymptotic ratio; no UBAR schedule exists");

    UbarSchedule sch;
    sch.certified = true;

    if (w.family() == WeightFamily::harmonic) {
        double prev_ln_m = 0.0;
        std::uint64_t prev_m = 0;
        bool analytic = false;
        for (std::size_t level = 1; level <= count; ++level) {
            if (!analytic) {
                // exact branch: bisect for the minimal record index passing
                // all certificates (the predicate is monotone for harmonic
                // weights up to at most one integer of wiggle)
                std::uint64_t lo = prev_m + 1, hi = kExactScheduleCap;
                if (exact_certs_ok(w, level, hi, nullptr)) {
                    while (lo < hi) {
                        std::uint64_t mid = lo + (hi - lo) / 2;
                        if (exact_certs_ok(w, level, mid, nullptr)) hi = mid; else lo = mid + 1;
                    }
                    while (hi > prev_m + 1 && exact_certs_ok(w, level, hi - 1, nullptr)) --hi;
                    UbarEntry e;
                    exact_certs_ok(w, level, hi, &e);
                    e.cert_count = static_cast<double>(level) / e.S_n;
                    if (std::exp(e.ln_m) > horizon) { sch.horizon_exhausted = true; return sch; }
                    sch.entries.push_back(e);
                    prev_m = e.m;
                    prev_ln_m = e.ln_m;
                    continue;
                }
                analytic = true;
                prev_ln_m = prev_m ? std::log(static_cast<double>(prev_m)) : 0.0;
            }
            UbarEntry e = analytic_entry(w, level, std::max(prev_ln_m, 1.0));
            if (std::isfinite(horizon) && e.ln_m > std::log(horizon)) {
                sch.horizon_exhausted = true;
                return sch;
            }
            sch.entries.push_back(e);
            prev_ln_m = e.ln_m;
        }
        return sch;
    }

    // direct regime: explicit lists (finite horizon)
    std::uint64_t N = w.max_index();
    if (std::isfinite(horizon)) N = std::min<std::uint64_t>(N, static_cast<std::uint64_t>(horizon));
    std::uint64_t prev_m = 0;
    double record = 0.0;
    std::size_t level = 1;
    for (std::uint64_t j = 0; j + 1 <= N && level <= count; ++j) {
        double r = w.ratio(j);
        if (r <= record) continue;
        record = r;
        std::uint64_t n = j + 1;
        if (n <= prev_m) continue;
        UbarEntry e;
        double S_n = w.partial_sum(n);
        double tol = std::pow(2.0, -static_cast<double>(level));
        if (static_cast<double>(level) / S_n > tol) continue;
        auto m = minimal_m(w, n, S_n, S_n / std::sqrt(r), N);
        if (!m) break;  // no admissible m below the horizon; larger n will not fit either
        e = make_exact_entry(w, level, n, *m, r);
        if (e.cert_gap > tol || e.cert_index > tol) continue;
        sch.entries.push_back(e);
        prev_m = *m;
        ++level;
    }
    if (sch.entries.size() < count) sch.horizon_exhausted = true;
    return sch;
}

UbarSchedule build_raw_pairs(const WeightSequence& w, std::size_t count,
                             std::uint64_t start, std::uint64_t horizon) {
    RatioDiagnostics diag = classify(w, std::min<std::uint64_t>(horizon, 1000000));
    if (diag.kind == RatioDiagnostics::Kind::bounded)
        throw PreconditionError("weights have bounded asymptotic ratio; no UBAR schedule exists");
    if (w.family() == WeightFamily::explicit_list)
        horizon = std::min<std::uint64_t>(horizon, w.max_index());

    UbarSchedule sch;
    sch.certified = false;
    double record = 0.0;
    std::uint64_t j = 0;
    while (sch.entries.size() < count) {
        // next ratio record with index >= start and past the previous m
        std::uint64_t prev_m = sch.entries.empty() ? 0 : sch.entries.back().m;
        std::uint64_t min_n = std::max<std::uint64_t>(start, prev_m + 1);
        std::optional<std::uint64_t> n;
        double M = 0.0;
        for (; j + 1 <= horizon; ++j) {
            double r = w.ratio(j);
            if (r > record) {
                record = r;
                if (j + 1 >= min_n) { n = j + 1; M = r; ++j; break; }
            }
        }
        if (!n) { sch.horizon_exhausted = true; break; }
        double S_n = w.partial_sum(*n);
        auto m = minimal_m(w, *n, S_n, S_n / std::sqrt(M), horizon);
        if (!m) { sch.horizon_exhausted = true; break; }
        sch.entries.push_back(make_exact_entry(w, sch.entries.size() + 1, *n, *m, M));
        j = std::max<std::uint64_t>(j, *m);
    }
    return sch;
}

}  // namespace wba
