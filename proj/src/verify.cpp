#include "wba/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace wba {

namespace {

// streaming count of admissible n-words with average in the window; no
// materialization so deep full shifts stay within memory
std::uint64_t count_at_depth(const Sft& s, const Potential& phi, int n, double alpha,
                             double eps, const WeightSequence* weights) {
    const int m = phi.depth();
    if (n < m) return 0;
    const int positions = n - m + 1;
    std::vector<double> wts(static_cast<std::size_t>(positions), 1.0);
    double denom = static_cast<double>(positions);
    if (weights) {
        for (int k = 0; k < positions; ++k)
            wts[static_cast<std::size_t>(k)] = weights->weight(static_cast<std::uint64_t>(k));
        denom = weights->partial_sum(static_cast<std::uint64_t>(positions));
    }
    std::uint64_t count = 0;
    Word w(static_cast<std::size_t>(n));
    std::vector<double> sums(static_cast<std::size_t>(n) + 1, 0.0);
    std::function<void(int)> dfs = [&](int depth) {
        for (int sym = 0; sym < s.alphabet_size(); ++sym) {
            if (depth > 0 && !s.edge(w[static_cast<std::size_t>(depth) - 1], sym)) continue;
            w[static_cast<std::size_t>(depth)] = sym;
            double sum = sums[static_cast<std::size_t>(depth)];
            if (depth + 1 >= m) {
                int k = depth + 1 - m;  // window completed at this symbol
                sum += wts[static_cast<std::size_t>(k)]
                       * phi.value(std::span<const int>(w).subspan(static_cast<std::size_t>(k)));
            }
            sums[static_cast<std::size_t>(depth) + 1] = sum;
            if (depth + 1 == n) {
                if (std::abs(sum / denom - alpha) <= eps) ++count;
            } else {
                dfs(depth + 1);
            }
        }
    };
    dfs(0);
    return count;
}

double fit_slope(const std::vector<int>& depths, const std::vector<std::uint64_t>& counts) {
    // through-origin least squares on the top third of depths with nonzero
    // counts
    std::vector<std::pair<int, std::uint64_t>> rows;
    for (std::size_t i = 0; i < depths.size(); ++i)
        if (counts[i] > 0) rows.emplace_back(depths[i], counts[i]);
    if (rows.empty()) return 0.0;
    std::size_t keep = (rows.size() + 2) / 3;
    double num = 0.0, den = 0.0;
    for (std::size_t i = rows.size() - keep; i < rows.size(); ++i) {
        double nn = static_cast<double>(rows[i].first);
        num += nn * std::log(static_cast<double>(rows[i].second));
        den += nn * nn;
    }
    return num / den;
}

}  // namespace

CountingReport count_level_cylinders(const LevelSetQuery& q) {
    if (q.n0 < 1 || q.n1 < q.n0) throw PreconditionError("bad depth range");
    if (q.eps <= 0.0) throw PreconditionError("window half-width must be positive");
    CountingReport rep;
    rep.h_top = q.sft->topological_entropy();
    const std::uint64_t cap = Sft::default_enum_cap();
    for (int n = q.n0; n <= q.n1; ++n) {
        if (q.sft->count_words(n) > cap)
            throw CapExceededError("depth " + std::to_string(n) + " exceeds enumeration cap");
        rep.depths.push_back(n);
        rep.counts.push_back(count_at_depth(*q.sft, *q.phi, n, q.alpha, q.eps, q.weights));
    }
    rep.slope = fit_slope(rep.depths, rep.counts);
    return rep;
}

Theorem1Report run_theorem1_suite(const WeightSequence& w, std::uint64_t horizon) {
    Theorem1Report rep;
    rep.diag = classify(w, std::min<std::uint64_t>(horizon, 1u << 20));
    rep.bounded_case = rep.diag.kind == RatioDiagnostics::Kind::bounded;
    if (rep.bounded_case) {
        // convergent test sequences must show matching plain/weighted limits
        std::vector<BoundedSequence> tests = {
            {[](std::uint64_t) { return 0.25; }, 1.0},
            {[](std::uint64_t k) {
                 return 0.25 + 0.9 * std::cos(0.7 * static_cast<double>(k))
                                   / std::pow(static_cast<double>(k) + 1.0, 0.3);
             },
             1.2},
            {[](std::uint64_t k) { return 0.25 - 1.0 / (1.0 + std::sqrt(static_cast<double>(k))); },
             1.3},
        };
        rep.reverse_holds = true;
        rep.min_slack = std::numeric_limits<double>::infinity();
        for (const auto& a : tests) {
            double delta = 10.0 * a.bound / std::sqrt(static_cast<double>(horizon));
            ReverseReport rr = bar_reverse_bounds(a, w, horizon, delta);
            rep.reverse_holds = rep.reverse_holds && rr.holds;
            rep.min_slack = std::min({rep.min_slack, rr.upper_slack, rr.lower_slack});
        }
        rep.pass = rep.reverse_holds;
        return rep;
    }
    UbarSchedule sched = build_ubar_schedule(w, 6);
    CounterexampleSequence ce(std::move(sched));
    rep.k0 = ce.first_entry_within(0.05);
    rep.pass = rep.k0 > 0;
    rep.weighted_sup = 0.0;
    for (std::size_t k = std::max<std::size_t>(rep.k0, 1);
         k <= ce.schedule().entries.size(); ++k)
        rep.weighted_sup = std::max(rep.weighted_sup, ce.weighted_block_bound(k));
    for (std::size_t k = 1; k <= ce.schedule().entries.size(); ++k) {
        double p = ce.plain_average_at(k);
        rep.plain_at_m.push_back(p);
        if (k >= 2 && p * CounterexampleSequence::entry_sign(k) < 0.9) rep.pass = false;
    }
    return rep;
}

SpectrumEqualityReport run_spectrum_equality_suite(const Sft& s, const Potential& phi,
                                                   const WeightSequence& w,
                                                   const std::vector<double>& alphas,
                                                   double eps, int n0, int n1) {
    SpectrumEqualityReport rep;
    auto [am, ap] = spectrum_endpoints(s, phi);
    for (double alpha : alphas) {
        LevelSetQuery plain{&s, &phi, alpha, eps, n0, n1, nullptr};
        LevelSetQuery weighted{&s, &phi, alpha, eps, n0, n1, &w};
        CountingReport pr = count_level_cylinders(plain);
        CountingReport wr = count_level_cylinders(weighted);
        double H = alpha >= am && alpha <= ap ? spectrum_point(s, phi, alpha) : 0.0;
        rep.alphas.push_back(alpha);
        rep.plain_slopes.push_back(pr.slope);
        rep.weighted_slopes.push_back(wr.slope);
        rep.H_values.push_back(H);
        rep.max_plain_discrepancy = std::max(rep.max_plain_discrepancy,
                                             std::abs(pr.slope - H));
        rep.max_weighted_discrepancy = std::max(rep.max_weighted_discrepancy,
                                                std::abs(wr.slope - pr.slope));
    }
    return rep;
}

PackingReport run_packing_suite(const Sft& s, const Potential& phi,
                                const WeightSequence& w, double alpha,
                                const Word& preperiod, const Word& period,
                                std::size_t block_count, int seeds,
                                std::uint64_t seed0) {
    RatioDiagnostics diag = classify(w, 1u << 20);
    if (diag.kind == RatioDiagnostics::Kind::bounded)
        throw PreconditionError("packing suite requires unbounded-ratio weights");
    UbarSchedule raw = build_raw_pairs(w, block_count, 8, 100000000ull);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
    for (const UbarEntry& e : raw.entries) blocks.emplace_back(e.n, e.m);
    PackingScheme ps = build_packing(s, preperiod, period, blocks);

    PackingReport rep;
    for (auto [bn, bm] : ps.blocks) rep.m_checkpoints.push_back(bm);
    const std::size_t len = static_cast<std::size_t>(rep.m_checkpoints.back())
                            + static_cast<std::size_t>(phi.depth());
    ModulusData md = phi.modulus();
    const double rho0 = md.rho[0];
    const double h_top = s.topological_entropy();

    // anchor's own weighted deviation at each checkpoint (the proof's
    // "anchor lies in E_phi^s(alpha)" ingredient, here computed exactly)
    Word anchor(len);
    for (std::size_t i = 0; i < len; ++i)
        anchor[i] = anchor_symbol(ps, static_cast<std::uint64_t>(i));
    std::vector<double> bound;
    double gaps = 0.0;
    for (std::size_t k = 0; k < ps.blocks.size(); ++k) {
        auto [bn, bm] = ps.blocks[k];
        std::uint64_t lo = bn >= static_cast<std::uint64_t>(phi.depth() - 1)
                               ? bn - static_cast<std::uint64_t>(phi.depth() - 1)
                               : 0;
        gaps += w.partial_sum(bm) - w.partial_sum(lo);
        double dev_anchor = std::abs(
            weighted_average_check(anchor, w, phi, static_cast<std::size_t>(bm)) - alpha);
        bound.push_back(rho0 * gaps / w.partial_sum(bm) + dev_anchor + 1e-12);
    }

    rep.worst_average_margin = std::numeric_limits<double>::infinity();
    rep.worst_entropy_rel = 0.0;
    for (int sd = 0; sd < seeds; ++sd) {
        Rng rng = Rng::split(seed0, static_cast<std::uint64_t>(sd));
        Word word = sample_packing(ps, len, rng);
        s.validate(word);
        std::vector<double> trace = packing_local_entropy(ps, word, rep.m_checkpoints);
        for (std::size_t k = 0; k < ps.blocks.size(); ++k) {
            double avg = weighted_average_check(
                word, w, phi, static_cast<std::size_t>(rep.m_checkpoints[k]));
            rep.worst_average_margin = std::min(rep.worst_average_margin,
                                                bound[k] - std::abs(avg - alpha));
            if (k + 1 >= 3)
                rep.worst_entropy_rel = std::max(rep.worst_entropy_rel,
                                                 std::abs(trace[k] / h_top - 1.0));
        }
    }
    rep.averages_pass = rep.worst_average_margin >= 0.0;
    rep.entropy_pass = rep.worst_entropy_rel <= 0.05;
    rep.pass = rep.averages_pass && rep.entropy_pass;
    return rep;
}

}  // namespace wba
