#include "wba/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wba/thermo.hpp"

namespace wba {

namespace {

// per-family statistics cached for exact integrals: mean interior window sum
// plus boundary-class distributions (first/last u symbols)
struct FamilyStats {
    double interior_mean = 0.0;
    std::vector<std::pair<Word, double>> prefix, suffix;
};

FamilyStats family_stats(const std::vector<Word>& family, const Potential& phi, int u) {
    FamilyStats fs;
    if (family.empty()) return fs;
    const int m = phi.depth();
    const int N = static_cast<int>(family.front().size());
    KahanSum interior;
    std::map<Word, std::uint64_t> pre, suf;
    for (const Word& w : family) {
        KahanSum s;
        for (int k = 0; k + m <= N; ++k)
            s.add(phi.value(std::span<const int>(w).subspan(static_cast<std::size_t>(k))));
        interior.add(s.sum);
        ++pre[Word(w.begin(), w.begin() + u)];
        ++suf[Word(w.end() - u, w.end())];
    }
    fs.interior_mean = interior.sum / static_cast<double>(family.size());
    for (const auto& [w, c] : pre)
        fs.prefix.emplace_back(w, static_cast<double>(c) / static_cast<double>(family.size()));
    for (const auto& [w, c] : suf)
        fs.suffix.emplace_back(w, static_cast<double>(c) / static_cast<double>(family.size()));
    return fs;
}

// windows of phi straddling the junction suffix|connector|prefix
double boundary_sum(const Sft& s, const Potential& phi, const Word& suf, const Word& pre) {
    const int m = phi.depth();
    const int u = static_cast<int>(suf.size());
    const int c = s.aperiodicity_exponent() - 1;
    Word seg = suf;
    Word conn = s.connector(suf.back(), pre.front(), c);
    seg.insert(seg.end(), conn.begin(), conn.end());
    seg.insert(seg.end(), pre.begin(), pre.end());
    double total = 0.0;
    for (int q = u - m + 1; q <= u + c - 1; ++q)
        total += phi.value(std::span<const int>(seg).subspan(static_cast<std::size_t>(q)));
    return total;
}

double mix_integral(const ConcatenationScheme& sch, const FamilyStats& fx,
                    const FamilyStats& fy, double p) {
    const int m = sch.phi.depth();
    const int c = sch.sft.aperiodicity_exponent() - 1;
    const double L = static_cast<double>(sch.N + c);
    double interior = p * fx.interior_mean + (1.0 - p) * fy.interior_mean;
    double boundary = 0.0;
    if (m > 1 || c > 0) {
        auto mixed = [&](const std::vector<std::pair<Word, double>>& x,
                         const std::vector<std::pair<Word, double>>& y) {
            std::map<Word, double> out;
            for (const auto& [w, q] : x) out[w] += p * q;
            for (const auto& [w, q] : y) out[w] += (1.0 - p) * q;
            return out;
        };
        for (const auto& [s1, q1] : mixed(fx.suffix, fy.suffix))
            for (const auto& [s2, q2] : mixed(fx.prefix, fy.prefix))
                boundary += q1 * q2 * boundary_sum(sch.sft, sch.phi, s1, s2);
    }
    return (interior + boundary) / L;
}

FamilyStats stats_for(const ConcatenationScheme& sch, const std::vector<Word>& family) {
    return family_stats(family, sch.phi, std::max(sch.phi.depth() - 1, 1));
}

// choose the i-th interior symbol of a uniform path a -> ... -> b with `len`
// interior symbols
Word uniform_path(const Sft& s, int a, int b, int len, Rng& rng) {
    Word out;
    int prev = a;
    for (int i = 0; i < len; ++i) {
        std::uint64_t total = s.connector_count(prev, b, len - i);
        if (total == 0) throw PreconditionError("no admissible join path");
        std::uint64_t pick = rng.next_below(total);
        int chosen = -1;
        for (int x = 0; x < s.alphabet_size(); ++x) {
            if (!s.edge(prev, x)) continue;
            std::uint64_t sub = s.connector_count(x, b, len - i - 1);
            if (pick < sub) { chosen = x; break; }
            pick -= sub;
        }
        out.push_back(chosen);
        prev = chosen;
    }
    return out;
}

// count of family words with the given prefix (family sorted lexicographically)
std::uint64_t prefix_count(const std::vector<Word>& family, const Word& prefix) {
    auto lo = std::lower_bound(family.begin(), family.end(), prefix,
                               [](const Word& w, const Word& p) {
                                   return std::lexicographical_compare(
                                       w.begin(), w.begin() + std::min(w.size(), p.size()),
                                       p.begin(), p.end());
                               });
    auto hi = std::upper_bound(family.begin(), family.end(), prefix,
                               [](const Word& p, const Word& w) {
                                   return std::lexicographical_compare(
                                       p.begin(), p.end(), w.begin(),
                                       w.begin() + std::min(w.size(), p.size()));
                               });
    return static_cast<std::uint64_t>(hi - lo);
}

}  // namespace

ConcatenationScheme build_scheme(const Sft& s, const Potential& phi, double t,
                                 double eps, double delta, int N,
                                 bool enforce_cardinality) {
    if (eps <= 0.0 || delta <= 0.0) throw PreconditionError("eps and delta must be positive");
    if (N < phi.depth()) throw PreconditionError("block length below potential depth");
    auto [am, ap] = spectrum_endpoints(s, phi);
    if (t - 3.0 * eps <= am || t + 3.0 * eps >= ap)
        throw PreconditionError("t +/- 3 eps must lie inside (alpha^-, alpha^+)");
    ConcatenationScheme sch{s, phi, t, eps, delta, N, {}, {}, 0.5, 0.0, 0.0, 0.0, 0.0, false};
    double Hx = spectrum_point(s, phi, t + 2.0 * eps);
    double Hy = spectrum_point(s, phi, t - 2.0 * eps);
    sch.target_log_x = N * (Hx - delta);
    sch.target_log_y = N * (Hy - delta);
    s.for_each_word(N, [&](const Word& w) {
        double avg = phi.word_average(w);
        if (std::abs(avg - t - 2.0 * eps) < eps) sch.X.push_back(w);
        else if (std::abs(avg - t + 2.0 * eps) < eps) sch.Y.push_back(w);
    });
    if (sch.X.empty() || sch.Y.empty())
        throw Error("empty word family; widen the windows or increase N");
    sch.cardinality_met = std::log(static_cast<double>(sch.X.size())) >= sch.target_log_x &&
                          std::log(static_cast<double>(sch.Y.size())) >= sch.target_log_y;
    if (enforce_cardinality && !sch.cardinality_met)
        throw Error("family cardinality below the e^{N(H - delta)} target; increase N");
    sch.integral_x_only = scheme_integral(sch, 1.0);
    sch.integral_y_only = scheme_integral(sch, 0.0);
    return sch;
}

double scheme_integral(const ConcatenationScheme& sch, double p) {
    return mix_integral(sch, stats_for(sch, sch.X), stats_for(sch, sch.Y), p);
}

double tune_p(ConcatenationScheme& sch, double t) {
    FamilyStats fx = stats_for(sch, sch.X), fy = stats_for(sch, sch.Y);
    double i0 = mix_integral(sch, fx, fy, 0.0);
    double i1 = mix_integral(sch, fx, fy, 1.0);
    double lo = std::min(i0, i1), hi = std::max(i0, i1);
    if (!(lo < t && t < hi))
        throw Error("tune_p bracket failure: integrals " + std::to_string(i0) + " and "
                    + std::to_string(i1) + " do not straddle t");
    double a = 0.0, b = 1.0;
    bool increasing = i1 > i0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (a + b);
        double val = mix_integral(sch, fx, fy, mid);
        if (std::abs(val - t) <= 1e-9) { sch.p = mid; return mid; }
        if ((val < t) == increasing) a = mid; else b = mid;
    }
    sch.p = 0.5 * (a + b);
    return sch.p;
}

double block_entropy_rate(const ConcatenationScheme& sch) {
    const double p = sch.p;
    const double L = static_cast<double>(sch.N + sch.sft.aperiodicity_exponent() - 1);
    double h = 0.0;
    if (p > 0.0) h += -p * std::log(p) + p * std::log(static_cast<double>(sch.X.size()));
    if (p < 1.0)
        h += -(1.0 - p) * std::log(1.0 - p)
             + (1.0 - p) * std::log(static_cast<double>(sch.Y.size()));
    return h / L;
}

Word sample_concatenation(const ConcatenationScheme& sch, std::size_t n, Rng& rng,
                          bool phase_shift) {
    const int c = sch.sft.aperiodicity_exponent() - 1;
    const std::size_t L = static_cast<std::size_t>(sch.N + c);
    std::size_t phase = phase_shift ? rng.next_below(L) : 0;
    Word out;
    out.reserve(n + phase + L);
    while (out.size() < n + phase) {
        const std::vector<Word>& fam = rng.next_unit() < sch.p ? sch.X : sch.Y;
        const Word& blk = fam[rng.next_below(fam.size())];
        if (!out.empty()) {
            Word conn = sch.sft.connector(out.back(), blk.front(), c);
            out.insert(out.end(), conn.begin(), conn.end());
        }
        out.insert(out.end(), blk.begin(), blk.end());
    }
    return Word(out.begin() + static_cast<std::ptrdiff_t>(phase),
                out.begin() + static_cast<std::ptrdiff_t>(phase + n));
}

std::vector<double> concatenation_local_entropy(const ConcatenationScheme& sch,
                                                const Word& word,
                                                const std::vector<std::size_t>& checkpoints) {
    const int c = sch.sft.aperiodicity_exponent() - 1;
    const std::size_t L = static_cast<std::size_t>(sch.N + c);
    const std::size_t Nsz = static_cast<std::size_t>(sch.N);
    auto block_logmass = [&](const Word& prefix) {
        // mass of the block slot given its observed (possibly partial) symbols
        double mass = 0.0;
        if (prefix.size() == Nsz) {
            if (std::binary_search(sch.X.begin(), sch.X.end(), prefix))
                mass = sch.p / static_cast<double>(sch.X.size());
            else if (std::binary_search(sch.Y.begin(), sch.Y.end(), prefix))
                mass = (1.0 - sch.p) / static_cast<double>(sch.Y.size());
        } else {
            mass = sch.p * static_cast<double>(prefix_count(sch.X, prefix))
                       / static_cast<double>(sch.X.size())
                   + (1.0 - sch.p) * static_cast<double>(prefix_count(sch.Y, prefix))
                         / static_cast<double>(sch.Y.size());
        }
        if (mass <= 0.0) throw Error("word has zero mass under the scheme");
        return std::log(mass);
    };
    std::vector<double> out;
    for (std::size_t cp : checkpoints) {
        if (cp == 0 || cp > word.size()) throw PreconditionError("bad checkpoint");
        double logmass = 0.0;
        for (std::size_t start = 0; start < cp; start += L) {
            std::size_t end = std::min(cp, start + Nsz);
            Word prefix(word.begin() + static_cast<std::ptrdiff_t>(start),
                        word.begin() + static_cast<std::ptrdiff_t>(end));
            logmass += block_logmass(prefix);
            // connector symbols are deterministic given the neighbors; verify
            if (start + Nsz < cp && c > 0) {
                std::size_t cend = std::min(cp, start + L);
                // next block's first symbol needed to pin the connector; if
                // it is beyond cp the connector mass is a sum over choices --
                // fold it into the next block's prefix count instead
                if (cend == start + L && cend < cp) {
                    Word conn = sch.sft.connector(word[start + Nsz - 1], word[cend], c);
                    for (std::size_t j = 0; j < static_cast<std::size_t>(c); ++j)
                        if (word[start + Nsz + j] != conn[j])
                            throw Error("word has zero mass under the scheme");
                }
            }
        }
        out.push_back(-logmass / static_cast<double>(cp));
    }
    return out;
}

PackingScheme build_packing(const Sft& s, Word preperiod, Word period,
                            std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks) {
    if (period.empty()) throw PreconditionError("anchor period must be nonempty");
    const int r = s.aperiodicity_exponent();
    // anchor admissibility including the wrap-arounds
    Word probe = preperiod;
    probe.insert(probe.end(), period.begin(), period.end());
    probe.insert(probe.end(), period.begin(), period.end());
    s.validate(probe);
    std::uint64_t prev_m = 1;  // copy region before the first block may be empty
    for (auto [n, m] : blocks) {
        if (n < prev_m) throw PreconditionError("schedule blocks must be interleaved");
        if (m < n + 2ull * static_cast<std::uint64_t>(r))
            throw PreconditionError("block too short for pads and a middle word");
        prev_m = m;
    }
    if (blocks.empty()) throw PreconditionError("schedule must have at least one block");
    return PackingScheme{s, std::move(preperiod), std::move(period), std::move(blocks), r};
}

int anchor_symbol(const PackingScheme& ps, std::uint64_t pos) {
    if (pos < ps.preperiod.size()) return ps.preperiod[pos];
    return ps.period[(pos - ps.preperiod.size()) % ps.period.size()];
}

double anchor_average(const PackingScheme& ps, const Potential& phi) {
    Word wrapped = ps.period;
    for (int k = 0; k + 1 < phi.depth(); ++k)
        wrapped.push_back(ps.period[static_cast<std::size_t>(k) % ps.period.size()]);
    KahanSum s;
    for (std::size_t k = 0; k < ps.period.size(); ++k)
        s.add(phi.value(std::span<const int>(wrapped).subspan(k)));
    return s.sum / static_cast<double>(ps.period.size());
}

Word sample_packing(const PackingScheme& ps, std::size_t n, Rng& rng) {
    Word out;
    out.reserve(n);
    std::uint64_t prev_m = 0;
    const int r = ps.r;
    for (auto [bn, bm] : ps.blocks) {
        for (std::uint64_t pos = prev_m; pos < bn && out.size() < n; ++pos)
            out.push_back(anchor_symbol(ps, pos));
        if (out.size() >= n) break;
        std::size_t mid_len = static_cast<std::size_t>(bm - bn) - 2u * static_cast<std::size_t>(r)
                              + 1u;
        Word mid = ps.sft.parry_sample(static_cast<int>(mid_len), rng);
        Word entry = uniform_path(ps.sft, out.back(), mid.front(), r, rng);
        Word exit = uniform_path(ps.sft, mid.back(), anchor_symbol(ps, bm), r - 1, rng);
        out.insert(out.end(), entry.begin(), entry.end());
        out.insert(out.end(), mid.begin(), mid.end());
        out.insert(out.end(), exit.begin(), exit.end());
        prev_m = bm;
        if (out.size() >= n) break;
    }
    for (std::uint64_t pos = prev_m; out.size() < n; ++pos)
        out.push_back(anchor_symbol(ps, pos));
    out.resize(n);
    return out;
}

std::vector<double> packing_local_entropy(const PackingScheme& ps, const Word& word,
                                          const std::vector<std::uint64_t>& checkpoints) {
    std::vector<double> out;
    for (std::uint64_t cp : checkpoints) {
        bool is_block_end = false;
        for (auto [bn, bm] : ps.blocks)
            if (bm == cp) is_block_end = true;
        if (!is_block_end || cp > word.size())
            throw PreconditionError("checkpoints must be covered block ends m_k");
        double neglog = 0.0;
        const int r = ps.r;
        std::uint64_t prev_m = 0;
        for (auto [bn, bm] : ps.blocks) {
            if (bm > cp) break;
            for (std::uint64_t pos = prev_m; pos < bn; ++pos)
                if (word[static_cast<std::size_t>(pos)] != anchor_symbol(ps, pos))
                    throw Error("word has zero mass: copy region deviates from the anchor");
            prev_m = bm;
            std::size_t n = static_cast<std::size_t>(bn), m = static_cast<std::size_t>(bm);
            std::size_t mid_lo = n + static_cast<std::size_t>(r);
            std::size_t mid_hi = m - static_cast<std::size_t>(r) + 1;  // exclusive
            std::uint64_t entry_paths = ps.sft.connector_count(word[n - 1], word[mid_lo], r);
            if (entry_paths == 0 || !ps.sft.admissible(std::span<const int>(word).subspan(
                                        n - 1, mid_lo - n + 2)))
                throw Error("word has zero mass: entry pad is not an admissible join");
            neglog += std::log(static_cast<double>(entry_paths));
            neglog -= ps.sft.parry_log_mass(
                std::span<const int>(word).subspan(mid_lo, mid_hi - mid_lo));
            if (r >= 2) {
                std::uint64_t exit_paths = ps.sft.connector_count(
                    word[mid_hi - 1], anchor_symbol(ps, bm), r - 1);
                Word seg(word.begin() + static_cast<std::ptrdiff_t>(mid_hi - 1),
                         word.begin() + static_cast<std::ptrdiff_t>(m));
                seg.push_back(anchor_symbol(ps, bm));
                if (exit_paths == 0 || !ps.sft.admissible(seg))
                    throw Error("word has zero mass: exit pad is not an admissible join");
                neglog += std::log(static_cast<double>(exit_paths));
            }
        }
        out.push_back(neglog / static_cast<double>(cp));
    }
    return out;
}

double weighted_average_check(const Word& word, const WeightSequence& w,
                              const Potential& phi, std::size_t n) {
    if (n + static_cast<std::size_t>(phi.depth()) > word.size() + 1)
        throw PreconditionError("word too short for the requested depth");
    KahanSum s;
    for (std::size_t k = 0; k < n; ++k)
        s.add(w.weight(k) * phi.value(std::span<const int>(word).subspan(k)));
    return s.sum / w.partial_sum(n);
}

}  // namespace wba
