#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wba/json_io.hpp"
#include "wba/verify.hpp"

using namespace wba;

namespace {

struct WeightOpts {
    std::string family = "constant";
    double d = -0.5;
    std::string path;
};

void add_weight_opts(CLI::App* app, WeightOpts& wo) {
    app->add_option("--family", wo.family, "weight family: constant|power|harmonic|explicit")
        ->check(CLI::IsMember({"constant", "power", "harmonic", "explicit"}));
    app->add_option("--d", wo.d, "power-family exponent, -1 < d <= 0");
    app->add_option("--weights-path", wo.path, "file with one positive decimal per line");
}

WeightSequence make_weights(const WeightOpts& wo) {
    nlohmann::json j;
    j["family"] = wo.family;
    if (wo.family == "power") j["d"] = wo.d;
    if (wo.family == "explicit") j["path"] = wo.path;
    return load_weights(j);
}

struct Out {
    std::string path;
    std::ostringstream buf;

    ~Out() = default;
    void flush() {
        if (path.empty()) {
            std::cout << buf.str();
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw ConfigError("cannot write " + path);
            f << buf.str();
        }
    }
};

std::string word_opt_to_word(const std::string& s, const Sft& sft, Word& out) {
    out = word_from_string(s, sft.alphabet_size());
    sft.validate(out);
    return s;
}

int run(int argc, char** argv) {
    CLI::App app{"weighted Birkhoff averages on subshifts of finite type:\n"
                 "weight classification and schedules, counterexample traces,\n"
                 "entropy spectra, proof-measure samplers, and verification suites"};
    app.require_subcommand(1);
    app.fallthrough();  // allow global options like --out after the subcommand
    std::string out_path;
    app.add_option("--out", out_path, "output file (default: stdout)");

    // ---- weights ----
    auto* weights = app.add_subcommand("weights", "weight-sequence diagnostics");
    weights->require_subcommand(1);
    WeightOpts wc;
    std::uint64_t wN = 1000000;
    auto* wclassify = weights->add_subcommand(
        "classify", "asymptotic-ratio trace and bounded/unbounded classification");
    add_weight_opts(wclassify, wc);
    wclassify->add_option("--N", wN, "scan horizon");
    std::size_t wK = 6;
    WeightOpts wu;
    double wuN = 0.0;
    auto* wubar = weights->add_subcommand(
        "ubar", "certified schedule (n_k, m_k) witnessing unbounded ratio");
    add_weight_opts(wubar, wu);
    wubar->add_option("--K", wK, "number of schedule entries");
    wubar->add_option("--N", wuN, "horizon (0: unlimited for closed-form families)");

    // ---- avg trace ----
    auto* avg = app.add_subcommand("avg", "Birkhoff average traces");
    auto* atrace = avg->add_subcommand("trace", "plain and weighted running averages");
    WeightOpts at_w;
    add_weight_opts(atrace, at_w);
    std::string seq_kind = "alternating";
    std::uint64_t at_N = 100000;
    int at_points = 20;
    atrace->add_option("--seq", seq_kind,
                       "test sequence: constant|alternating|decaying|counterexample")
        ->check(CLI::IsMember({"constant", "alternating", "decaying", "counterexample"}));
    atrace->add_option("--N", at_N, "horizon");
    atrace->add_option("--points", at_points, "number of log-spaced checkpoints");

    // ---- counterexample ----
    auto* cex = app.add_subcommand(
        "counterexample", "blockwise -1/0/+1 sequence splitting plain from weighted averages");
    WeightOpts cex_w;
    cex_w.family = "harmonic";
    add_weight_opts(cex, cex_w);
    std::size_t cex_K = 6;
    cex->add_option("--K", cex_K, "schedule entries");

    // ---- sft info ----
    auto* sftc = app.add_subcommand("sft", "subshift services");
    auto* sinfo = sftc->add_subcommand("info", "alphabet, aperiodicity exponent, entropy");
    std::string sft_path;
    sinfo->add_option("--sft", sft_path, "SFT spec (JSON)")->required();

    // ---- spectrum ----
    auto* spec = app.add_subcommand("spectrum", "entropy spectrum H(t) via pressure");
    std::string sp_sft, sp_pot;
    int sp_grid = 97, sp_depth = 0;
    spec->add_option("--sft", sp_sft, "SFT spec (JSON)")->required();
    spec->add_option("--potential", sp_pot, "potential spec (JSON)")->required();
    spec->add_option("--grid", sp_grid, "number of interior grid points");
    spec->add_option("--depth", sp_depth, "also emit the depth-n discretized spectrum");

    // ---- measure ----
    auto* meas = app.add_subcommand("measure", "concatenation measures mu^p");
    meas->require_subcommand(1);
    std::string m_sft, m_pot;
    double m_t = 0.5, m_eps = 0.05, m_delta = 0.0;
    int m_N = 12;
    bool m_enforce = false;
    auto add_meas_opts = [&](CLI::App* c) {
        c->add_option("--sft", m_sft, "SFT spec (JSON)")->required();
        c->add_option("--potential", m_pot, "potential spec (JSON)")->required();
        c->add_option("--t", m_t, "target average");
        c->add_option("--eps", m_eps, "window half-width");
        c->add_option("--delta", m_delta, "entropy deficit (0: 0.05 h_top)");
        c->add_option("--N", m_N, "block length");
        c->add_flag("--enforce-cardinality", m_enforce,
                    "fail when families fall short of the entropy target");
    };
    auto* mbuild = meas->add_subcommand("build", "build and dump the scheme");
    add_meas_opts(mbuild);
    auto* msample = meas->add_subcommand("sample", "draw a word from the tuned scheme");
    add_meas_opts(msample);
    std::uint64_t m_seed = 0;
    std::size_t m_len = 256;
    bool m_phase = false;
    msample->add_option("--seed", m_seed, "RNG seed")->required();
    msample->add_option("--n", m_len, "sample length");
    msample->add_flag("--phase-shift", m_phase, "uniform phase in [0, period)");
    auto* mtrace = meas->add_subcommand("trace", "exact local-entropy trace of a sampled word");
    add_meas_opts(mtrace);
    std::uint64_t mt_seed = 0;
    int mt_blocks = 16;
    mtrace->add_option("--seed", mt_seed, "RNG seed")->required();
    mtrace->add_option("--blocks", mt_blocks, "number of block-end checkpoints");

    // ---- verify ----
    auto* ver = app.add_subcommand("verify", "desk-scale verification suites");
    ver->require_subcommand(1);
    WeightOpts v1_w;
    v1_w.family = "harmonic";
    std::uint64_t v1_N = 1u << 20;
    auto* vthm1 = ver->add_subcommand(
        "thm1", "average-equivalence vs counterexample split by ratio class");
    add_weight_opts(vthm1, v1_w);
    vthm1->add_option("--N", v1_N, "horizon");

    std::string v2_sft, v2_pot;
    WeightOpts v2_w;
    v2_w.family = "harmonic";
    std::vector<double> v2_alphas{0.3, 0.5, 0.7};
    double v2_eps = 0.05;
    int v2_n0 = 12, v2_n1 = 18;
    auto* vthm2 = ver->add_subcommand(
        "thm2", "weighted vs plain level-set counting against the spectrum");
    vthm2->add_option("--sft", v2_sft)->required();
    vthm2->add_option("--potential", v2_pot)->required();
    add_weight_opts(vthm2, v2_w);
    vthm2->add_option("--alphas", v2_alphas, "level targets");
    vthm2->add_option("--eps", v2_eps, "window half-width");
    vthm2->add_option("--n0", v2_n0, "first depth");
    vthm2->add_option("--n1", v2_n1, "last depth");

    std::string v4_sft, v4_pot, v4_period = "01", v4_preperiod;
    WeightOpts v4_w;
    v4_w.family = "harmonic";
    double v4_alpha = 0.5;
    std::size_t v4_blocks = 4;
    int v4_seeds = 10;
    std::uint64_t v4_seed = 0;
    auto* vthm4 = ver->add_subcommand(
        "thm4", "packing-measure ingredients: averages near alpha, entropy near h_top");
    vthm4->add_option("--sft", v4_sft)->required();
    vthm4->add_option("--potential", v4_pot)->required();
    add_weight_opts(vthm4, v4_w);
    vthm4->add_option("--alpha", v4_alpha, "target weighted average");
    vthm4->add_option("--period", v4_period, "anchor period word");
    vthm4->add_option("--preperiod", v4_preperiod, "anchor preperiod word");
    vthm4->add_option("--blocks", v4_blocks, "schedule entries");
    vthm4->add_option("--seeds", v4_seeds, "independent samples");
    vthm4->add_option("--seed", v4_seed, "RNG seed")->required();

    std::string vl_sft, vl_pot;
    WeightOpts vl_w;
    bool vl_weighted = false;
    double vl_alpha = 0.5, vl_eps = 0.05;
    int vl_n0 = 12, vl_n1 = 18;
    auto* vlevel = ver->add_subcommand("levelset", "cylinder counts near a level target");
    vlevel->add_option("--sft", vl_sft)->required();
    vlevel->add_option("--potential", vl_pot)->required();
    add_weight_opts(vlevel, vl_w);
    vlevel->add_flag("--weighted", vl_weighted, "use weighted averages");
    vlevel->add_option("--alpha", vl_alpha, "level target");
    vlevel->add_option("--eps", vl_eps, "window half-width");
    vlevel->add_option("--n0", vl_n0, "first depth");
    vlevel->add_option("--n1", vl_n1, "last depth");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are config errors
    }

    Out out;
    out.path = out_path;
    int exit_code = 0;

    if (wclassify->parsed()) {
        WeightSequence w = make_weights(wc);
        RatioDiagnostics diag = classify(w, wN);
        out.buf << "n,s_n,S_n,ratio\n";
        std::uint64_t n = 1;
        for (;;) {
            out.buf << n << ',' << fmt12(w.weight(n - 1)) << ',' << fmt12(w.partial_sum(n))
                    << ',' << fmt12(w.ratio(n - 1)) << '\n';
            if (n >= wN) break;
            n = std::min(wN, n * 10);  // log-spaced rows
        }
        out.buf << "# classification=";
        switch (diag.kind) {
            case RatioDiagnostics::Kind::bounded:
                out.buf << "bounded G=" << fmt12(diag.G);
                break;
            case RatioDiagnostics::Kind::unbounded:
                out.buf << "unbounded";
                break;
            default:
                out.buf << "unknown empirical_sup=" << fmt12(diag.empirical_sup)
                        << " tail_growth=" << fmt12(diag.tail_growth);
        }
        out.buf << '\n';
    } else if (wubar->parsed()) {
        WeightSequence w = make_weights(wu);
        double horizon = wuN > 0 ? wuN : std::numeric_limits<double>::infinity();
        UbarSchedule sched = build_ubar_schedule(w, wK, horizon);
        out.buf << "k,ln_n,ln_m,S_n,S_m,M_k,cert_count,cert_gap,cert_index,n,m\n";
        for (std::size_t k = 0; k < sched.entries.size(); ++k) {
            const UbarEntry& e = sched.entries[k];
            out.buf << k + 1 << ',' << fmt12(e.ln_n) << ',' << fmt12(e.ln_m) << ','
                    << fmt12(e.S_n) << ',' << fmt12(e.S_m) << ',' << fmt12(e.ratio_at_n) << ','
                    << fmt12(e.cert_count) << ',' << fmt12(e.cert_gap) << ','
                    << fmt12(e.cert_index) << ',';
            if (e.exact) out.buf << e.n << ',' << e.m;
            else out.buf << "-,-";
            out.buf << '\n';
        }
        if (sched.horizon_exhausted) {
            out.buf << "# horizon exhausted before " << wK << " entries\n";
            exit_code = 1;
        }
    } else if (atrace->parsed()) {
        WeightSequence w = make_weights(at_w);
        BoundedSequence a;
        std::shared_ptr<CounterexampleSequence> ce;
        if (seq_kind == "constant") a = {[](std::uint64_t) { return 0.5; }, 1.0};
        else if (seq_kind == "alternating")
            a = {[](std::uint64_t k) { return k % 2 ? -1.0 : 1.0; }, 1.0};
        else if (seq_kind == "decaying")
            a = {[](std::uint64_t k) {
                     return 0.25 + std::cos(0.31 * static_cast<double>(k))
                                       / std::sqrt(static_cast<double>(k) + 1.0);
                 },
                 1.25};
        else {
            ce = std::make_shared<CounterexampleSequence>(build_ubar_schedule(w, 6));
            a = {[ce](std::uint64_t k) { return static_cast<double>(ce->value(k)); }, 1.0};
        }
        std::vector<std::uint64_t> cps;
        for (int i = 1; i <= at_points; ++i)
            cps.push_back(static_cast<std::uint64_t>(std::llround(
                std::pow(static_cast<double>(at_N), static_cast<double>(i) / at_points))));
        std::sort(cps.begin(), cps.end());
        cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
        AverageTrace tr = make_trace(a, w, cps);
        out.buf << "n,plain_avg,weighted_avg,S_n,ratio\n";
        for (std::size_t i = 0; i < tr.checkpoints.size(); ++i)
            out.buf << tr.checkpoints[i] << ',' << fmt12(tr.plain[i]) << ','
                    << fmt12(tr.weighted[i]) << ',' << fmt12(tr.S[i]) << ','
                    << fmt12(tr.ratio[i]) << '\n';
    } else if (cex->parsed()) {
        WeightSequence w = make_weights(cex_w);
        CounterexampleSequence ce(build_ubar_schedule(w, cex_K));
        out.buf << "k,ln_n,ln_m,plain_at_m,weighted_at_m,weighted_block_bound\n";
        for (std::size_t k = 1; k <= ce.schedule().entries.size(); ++k) {
            const UbarEntry& e = ce.schedule().entries[k - 1];
            out.buf << k << ',' << fmt12(e.ln_n) << ',' << fmt12(e.ln_m) << ','
                    << fmt12(ce.plain_average_at(k)) << ',' << fmt12(ce.weighted_average_at(k))
                    << ',' << fmt12(ce.weighted_block_bound(k)) << '\n';
        }
        std::size_t k0 = ce.first_entry_within(0.05);
        out.buf << "# first entry with |weighted| <= 0.05 from there on: k0=" << k0 << '\n';
        if (k0 == 0) exit_code = 1;
    } else if (sinfo->parsed()) {
        Sft s = load_sft_file(sft_path);
        out.buf << "alphabet_size," << s.alphabet_size() << '\n';
        out.buf << "aperiodicity_exponent," << s.aperiodicity_exponent() << '\n';
        out.buf << "perron_root," << fmt12(s.perron_root()) << '\n';
        out.buf << "topological_entropy," << fmt12(s.topological_entropy()) << '\n';
        out.buf << "parry_entropy," << fmt12(s.parry_entropy()) << '\n';
        for (int i = 0; i < s.alphabet_size(); ++i)
            out.buf << "parry_stationary_" << i << ',' << fmt12(s.parry_stationary(i)) << '\n';
    } else if (spec->parsed()) {
        Sft s = load_sft_file(sp_sft);
        Potential phi = load_potential_file(sp_pot, s);
        auto [am, ap] = spectrum_endpoints(s, phi);
        std::vector<double> grid;
        for (int i = 1; i <= sp_grid; ++i)
            grid.push_back(am + (ap - am) * i / (sp_grid + 1));
        SpectrumCurve curve = spectrum_curve(s, phi, grid);
        out.buf << "# alpha_minus=" << fmt12(am) << " alpha_plus=" << fmt12(ap)
                << " h_top=" << fmt12(curve.h_top) << '\n';
        Potential phin = sp_depth > 0 ? phi.discretize(sp_depth) : phi;
        out.buf << "t,H";
        if (sp_depth > 0) out.buf << ",H_" << sp_depth;
        out.buf << ",c\n";
        for (std::size_t i = 0; i < curve.t.size(); ++i) {
            out.buf << fmt12(curve.t[i]) << ',' << fmt12(curve.H[i]);
            if (sp_depth > 0) out.buf << ',' << fmt12(spectrum_point(s, phin, curve.t[i]));
            out.buf << ',' << fmt12(curve.c[i]) << '\n';
        }
        if (!curve.concave) exit_code = 1;
    } else if (mbuild->parsed() || msample->parsed() || mtrace->parsed()) {
        Sft s = load_sft_file(m_sft);
        Potential phi = load_potential_file(m_pot, s);
        double delta = m_delta > 0 ? m_delta : 0.05 * s.topological_entropy();
        ConcatenationScheme sch = build_scheme(s, phi, m_t, m_eps, delta, m_N, m_enforce);
        tune_p(sch, m_t);
        if (mbuild->parsed()) {
            out.buf << scheme_to_json(sch).dump(2) << '\n';
        } else if (msample->parsed()) {
            Rng rng = Rng::split(m_seed, 0);
            Word word = sample_concatenation(sch, m_len, rng, m_phase);
            out.buf << word_to_string(word) << '\n';
        } else {
            Rng rng = Rng::split(mt_seed, 0);
            const std::size_t L =
                static_cast<std::size_t>(m_N + s.aperiodicity_exponent() - 1);
            // checkpoints at the end of each block's word portion
            std::vector<std::size_t> cps;
            for (int b = 1; b <= mt_blocks; ++b)
                cps.push_back((static_cast<std::size_t>(b) - 1) * L + m_N);
            Word word = sample_concatenation(sch, cps.back(), rng, false);
            std::vector<double> tr = concatenation_local_entropy(sch, word, cps);
            out.buf << "n,local_entropy\n";
            for (std::size_t i = 0; i < cps.size(); ++i)
                out.buf << cps[i] << ',' << fmt12(tr[i]) << '\n';
        }
    } else if (vthm1->parsed()) {
        WeightSequence w = make_weights(v1_w);
        Theorem1Report rep = run_theorem1_suite(w, v1_N);
        if (rep.bounded_case) {
            out.buf << "case,bounded\nG," << fmt12(rep.diag.G) << "\nreverse_holds,"
                    << (rep.reverse_holds ? 1 : 0) << "\nmin_slack," << fmt12(rep.min_slack)
                    << '\n';
        } else {
            out.buf << "case,unbounded\nk0," << rep.k0 << "\nweighted_sup,"
                    << fmt12(rep.weighted_sup) << '\n';
            for (std::size_t k = 0; k < rep.plain_at_m.size(); ++k)
                out.buf << "plain_at_m_" << k + 1 << ',' << fmt12(rep.plain_at_m[k]) << '\n';
        }
        out.buf << "pass," << (rep.pass ? 1 : 0) << '\n';
        if (!rep.pass) exit_code = 1;
    } else if (vthm2->parsed()) {
        Sft s = load_sft_file(v2_sft);
        Potential phi = load_potential_file(v2_pot, s);
        WeightSequence w = make_weights(v2_w);
        SpectrumEqualityReport rep =
            run_spectrum_equality_suite(s, phi, w, v2_alphas, v2_eps, v2_n0, v2_n1);
        out.buf << "alpha,plain_slope,weighted_slope,H\n";
        for (std::size_t i = 0; i < rep.alphas.size(); ++i)
            out.buf << fmt12(rep.alphas[i]) << ',' << fmt12(rep.plain_slopes[i]) << ','
                    << fmt12(rep.weighted_slopes[i]) << ',' << fmt12(rep.H_values[i]) << '\n';
        out.buf << "# exploratory: finite-depth weighted counts are a heuristic proxy\n";
        out.buf << "# max_plain_discrepancy=" << fmt12(rep.max_plain_discrepancy)
                << " max_weighted_discrepancy=" << fmt12(rep.max_weighted_discrepancy) << '\n';
        double cap = s.topological_entropy() + 1e-6;
        for (double sl : rep.plain_slopes)
            if (sl > cap) exit_code = 1;
    } else if (vthm4->parsed()) {
        Sft s = load_sft_file(v4_sft);
        Potential phi = load_potential_file(v4_pot, s);
        WeightSequence w = make_weights(v4_w);
        Word period, preperiod;
        word_opt_to_word(v4_period, s, period);
        if (!v4_preperiod.empty()) word_opt_to_word(v4_preperiod, s, preperiod);
        PackingReport rep = run_packing_suite(s, phi, w, v4_alpha, preperiod, period,
                                              v4_blocks, v4_seeds, v4_seed);
        out.buf << "worst_average_margin," << fmt12(rep.worst_average_margin) << '\n';
        out.buf << "worst_entropy_rel," << fmt12(rep.worst_entropy_rel) << '\n';
        out.buf << "averages_pass," << (rep.averages_pass ? 1 : 0) << '\n';
        out.buf << "entropy_pass," << (rep.entropy_pass ? 1 : 0) << '\n';
        out.buf << "pass," << (rep.pass ? 1 : 0) << '\n';
        if (!rep.pass) exit_code = 1;
    } else if (vlevel->parsed()) {
        Sft s = load_sft_file(vl_sft);
        Potential phi = load_potential_file(vl_pot, s);
        std::optional<WeightSequence> w;
        if (vl_weighted) w = make_weights(vl_w);
        LevelSetQuery q{&s, &phi, vl_alpha, vl_eps, vl_n0, vl_n1,
                        w ? &*w : nullptr};
        CountingReport rep = count_level_cylinders(q);
        out.buf << "depth,count\n";
        for (std::size_t i = 0; i < rep.depths.size(); ++i)
            out.buf << rep.depths[i] << ',' << rep.counts[i] << '\n';
        out.buf << "# slope=" << fmt12(rep.slope) << " h_top=" << fmt12(rep.h_top) << '\n';
        if (rep.slope > rep.h_top + 1e-6) exit_code = 1;
    }

    out.flush();
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
