#include "wba/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace wba {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// spectral radius of a nonnegative primitive matrix by normalized power
// iteration
double spectral_radius(const std::vector<std::vector<double>>& B) {
    const std::size_t n = B.size();
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
    double lambda = 0.0;
    for (int it = 0; it < 200000; ++it) {
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += B[i][j] * x[j];
            y[i] = acc;
            norm += acc;
        }
        double prev = lambda;
        lambda = norm;  // x is L1-normalized, so |Bx|_1 estimates the root
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
        if (it > 4 && std::abs(lambda - prev) <= 1e-15 * (1.0 + lambda)) break;
    }
    return lambda;
}

double karp_min_cycle_mean(const BlockGraph& g, bool maximize) {
    const int n = static_cast<int>(g.states.size());
    const double sign = maximize ? -1.0 : 1.0;
    // F[k][v]: minimum weight of a k-edge walk ending at v
    std::vector<std::vector<double>> F(static_cast<std::size_t>(n) + 1,
                                       std::vector<double>(n, kInf));
    for (int v = 0; v < n; ++v) F[0][v] = 0.0;
    for (int k = 1; k <= n; ++k)
        for (int u = 0; u < n; ++u) {
            if (F[k - 1][u] == kInf) continue;
            for (const auto& [v, w] : g.edges[u])
                F[k][v] = std::min(F[k][v], F[k - 1][u] + sign * w);
        }
    double best = kInf;
    for (int v = 0; v < n; ++v) {
        if (F[n][v] == kInf) continue;
        double worst = -kInf;
        for (int k = 0; k < n; ++k) {
            if (F[k][v] == kInf) continue;
            worst = std::max(worst, (F[n][v] - F[k][v]) / static_cast<double>(n - k));
        }
        best = std::min(best, worst);
    }
    return sign * best;
}

// log spectral radius of the subgraph spanned by cycles of optimal mean
// `alpha` (0 when that subgraph is a single cycle)
double tight_cycle_entropy(const BlockGraph& g, double alpha, bool maximize) {
    const int n = static_cast<int>(g.states.size());
    const double sign = maximize ? -1.0 : 1.0;
    // Bellman relaxation with shifted weights sign*(phi - alpha): every cycle
    // has nonnegative shifted weight, optimal cycles have zero
    std::vector<double> d(n, 0.0);
    for (int round = 0; round <= n; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u)
            for (const auto& [v, w] : g.edges[u]) {
                double cand = d[u] + sign * (w - alpha);
                if (cand < d[v] - 1e-12) { d[v] = cand; changed = true; }
            }
        if (!changed) break;
    }
    // tight edges; restrict to those lying in strongly connected components
    std::vector<std::vector<int>> tight(n);
    for (int u = 0; u < n; ++u)
        for (const auto& [v, w] : g.edges[u])
            if (std::abs(d[u] + sign * (w - alpha) - d[v]) <= 1e-8) tight[u].push_back(v);
    // component ids by double reachability (n is small)
    auto reach = [&](int src, const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{src};
        seen[src] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!seen[v]) { seen[v] = 1; stack.push_back(v); }
        }
        return seen;
    };
    std::vector<std::vector<int>> rtight(n);
    for (int u = 0; u < n; ++u)
        for (int v : tight[u]) rtight[v].push_back(u);
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int u = 0; u < n; ++u) {
        if (comp[u] >= 0) continue;
        auto fwd = reach(u, tight);
        auto bwd = reach(u, rtight);
        bool any = false;
        for (int v = 0; v < n; ++v)
            if (fwd[v] && bwd[v] && comp[v] < 0) { comp[v] = ncomp; any = true; }
        if (any) ++ncomp;
    }
    double best = 0.0;
    for (int c = 0; c < ncomp; ++c) {
        std::vector<int> nodes;
        for (int u = 0; u < n; ++u)
            if (comp[u] == c) nodes.push_back(u);
        std::vector<std::vector<double>> B(nodes.size(), std::vector<double>(nodes.size(), 0.0));
        bool has_edge = false;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (int v : tight[nodes[i]]) {
                auto it = std::find(nodes.begin(), nodes.end(), v);
                if (it != nodes.end()) {
                    B[i][static_cast<std::size_t>(it - nodes.begin())] = 1.0;
                    has_edge = true;
                }
            }
        if (has_edge) best = std::max(best, std::log(std::max(1.0, spectral_radius(B))));
    }
    return best;
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return std::min(fc, fd);
}

}  // namespace

BlockGraph build_block_graph(const Sft& s, const Potential& phi) {
    const int m = phi.depth();
    BlockGraph g;
    g.states = s.enumerate_words(m);
    g.edges.resize(g.states.size());
    for (std::size_t i = 0; i < g.states.size(); ++i)
        for (std::size_t j = 0; j < g.states.size(); ++j) {
            const Word& a = g.states[i];
            const Word& b = g.states[j];
            bool overlap = true;
            for (int k = 0; k + 1 < m; ++k)
                if (a[static_cast<std::size_t>(k) + 1] != b[k]) { overlap = false; break; }
            if (overlap && s.edge(a[static_cast<std::size_t>(m) - 1],
                                  b[static_cast<std::size_t>(m) - 1]))
                g.edges[i].emplace_back(static_cast<int>(j), phi.value(b));
        }
    return g;
}

double pressure(const Sft& s, const Potential& phi, double q) {
    if (std::abs(q) * phi.sup_norm() > 700.0)
        throw PreconditionError("pressure overflow guard: |q| * sup_norm > 700");
    BlockGraph g = build_block_graph(s, phi);
    double shift = -kInf;
    for (const auto& row : g.edges)
        for (const auto& [v, w] : row) shift = std::max(shift, q * w);
    std::vector<std::vector<double>> B(g.states.size(),
                                       std::vector<double>(g.states.size(), 0.0));
    for (std::size_t u = 0; u < g.edges.size(); ++u)
        for (const auto& [v, w] : g.edges[u])
            B[u][static_cast<std::size_t>(v)] = std::exp(q * w - shift);
    return shift + std::log(spectral_radius(B));
}

std::pair<double, double> spectrum_endpoints(const Sft& s, const Potential& phi) {
    BlockGraph g = build_block_graph(s, phi);
    return {karp_min_cycle_mean(g, false), karp_min_cycle_mean(g, true)};
}

double spectrum_point(const Sft& s, const Potential& phi, double t) {
    auto [am, ap] = spectrum_endpoints(s, phi);
    const double edge_tol = 1e-12 * (1.0 + std::abs(am) + std::abs(ap));
    if (t < am - edge_tol || t > ap + edge_tol)
        throw PreconditionError("spectrum target outside [alpha^-, alpha^+]");
    BlockGraph g = build_block_graph(s, phi);
    if (t <= am + edge_tol) return tight_cycle_entropy(g, am, false);
    if (t >= ap - edge_tol) return tight_cycle_entropy(g, ap, true);

    auto P = [&](double q) { return pressure(s, phi, q); };
    const double qcap = phi.sup_norm() > 0.0 ? 690.0 / phi.sup_norm() : 690.0;
    double Q = std::min(qcap, 8.0 / (ap - am));
    auto slope = [&](double q) {
        double h = 1e-5 * (1.0 + std::abs(q));
        return (P(q + h) - P(q - h)) / (2.0 * h);
    };
    // double the bracket until the pressure slopes straddle t (or the
    // overflow guard caps Q)
    while (Q < qcap && (slope(-Q) >= t || slope(Q) <= t)) Q = std::min(qcap, 2.0 * Q);
    return golden_section_min([&](double q) { return P(q) - q * t; }, -Q, Q, 1e-9);
}

SpectrumCurve spectrum_curve(const Sft& s, const Potential& phi,
                             const std::vector<double>& grid) {
    SpectrumCurve c;
    auto [am, ap] = spectrum_endpoints(s, phi);
    c.alpha_minus = am;
    c.alpha_plus = ap;
    c.h_top = s.topological_entropy();
    double best = -kInf;
    for (double t : grid) {
        double H = spectrum_point(s, phi, t);
        double ct = ap > am
                        ? std::max(2.0 / std::max(ap - t, 1e-300), 2.0 / std::max(t - am, 1e-300))
                              * c.h_top
                        : kInf;
        c.t.push_back(t);
        c.H.push_back(H);
        c.c.push_back(ct);
        if (H > best) { best = H; c.argmax_t = t; }
    }
    c.concave = true;
    for (std::size_t i = 0; i + 2 < c.t.size(); ++i) {
        double d1 = (c.H[i + 1] - c.H[i]) / (c.t[i + 1] - c.t[i]);
        double d2 = (c.H[i + 2] - c.H[i + 1]) / (c.t[i + 2] - c.t[i + 1]);
        if (d2 - d1 > 1e-7) c.concave = false;
    }
    return c;
}

DepthComparison compare_depth(const Sft& s, const Potential& phi, int n,
                              const std::vector<double>& grid) {
    DepthComparison dc;
    dc.depth = n;
    dc.eps_n = phi.modulus().eps[static_cast<std::size_t>(std::min(n, phi.depth()))];
    Potential phin = phi.discretize(n);
    auto [am, ap] = spectrum_endpoints(s, phi);
    const double h_top = s.topological_entropy();
    dc.sup_error = 0.0;
    dc.min_slack = kInf;
    for (double t : grid) {
        double H = spectrum_point(s, phi, t);
        double Hn = spectrum_point(s, phin, t);
        double err = std::abs(H - Hn);
        double ct = std::max(2.0 / std::max(ap - t, 1e-300), 2.0 / std::max(t - am, 1e-300))
                    * h_top;
        dc.sup_error = std::max(dc.sup_error, err);
        dc.min_slack = std::min(dc.min_slack, 2.0 * ct * dc.eps_n - err);
    }
    dc.within_bound = dc.min_slack >= -1e-9;
    return dc;
}

std::pair<double, double> level_set_entropy_bounds(const SpectrumCurve& curve, double t) {
    if (t <= curve.alpha_minus) return {-kInf, curve.h_top};
    if (t > curve.alpha_plus) return {curve.h_top, -kInf};
    auto interp = [&](double x) {
        if (curve.t.empty()) return curve.h_top;
        if (x <= curve.t.front()) return curve.H.front();
        if (x >= curve.t.back()) return curve.H.back();
        auto it = std::upper_bound(curve.t.begin(), curve.t.end(), x);
        std::size_t i = static_cast<std::size_t>(it - curve.t.begin());
        double w = (x - curve.t[i - 1]) / (curve.t[i] - curve.t[i - 1]);
        return (1.0 - w) * curve.H[i - 1] + w * curve.H[i];
    };
    double below = t <= curve.argmax_t ? interp(t) : curve.h_top;
    double above = t >= curve.argmax_t ? interp(t) : curve.h_top;
    return {below, above};
}

}  // namespace wba
