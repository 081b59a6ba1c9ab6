#pragma once

#include <utility>
#include <vector>

#include "wba/potential.hpp"

namespace wba {

// Transfer graph on admissible depth-m blocks: nodes are m-words, edges are
// overlap-by-(m-1) transitions carrying phi(target block) as weight.
struct BlockGraph {
    std::vector<Word> states;
    std::vector<std::vector<std::pair<int, double>>> edges;  // (target, phi)
};
BlockGraph build_block_graph(const Sft& s, const Potential& phi);

// log spectral radius of the transfer matrix with entries e^{q phi(block)};
// guard: |q| * sup_norm <= 700 (entries rescaled internally)
double pressure(const Sft& s, const Potential& phi, double q);

// (alpha^-, alpha^+): min and max mean-cycle phi-weight over the block graph
// (Karp's dynamic program); equal to lim P(q)/q as q -> -/+ infinity
std::pair<double, double> spectrum_endpoints(const Sft& s, const Potential& phi);

// H(t) = inf_q (P(q) - q t) on the interior; at the endpoints, the log
// spectral radius of the subgraph spanned by optimal-mean cycles
double spectrum_point(const Sft& s, const Potential& phi, double t);

struct SpectrumCurve {
    double alpha_minus, alpha_plus;
    double h_top;
    double argmax_t;  // grid point with maximal H
    std::vector<double> t, H, c;  // c(t) = max(2/(a+ - t), 2/(t - a-)) h_top
    bool concave;                 // second divided differences <= tol on grid
};
SpectrumCurve spectrum_curve(const Sft& s, const Potential& phi,
                             const std::vector<double>& grid);

// observed sup |H(t) - H_n(t)| over the grid against the uniform bound
// 2 c(t) eps_n, for the depth-n discretization of phi
struct DepthComparison {
    int depth;
    double eps_n;
    double sup_error;
    double min_slack;  // min over grid of 2 c(t) eps_n - |H - H_n|
    bool within_bound;
};
DepthComparison compare_depth(const Sft& s, const Potential& phi, int n,
                              const std::vector<double>& grid);

// (sup_{s<t} H(s), sup_{s>=t} H(s)) read off the sampled curve; empty level
// sets yield -infinity
std::pair<double, double> level_set_entropy_bounds(const SpectrumCurve& curve, double t);

}  // namespace wba
