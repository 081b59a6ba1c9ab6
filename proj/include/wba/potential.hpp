#pragma once

#include <map>
#include <string>
#include <vector>

#include "wba/sft.hpp"

namespace wba {

// Modulus-of-continuity data for a depth-m potential: eps[n] is the sup of
// phi - phi_n (cylinder oscillation at depth n), rho[n] the max |phi(x)-phi(y)|
// over pairs agreeing on the first n symbols.  Both vanish for n >= m.
struct ModulusData {
    std::vector<double> eps;  // indices 0..m
    std::vector<double> rho;  // indices 0..m
};

// Locally constant potential of depth m on an SFT: a value per admissible
// m-word.  Immutable after construction.
class Potential {
public:
    // table keyed by word string (e.g. "01"); must cover exactly the
    // admissible m-words of the paired SFT
    static Potential from_table(const Sft& sft, int depth,
                                const std::map<std::string, double>& table);

    // depth-1 indicator of the first symbol equal to `symbol`
    static Potential indicator(const Sft& sft, int symbol);

    // depth-1 potential phi(x) = coeffs[x_0]
    static Potential first_symbol(const Sft& sft, std::vector<double> coeffs);

    const Sft& sft() const { return sft_; }
    int depth() const { return depth_; }
    double sup_norm() const { return sup_norm_; }

    // value on the cylinder of the first `depth` symbols of `word`
    double value(std::span<const int> word) const;

    // phi(sigma^k word); requires k + depth <= |word|
    double evaluate_on_orbit(std::span<const int> word, std::size_t k) const;

    // average of phi over the fully-inside positions 0..|word|-depth
    double word_average(std::span<const int> word) const;

    // depth-n discretization: value on an n-cylinder = min over admissible
    // extensions to depth m; returns *this unchanged for n >= depth
    Potential discretize(int n) const;

    ModulusData modulus() const;

private:
    Potential(Sft sft, int depth, std::vector<double> values);

    std::size_t encode(std::span<const int> word) const;

    Sft sft_;
    int depth_;
    std::vector<double> values_;  // dense base-K table; NaN on forbidden words
    double sup_norm_;
};

}  // namespace wba
