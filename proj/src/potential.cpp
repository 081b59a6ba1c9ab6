#include "wba/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wba {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Potential::Potential(Sft sft, int depth, std::vector<double> values)
    : sft_(std::move(sft)), depth_(depth), values_(std::move(values)) {
    sup_norm_ = 0.0;
    for (double v : values_)
        if (!std::isnan(v)) sup_norm_ = std::max(sup_norm_, std::abs(v));
}

std::size_t Potential::encode(std::span<const int> word) const {
    std::size_t idx = 0;
    for (int k = 0; k < depth_; ++k)
        idx = idx * static_cast<std::size_t>(sft_.alphabet_size()) + static_cast<std::size_t>(word[k]);
    return idx;
}

Potential Potential::from_table(const Sft& sft, int depth,
                                const std::map<std::string, double>& table) {
    if (depth < 1) throw ConfigError("potential depth must be >= 1");
    std::vector<Word> words = sft.enumerate_words(depth);
    if (table.size() != words.size())
        throw ConfigError("potential table must have exactly one entry per admissible word ("
                          + std::to_string(words.size()) + " expected, got "
                          + std::to_string(table.size()) + ")");
    std::size_t size = 1;
    for (int k = 0; k < depth; ++k) size *= static_cast<std::size_t>(sft.alphabet_size());
    std::vector<double> values(size, kNaN);
    Potential p(sft, depth, std::move(values));
    for (const Word& w : words) {
        auto it = table.find(word_to_string(w));
        if (it == table.end())
            throw ConfigError("potential table missing admissible word " + word_to_string(w));
        p.values_[p.encode(w)] = it->second;
        p.sup_norm_ = std::max(p.sup_norm_, std::abs(it->second));
    }
    return p;
}

Potential Potential::indicator(const Sft& sft, int symbol) {
    if (symbol < 0 || symbol >= sft.alphabet_size())
        throw ConfigError("indicator symbol outside alphabet");
    std::vector<double> coeffs(sft.alphabet_size(), 0.0);
    coeffs[symbol] = 1.0;
    return first_symbol(sft, std::move(coeffs));
}

Potential Potential::first_symbol(const Sft& sft, std::vector<double> coeffs) {
    if (static_cast<int>(coeffs.size()) != sft.alphabet_size())
        throw ConfigError("coefficient count must equal alphabet size");
    return Potential(sft, 1, std::move(coeffs));
}

double Potential::value(std::span<const int> word) const {
    if (static_cast<int>(word.size()) < depth_)
        throw PreconditionError("word shorter than potential depth");
    double v = values_[encode(word)];
    if (std::isnan(v)) throw PreconditionError("potential evaluated on forbidden word");
    return v;
}

double Potential::evaluate_on_orbit(std::span<const int> word, std::size_t k) const {
    if (k + static_cast<std::size_t>(depth_) > word.size())
        throw PreconditionError("orbit position out of range");
    return value(word.subspan(k));
}

double Potential::word_average(std::span<const int> word) const {
    if (static_cast<int>(word.size()) < depth_)
        throw PreconditionError("word shorter than potential depth");
    std::size_t positions = word.size() - static_cast<std::size_t>(depth_) + 1;
    KahanSum s;
    for (std::size_t k = 0; k < positions; ++k) s.add(value(word.subspan(k)));
    return s.sum / static_cast<double>(positions);
}

Potential Potential::discretize(int n) const {
    if (n < 1) throw PreconditionError("discretization depth must be >= 1");
    if (n >= depth_) return *this;
    std::size_t size = 1;
    for (int k = 0; k < n; ++k) size *= static_cast<std::size_t>(sft_.alphabet_size());
    std::vector<double> values(size, kNaN);
    Potential out(sft_, n, std::move(values));
    for (const Word& w : sft_.enumerate_words(depth_)) {
        std::size_t idx = out.encode(w);
        double v = value(w);
        if (std::isnan(out.values_[idx]) || v < out.values_[idx]) out.values_[idx] = v;
    }
    for (double v : out.values_)
        if (!std::isnan(v)) out.sup_norm_ = std::max(out.sup_norm_, std::abs(v));
    return out;
}

ModulusData Potential::modulus() const {
    ModulusData md;
    md.eps.assign(static_cast<std::size_t>(depth_) + 1, 0.0);
    md.rho.assign(static_cast<std::size_t>(depth_) + 1, 0.0);
    std::vector<Word> words = sft_.enumerate_words(depth_);
    for (int n = 0; n < depth_; ++n) {
        // group admissible m-words by their length-n prefix; oscillation
        // within a group drives both eps_n and rho_n
        std::map<Word, std::pair<double, double>> groups;  // prefix -> (min, max)
        for (const Word& w : words) {
            Word prefix(w.begin(), w.begin() + n);
            double v = value(w);
            auto [it, fresh] = groups.emplace(std::move(prefix), std::make_pair(v, v));
            if (!fresh) {
                it->second.first = std::min(it->second.first, v);
                it->second.second = std::max(it->second.second, v);
            }
        }
        double osc = 0.0;
        for (const auto& [prefix, mm] : groups) osc = std::max(osc, mm.second - mm.first);
        md.eps[n] = osc;
        md.rho[n] = osc;
    }
    return md;
}

}  // namespace wba
