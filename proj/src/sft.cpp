#include "wba/sft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace wba {

namespace {

using Mat = std::vector<std::uint64_t>;  // K x K counts, saturating

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > kSat - b ? kSat : a + b;
}
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > kSat / b ? kSat : a * b;
}

Mat mat_mul(const Mat& a, const Mat& b, int K) {
    Mat c(static_cast<std::size_t>(K) * K, 0);
    for (int i = 0; i < K; ++i)
        for (int k = 0; k < K; ++k) {
            std::uint64_t aik = a[static_cast<std::size_t>(i) * K + k];
            if (!aik) continue;
            for (int j = 0; j < K; ++j)
                c[static_cast<std::size_t>(i) * K + j] =
                    sat_add(c[static_cast<std::size_t>(i) * K + j],
                            sat_mul(aik, b[static_cast<std::size_t>(k) * K + j]));
        }
    return c;
}

bool strictly_positive(const Mat& a) {
    return std::all_of(a.begin(), a.end(), [](std::uint64_t x) { return x > 0; });
}

// power iteration for the dominant eigenpair of a primitive nonnegative
// matrix given as row-major doubles; returns the Rayleigh-quotient estimate
double power_iterate(const std::vector<double>& m, int K, std::vector<double>& vec,
                     bool transpose, double tol = 1e-14, int max_iter = 20000) {
    vec.assign(K, 1.0);
    std::vector<double> next(K);
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        for (int i = 0; i < K; ++i) {
            double s = 0.0;
            for (int j = 0; j < K; ++j)
                s += (transpose ? m[static_cast<std::size_t>(j) * K + i]
                                : m[static_cast<std::size_t>(i) * K + j]) * vec[j];
            next[i] = s;
        }
        double norm = 0.0;
        for (double x : next) norm += x;
        for (int i = 0; i < K; ++i) next[i] /= norm;
        double resid = 0.0;
        for (int i = 0; i < K; ++i) resid = std::max(resid, std::abs(next[i] - vec[i]));
        vec.swap(next);
        lambda = norm;
        if (resid < tol && it > 4) break;
    }
    return lambda;
}

}  // namespace

Sft Sft::from_adjacency(const std::vector<std::vector<int>>& adjacency) {
    int K = static_cast<int>(adjacency.size());
    if (K < 2) throw ConfigError("adjacency matrix must be at least 2x2");
    Sft s;
    s.K_ = K;
    s.adj_.assign(static_cast<std::size_t>(K) * K, 0);
    for (int i = 0; i < K; ++i) {
        if (static_cast<int>(adjacency[i].size()) != K)
            throw ConfigError("adjacency matrix must be square");
        for (int j = 0; j < K; ++j) {
            if (adjacency[i][j] != 0 && adjacency[i][j] != 1)
                throw ConfigError("adjacency entries must be 0 or 1");
            s.adj_[static_cast<std::size_t>(i) * K + j] = static_cast<std::uint8_t>(adjacency[i][j]);
        }
    }

    // aperiodicity + irreducibility: some power up to the Wielandt bound
    // (K-1)^2 + 1 must be strictly positive
    int wielandt = (K - 1) * (K - 1) + 1;
    Mat p(s.adj_.begin(), s.adj_.end());
    int r = 0;
    for (int k = 1; k <= wielandt; ++k) {
        if (strictly_positive(p)) { r = k; break; }
        p = mat_mul(p, Mat(s.adj_.begin(), s.adj_.end()), K);
    }
    if (r == 0) {
        std::string cert = "zero entries surviving at power " + std::to_string(wielandt) + ":";
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j)
                if (p[static_cast<std::size_t>(i) * K + j] == 0)
                    cert += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
        throw Error("matrix is not aperiodic and irreducible; " + cert);
    }
    s.r_ = r;

    std::vector<double> dm(s.adj_.begin(), s.adj_.end());
    s.lambda_ = power_iterate(dm, K, s.v_, false);
    power_iterate(dm, K, s.u_, true);
    // normalize sum u_i v_i = 1
    double dot = 0.0;
    for (int i = 0; i < K; ++i) dot += s.u_[i] * s.v_[i];
    for (int i = 0; i < K; ++i) s.u_[i] /= dot;

    // Parry chain: P[i][j] = A[i][j] v_j / (lambda v_i), pi_i = u_i v_i
    s.parry_row_cum_.assign(static_cast<std::size_t>(K) * K, 0.0);
    s.parry_pi_cum_.assign(K, 0.0);
    double cum = 0.0;
    for (int i = 0; i < K; ++i) {
        cum += s.u_[i] * s.v_[i];
        s.parry_pi_cum_[i] = cum;
        double rowcum = 0.0;
        for (int j = 0; j < K; ++j) {
            rowcum += s.parry_transition(i, j);
            s.parry_row_cum_[static_cast<std::size_t>(i) * K + j] = rowcum;
        }
    }
    return s;
}

Sft Sft::full_shift(int K) {
    std::vector<std::vector<int>> a(K, std::vector<int>(K, 1));
    return from_adjacency(a);
}

Sft Sft::golden_mean() {
    return from_adjacency({{1, 1}, {1, 0}});
}

bool Sft::admissible(std::span<const int> word) const {
    for (int sym : word)
        if (sym < 0 || sym >= K_) return false;
    for (std::size_t k = 0; k + 1 < word.size(); ++k)
        if (!edge(word[k], word[k + 1])) return false;
    return true;
}

void Sft::validate(std::span<const int> word) const {
    if (!admissible(word)) throw Error("word is not admissible");
}

std::uint64_t Sft::count_words(int n) const {
    if (n < 1) throw PreconditionError("word length must be >= 1");
    if (n == 1) return static_cast<std::uint64_t>(K_);
    Mat p(static_cast<std::size_t>(K_) * K_, 0);
    for (int i = 0; i < K_; ++i) p[static_cast<std::size_t>(i) * K_ + i] = 1;
    Mat base(adj_.begin(), adj_.end());
    int e = n - 1;
    while (e > 0) {
        if (e & 1) p = mat_mul(p, base, K_);
        base = mat_mul(base, base, K_);
        e >>= 1;
    }
    std::uint64_t total = 0;
    for (std::uint64_t x : p) total = sat_add(total, x);
    return total;
}

std::uint64_t Sft::default_enum_cap() {
    if (const char* env = std::getenv("SFT_ENUM_CAP")) {
        char* end = nullptr;
        std::uint64_t v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 1ull << 26;
}

std::vector<Word> Sft::enumerate_words(int n, std::uint64_t cap) const {
    std::vector<Word> out;
    out.reserve(count_words(n));
    for_each_word(n, [&](const Word& w) { out.push_back(w); }, cap);
    return out;
}

void Sft::for_each_word(int n, const std::function<void(const Word&)>& fn,
                        std::uint64_t cap) const {
    std::uint64_t total = count_words(n);
    if (total > cap)
        throw CapExceededError("admissible word count " + std::to_string(total) +
                               " exceeds enumeration cap " + std::to_string(cap));
    Word w(n);
    // iterative lexicographic DFS
    int depth = 0;
    w[0] = -1;
    while (depth >= 0) {
        int next = w[depth] + 1;
        bool found = false;
        for (int sym = next; sym < K_; ++sym) {
            if (depth == 0 || edge(w[depth - 1], sym)) {
                w[depth] = sym;
                found = true;
                break;
            }
        }
        if (!found) {
            --depth;
            continue;
        }
        if (depth == n - 1) {
            fn(w);
            continue;  // advance at same depth
        }
        ++depth;
        w[depth] = -1;
    }
}

std::uint64_t Sft::connector_count(int a, int b, int len) const {
    // paths a -> x_1 -> ... -> x_len -> b
    std::vector<std::uint64_t> cur(K_, 0);
    for (int j = 0; j < K_; ++j) cur[j] = edge(a, j) ? 1 : 0;
    for (int step = 1; step <= len; ++step) {
        std::vector<std::uint64_t> next(K_, 0);
        for (int i = 0; i < K_; ++i) {
            if (!cur[i]) continue;
            for (int j = 0; j < K_; ++j)
                if (edge(i, j)) next[j] = sat_add(next[j], cur[i]);
        }
        cur.swap(next);
    }
    return len == 0 ? (edge(a, b) ? 1 : 0) : cur[b];
}

namespace {
// paths of length `steps` edges from x to b
std::uint64_t path_count(const Sft& s, int x, int b, int steps) {
    std::vector<std::uint64_t> cur(s.alphabet_size(), 0);
    cur[x] = 1;
    for (int t = 0; t < steps; ++t) {
        std::vector<std::uint64_t> next(s.alphabet_size(), 0);
        for (int i = 0; i < s.alphabet_size(); ++i) {
            if (!cur[i]) continue;
            for (int j = 0; j < s.alphabet_size(); ++j)
                if (s.edge(i, j)) next[j] = sat_add(next[j], cur[i]);
        }
        cur.swap(next);
    }
    return cur[b];
}
}  // namespace

Word Sft::connector(int a, int b, int len) const {
    if (len < r_ - 1)
        throw PreconditionError("connector length below r-1 may not exist");
    if (len == 0) {
        if (!edge(a, b)) throw Error("no length-0 connector");
        return {};
    }
    Word out;
    int prev = a;
    for (int pos = 0; pos < len; ++pos) {
        int remaining = len - pos - 1;  // interior symbols left after this one
        bool placed = false;
        for (int sym = 0; sym < K_; ++sym) {
            if (!edge(prev, sym)) continue;
            if (path_count(*this, sym, b, remaining + 1) > 0) {
                out.push_back(sym);
                prev = sym;
                placed = true;
                break;
            }
        }
        if (!placed) throw Error("no connector exists (unexpected for primitive matrix)");
    }
    return out;
}

Word Sft::admissible_concatenation(std::span<const Word> parts) const {
    if (parts.empty()) return {};
    Word out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i].empty()) throw PreconditionError("empty part in concatenation");
        Word c = connector(out.back(), parts[i].front(), r_ - 1);
        out.insert(out.end(), c.begin(), c.end());
        out.insert(out.end(), parts[i].begin(), parts[i].end());
    }
    validate(out);
    return out;
}

double Sft::parry_transition(int i, int j) const {
    return edge(i, j) ? v_[j] / (lambda_ * v_[i]) : 0.0;
}

double Sft::parry_stationary(int i) const {
    return u_[i] * v_[i];
}

double Sft::parry_entropy() const {
    double h = 0.0;
    for (int i = 0; i < K_; ++i)
        for (int j = 0; j < K_; ++j) {
            double p = parry_transition(i, j);
            if (p > 0.0) h -= parry_stationary(i) * p * std::log(p);
        }
    return h;
}

Word Sft::parry_sample(int n, Rng& rng) const {
    Word w;
    w.reserve(n);
    double x = rng.next_unit();
    int cur = 0;
    while (cur < K_ - 1 && x >= parry_pi_cum_[cur]) ++cur;
    w.push_back(cur);
    for (int k = 1; k < n; ++k) {
        x = rng.next_unit();
        int nxt = -1;
        for (int j = 0; j < K_; ++j) {
            if (!edge(cur, j)) continue;
            nxt = j;
            if (x < parry_row_cum_[static_cast<std::size_t>(cur) * K_ + j]) break;
        }
        w.push_back(nxt);
        cur = nxt;
    }
    return w;
}

double Sft::parry_log_mass(std::span<const int> word) const {
    if (word.empty()) return 0.0;
    validate(word);
    double lm = std::log(parry_stationary(word[0]));
    for (std::size_t k = 0; k + 1 < word.size(); ++k)
        lm += std::log(parry_transition(word[k], word[k + 1]));
    return lm;
}

std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (int sym : w) {
        if (sym < 0 || sym > 35) throw Error("symbol out of printable range");
        s.push_back(sym < 10 ? static_cast<char>('0' + sym) : static_cast<char>('a' + sym - 10));
    }
    return s;
}

Word word_from_string(const std::string& s, int alphabet_size) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        int sym;
        if (c >= '0' && c <= '9') sym = c - '0';
        else if (c >= 'a' && c <= 'z') sym = c - 'a' + 10;
        else throw ConfigError("bad symbol character in word string");
        if (sym >= alphabet_size) throw ConfigError("symbol outside alphabet");
        w.push_back(sym);
    }
    return w;
}

}  // namespace wba
