#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "topicsum/common.hpp"

namespace topicsum {

struct RougeScore {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

inline RougeScore make_score(double p, double r) {
    RougeScore s;
    s.precision = p;
    s.recall = r;
    s.f1 = (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
    return s;
}

// ---------------------------------------------------------------------------
// Porter stemmer (1980), mirroring the reference toolkit's "-m" option.
// ---------------------------------------------------------------------------

namespace porter {

class Stemmer {
public:
    std::string stem(const std::string& word) {
        b_ = word;
        k_ = static_cast<int>(b_.size()) - 1;
        if (k_ <= 1) return b_;
        step1ab();
        step1c();
        step2();
        step3();
        step4();
        step5();
        return b_.substr(0, static_cast<std::size_t>(k_ + 1));
    }

private:
    std::string b_;
    int k_ = 0;  // index of last char of current stem
    int j_ = 0;  // suffix split point

    bool cons(int i) const {
        switch (b_[static_cast<std::size_t>(i)]) {
            case 'a': case 'e': case 'i': case 'o': case 'u': return false;
            case 'y': return i == 0 ? true : !cons(i - 1);
            default: return true;
        }
    }

    // Number of consonant sequences in [0, j].
    int m() const {
        int n = 0, i = 0;
        while (true) {
            if (i > j_) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > j_) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > j_) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j_; ++i)
            if (!cons(i)) return true;
        return false;
    }

    bool double_cons(int j) const {
        if (j < 1) return false;
        if (b_[static_cast<std::size_t>(j)] != b_[static_cast<std::size_t>(j - 1)]) return false;
        return cons(j);
    }

    // consonant-vowel-consonant ending where the last consonant is not w/x/y.
    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        const char ch = b_[static_cast<std::size_t>(i)];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(const char* s) {
        const int len = static_cast<int>(std::char_traits<char>::length(s));
        if (len > k_ + 1) return false;
        if (b_.compare(static_cast<std::size_t>(k_ + 1 - len), static_cast<std::size_t>(len), s) != 0)
            return false;
        j_ = k_ - len;
        return true;
    }

    void set_to(const char* s) {
        const int len = static_cast<int>(std::char_traits<char>::length(s));
        b_.replace(static_cast<std::size_t>(j_ + 1), static_cast<std::size_t>(k_ - j_), s);
        k_ = j_ + len;
    }

    void replace_if_measure(const char* s) {
        if (m() > 0) set_to(s);
    }

    void step1ab() {
        if (b_[static_cast<std::size_t>(k_)] == 's') {
            if (ends("sses")) k_ -= 2;
            else if (ends("ies")) set_to("i");
            else if (b_[static_cast<std::size_t>(k_ - 1)] != 's') --k_;
        }
        if (ends("eed")) {
            if (m() > 0) --k_;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k_ = j_;
            if (ends("at")) set_to("ate");
            else if (ends("bl")) set_to("ble");
            else if (ends("iz")) set_to("ize");
            else if (double_cons(k_)) {
                --k_;
                const char ch = b_[static_cast<std::size_t>(k_)];
                if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
            } else if (m() == 1 && cvc(k_)) {
                j_ = k_;
                set_to("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
    }

    void step2() {
        switch (b_[static_cast<std::size_t>(k_ - 1)]) {
            case 'a':
                if (ends("ational")) { replace_if_measure("ate"); break; }
                if (ends("tional")) { replace_if_measure("tion"); break; }
                break;
            case 'c':
                if (ends("enci")) { replace_if_measure("ence"); break; }
                if (ends("anci")) { replace_if_measure("ance"); break; }
                break;
            case 'e':
                if (ends("izer")) { replace_if_measure("ize"); break; }
                break;
            case 'l':
                if (ends("bli")) { replace_if_measure("ble"); break; }
                if (ends("alli")) { replace_if_measure("al"); break; }
                if (ends("entli")) { replace_if_measure("ent"); break; }
                if (ends("eli")) { replace_if_measure("e"); break; }
                if (ends("ousli")) { replace_if_measure("ous"); break; }
                break;
            case 'o':
                if (ends("ization")) { replace_if_measure("ize"); break; }
                if (ends("ation")) { replace_if_measure("ate"); break; }
                if (ends("ator")) { replace_if_measure("ate"); break; }
                break;
            case 's':
                if (ends("alism")) { replace_if_measure("al"); break; }
                if (ends("iveness")) { replace_if_measure("ive"); break; }
                if (ends("fulness")) { replace_if_measure("ful"); break; }
                if (ends("ousness")) { replace_if_measure("ous"); break; }
                break;
            case 't':
                if (ends("aliti")) { replace_if_measure("al"); break; }
                if (ends("iviti")) { replace_if_measure("ive"); break; }
                if (ends("biliti")) { replace_if_measure("ble"); break; }
                break;
            case 'g':
                if (ends("logi")) { replace_if_measure("log"); break; }
                break;
            default: break;
        }
    }

    void step3() {
        switch (b_[static_cast<std::size_t>(k_)]) {
            case 'e':
                if (ends("icate")) { replace_if_measure("ic"); break; }
                if (ends("ative")) { replace_if_measure(""); break; }
                if (ends("alize")) { replace_if_measure("al"); break; }
                break;
            case 'i':
                if (ends("iciti")) { replace_if_measure("ic"); break; }
                break;
            case 'l':
                if (ends("ical")) { replace_if_measure("ic"); break; }
                if (ends("ful")) { replace_if_measure(""); break; }
                break;
            case 's':
                if (ends("ness")) { replace_if_measure(""); break; }
                break;
            default: break;
        }
    }

    void step4() {
        switch (b_[static_cast<std::size_t>(k_ - 1)]) {
            case 'a': if (ends("al")) break; return;
            case 'c': if (ends("ance") || ends("ence")) break; return;
            case 'e': if (ends("er")) break; return;
            case 'i': if (ends("ic")) break; return;
            case 'l': if (ends("able") || ends("ible")) break; return;
            case 'n':
                if (ends("ant") || ends("ement") || ends("ment") || ends("ent")) break;
                return;
            case 'o':
                if (ends("ion") && j_ >= 0 &&
                    (b_[static_cast<std::size_t>(j_)] == 's' || b_[static_cast<std::size_t>(j_)] == 't'))
                    break;
                if (ends("ou")) break;
                return;
            case 's': if (ends("ism")) break; return;
            case 't': if (ends("ate") || ends("iti")) break; return;
            case 'u': if (ends("ous")) break; return;
            case 'v': if (ends("ive")) break; return;
            case 'z': if (ends("ize")) break; return;
            default: return;
        }
        if (m() > 1) k_ = j_;
    }

    void step5() {
        j_ = k_;
        if (b_[static_cast<std::size_t>(k_)] == 'e') {
            const int a = m();
            if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
        }
        if (b_[static_cast<std::size_t>(k_)] == 'l' && double_cons(k_) && m() > 1) --k_;
    }
};

}  // namespace porter

// Stems all-letter tokens longer than three characters, as the reference
// evaluation toolkit does; everything else passes through untouched.
inline std::string stem_token(const std::string& token) {
    if (token.size() <= 3) return token;
    for (char c : token)
        if (c < 'a' || c > 'z') return token;
    porter::Stemmer stemmer;
    return stemmer.stem(token);
}

inline std::vector<std::string> stem_tokens(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(stem_token(t));
    return out;
}

// ---------------------------------------------------------------------------
// ROUGE-N / ROUGE-L / ROUGE-W
// ---------------------------------------------------------------------------

namespace detail {

inline std::unordered_map<std::string, std::size_t> ngram_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
    std::unordered_map<std::string, std::size_t> counts;
    if (n == 0 || tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (std::size_t j = 1; j < n; ++j) {
            key += '\x1e';
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

inline std::size_t lcs_length(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
    const std::size_t m = a.size(), n = b.size();
    if (m == 0 || n == 0) return 0;
    std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            if (a[i - 1] == b[j - 1]) cur[j] = prev[j - 1] + 1;
            else cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

}  // namespace detail

// Clipped n-gram overlap; multi-reference scores take the best-F1 reference.
inline RougeScore rouge_n(const std::vector<std::string>& candidate,
                          const std::vector<std::vector<std::string>>& references,
                          std::size_t n, bool stem = false) {
    if (n < 1) throw ValidationError("rouge_n requires n >= 1");
    if (references.empty()) throw ValidationError("rouge_n requires at least one reference");
    const auto cand = stem ? stem_tokens(candidate) : candidate;
    const auto cand_counts = detail::ngram_counts(cand, n);
    std::size_t cand_total = cand.size() >= n ? cand.size() - n + 1 : 0;
    RougeScore best;
    for (const auto& reference : references) {
        const auto ref = stem ? stem_tokens(reference) : reference;
        const auto ref_counts = detail::ngram_counts(ref, n);
        std::size_t ref_total = ref.size() >= n ? ref.size() - n + 1 : 0;
        std::size_t overlap = 0;
        for (const auto& [gram, count] : cand_counts) {
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) overlap += std::min(count, it->second);
        }
        const double p = cand_total ? static_cast<double>(overlap) / static_cast<double>(cand_total) : 0;
        const double r = ref_total ? static_cast<double>(overlap) / static_cast<double>(ref_total) : 0;
        RougeScore s = make_score(p, r);
        if (s.f1 >= best.f1) {
            if (s.f1 > best.f1 || s.recall > best.recall) best = s;
        }
    }
    return best;
}

inline RougeScore rouge_l(const std::vector<std::string>& candidate,
                          const std::vector<std::vector<std::string>>& references,
                          bool stem = false) {
    if (references.empty()) throw ValidationError("rouge_l requires at least one reference");
    const auto cand = stem ? stem_tokens(candidate) : candidate;
    RougeScore best;
    for (const auto& reference : references) {
        const auto ref = stem ? stem_tokens(reference) : reference;
        const std::size_t lcs = detail::lcs_length(cand, ref);
        const double p = cand.empty() ? 0 : static_cast<double>(lcs) / static_cast<double>(cand.size());
        const double r = ref.empty() ? 0 : static_cast<double>(lcs) / static_cast<double>(ref.size());
        RougeScore s = make_score(p, r);
        if (s.f1 >= best.f1) {
            if (s.f1 > best.f1 || s.recall > best.recall) best = s;
        }
    }
    return best;
}

// Weighted-LCS variant favoring consecutive matches; weight 1.2 matches the
// reference toolkit's "-w 1.2" setting.
inline RougeScore rouge_w(const std::vector<std::string>& candidate,
                          const std::vector<std::vector<std::string>>& references,
                          double weight = 1.2, bool stem = false) {
    if (references.empty()) throw ValidationError("rouge_w requires at least one reference");
    if (weight <= 0) throw ValidationError("rouge_w weight must be positive");
    const auto cand = stem ? stem_tokens(candidate) : candidate;
    auto f = [&](double k) { return std::pow(k, weight); };
    auto f_inv = [&](double x) { return std::pow(x, 1.0 / weight); };
    RougeScore best;
    for (const auto& reference : references) {
        const auto ref = stem ? stem_tokens(reference) : reference;
        const std::size_t m = cand.size(), n = ref.size();
        double wlcs = 0;
        if (m && n) {
            std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0));
            std::vector<std::vector<double>> w(m + 1, std::vector<double>(n + 1, 0));
            for (std::size_t i = 1; i <= m; ++i) {
                for (std::size_t j = 1; j <= n; ++j) {
                    if (cand[i - 1] == ref[j - 1]) {
                        const double k = w[i - 1][j - 1];
                        c[i][j] = c[i - 1][j - 1] + f(k + 1) - f(k);
                        w[i][j] = k + 1;
                    } else {
                        c[i][j] = std::max(c[i - 1][j], c[i][j - 1]);
                        w[i][j] = 0;
                    }
                }
            }
            wlcs = c[m][n];
        }
        const double p = m ? f_inv(wlcs / f(static_cast<double>(m))) : 0;
        const double r = n ? f_inv(wlcs / f(static_cast<double>(n))) : 0;
        RougeScore s = make_score(p, r);
        if (s.f1 >= best.f1) {
            if (s.f1 > best.f1 || s.recall > best.recall) best = s;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Bootstrap significance
// ---------------------------------------------------------------------------

struct SignificanceResult {
    double mean_difference = 0;
    double lower = 0;
    double upper = 0;
    std::size_t resamples = 0;
    bool significant = false;  // at 95%: 0 outside [lower, upper]
};

// Percentile bootstrap CI on the mean paired difference a_i - b_i.
inline SignificanceResult bootstrap_significance(const std::vector<double>& system_a,
                                                 const std::vector<double>& system_b,
                                                 std::size_t resamples = 1000,
                                                 std::uint64_t seed = 12345) {
    if (system_a.size() != system_b.size())
        throw ValidationError("paired score sequences must have equal length");
    if (system_a.size() < 2)
        throw ValidationError("bootstrap needs at least 2 paired scores");
    if (resamples < 1) throw ValidationError("resamples must be >= 1");
    const std::size_t n = system_a.size();
    std::vector<double> diff(n);
    double mean = 0;
    for (std::size_t i = 0; i < n; ++i) {
        diff[i] = system_a[i] - system_b[i];
        mean += diff[i];
    }
    mean /= static_cast<double>(n);

    std::mt19937_64 rng(seed);
    std::vector<double> means(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            s += diff[rng() % n];
        means[b] = s / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(resamples - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, resamples - 1);
        const double frac = pos - static_cast<double>(lo);
        return means[lo] * (1 - frac) + means[hi] * frac;
    };
    SignificanceResult result;
    result.mean_difference = mean;
    result.lower = quantile(0.025);
    result.upper = quantile(0.975);
    result.resamples = resamples;
    result.significant = !(result.lower <= 0.0 && 0.0 <= result.upper);
    return result;
}

}  // namespace topicsum
