#pragma once

// Brute-force reference implementations of the evaluation metrics. They
// enumerate indicator vectors and sample pairs instead of building
// confusion matrices, so they share no code with the library.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>
#include <set>
#include <vector>

namespace reflect::oracle {

struct Sample {
    std::set<int> gold;
    std::set<int> predicted;
};

inline std::vector<int> indicator(const std::set<int>& s, int scheme) {
    std::vector<int> v(static_cast<std::size_t>(scheme), 0);
    for (int x : s) v[static_cast<std::size_t>(x)] = 1;
    return v;
}

inline double f1_from_pr(double tp, double fp, double fn) {
    const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    return precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

/// Macro over classes seen in gold or predictions, micro over all
/// (sample, class) cells.
inline std::pair<double, double> f1_multilabel(const std::vector<Sample>& samples, int scheme) {
    double macro_sum = 0.0;
    int classes = 0;
    double TP = 0, FP = 0, FN = 0;
    for (int c = 0; c < scheme; ++c) {
        double tp = 0, fp = 0, fn = 0;
        bool seen = false;
        for (const auto& s : samples) {
            const int g = indicator(s.gold, scheme)[static_cast<std::size_t>(c)];
            const int p = indicator(s.predicted, scheme)[static_cast<std::size_t>(c)];
            seen = seen || g || p;
            tp += g && p;
            fp += !g && p;
            fn += g && !p;
        }
        TP += tp, FP += fp, FN += fn;
        if (!seen) continue;
        ++classes;
        macro_sum += f1_from_pr(tp, fp, fn);
    }
    return {classes ? macro_sum / classes : 0.0, f1_from_pr(TP, FP, FN)};
}

inline std::pair<double, double> f1_single(const std::vector<int>& gold, const std::vector<int>& pred, int scheme) {
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < gold.size(); ++i) samples.push_back({{gold[i]}, {pred[i]}});
    return f1_multilabel(samples, scheme);
}

inline double hamming_loss(const std::vector<Sample>& samples, int scheme) {
    double total = 0.0;
    for (const auto& s : samples) {
        const auto g = indicator(s.gold, scheme);
        const auto p = indicator(s.predicted, scheme);
        int wrong = 0;
        for (int c = 0; c < scheme; ++c) wrong += g[static_cast<std::size_t>(c)] != p[static_cast<std::size_t>(c)];
        total += static_cast<double>(wrong) / scheme;
    }
    return total / static_cast<double>(samples.size());
}

/// Per group, min(wrong predictions in group, missed gold in group)
/// substitutions are possible; each removes two mismatches.
inline double lenient_hamming_loss(const std::vector<Sample>& samples, int scheme,
                                   const std::vector<std::set<int>>& groups) {
    double total = 0.0;
    for (const auto& s : samples) {
        const auto g = indicator(s.gold, scheme);
        const auto p = indicator(s.predicted, scheme);
        int mismatches = 0;
        for (int c = 0; c < scheme; ++c) mismatches += g[static_cast<std::size_t>(c)] != p[static_cast<std::size_t>(c)];
        int saved = 0;
        for (const auto& group : groups) {
            int wrong = 0, missed = 0;
            for (int c : group) {
                wrong += p[static_cast<std::size_t>(c)] && !g[static_cast<std::size_t>(c)];
                missed += g[static_cast<std::size_t>(c)] && !p[static_cast<std::size_t>(c)];
            }
            saved += std::min(wrong, missed);
        }
        total += static_cast<double>(mismatches - 2 * saved) / scheme;
    }
    return total / static_cast<double>(samples.size());
}

inline double one_correct_label(const std::vector<Sample>& samples) {
    int hits = 0;
    for (const auto& s : samples) {
        std::vector<int> common;
        std::set_intersection(s.gold.begin(), s.gold.end(), s.predicted.begin(), s.predicted.end(),
                              std::back_inserter(common));
        hits += !common.empty();
    }
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

/// Chance agreement as the share of all N² cross pairs that agree.
inline double cohen_kappa(const std::vector<int>& a, const std::vector<int>& b) {
    const double n = static_cast<double>(a.size());
    double po = 0, pe = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        po += a[i] == b[i];
        for (std::size_t j = 0; j < b.size(); ++j) pe += a[i] == b[j];
    }
    po /= n;
    pe /= n * n;
    if (pe == 1.0) return 1.0;
    return (po - pe) / (1 - pe);
}

/// Expected weighted disagreement as the mean weight over all N² cross
/// pairs, observed as the mean over aligned pairs.
inline double qwk(const std::vector<int>& a, const std::vector<int>& b, int k) {
    auto w = [k](int x, int y) { return std::pow(x - y, 2) / std::pow(k - 1, 2); };
    const double n = static_cast<double>(a.size());
    double observed = 0, expected = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        observed += w(a[i], b[i]);
        for (std::size_t j = 0; j < b.size(); ++j) expected += w(a[i], b[j]);
    }
    return 1.0 - (observed / n) / (expected / (n * n));
}

// ------------------------------------------------------------ generators

inline std::set<int> random_label_set(std::mt19937_64& rng, int scheme, int max_size) {
    std::uniform_int_distribution<int> size(1, std::min(max_size, scheme));
    std::uniform_int_distribution<int> label(0, scheme - 1);
    std::set<int> out;
    const int n = size(rng);
    while (static_cast<int>(out.size()) < n) out.insert(label(rng));
    return out;
}

inline std::vector<Sample> random_samples(std::mt19937_64& rng, int scheme, int count) {
    std::vector<Sample> out;
    for (int i = 0; i < count; ++i) out.push_back({random_label_set(rng, scheme, 3), random_label_set(rng, scheme, 3)});
    return out;
}

inline std::vector<int> random_ordinals(std::mt19937_64& rng, int k, int count) {
    std::uniform_int_distribution<int> v(1, k);
    std::vector<int> out;
    for (int i = 0; i < count; ++i) out.push_back(v(rng));
    return out;
}

}  // namespace reflect::oracle
