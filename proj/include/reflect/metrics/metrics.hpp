#pragma once

// Agreement and classification metrics. Everything here is a pure function
// template over the label type; labels only need operator<.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "reflect/core/error.hpp"

namespace reflect::metrics {

template <class L>
struct MultiLabelSample {
    std::set<L> gold;
    std::set<L> predicted;
};

/// Disjoint sets of labels considered interchangeable by the lenient score.
template <class L>
struct SimilarityGroups {
    std::vector<std::set<L>> groups;

    /// Throws OverlappingGroups when a label sits in two groups.
    void check() const {
        std::set<L> seen;
        for (const auto& g : groups) {
            for (const auto& l : g) {
                if (!seen.insert(l).second) throw Error(Errc::overlapping_groups, "label appears in two similarity groups");
            }
        }
    }

    const std::set<L>* group_of(const L& l) const {
        for (const auto& g : groups) {
            if (g.contains(l)) return &g;
        }
        return nullptr;
    }
};

struct F1 {
    double macro = 0.0;
    double micro = 0.0;
};

namespace detail {

template <class A, class B>
void require_same_length(const A& a, const B& b) {
    if (a.size() != b.size()) {
        throw Error(Errc::length_mismatch,
                    "lists differ in length: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
}

template <class C>
void require_non_empty(const C& c) {
    if (c.empty()) throw Error(Errc::empty_input, "metric needs at least one sample");
}

inline double f1_of(double tp, double fp, double fn) {
    const double denom = 2.0 * tp + fp + fn;
    return denom == 0.0 ? 0.0 : 2.0 * tp / denom;
}

struct Counts {
    double tp = 0.0, fp = 0.0, fn = 0.0;
};

template <class L>
F1 f1_from_counts(const std::map<L, Counts>& per_class) {
    F1 r;
    Counts pooled;
    double sum = 0.0;
    for (const auto& [label, c] : per_class) {
        sum += f1_of(c.tp, c.fp, c.fn);
        pooled.tp += c.tp;
        pooled.fp += c.fp;
        pooled.fn += c.fn;
    }
    r.macro = per_class.empty() ? 0.0 : sum / static_cast<double>(per_class.size());
    r.micro = f1_of(pooled.tp, pooled.fp, pooled.fn);
    return r;
}

}  // namespace detail

/// Single-label F1. Macro averages over classes that occur somewhere in
/// gold or predictions; classes absent from both lists are excluded.
template <class L>
F1 f1_scores(const std::vector<L>& gold, const std::vector<L>& predicted) {
    detail::require_same_length(gold, predicted);
    detail::require_non_empty(gold);
    std::map<L, detail::Counts> per_class;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] == predicted[i]) {
            per_class[gold[i]].tp += 1.0;
        } else {
            per_class[gold[i]].fn += 1.0;
            per_class[predicted[i]].fp += 1.0;
        }
    }
    return detail::f1_from_counts(per_class);
}

/// Multi-label F1 with the same class exclusion rule.
template <class L>
F1 f1_scores(const std::vector<MultiLabelSample<L>>& samples) {
    detail::require_non_empty(samples);
    std::map<L, detail::Counts> per_class;
    for (const auto& s : samples) {
        for (const auto& g : s.gold) {
            if (s.predicted.contains(g)) {
                per_class[g].tp += 1.0;
            } else {
                per_class[g].fn += 1.0;
            }
        }
        for (const auto& p : s.predicted) {
            if (!s.gold.contains(p)) per_class[p].fp += 1.0;
        }
    }
    return detail::f1_from_counts(per_class);
}

template <class L>
std::size_t symmetric_difference_size(const std::set<L>& a, const std::set<L>& b) {
    std::size_t n = 0;
    for (const auto& x : a) n += b.contains(x) ? 0 : 1;
    for (const auto& x : b) n += a.contains(x) ? 0 : 1;
    return n;
}

/// Mean of |gold Δ predicted| / scheme_size.
template <class L>
double hamming_loss(const std::vector<MultiLabelSample<L>>& samples, std::size_t scheme_size) {
    detail::require_non_empty(samples);
    if (scheme_size == 0) throw Error(Errc::config_error, "scheme size must be positive");
    double total = 0.0;
    for (const auto& s : samples) {
        total += static_cast<double>(symmetric_difference_size(s.gold, s.predicted)) / static_cast<double>(scheme_size);
    }
    return total / static_cast<double>(samples.size());
}

template <class L>
double hamming_score(const std::vector<MultiLabelSample<L>>& samples, std::size_t scheme_size) {
    return 1.0 - hamming_loss(samples, scheme_size);
}

/// Jaccard-style alternative: mean |G ∩ P| / |G ∪ P|, 1 when both are empty.
template <class L>
double jaccard_score(const std::vector<MultiLabelSample<L>>& samples) {
    detail::require_non_empty(samples);
    double total = 0.0;
    for (const auto& s : samples) {
        std::size_t inter = 0;
        for (const auto& g : s.gold) inter += s.predicted.contains(g) ? 1 : 0;
        const std::size_t uni = s.gold.size() + s.predicted.size() - inter;
        total += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
    }
    return total / static_cast<double>(samples.size());
}

/// Replaces each wrong prediction by an unmatched gold label of the same
/// group. Exact matches consume their gold label first; substitutions go
/// in label order, each gold label used at most once.
template <class L>
std::set<L> lenient_prediction(const MultiLabelSample<L>& s, const SimilarityGroups<L>& groups) {
    std::set<L> available;
    for (const auto& g : s.gold) {
        if (!s.predicted.contains(g)) available.insert(g);
    }
    std::set<L> out;
    for (const auto& p : s.predicted) {
        if (s.gold.contains(p)) {
            out.insert(p);
            continue;
        }
        const auto* group = groups.group_of(p);
        auto it = available.end();
        if (group != nullptr) {
            it = std::find_if(available.begin(), available.end(), [&](const L& g) { return group->contains(g); });
        }
        if (it != available.end()) {
            out.insert(*it);
            available.erase(it);
        } else {
            out.insert(p);
        }
    }
    return out;
}

template <class L>
double lenient_hamming_score(const std::vector<MultiLabelSample<L>>& samples, std::size_t scheme_size,
                             const SimilarityGroups<L>& groups) {
    groups.check();
    std::vector<MultiLabelSample<L>> adjusted;
    adjusted.reserve(samples.size());
    for (const auto& s : samples) adjusted.push_back({s.gold, lenient_prediction(s, groups)});
    return hamming_score(adjusted, scheme_size);
}

/// Share of samples whose prediction contains at least one gold label.
template <class L>
double one_correct_label_accuracy(const std::vector<MultiLabelSample<L>>& samples) {
    detail::require_non_empty(samples);
    std::size_t hits = 0;
    for (const auto& s : samples) {
        hits += std::any_of(s.predicted.begin(), s.predicted.end(), [&](const L& p) { return s.gold.contains(p); }) ? 1
                                                                                                                  : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

template <class L>
double accuracy(const std::vector<L>& gold, const std::vector<L>& predicted) {
    detail::require_same_length(gold, predicted);
    detail::require_non_empty(gold);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) hits += gold[i] == predicted[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(gold.size());
}

/// Share of samples whose gold label is among the first `k` ranked
/// predictions.
template <class L>
double top_k_containment(const std::vector<L>& gold, const std::vector<std::vector<L>>& ranked, std::size_t k) {
    detail::require_same_length(gold, ranked);
    detail::require_non_empty(gold);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const auto& r = ranked[i];
        const auto end = r.begin() + static_cast<std::ptrdiff_t>(std::min(k, r.size()));
        hits += std::find(r.begin(), end, gold[i]) != end ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(gold.size());
}

/// Cohen's kappa from marginal products; 1.0 when expected agreement is 1.
template <class L>
double cohen_kappa(const std::vector<L>& a, const std::vector<L>& b) {
    detail::require_same_length(a, b);
    detail::require_non_empty(a);
    const auto n = static_cast<double>(a.size());
    std::map<L, double> ma, mb;
    double agree = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma[a[i]] += 1.0;
        mb[b[i]] += 1.0;
        if (a[i] == b[i]) agree += 1.0;
    }
    const double po = agree / n;
    double pe = 0.0;
    for (const auto& [label, count] : ma) {
        if (auto it = mb.find(label); it != mb.end()) pe += (count / n) * (it->second / n);
    }
    if (pe == 1.0) return 1.0;
    return (po - pe) / (1.0 - pe);
}

/// Quadratic weighted kappa over ordinals 1..k.
inline double quadratic_weighted_kappa(const std::vector<int>& a, const std::vector<int>& b, int k) {
    detail::require_same_length(a, b);
    detail::require_non_empty(a);
    if (k < 2) throw Error(Errc::single_category, "quadratic weighted kappa needs at least two categories");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 1 || a[i] > k || b[i] < 1 || b[i] > k) {
            throw Error(Errc::schema_error, "ordinal outside 1.." + std::to_string(k) + " at position " + std::to_string(i));
        }
    }
    const auto dim = static_cast<std::size_t>(k);
    std::vector<double> observed(dim * dim, 0.0), ra(dim, 0.0), rb(dim, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto x = static_cast<std::size_t>(a[i] - 1);
        const auto y = static_cast<std::size_t>(b[i] - 1);
        observed[x * dim + y] += 1.0;
        ra[x] += 1.0;
        rb[y] += 1.0;
    }
    const auto n = static_cast<double>(a.size());
    const double denom = static_cast<double>((k - 1) * (k - 1));
    double wo = 0.0, we = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = static_cast<double>(i) - static_cast<double>(j);
            const double w = d * d / denom;
            wo += w * observed[i * dim + j];
            we += w * ra[i] * rb[j] / n;
        }
    }
    if (we == 0.0) {
        throw Error(Errc::single_category, "expected disagreement is zero: both runs use one and the same category");
    }
    return 1.0 - wo / we;
}

}  // namespace reflect::metrics
