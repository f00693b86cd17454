#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "reflect/metrics/metrics.hpp"

using namespace reflect;
namespace m = reflect::metrics;
namespace o = reflect::oracle;

namespace {

std::vector<m::MultiLabelSample<int>> convert(const std::vector<o::Sample>& samples) {
    std::vector<m::MultiLabelSample<int>> out;
    for (const auto& s : samples) out.push_back({s.gold, s.predicted});
    return out;
}

constexpr double kTol = 1e-9;

}  // namespace

TEST(MetricOracle, MultiLabelF1) {
    std::mt19937_64 rng(101);
    for (int run = 0; run < 300; ++run) {
        const int scheme = 2 + run % 7;
        const auto samples = o::random_samples(rng, scheme, 1 + run % 9);
        const auto f = m::f1_scores(convert(samples));
        const auto [macro, micro] = o::f1_multilabel(samples, scheme);
        ASSERT_NEAR(f.macro, macro, kTol) << run;
        ASSERT_NEAR(f.micro, micro, kTol) << run;
    }
}

TEST(MetricOracle, SingleLabelF1) {
    std::mt19937_64 rng(102);
    for (int run = 0; run < 300; ++run) {
        const int k = 2 + run % 5;
        std::uniform_int_distribution<int> label(0, k - 1);
        std::vector<int> gold, pred;
        for (int i = 0; i < 1 + run % 12; ++i) gold.push_back(label(rng)), pred.push_back(label(rng));
        const auto f = m::f1_scores(gold, pred);
        const auto [macro, micro] = o::f1_single(gold, pred, k);
        ASSERT_NEAR(f.macro, macro, kTol) << run;
        ASSERT_NEAR(f.micro, micro, kTol) << run;
        // single-label micro F1 equals accuracy
        ASSERT_NEAR(f.micro, m::accuracy(gold, pred), kTol) << run;
    }
}

TEST(MetricOracle, HammingAndLenient) {
    std::mt19937_64 rng(103);
    const std::vector<std::set<int>> groups{{0, 1}, {2, 3, 4}};
    const m::SimilarityGroups<int> lib_groups{groups};
    for (int run = 0; run < 300; ++run) {
        const int scheme = 5 + run % 6;
        const auto samples = o::random_samples(rng, scheme, 1 + run % 9);
        const auto lib = convert(samples);
        ASSERT_NEAR(m::hamming_loss(lib, scheme), o::hamming_loss(samples, scheme), kTol) << run;
        ASSERT_NEAR(m::hamming_score(lib, scheme), 1.0 - o::hamming_loss(samples, scheme), kTol) << run;
        ASSERT_NEAR(m::lenient_hamming_score(lib, scheme, lib_groups),
                    1.0 - o::lenient_hamming_loss(samples, scheme, groups), kTol)
            << run;
    }
}

TEST(MetricOracle, OneCorrectLabel) {
    std::mt19937_64 rng(104);
    for (int run = 0; run < 300; ++run) {
        const auto samples = o::random_samples(rng, 3 + run % 6, 1 + run % 9);
        ASSERT_NEAR(m::one_correct_label_accuracy(convert(samples)), o::one_correct_label(samples), kTol) << run;
    }
}

TEST(MetricOracle, CohenKappa) {
    std::mt19937_64 rng(105);
    for (int run = 0; run < 300; ++run) {
        const auto a = o::random_ordinals(rng, 2 + run % 4, 1 + run % 10);
        const auto b = o::random_ordinals(rng, 2 + run % 4, static_cast<int>(a.size()));
        ASSERT_NEAR(m::cohen_kappa(a, b), o::cohen_kappa(a, b), kTol) << run;
    }
}

TEST(MetricOracle, QuadraticWeightedKappa) {
    std::mt19937_64 rng(106);
    int checked = 0;
    for (int run = 0; run < 300; ++run) {
        const int k = 2 + run % 4;
        const auto a = o::random_ordinals(rng, k, 2 + run % 10);
        const auto b = o::random_ordinals(rng, k, static_cast<int>(a.size()));
        try {
            ASSERT_NEAR(m::quadratic_weighted_kappa(a, b, k), o::qwk(a, b, k), kTol) << run;
            ++checked;
        } catch (const Error& e) {
            // only legitimate when every rating in both runs is the same value
            ASSERT_EQ(e.code(), Errc::single_category);
            std::set<int> all(a.begin(), a.end());
            all.insert(b.begin(), b.end());
            ASSERT_EQ(all.size(), 1u) << run;
        }
    }
    EXPECT_GT(checked, 250);
}

TEST(MetricOracle, TopKContainment) {
    std::mt19937_64 rng(107);
    for (int run = 0; run < 100; ++run) {
        std::vector<int> gold;
        std::vector<std::vector<int>> ranked;
        for (int i = 0; i < 1 + run % 10; ++i) {
            std::vector<int> order{0, 1, 2, 3, 4, 5};
            std::shuffle(order.begin(), order.end(), rng);
            gold.push_back(static_cast<int>(rng() % 6));
            ranked.push_back(order);
        }
        for (std::size_t k = 1; k <= 6; ++k) {
            int hits = 0;
            for (std::size_t i = 0; i < gold.size(); ++i) {
                for (std::size_t j = 0; j < k; ++j) hits += ranked[i][j] == gold[i];
            }
            ASSERT_NEAR(m::top_k_containment(gold, ranked, k), static_cast<double>(hits) / gold.size(), kTol);
        }
        ASSERT_DOUBLE_EQ(m::top_k_containment(gold, ranked, 6), 1.0);
    }
}
