#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "relnet/mlp.hpp"

using namespace relnet;

namespace {

MlpModel random_model(std::mt19937_64& rng, std::size_t d, std::size_t m, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    MlpModel model = MlpModel::zeros(d, m);
    for (double& v : model.w1().values()) v = u(rng);
    for (double& v : model.w2().values()) v = u(rng);
    return model;
}

double loss(const MlpModel& m, const std::vector<double>& x, double label) {
    const double y = forward(m, x);
    return (y - label) * (y - label);
}

Matrix xor_inputs() {
    return Matrix::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
}

}  // namespace

TEST(MlpForward, ZeroWeightsGiveHalf) {
    const auto m = MlpModel::zeros(3, 2);
    EXPECT_EQ(forward(m, std::vector<double>{0.3, -1.0, 2.0}), 0.5);
}

TEST(MlpForward, ScalarHandValue) {
    MlpModel m = MlpModel::zeros(1, 1);
    m.w1()(0, 0) = 1.0;
    m.w2()(0, 0) = 1.0;
    // logistic(tanh(1)) evaluated from the textbook formulas
    const double expected = oracle::f(oracle::Fn::Logistic, oracle::f(oracle::Fn::Tanh, 1.0));
    EXPECT_NEAR(expected, 0.6816997421945262, 1e-15);
    EXPECT_NEAR(forward(m, std::vector<double>{1.0}), expected, 1e-15);
    EXPECT_EQ(classify_mlp(m, std::vector<double>{1.0}).label, 1);
}

TEST(MlpForward, SurveyShapedModel) {
    std::mt19937_64 rng(1);
    const auto m = random_model(rng, 14, 17);
    EXPECT_EQ(m.input_dim(), 14u);
    EXPECT_EQ(m.hidden_dim(), 17u);
    const double y = forward(m, std::vector<double>(14, 0.5));
    EXPECT_GT(y, 0.0);
    EXPECT_LT(y, 1.0);
    EXPECT_THROW(forward(m, std::vector<double>(13, 0.5)), std::invalid_argument);
}

TEST(MlpForward, OutputStrictlyInsideUnitInterval) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const auto m = random_model(rng, 1 + t % 6, 1 + t % 5, 3.0);
        std::vector<double> x(m.input_dim());
        for (auto& v : x) v = u(rng);
        const double y = forward(m, x);
        EXPECT_GT(y, 0.0);
        EXPECT_LT(y, 1.0);
    }
}

TEST(MlpForward, HiddenUnitPermutationInvariance) {
    std::mt19937_64 rng(3);
    const auto m = random_model(rng, 4, 5);
    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    MlpModel p = m;
    for (std::size_t j = 0; j < 5; ++j) {
        for (std::size_t i = 0; i < 5; ++i) p.w1()(j, i) = m.w1()(perm[j], i);
        p.w2()(0, j) = m.w2()(0, perm[j]);
    }
    const std::vector<double> x{0.1, -0.4, 0.9, 0.3};
    EXPECT_NEAR(forward(p, x), forward(m, x), 1e-14);
}

TEST(MlpModelType, RejectsBadShapes) {
    EXPECT_THROW(MlpModel(Matrix(0, 2), Matrix(1, 1)), std::invalid_argument);
    EXPECT_THROW(MlpModel(Matrix(2, 3), Matrix(1, 2)), std::invalid_argument);
    Matrix w1(1, 2);
    w1(0, 0) = std::nan("");
    EXPECT_THROW(MlpModel(w1, Matrix(1, 2)), std::invalid_argument);
}

TEST(MlpGradient, ZeroAtPerfectFit) {
    const auto m = MlpModel::zeros(3, 2);
    const auto g = gradient(m, std::vector<double>{0.4, 0.1, 0.9}, 0.5);
    for (double v : g.w1.values()) EXPECT_EQ(v, 0.0);
    for (double v : g.w2.values()) EXPECT_EQ(v, 0.0);
}

TEST(MlpGradient, MatchesCentralDifferences) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double h = 1e-5;
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 1 + t % 6, m = 1 + (t / 6) % 5;
        const auto model = random_model(rng, d, m);
        std::vector<double> x(d);
        for (auto& v : x) v = u(rng);
        const double label = t % 2;
        const auto g = gradient(model, x, label);
        for (std::size_t r = 0; r < model.w1().rows(); ++r) {
            for (std::size_t c = 0; c < model.w1().cols(); ++c) {
                const double fd = oracle::central_difference(
                    [&](double w) {
                        MlpModel probe = model;
                        probe.w1()(r, c) = w;
                        return loss(probe, x, label);
                    },
                    model.w1()(r, c), h);
                const double an = g.w1(r, c);
                EXPECT_LE(std::abs(fd - an), 1e-5 * std::max(std::abs(fd), std::abs(an)) + 1e-10)
                    << "w1 trial " << t;
            }
        }
        for (std::size_t c = 0; c < model.w2().cols(); ++c) {
            const double fd = oracle::central_difference(
                [&](double w) {
                    MlpModel probe = model;
                    probe.w2()(0, c) = w;
                    return loss(probe, x, label);
                },
                model.w2()(0, c), h);
            const double an = g.w2(0, c);
            EXPECT_LE(std::abs(fd - an), 1e-5 * std::max(std::abs(fd), std::abs(an)) + 1e-10)
                << "w2 trial " << t;
        }
    }
}

TEST(MlpClassify, TiesAndThreshold) {
    EXPECT_EQ(classify_mlp(MlpModel::zeros(2, 1), std::vector<double>{1.0, 0.0}).label, 1);
    // Output bias chosen so the output is logistic(a) = 0.4999.
    MlpModel m = MlpModel::zeros(1, 1);
    m.w2()(0, 1) = std::log(0.4999 / 0.5001);
    const auto c = classify_mlp(m, std::vector<double>{0.0});
    EXPECT_NEAR(c.raw, 0.4999, 1e-12);
    EXPECT_EQ(c.label, 0);
}

TEST(MlpTrain, OneStepReducesLoss) {
    std::mt19937_64 rng(5);
    auto model = random_model(rng, 3, 4, 0.5);
    const Matrix x = Matrix::from_rows({{0.2, 0.7, 1.0}});
    const std::vector<double> target{1.0};
    const double before = loss(model, {0.2, 0.7, 1.0}, 1.0);
    TrainingConfig cfg;
    cfg.cycles = 1;
    cfg.learning_rate = 1e-3;
    fit_mlp(model, x, target, cfg);
    EXPECT_LT(loss(model, {0.2, 0.7, 1.0}, 1.0), before);
}

TEST(MlpTrain, LearnsXor) {
    const auto x = xor_inputs();
    const std::vector<int> labels{0, 1, 1, 0};
    TrainingConfig cfg;
    cfg.cycles = 5000;
    cfg.seed = 1;
    const auto model = train_mlp(x, labels, cfg, 4);
    for (std::size_t r = 0; r < 4; ++r) {
        EXPECT_EQ(classify_mlp(model, x.row(r)).label, labels[r]) << "record " << r;
    }
}

TEST(MlpTrain, Deterministic) {
    const auto x = xor_inputs();
    const std::vector<int> labels{0, 1, 1, 0};
    TrainingConfig cfg;
    cfg.cycles = 200;
    cfg.seed = 9;
    EXPECT_EQ(train_mlp(x, labels, cfg, 3), train_mlp(x, labels, cfg, 3));
    auto other = cfg;
    other.seed = 10;
    EXPECT_NE(train_mlp(x, labels, cfg, 3), train_mlp(x, labels, other, 3));
}

TEST(MlpTrain, RequiresBalancedBinaryLabels) {
    const auto x = xor_inputs();
    TrainingConfig cfg;
    cfg.cycles = 1;
    EXPECT_THROW(train_mlp(x, std::vector<int>{0, 1, 1, 1}, cfg, 2), std::invalid_argument);
    EXPECT_THROW(train_mlp(x, std::vector<int>{0, 2, 1, 0}, cfg, 2), std::invalid_argument);
    EXPECT_THROW(train_mlp(x, std::vector<int>{0, 1}, cfg, 2), std::invalid_argument);
    cfg.cycles = 0;
    EXPECT_THROW(train_mlp(x, std::vector<int>{0, 1, 1, 0}, cfg, 2), std::invalid_argument);
}

TEST(MlpSerialization, ExactRoundTrip) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 10; ++t) {
        const auto m = random_model(rng, 1 + t, 1 + t % 4, 5.0);
        const auto text = to_json(m).dump();
        const auto back = mlp_from_json(nlohmann::ordered_json::parse(text));
        EXPECT_EQ(back, m);
        EXPECT_EQ(to_json(back).dump(), text);
    }
    auto j = to_json(MlpModel::zeros(2, 2));
    j["d"] = 3;
    EXPECT_THROW(mlp_from_json(j), std::invalid_argument);
}
