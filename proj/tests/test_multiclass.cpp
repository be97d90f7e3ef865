// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#include "stripml/error.hpp"
#include "stripml/model_io.hpp"
#include "stripml/multiclass.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace stripml;
using testing_support::clusters;

namespace {

MultiClassModel three_class_shell() {
    MultiClassModel m;
    m.class_labels = {"a", "b", "c"};
    m.pairs = {{0, 1, {}}, {0, 2, {}}, {1, 2, {}}};
    m.dims = 1;
    return m;
}

}  // namespace

TEST(TrainMulticlass, TwoClassesGiveOneEquivalentModel) {
    const LabeledDataset d = clusters(2, 10, 12, 0.2, 1);
    TrainerConfig config;
    config.sigma = 2.0;
    const MultiClassModel m = train_multiclass(d, config);
    ASSERT_EQ(m.pairs.size(), 1U);
    BinaryDataset b;
    b.inputs = d.inputs;
    for (int y : d.labels) b.labels.push_back(y == 0 ? 1 : -1);
    const BinaryModel direct = train_binary(b, {KernelKind::rbf, 2.0}, 1.0);
    EXPECT_EQ(m.pairs[0].model.alphas, direct.alphas);
    EXPECT_EQ(m.pairs[0].model.bias, direct.bias);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto x = row_span(d.inputs, static_cast<Eigen::Index>(i));
        EXPECT_EQ(predict_multiclass(m, x).label == 0 ? 1 : -1, predict_binary(direct, x));
    }
}

TEST(TrainMulticlass, FifteenClassesGive105Pairs) {
    const LabeledDataset d = clusters(15, 3, 15, 0.05, 2);
    const MultiClassModel m = train_multiclass(d);
    EXPECT_EQ(m.pairs.size(), 105U);
    std::size_t p = 0;
    for (int a = 0; a < 15; ++a) {
        for (int b = a + 1; b < 15; ++b, ++p) {
            EXPECT_EQ(m.pairs[p].first, a);
            EXPECT_EQ(m.pairs[p].second, b);
        }
    }
}

TEST(TrainMulticlass, SeparatedClustersAreFittedPerfectly) {
    const LabeledDataset d = clusters(3, 20, 12, 0.05, 3);
    const MultiClassModel m = train_multiclass(d);
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_EQ(predict_multiclass(m, row_span(d.inputs, static_cast<Eigen::Index>(i))).label, d.labels[i]);
    }
    for (int c = 0; c < 3; ++c) {
        std::vector<double> center(12);
        for (int j = 0; j < 12; ++j) center[static_cast<std::size_t>(j)] = j % 3 == c ? 1.0 : 0.0;
        EXPECT_EQ(predict_multiclass(m, center).label, c);
    }
}

TEST(TrainMulticlass, ParallelPairsMatchSerial) {
    const LabeledDataset d = clusters(6, 8, 12, 0.3, 4);
    TrainerConfig serial;
    TrainerConfig parallel;
    parallel.threads = 4;
    EXPECT_EQ(model_to_string(train_multiclass(d, serial)), model_to_string(train_multiclass(d, parallel)));
    serial.kind = parallel.kind = ClassifierKind::svm;
    EXPECT_EQ(model_to_string(train_multiclass(d, serial)), model_to_string(train_multiclass(d, parallel)));
}

TEST(TrainMulticlass, RejectsEmptyClassAndSingleClass) {
    LabeledDataset d = clusters(3, 4, 12, 0.1, 5);
    d.class_names.push_back("ghost");
    EXPECT_THROW(train_multiclass(d), InvalidArgument);
    LabeledDataset single = clusters(1, 4, 12, 0.1, 5);
    EXPECT_THROW(train_multiclass(single), InvalidArgument);
}

TEST(TrainMulticlass, DefaultSigmaIsMedianDistance) {
    const LabeledDataset d = clusters(3, 5, 12, 0.2, 6);
    const MultiClassModel m = train_multiclass(d);
    EXPECT_EQ(m.pairs[0].model.kernel.sigma, median_pairwise_distance(d.inputs));
    EXPECT_EQ(resolve_sigma(d, {}), median_pairwise_distance(d.inputs));
}

TEST(Vote, CycleIsBrokenByMargins) {
    const MultiClassModel m = three_class_shell();
    // a beats b by 0.5, c beats a by 0.9, b beats c by 0.3.
    const std::vector<double> decisions{0.5, -0.9, 0.3};
    const Prediction p = vote(m, decisions);
    EXPECT_EQ(p.votes, (std::vector<int>{1, 1, 1}));
    EXPECT_EQ(p.label, 2);
}

TEST(Vote, FullTieGoesToLowestIndex) {
    const MultiClassModel m = three_class_shell();
    const std::vector<double> decisions{0.5, -0.5, 0.5};
    EXPECT_EQ(vote(m, decisions).label, 0);
}

TEST(Vote, ZeroDecisionCountsForFirstClass) {
    const MultiClassModel m = three_class_shell();
    const std::vector<double> decisions{0.0, 0.0, 0.0};
    const Prediction p = vote(m, decisions);
    EXPECT_EQ(p.votes, (std::vector<int>{2, 1, 0}));
    EXPECT_EQ(p.label, 0);
}

TEST(ClassScores, MinimumOrientedDecision) {
    const MultiClassModel m = three_class_shell();
    const std::vector<double> decisions{0.5, -0.9, 0.3};
    EXPECT_EQ(class_scores(m, decisions), (std::vector<double>{-0.9, -0.5, -0.3}));
}

TEST(PredictMulticlass, RejectsWrongDimension) {
    const LabeledDataset d = clusters(3, 4, 12, 0.1, 7);
    const MultiClassModel m = train_multiclass(d);
    const std::vector<double> x(11, 0.0);
    EXPECT_THROW(predict_multiclass(m, x), InvalidArgument);
}

TEST(Standardizer, UsesTrainingStatisticsOnly) {
    LabeledDataset d = clusters(3, 6, 12, 0.2, 8);
    d.inputs.col(0) *= 100.0;
    TrainerConfig config;
    config.standardize = true;
    const MultiClassModel m = train_multiclass(d, config);
    ASSERT_TRUE(m.standardizer.has_value());
    const FeatureRows z = m.standardizer->apply(d.inputs);
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        EXPECT_NEAR(z.col(j).mean(), 0.0, 1e-12);
        const double var = (z.col(j).array() - z.col(j).mean()).square().sum() / static_cast<double>(z.rows() - 1);
        EXPECT_NEAR(var, 1.0, 1e-9);
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_EQ(predict_multiclass(m, row_span(d.inputs, static_cast<Eigen::Index>(i))).label, d.labels[i]);
    }
}

class ModelFile : public ::testing::TestWithParam<ClassifierKind> {};

TEST_P(ModelFile, RoundTripReproducesDecisionsExactly) {
    const LabeledDataset d = clusters(4, 6, 12, 0.3, 9);
    TrainerConfig config;
    config.kind = GetParam();
    config.standardize = true;
    const MultiClassModel m = train_multiclass(d, config);
    const MultiClassModel back = model_from_string(model_to_string(m));
    EXPECT_EQ(back.class_labels, m.class_labels);
    EXPECT_EQ(back.kind, m.kind);
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x(12);
        for (auto& v : x) v = u(rng);
        EXPECT_EQ(pairwise_decisions(back, x), pairwise_decisions(m, x));
    }
    EXPECT_EQ(model_to_string(back), model_to_string(m));
}

INSTANTIATE_TEST_SUITE_P(Kinds, ModelFile, ::testing::Values(ClassifierKind::lssvm, ClassifierKind::svm));

TEST(ModelFileErrors, CorruptedPayloadFailsChecksum) {
    const MultiClassModel m = train_multiclass(clusters(2, 4, 12, 0.1, 11));
    std::string text = model_to_string(m);
    auto pos = text.find("\"bias\": ");
    ASSERT_NE(pos, std::string::npos);
    pos = text.find_first_of("123456789", pos);
    text[pos] = text[pos] == '9' ? '8' : static_cast<char>(text[pos] + 1);
    try {
        model_from_string(text);
        FAIL() << "expected a checksum error";
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos) << e.what();
    }
}

TEST(ModelFileErrors, WrongVersionOrTagIsRejected) {
    const std::string text = model_to_string(train_multiclass(clusters(2, 4, 12, 0.1, 12)));
    std::string v2 = text;
    v2.replace(v2.find("\"version\": 1"), 12, "\"version\": 2");
    EXPECT_THROW(model_from_string(v2), FormatError);
    std::string tag = text;
    tag.replace(tag.find("stripml-model"), 13, "other-model!!");
    EXPECT_THROW(model_from_string(tag), FormatError);
    EXPECT_THROW(model_from_string("{not json"), FormatError);
}
