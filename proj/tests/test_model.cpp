#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include "pvelab/model.hpp"

using namespace pvelab;

TEST_CASE("init_params: bounds, determinism, rank validation") {
    const ModelParams a = init_params(10, 3, ModelParams::kFullRank, 0.9, 7);
    const ModelParams b = init_params(10, 3, ModelParams::kFullRank, 0.9, 7);
    CHECK(a.flatten() == b.flatten());

    CHECK(a.reward.minCoeff() > -1.0);
    CHECK(a.reward.maxCoeff() < 1.0);
    for (const Mat& m : a.trans_logits) {
        CHECK(m.minCoeff() > -5.0);
        CHECK(m.maxCoeff() < 5.0);
    }

    const ModelParams c = init_params(10, 3, ModelParams::kFullRank, 0.9, 8);
    CHECK(a.flatten() != c.flatten());

    CHECK_THROWS_AS(init_params(10, 3, 0, 0.9, 1), std::invalid_argument);
    CHECK_THROWS_AS(init_params(10, 3, 11, 0.9, 1), std::invalid_argument);
    CHECK_NOTHROW(init_params(10, 3, 10, 0.9, 1));
}

TEST_CASE("realized low-rank transitions have numerical rank <= rank") {
    const ModelParams params = init_params(10, 2, 2, 0.9, 11);
    const TabularMdp model = realize_model(params);
    for (int a = 0; a < 2; ++a) {
        const Eigen::JacobiSVD<Mat> svd(model.transition[a]);
        for (int i = 2; i < 10; ++i) {
            CHECK(svd.singularValues()(i) < 1e-8);
        }
    }
}

TEST_CASE("realize_model: softmax cases and stochasticity") {
    ModelParams params = init_params(2, 1, ModelParams::kFullRank, 0.9, 3);
    params.trans_logits[0].setZero();
    TabularMdp model = realize_model(params);
    CHECK(model.transition[0](0, 0) == doctest::Approx(0.5));

    params.trans_logits[0] << 10.0, -10.0, 10.0, -10.0;
    model = realize_model(params);
    CHECK(model.transition[0](0, 0) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(model.transition[0](0, 1) == doctest::Approx(0.0).epsilon(1e-4));

    // Low-rank products of row-stochastic factors stay row-stochastic, and
    // the realized MDP always passes validation.
    const ModelParams low = init_params(8, 3, 4, 0.95, 13);
    CHECK_NOTHROW(realize_model(low).validate());
    const ModelParams full = init_params(8, 3, ModelParams::kFullRank, 0.95, 13);
    CHECK_NOTHROW(realize_model(full).validate());
}

TEST_CASE("flatten / unflatten round-trips for both parameterizations") {
    for (int rank : {ModelParams::kFullRank, 3}) {
        const ModelParams params = init_params(6, 2, rank, 0.9, 17);
        ModelParams other = params.zeros_like();
        CHECK(other.flatten().norm() == 0.0);
        other.unflatten(params.flatten());
        CHECK(other.flatten() == params.flatten());
        CHECK(other.reward == params.reward);

        Vec wrong(params.size() + 1);
        wrong.setZero();
        CHECK_THROWS_AS(other.unflatten(wrong), std::invalid_argument);
    }
}

TEST_CASE("parameter count formula") {
    const ModelParams full = init_params(6, 2, ModelParams::kFullRank, 0.9, 1);
    CHECK(full.size() == 6 * 2 + 2 * 6 * 6);
    const ModelParams low = init_params(6, 2, 3, 0.9, 1);
    CHECK(low.size() == 6 * 2 + 2 * (6 * 3 + 3 * 6));
}
