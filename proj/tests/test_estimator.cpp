#include "fkde/estimator.hpp"

#include <gtest/gtest.h>

#include "fkde/errors.hpp"
#include "fkde/oracle.hpp"
#include "test_util.hpp"

using namespace fkde;

namespace {

EstimatorConfig config_for(Method m, EngineKind e, double h = 0.5) {
    EstimatorConfig c;
    c.method = m;
    c.engine = e;
    c.bandwidth = Bandwidth::uniform(h);
    return c;
}

}  // namespace

TEST(Estimate, NegativeMassPresenceFollowsMethod) {
    const auto train = testutil::random_gaussian(64, 2, 201);
    const auto queries = testutil::random_gaussian(32, 2, 202, 3.0);
    for (EngineKind e : {EngineKind::Naive, EngineKind::Flash}) {
        const auto lap = estimate(train, queries, config_for(Method::LaplaceKde, e));
        ASSERT_TRUE(lap.negative_mass_estimate.has_value());
        EXPECT_GE(*lap.negative_mass_estimate, 0.0);

        EXPECT_FALSE(
            estimate(train, queries, config_for(Method::Kde, e)).negative_mass_estimate);
        EXPECT_FALSE(
            estimate(train, queries, config_for(Method::Sdkde, e)).negative_mass_estimate);
    }
}

TEST(Estimate, DebiasedSamplesOnlyForSdkde) {
    const auto train = testutil::random_gaussian(32, 1, 203);
    const auto queries = testutil::random_gaussian(8, 1, 204);
    for (EngineKind e : {EngineKind::Naive, EngineKind::Flash}) {
        EXPECT_TRUE(estimate(train, queries, config_for(Method::Sdkde, e))
                        .debiased_samples.has_value());
        EXPECT_FALSE(
            estimate(train, queries, config_for(Method::Kde, e)).debiased_samples.has_value());
    }
}

TEST(Estimate, NaiveDispatchMatchesOracles) {
    const auto train = testutil::random_gaussian(48, 2, 205);
    const auto queries = testutil::random_gaussian(16, 2, 206);
    const auto via_dispatch = estimate(train, queries, config_for(Method::Kde, EngineKind::Naive));
    const auto direct = oracle::kde_naive(train, queries, 0.5);
    EXPECT_EQ(via_dispatch.values, direct.values);
}

TEST(Estimate, ValidatesConfig) {
    const auto train = testutil::random_gaussian(8, 1, 207);
    auto bad = config_for(Method::Kde, EngineKind::Flash);
    bad.bandwidth.h = -1.0;
    EXPECT_THROW(estimate(train, train, bad), InvalidArgumentError);
    bad = config_for(Method::Kde, EngineKind::Flash);
    bad.tile_m = 0;
    EXPECT_THROW(estimate(train, train, bad), InvalidArgumentError);
}
