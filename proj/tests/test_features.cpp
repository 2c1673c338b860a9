#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gsc/features.hpp"

using namespace gsc;

TEST_CASE("population variance matches the closed form") {
    Eigen::RowVectorXd row(4);
    row << 1, 2, 3, 4;
    CHECK(population_variance(row) == Catch::Approx(1.25).margin(1e-15));
    Eigen::RowVectorXd flat = Eigen::RowVectorXd::Constant(5, 3.3);
    CHECK(population_variance(flat) == Catch::Approx(0.0).margin(1e-15));
    Eigen::RowVectorXd empty(0);
    CHECK_THROWS_AS(population_variance(empty), DataError);
}

TEST_CASE("log-variance features follow the two-class schema") {
    Eigen::MatrixXd Z(4, 5);
    Z << 0, 0, 0, 0, 0,          // dim 1 (null)
         1, 2, 3, 4, 5,          // dim 2: popvar 2
         2, 2, 2, 2, 2,          // dim 3: popvar 0 -> floored
         1, -1, 1, -1, 1;        // dim 4: popvar 0.96
    const FeatureVector fv = fkt_features(Z, {2, 4}, {3});
    REQUIRE(fv.values.size() == 3);
    REQUIRE(fv.schema == std::vector<std::string>{"ASD_dom1", "ASD_dom2", "NT_dom1"});
    CHECK(fv.values[0] == Catch::Approx(std::log(2.0)).margin(1e-15));
    CHECK(fv.values[1] == Catch::Approx(std::log(0.96)).margin(1e-15));
    CHECK(fv.values[2] == std::log(1e-300));  // exact: the floor value

    CHECK_THROWS_AS(fkt_features(Z, {}, {2}), DataError);
    CHECK_THROWS_AS(fkt_features(Z, {1}, {2}), DataError);  // null dimension
    CHECK_THROWS_AS(fkt_features(Z, {5}, {2}), DataError);  // out of range
}

TEST_CASE("per-mode baseline features are the row variances") {
    NormalizedSpectra ns;
    ns.Y.resize(3, 4);
    ns.Y << 1, 2, 3, 4,
            0, 0, 0, 0,
            -1, 1, -1, 1;
    const FeatureVector fv = gft_baseline_features(ns, Banding::PerMode);
    REQUIRE(fv.schema == std::vector<std::string>{"GFT_mode_1", "GFT_mode_2", "GFT_mode_3"});
    CHECK(fv.values[0] == Catch::Approx(1.25).margin(1e-15));
    CHECK(fv.values[1] == 0.0);
    CHECK(fv.values[2] == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("three-band features pool variance over row blocks") {
    NormalizedSpectra ns;
    ns.Y.resize(7, 2);  // bands: rows [0,2), [2,4), [4,7)
    ns.Y << 1, 3,
            5, 7,
            2, 2,
            2, 2,
            0, 1,
            2, 3,
            4, 5;
    const FeatureVector fv = gft_baseline_features(ns, Banding::ThreeBands);
    REQUIRE(fv.schema ==
            std::vector<std::string>{"GFT_band_low", "GFT_band_middle", "GFT_band_high"});
    // low: {1,3,5,7} popvar = 5; middle: constant 2 -> 0; high: {0,1,2,3,4,5} popvar = 35/12
    CHECK(fv.values[0] == Catch::Approx(5.0).margin(1e-15));
    CHECK(fv.values[1] == 0.0);
    CHECK(fv.values[2] == Catch::Approx(35.0 / 12.0).margin(1e-14));

    NormalizedSpectra tiny;
    tiny.Y.resize(2, 3);
    tiny.Y.setZero();
    CHECK_THROWS_WITH(gft_baseline_features(tiny, Banding::ThreeBands),
                      Catch::Matchers::ContainsSubstring("requires r >= 3"));
}

TEST_CASE("banding names parse and print") {
    CHECK(parse_banding("perMode") == Banding::PerMode);
    CHECK(parse_banding("threeBands") == Banding::ThreeBands);
    CHECK(banding_name(Banding::PerMode) == "perMode");
    CHECK(banding_name(Banding::ThreeBands) == "threeBands");
    CHECK_THROWS_AS(parse_banding("bands"), DataError);
}

TEST_CASE("projection applies the model filter bank") {
    FktModel model;
    model.r = 2;
    model.P.resize(2, 2);
    model.P << 0, 1, 1, 0;  // swap rows
    NormalizedSpectra ns;
    ns.Y.resize(2, 3);
    ns.Y << 1, 2, 3,
            4, 5, 6;
    const Eigen::MatrixXd Z = project(ns, model);
    CHECK(Z(0, 0) == 4.0);
    CHECK(Z(1, 2) == 3.0);

    NormalizedSpectra wrong;
    wrong.Y.resize(3, 3);
    wrong.Y.setZero();
    CHECK_THROWS_AS(project(wrong, model), DataError);
}
