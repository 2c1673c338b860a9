#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "gsc/eval.hpp"
#include "gsc/log.hpp"
#include "gsc/report.hpp"
#include "gsc/synth.hpp"

using namespace gsc;

namespace {

RoiAtlas line_atlas(int r) {
    RoiAtlas atlas;
    for (int i = 0; i < r; ++i) {
        Roi roi;
        roi.index = i + 1;
        roi.name = "n" + std::to_string(i + 1);
        roi.coord = Eigen::Vector3d(10.0 * i, 0.0, 0.0);
        atlas.rois.push_back(roi);
    }
    return atlas;
}

// Strong planted two-class cohort through the real generator.
std::vector<SubjectRecord> planted_cohort(int r, int n, int T, std::uint64_t seed,
                                          const GftBasis& basis) {
    SyntheticSpec spec;
    spec.r = r;
    spec.nSubjects = n;
    spec.T = T;
    spec.alphaA = 0.5;
    spec.templateA = Eigen::MatrixXd::Identity(r, r) + rank1_template(r, std::max(2, r / 4 + 1), 5.0);
    spec.templateN = Eigen::MatrixXd::Identity(r, r) + rank1_template(r, std::min(r, (3 * r) / 4 + 1), 5.0);
    spec.noise = 0.0;
    spec.seed = seed;
    return generate_synthetic(spec, basis);
}

}  // namespace

TEST_CASE("split trials are deterministic, sorted, and class-complete") {
    std::vector<Label> labels;
    for (int i = 0; i < 40; ++i) labels.push_back(i % 2 == 0 ? Label::ASD : Label::NT);
    const auto splits = split_trials(40, 0.05, 12, 77, labels);
    REQUIRE(splits.size() == 12);
    const auto again = split_trials(40, 0.05, 12, 77, labels);
    for (std::size_t t = 0; t < splits.size(); ++t) {
        CHECK(splits[t].test == again[t].test);
        REQUIRE(splits[t].test.size() == 2);  // floor(0.05*40)
        CHECK(std::is_sorted(splits[t].test.begin(), splits[t].test.end()));
        CHECK(splits[t].train.size() == 38);
        std::set<int> all(splits[t].train.begin(), splits[t].train.end());
        all.insert(splits[t].test.begin(), splits[t].test.end());
        CHECK(all.size() == 40);
        bool sawA = false, sawN = false;
        for (int i : splits[t].train) (labels[i] == Label::ASD ? sawA : sawN) = true;
        CHECK(sawA);
        CHECK(sawN);
    }
    // Different seeds explore different test sets somewhere.
    const auto other = split_trials(40, 0.05, 12, 78, labels);
    bool different = false;
    for (std::size_t t = 0; t < splits.size(); ++t)
        if (splits[t].test != other[t].test) different = true;
    CHECK(different);
}

TEST_CASE("stratified splits take a floor share of each class") {
    std::vector<Label> labels;
    for (int i = 0; i < 30; ++i) labels.push_back(i < 10 ? Label::ASD : Label::NT);
    const auto splits = split_trials(30, 0.2, 8, 5, labels, true);
    for (const TrialSplit& s : splits) {
        int a = 0, n = 0;
        for (int i : s.test) (labels[i] == Label::ASD ? a : n)++;
        CHECK(a == 2);  // floor(0.2*10)
        CHECK(n == 4);  // floor(0.2*20)
    }
}

TEST_CASE("degenerate split sizes are rejected") {
    const std::vector<Label> labels{Label::ASD, Label::NT, Label::ASD};
    CHECK_THROWS_WITH(split_trials(3, 0.1, 2, 0, labels),
                      Catch::Matchers::ContainsSubstring("degenerate split sizes"));
    CHECK_THROWS_WITH(split_trials(3, 0.67, 2, 0, labels),
                      Catch::Matchers::ContainsSubstring("degenerate split sizes"));
    CHECK_THROWS_AS(split_trials(3, 0.0, 2, 0, labels), DataError);
    CHECK_THROWS_AS(split_trials(3, 1.0, 2, 0, labels), DataError);
}

TEST_CASE("an all-one-class cohort exhausts resampling") {
    const std::vector<Label> labels(10, Label::NT);
    log::drain_warnings();
    CHECK_THROWS_AS(split_trials(10, 0.2, 1, 3, labels), DataError);
    log::drain_warnings();
}

TEST_CASE("resampling notes name the trial") {
    // 1 ASD in 8: when it lands in the test set the train side lacks a class.
    std::vector<Label> labels(8, Label::NT);
    labels[3] = Label::ASD;
    log::drain_warnings();
    std::vector<std::string> notes;
    const auto splits = split_trials(8, 0.2, 50, 11, labels, false, &notes);
    for (const TrialSplit& s : splits) {
        bool sawA = false;
        for (int i : s.train) sawA = sawA || labels[i] == Label::ASD;
        CHECK(sawA);
    }
    // With 50 trials of a 1/8 test draw, some resampling must have happened.
    CHECK_FALSE(notes.empty());
    for (const std::string& w : notes) {
        CHECK(w.find("resampled") != std::string::npos);
        CHECK(w.find("trial") != std::string::npos);
    }
    log::drain_warnings();
}

TEST_CASE("end-to-end experiment on a planted cohort reaches high accuracy") {
    const RoiAtlas atlas = line_atlas(8);
    ExperimentConfig config;
    config.method = Method::Ours;
    config.graph = parse_graph_spec("knn", 2, 0);
    config.m = 2;
    config.testFraction = 0.1;
    config.nTrials = 6;
    config.seed = 21;

    const GftBasis basis = basis_for(config, atlas, 8);
    const auto subjects = planted_cohort(8, 40, 60, 4, basis);
    const EvalReport report = run_experiment(config, subjects, atlas);
    REQUIRE(report.perTrialAccuracy.size() == 6);
    CHECK(report.mean >= 0.8);
    CHECK(report.protocol == "splits(fraction=0.1, trials=6)");
    CHECK(report.method == "ours(knn(K=2), m=2)");
    CHECK(report.seed == 21);
    for (double acc : report.perTrialAccuracy) {
        CHECK(acc >= 0.0);
        CHECK(acc <= 1.0);
    }
    log::drain_warnings();
}

TEST_CASE("parallel trials produce byte-identical reports") {
    const RoiAtlas atlas = line_atlas(6);
    ExperimentConfig config;
    config.method = Method::Ours;
    config.graph = parse_graph_spec("knn", 2, 0);
    config.m = 2;
    config.testFraction = 0.1;
    config.nTrials = 8;
    config.seed = 9;
    config.threads = 1;

    const GftBasis basis = basis_for(config, atlas, 6);
    const auto subjects = planted_cohort(6, 30, 40, 14, basis);
    const EvalReport serial = run_experiment(config, subjects, atlas);
    config.threads = 4;
    const EvalReport parallel = run_experiment(config, subjects, atlas);
    CHECK(report_to_string(serial) == report_to_string(parallel));
    log::drain_warnings();
}

TEST_CASE("the trial sink observes every fitted trial") {
    const RoiAtlas atlas = line_atlas(6);
    ExperimentConfig config;
    config.method = Method::Sfm;
    config.m = 2;
    config.testFraction = 0.1;
    config.nTrials = 5;
    config.seed = 2;
    const auto subjects = planted_cohort(6, 30, 40, 8, identity_basis(6));
    std::vector<int> seen;
    run_experiment(config, subjects, atlas, [&](int t, const FittedTrial& trial) {
        seen.push_back(t);
        CHECK(trial.hasModel);
        CHECK(trial.model.r == 6);
        CHECK(trial.predictions.size() == 3);  // floor(0.1*30)
    });
    std::sort(seen.begin(), seen.end());
    CHECK(seen == std::vector<int>{0, 1, 2, 3, 4});
    log::drain_warnings();
}

TEST_CASE("gft baseline runs without a projection model") {
    const RoiAtlas atlas = line_atlas(6);
    ExperimentConfig config;
    config.method = Method::Gft;
    config.graph = parse_graph_spec("knn", 2, 0);
    config.banding = Banding::ThreeBands;
    config.testFraction = 0.1;
    config.nTrials = 4;
    config.seed = 17;
    const GftBasis basis = basis_for(config, atlas, 6);
    const auto subjects = planted_cohort(6, 30, 40, 3, basis);
    const EvalReport report = run_experiment(config, subjects, atlas);
    CHECK(report.method == "gft(knn(K=2), threeBands)");
    CHECK(report.perTrialAccuracy.size() == 4);
    log::drain_warnings();
}

TEST_CASE("m='all' uses every non-null dimension") {
    const RoiAtlas atlas = line_atlas(5);
    ExperimentConfig config;
    config.method = Method::Ours;
    config.graph = parse_graph_spec("knn", 2, 0);
    config.mAll = true;
    config.testFraction = 0.1;
    config.nTrials = 2;
    config.seed = 30;
    const GftBasis basis = basis_for(config, atlas, 5);
    const auto subjects = planted_cohort(5, 24, 40, 6, basis);
    bool checked = false;
    run_experiment(config, subjects, atlas, [&](int, const FittedTrial& trial) {
        CHECK(trial.domA.size() == 4);  // r-1
        CHECK(trial.domN.size() == 4);
        checked = true;
    });
    CHECK(checked);
    CHECK(config.m_string() == "all");
    log::drain_warnings();
}

TEST_CASE("LOOCV skips single-class training folds with a warning") {
    // 3 subjects, 1 ASD: holding out a NT leaves {NT, ASD}; holding out the
    // ASD leaves a single-class training set, which is skipped.
    SyntheticSpec spec;
    spec.r = 5;
    spec.nSubjects = 3;
    spec.T = 50;
    spec.alphaA = 1.0 / 3.0;
    spec.templateA = Eigen::MatrixXd::Identity(5, 5) + rank1_template(5, 2, 5.0);
    spec.templateN = Eigen::MatrixXd::Identity(5, 5) + rank1_template(5, 4, 5.0);
    spec.noise = 0.0;
    spec.seed = 12;
    const RoiAtlas atlas = line_atlas(5);
    ExperimentConfig config;
    config.method = Method::Ours;
    config.graph = parse_graph_spec("knn", 2, 0);
    config.m = 1;
    config.useLoocv = true;
    config.seed = 4;
    const GftBasis basis = basis_for(config, atlas, 5);
    const auto subjects = generate_synthetic(spec, basis);
    REQUIRE(subjects.front().label == Label::ASD);

    const EvalReport report = loocv(config, subjects, atlas);
    CHECK(report.protocol == "loocv(n=3)");
    CHECK(report.perTrialAccuracy.size() == 2);  // ASD fold skipped
    bool foundSkip = false;
    for (const std::string& w : report.warnings)
        if (w.find("fold 0") != std::string::npos && w.find("skipped") != std::string::npos)
            foundSkip = true;
    CHECK(foundSkip);
    log::drain_warnings();
}

TEST_CASE("compared methods share splits and exchange p-values") {
    const RoiAtlas atlas = line_atlas(6);
    ExperimentConfig base;
    base.graph = parse_graph_spec("knn", 2, 0);
    base.m = 2;
    base.testFraction = 0.1;
    base.nTrials = 5;
    base.seed = 13;

    ExperimentConfig ours = base;
    ours.method = Method::Ours;
    ExperimentConfig gft = base;
    gft.method = Method::Gft;
    ExperimentConfig sfm = base;
    sfm.method = Method::Sfm;

    const GftBasis basis = basis_for(ours, atlas, 6);
    const auto subjects = planted_cohort(6, 30, 40, 2, basis);
    const auto reports = compare_methods({ours, gft, sfm}, subjects, atlas);
    REQUIRE(reports.size() == 3);
    REQUIRE(reports[0].comparisons.size() == 2);
    CHECK(reports[0].comparisons[0].method == reports[1].method);

    // p-values are symmetric across the pair.
    double pOursVsGft = 0, pGftVsOurs = 1;
    for (const auto& c : reports[0].comparisons)
        if (c.method == reports[1].method) pOursVsGft = c.pValue;
    for (const auto& c : reports[1].comparisons)
        if (c.method == reports[0].method) pGftVsOurs = c.pValue;
    CHECK(pOursVsGft == pGftVsOurs);
    log::drain_warnings();
}

TEST_CASE("mismatched comparison protocols are rejected") {
    const RoiAtlas atlas = line_atlas(6);
    ExperimentConfig a;
    a.method = Method::Ours;
    a.graph = parse_graph_spec("knn", 2, 0);
    a.seed = 1;
    ExperimentConfig b = a;
    b.method = Method::Sfm;
    b.seed = 2;
    const auto subjects = planted_cohort(6, 20, 30, 2, basis_for(a, atlas, 6));
    CHECK_THROWS_AS(compare_methods({a, b}, subjects, atlas), DataError);
}

TEST_CASE("evaluation requires a minimally sized cohort") {
    const RoiAtlas atlas = line_atlas(5);
    ExperimentConfig config;
    config.graph = parse_graph_spec("knn", 2, 0);
    const auto subjects = planted_cohort(5, 10, 20, 1, basis_for(config, atlas, 5));
    const std::vector<SubjectRecord> two(subjects.begin(), subjects.begin() + 2);
    CHECK_THROWS_AS(run_experiment(config, two, atlas), DataError);

    ExperimentConfig loo = config;
    loo.useLoocv = true;
    CHECK_THROWS_AS(run_experiment(loo, subjects, atlas), DataError);
}
