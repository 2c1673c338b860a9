#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gsc/atlas.hpp"
#include "gsc/dataset.hpp"
#include "gsc/errors.hpp"
#include "gsc/features.hpp"
#include "gsc/fkt.hpp"
#include "gsc/gft.hpp"
#include "gsc/graph.hpp"
#include "gsc/log.hpp"
#include "gsc/rng.hpp"
#include "gsc/spectra.hpp"
#include "gsc/stats.hpp"
#include "gsc/tree.hpp"

namespace gsc {

enum class Method { Ours, Gft, Sfm };

inline Method parse_method(const std::string& s) {
    if (s == "ours") return Method::Ours;
    if (s == "gft") return Method::Gft;
    if (s == "sfm") return Method::Sfm;
    throw DataError("unknown method: '" + s + "' (expected ours, gft, or sfm)");
}

// One experiment: a method, its model-capacity knobs, and the evaluation
// protocol (repeated random splits or leave-one-out).
struct ExperimentConfig {
    Method method = Method::Ours;
    GraphSpec graph;               // basis source for ours/gft
    Banding banding = Banding::PerMode;  // gft baseline features
    int m = 3;                     // dominant dimensions per class (FKT methods)
    bool mAll = false;             // m = r-1
    double testFraction = 0.05;
    bool useLoocv = false;
    int nTrials = 10;
    std::uint64_t seed = 0;
    std::vector<int> tuningGrid = {2, 5, 10, 15, 20};
    int innerFolds = 5;
    bool stratified = false;  // stratified test sampling; off by default
    int threads = 1;

    std::string m_string() const { return mAll ? "all" : std::to_string(m); }

    std::string descriptor() const {
        switch (method) {
            case Method::Ours:
                return "ours(" + graph.to_string() + ", m=" + m_string() + ")";
            case Method::Gft:
                return "gft(" + graph.to_string() + ", " + banding_name(banding) + ")";
            case Method::Sfm:
                return "sfm(m=" + m_string() + ")";
        }
        return "?";
    }
};

struct MethodComparison {
    std::string method;
    double pValue = 1.0;
};

struct EvalReport {
    std::string method;    // descriptor of the evaluated method
    std::string protocol;  // split or loocv summary
    std::uint64_t seed = 0;
    std::vector<double> perTrialAccuracy;
    double mean = 0.0;
    double std = 0.0;  // sample std (n-1); 0 for a single trial
    std::vector<MethodComparison> comparisons;
    std::vector<std::string> warnings;
    nlohmann::ordered_json configEcho;
};

struct TrialSplit {
    std::vector<int> train, test;
};

// Uniform random test subsets without replacement, deterministic from the
// seed (trial t draws from its own derived stream). Not stratified unless
// requested. A trial whose training side lacks a class is resampled with a
// recorded warning, up to 100 attempts.
inline std::vector<TrialSplit> split_trials(int n, double testFraction, int nTrials,
                                            std::uint64_t seed, const std::vector<Label>& labels,
                                            bool stratified = false,
                                            std::vector<std::string>* warnings = nullptr) {
    if (!(testFraction > 0.0 && testFraction < 1.0))
        throw DataError("testFraction must lie in (0,1)");
    if (nTrials < 1) throw DataError("nTrials must be >= 1");
    if (static_cast<int>(labels.size()) != n) throw DataError("split_trials: labels size mismatch");
    const int testSize = static_cast<int>(std::floor(testFraction * n));
    if (testSize < 1 || testSize > n - 2)
        throw DataError("degenerate split sizes: test=" + std::to_string(testSize) +
                        " of n=" + std::to_string(n));

    auto note = [&](const std::string& msg) {
        log::warn(msg);
        if (warnings) warnings->push_back(msg);
    };

    std::vector<TrialSplit> splits;
    splits.reserve(static_cast<std::size_t>(nTrials));
    for (int t = 0; t < nTrials; ++t) {
        rng::Engine eng(rng::derive_seed(seed, static_cast<std::uint64_t>(t)));
        TrialSplit split;
        bool ok = false;
        for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
            split.test.clear();
            if (stratified) {
                for (Label cls : {Label::NT, Label::ASD}) {
                    std::vector<int> members;
                    for (int i = 0; i < n; ++i)
                        if (labels[static_cast<std::size_t>(i)] == cls) members.push_back(i);
                    const int take = static_cast<int>(
                        std::floor(testFraction * static_cast<double>(members.size())));
                    const auto picks =
                        rng::sample_indices(eng, members.size(), static_cast<std::size_t>(take));
                    for (std::size_t p : picks) split.test.push_back(members[p]);
                }
                if (split.test.empty() || static_cast<int>(split.test.size()) > n - 2)
                    throw DataError("degenerate stratified split");
            } else {
                const auto picks = rng::sample_indices(eng, static_cast<std::size_t>(n),
                                                       static_cast<std::size_t>(testSize));
                split.test.assign(picks.begin(), picks.end());
            }
            std::sort(split.test.begin(), split.test.end());
            split.train.clear();
            std::size_t cursor = 0;
            for (int i = 0; i < n; ++i) {
                if (cursor < split.test.size() && split.test[cursor] == i) {
                    ++cursor;
                } else {
                    split.train.push_back(i);
                }
            }
            bool sawA = false, sawN = false;
            for (int i : split.train)
                (labels[static_cast<std::size_t>(i)] == Label::ASD ? sawA : sawN) = true;
            ok = sawA && sawN;
            if (!ok)
                note("trial " + std::to_string(t) + ": training split missing a class, resampled");
        }
        if (!ok)
            throw DataError("trial " + std::to_string(t) +
                            ": training split single-class after 100 attempts");
        splits.push_back(std::move(split));
    }
    return splits;
}

// Everything fitted inside one trial; exposed to tests via TrialSink so
// leakage and equivalence properties can compare bit-for-bit.
struct FittedTrial {
    bool hasModel = false;
    FktModel model;
    std::vector<int> domA, domN;
    int minLeaf = 0;
    DecisionTree tree;
    std::vector<FeatureVector> testFeatures;
    std::vector<Label> predictions;
    double accuracy = 0.0;
};

using TrialSink = std::function<void(int trial, const FittedTrial&)>;

namespace detail {

struct PreparedData {
    std::vector<NormalizedSpectra> spectra;      // per subject
    std::vector<JointExpectancy> expectancy;     // per subject (FKT methods)
    std::vector<FeatureVector> baselineFeatures; // per subject (gft method)
    std::vector<Label> labels;
};

inline PreparedData prepare(const ExperimentConfig& config,
                            const std::vector<SubjectRecord>& subjects, const GftBasis& basis) {
    PreparedData data;
    data.spectra.reserve(subjects.size());
    data.labels.reserve(subjects.size());
    for (const SubjectRecord& subject : subjects) {
        data.spectra.push_back(
            normalize_columns(gft_coefficients(subject.X, basis), subject.id));
        data.labels.push_back(subject.label);
    }
    if (config.method == Method::Gft) {
        for (const NormalizedSpectra& y : data.spectra)
            data.baselineFeatures.push_back(gft_baseline_features(y, config.banding));
    } else {
        for (const NormalizedSpectra& y : data.spectra)
            data.expectancy.push_back(joint_expectancy(y));
    }
    return data;
}

// Fits the whole per-trial pipeline on the training indices only and scores
// the held-out indices.
inline FittedTrial fit_and_score(const ExperimentConfig& config, const PreparedData& data,
                                 const GftBasis& basis, std::uint64_t atlasChecksum,
                                 const std::vector<int>& trainIdx,
                                 const std::vector<int>& testIdx, std::uint64_t trialSeed) {
    FittedTrial out;
    const int r = data.spectra.front().r();
    std::vector<FeatureVector> trainF, testF;
    std::vector<Label> trainL;
    trainF.reserve(trainIdx.size());
    trainL.reserve(trainIdx.size());
    testF.reserve(testIdx.size());

    if (config.method == Method::Gft) {
        for (int i : trainIdx) {
            trainF.push_back(data.baselineFeatures[static_cast<std::size_t>(i)]);
            trainL.push_back(data.labels[static_cast<std::size_t>(i)]);
        }
        for (int i : testIdx) testF.push_back(data.baselineFeatures[static_cast<std::size_t>(i)]);
    } else {
        std::vector<JointExpectancy> trainS;
        trainS.reserve(trainIdx.size());
        for (int i : trainIdx) {
            trainS.push_back(data.expectancy[static_cast<std::size_t>(i)]);
            trainL.push_back(data.labels[static_cast<std::size_t>(i)]);
        }
        out.model = fit_fkt(trainS, trainL);
        out.model.graph = basis.sourceSpec;
        out.model.atlasChecksum = atlasChecksum;
        out.hasModel = true;
        const int mEff = config.mAll ? r - 1 : config.m;
        auto dims = dominant_dimensions(out.model, mEff);
        out.domA = std::move(dims.first);
        out.domN = std::move(dims.second);
        for (int i : trainIdx)
            trainF.push_back(fkt_features(
                project(data.spectra[static_cast<std::size_t>(i)], out.model), out.domA,
                out.domN));
        for (int i : testIdx)
            testF.push_back(fkt_features(
                project(data.spectra[static_cast<std::size_t>(i)], out.model), out.domA,
                out.domN));
    }

    out.minLeaf = tune_min_leaf(trainF, trainL, config.tuningGrid, config.innerFolds,
                                rng::derive_seed(trialSeed, 1));
    out.tree = fit_tree(trainF, trainL, out.minLeaf);

    int hits = 0;
    out.testFeatures = testF;
    out.predictions.reserve(testIdx.size());
    for (std::size_t k = 0; k < testIdx.size(); ++k) {
        const Label predicted = predict(out.tree, testF[k]);
        out.predictions.push_back(predicted);
        if (predicted == data.labels[static_cast<std::size_t>(testIdx[k])]) ++hits;
    }
    out.accuracy = testIdx.empty()
                       ? 0.0
                       : static_cast<double>(hits) / static_cast<double>(testIdx.size());
    return out;
}

// Runs `jobs` trial bodies on up to `threads` workers; deterministic because
// every job writes only its own slot.
inline void run_parallel(int jobs, int threads, const std::function<void(int)>& body) {
    const int workers = std::max(1, std::min(threads, jobs));
    if (workers == 1) {
        for (int t = 0; t < jobs; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::mutex errorMutex;
    std::exception_ptr firstError;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const int t = next.fetch_add(1);
                if (t >= jobs) break;
                try {
                    body(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(errorMutex);
                    if (!firstError) firstError = std::current_exception();
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (firstError) std::rethrow_exception(firstError);
}

inline nlohmann::ordered_json config_echo(const ExperimentConfig& config) {
    nlohmann::ordered_json j;
    j["method"] = config.descriptor();
    j["m"] = config.m_string();
    if (config.useLoocv) {
        j["protocol"] = "loocv";
    } else {
        j["protocol"] = "splits";
        j["testFraction"] = config.testFraction;
        j["nTrials"] = config.nTrials;
        j["stratified"] = config.stratified;
    }
    j["seed"] = config.seed;
    j["tuningGrid"] = config.tuningGrid;
    j["innerFolds"] = config.innerFolds;
    return j;
}

inline void finalize_report(EvalReport& report) {
    if (!report.perTrialAccuracy.empty()) {
        report.mean = stats::mean(report.perTrialAccuracy);
        report.std = stats::sample_std(report.perTrialAccuracy);
    }
}

}  // namespace detail

// Repeated-random-splits evaluation against a prebuilt basis. The basis is
// subject-independent; everything else (class means, whitening, projection,
// tuning, tree) is fitted on each trial's training split only.
inline EvalReport run_experiment_basis(const ExperimentConfig& config,
                                       const std::vector<SubjectRecord>& subjects,
                                       const GftBasis& basis, std::uint64_t atlasChecksum = 0,
                                       const TrialSink& sink = {}) {
    if (subjects.size() < 3) throw DataError("run_experiment: need at least 3 subjects");
    if (config.useLoocv)
        throw DataError("run_experiment: config requests loocv; call loocv() instead");
    const detail::PreparedData data = detail::prepare(config, subjects, basis);

    EvalReport report;
    report.method = config.descriptor();
    report.seed = config.seed;
    report.configEcho = detail::config_echo(config);
    report.protocol = "splits(fraction=" + io::compact(config.testFraction) +
                      ", trials=" + std::to_string(config.nTrials) + ")";

    const auto splits =
        split_trials(static_cast<int>(subjects.size()), config.testFraction, config.nTrials,
                     config.seed, data.labels, config.stratified, &report.warnings);

    report.perTrialAccuracy.assign(static_cast<std::size_t>(config.nTrials), 0.0);
    std::mutex sinkMutex;
    detail::run_parallel(config.nTrials, config.threads, [&](int t) {
        const FittedTrial fitted = detail::fit_and_score(
            config, data, basis, atlasChecksum, splits[static_cast<std::size_t>(t)].train,
            splits[static_cast<std::size_t>(t)].test,
            rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        report.perTrialAccuracy[static_cast<std::size_t>(t)] = fitted.accuracy;
        if (sink) {
            std::lock_guard<std::mutex> lock(sinkMutex);
            sink(t, fitted);
        }
    });
    detail::finalize_report(report);
    return report;
}

inline GftBasis basis_for(const ExperimentConfig& config, const RoiAtlas& atlas, int r) {
    if (config.method == Method::Sfm) return identity_basis(r);
    if (atlas.r() != r)
        throw DataError("atlas defines " + std::to_string(atlas.r()) +
                        " nodes but subjects carry " + std::to_string(r) + " rows");
    return gft_basis(build_graph(atlas, config.graph));
}

inline EvalReport run_experiment(const ExperimentConfig& config,
                                 const std::vector<SubjectRecord>& subjects,
                                 const RoiAtlas& atlas, const TrialSink& sink = {}) {
    if (subjects.empty()) throw DataError("run_experiment: empty dataset");
    const GftBasis basis = basis_for(config, atlas, subjects.front().r());
    return run_experiment_basis(config, subjects, basis, atlas_checksum(atlas), sink);
}

// Leave-one-out cross-validation: n folds, each holding out one subject.
// A fold whose training set lacks a class cannot be fitted and is skipped
// with a recorded warning; accuracy is the hit rate over evaluated folds.
inline EvalReport loocv_basis(const ExperimentConfig& config,
                              const std::vector<SubjectRecord>& subjects, const GftBasis& basis,
                              std::uint64_t atlasChecksum = 0, const TrialSink& sink = {}) {
    const int n = static_cast<int>(subjects.size());
    if (n < 3) throw DataError("loocv: need at least 3 subjects");
    const detail::PreparedData data = detail::prepare(config, subjects, basis);

    EvalReport report;
    report.method = config.descriptor();
    report.seed = config.seed;
    report.configEcho = detail::config_echo(config);
    report.protocol = "loocv(n=" + std::to_string(n) + ")";

    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    std::vector<double> foldHit(static_cast<std::size_t>(n), -1.0);  // -1 = skipped
    std::vector<std::string> foldWarning(static_cast<std::size_t>(n));
    std::mutex sinkMutex;
    detail::run_parallel(n, config.threads, [&](int f) {
        std::vector<int> train;
        train.reserve(static_cast<std::size_t>(n - 1));
        bool sawA = false, sawN = false;
        for (int i : all) {
            if (i == f) continue;
            train.push_back(i);
            (data.labels[static_cast<std::size_t>(i)] == Label::ASD ? sawA : sawN) = true;
        }
        if (!sawA || !sawN) {
            foldWarning[static_cast<std::size_t>(f)] =
                "loocv fold " + std::to_string(f) + ": training set single-class, fold skipped";
            return;
        }
        const FittedTrial fitted = detail::fit_and_score(
            config, data, basis, atlasChecksum, train, {f},
            rng::derive_seed(config.seed, static_cast<std::uint64_t>(f)));
        foldHit[static_cast<std::size_t>(f)] = fitted.accuracy;
        if (sink) {
            std::lock_guard<std::mutex> lock(sinkMutex);
            sink(f, fitted);
        }
    });
    for (int f = 0; f < n; ++f) {
        if (!foldWarning[static_cast<std::size_t>(f)].empty()) {
            log::warn(foldWarning[static_cast<std::size_t>(f)]);
            report.warnings.push_back(foldWarning[static_cast<std::size_t>(f)]);
        } else {
            report.perTrialAccuracy.push_back(foldHit[static_cast<std::size_t>(f)]);
        }
    }
    if (report.perTrialAccuracy.empty()) throw DataError("loocv: every fold was skipped");
    detail::finalize_report(report);
    return report;
}

inline EvalReport loocv(const ExperimentConfig& config, const std::vector<SubjectRecord>& subjects,
                        const RoiAtlas& atlas, const TrialSink& sink = {}) {
    if (subjects.empty()) throw DataError("loocv: empty dataset");
    const GftBasis basis = basis_for(config, atlas, subjects.front().r());
    return loocv_basis(config, subjects, basis, atlas_checksum(atlas), sink);
}

// Evaluates several methods on the same dataset with shared per-trial splits
// (identical protocol parameters enforced), then attaches pairwise
// significance: two-sided Student's t over the per-trial accuracies.
inline std::vector<EvalReport> compare_methods(const std::vector<ExperimentConfig>& configs,
                                               const std::vector<SubjectRecord>& subjects,
                                               const RoiAtlas& atlas) {
    if (configs.empty()) throw DataError("compare_methods: no configs");
    for (const ExperimentConfig& c : configs) {
        if (c.seed != configs.front().seed || c.nTrials != configs.front().nTrials ||
            c.testFraction != configs.front().testFraction ||
            c.useLoocv != configs.front().useLoocv || c.stratified != configs.front().stratified)
            throw DataError("compare_methods: protocol parameters must match across methods");
    }
    std::vector<EvalReport> reports;
    reports.reserve(configs.size());
    for (const ExperimentConfig& c : configs) {
        reports.push_back(c.useLoocv ? loocv(c, subjects, atlas)
                                     : run_experiment(c, subjects, atlas));
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
        for (std::size_t j = 0; j < reports.size(); ++j) {
            if (i == j) continue;
            if (reports[i].perTrialAccuracy.size() < 2 || reports[j].perTrialAccuracy.size() < 2)
                continue;
            reports[i].comparisons.push_back(
                {reports[j].method,
                 stats::t_test(reports[i].perTrialAccuracy, reports[j].perTrialAccuracy)});
        }
    }
    return reports;
}

}  // namespace gsc
