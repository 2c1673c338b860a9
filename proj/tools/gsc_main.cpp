// Command-line front end: graph construction, cohort filtering, model
// fitting, evaluation, reporting, and synthetic dataset generation.
//
// Exit codes: 0 success, 1 usage error, 2 data/numerical error.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsc/gsc.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonPaths {
    std::string atlas, cohort, timeseries, configPath;
};

// Flag overrides land in the Config so one resolution order holds
// everywhere: CLI flag > config file > built-in default.
gsc::Config load_config(const std::string& path) {
    return path.empty() ? gsc::Config() : gsc::Config::load(path);
}

std::string require_path(const gsc::Config& cfg, const std::string& flagValue,
                         const std::string& key) {
    if (!flagValue.empty()) return flagValue;
    const std::string fromConfig = cfg.get_string(key, "");
    if (fromConfig.empty())
        throw gsc::DataError("missing required input: pass --" + key + " or set `" + key +
                             "` in the config file");
    return fromConfig;
}

gsc::ExperimentConfig experiment_config(const gsc::Config& cfg) {
    gsc::ExperimentConfig ec;
    ec.method = gsc::parse_method(cfg.get_string("method", "ours"));
    ec.graph = gsc::parse_graph_spec(
        cfg.get_string("graph", "knn"), static_cast<int>(cfg.get_long("K", 2)),
        static_cast<std::uint64_t>(cfg.get_long("graph.seed", 0)));
    ec.banding = gsc::parse_banding(cfg.get_string("banding", "perMode"));
    const std::string m = cfg.get_string("m", "3");
    if (m == "all") {
        ec.mAll = true;
    } else {
        ec.m = static_cast<int>(gsc::io::parse_long(m, "config key 'm'"));
    }
    ec.testFraction = cfg.get_double("test.fraction", 0.05);
    ec.useLoocv = cfg.get_bool("loocv", false);
    ec.nTrials = static_cast<int>(cfg.get_long("trials", 10));
    ec.seed = static_cast<std::uint64_t>(cfg.get_long("seed", 0));
    std::vector<int> grid;
    for (long v : cfg.get_long_list("tuning.grid", {2, 5, 10, 15, 20}))
        grid.push_back(static_cast<int>(v));
    ec.tuningGrid = grid;
    ec.innerFolds = static_cast<int>(cfg.get_long("tuning.folds", 5));
    ec.stratified = cfg.get_bool("stratified", false);
    ec.threads = static_cast<int>(cfg.get_long("threads", 1));
    return ec;
}

std::vector<double> matrix_row_major(const Eigen::MatrixXd& m) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
    return out;
}

int cmd_build_graph(const std::string& atlasPath, const std::string& kind, int K,
                    std::uint64_t graphSeed, const std::string& outDir) {
    const gsc::RoiAtlas atlas = gsc::load_atlas(atlasPath);
    const gsc::GraphSpec spec = gsc::parse_graph_spec(kind, K, graphSeed);
    const gsc::BrainGraph graph = gsc::build_graph(atlas, spec);
    const gsc::GftBasis basis = gsc::gft_basis(graph);

    ordered_json gj;
    gj["format"] = "brain-graph";
    gj["version"] = 1;
    gj["kind"] = gsc::graph_kind_name(spec.kind);
    gj["K"] = spec.K;
    gj["seed"] = spec.seed;
    gj["r"] = graph.r();
    gj["adjacencyRowMajor"] = matrix_row_major(graph.adjacency);
    gsc::io::atomic_write(fs::path(outDir) / "graph.json", gj.dump(2) + "\n");

    ordered_json bj;
    bj["format"] = "gft-basis";
    bj["version"] = 1;
    bj["graphKind"] = gsc::graph_kind_name(spec.kind);
    bj["r"] = basis.r();
    std::vector<double> ev(basis.eigenvalues.data(),
                           basis.eigenvalues.data() + basis.eigenvalues.size());
    bj["eigenvalues"] = ev;
    bj["VRowMajor"] = matrix_row_major(basis.V);
    gsc::io::atomic_write(fs::path(outDir) / "basis.json", bj.dump(2) + "\n");

    std::cout << "wrote " << (fs::path(outDir) / "graph.json").string() << " and "
              << (fs::path(outDir) / "basis.json").string() << "\n";
    return 0;
}

gsc::PhenotypeColumnMap column_map_from_config(const std::string& path) {
    gsc::PhenotypeColumnMap map;
    if (path.empty()) return map;
    const gsc::Config cfg = gsc::Config::load(path);
    map.id = cfg.get_string("col.id", map.id);
    map.dx = cfg.get_string("col.dx", map.dx);
    map.age = cfg.get_string("col.age", map.age);
    map.eye = cfg.get_string("col.eye", map.eye);
    map.fd = cfg.get_string("col.fd", map.fd);
    map.site = cfg.get_string("col.site", map.site);
    map.dxAsd = cfg.get_long("dx.asd", map.dxAsd);
    map.dxNt = cfg.get_long("dx.nt", map.dxNt);
    map.eyeOpen = cfg.get_long("eye.open", map.eyeOpen);
    return map;
}

int cmd_filter(const std::string& phenotypes, const std::string& columnMap, bool eyesOpen,
               std::optional<double> maxAge, std::optional<double> minAge,
               std::optional<double> maxFd, const std::string& outPath) {
    const auto records = gsc::parse_phenotypes(phenotypes, column_map_from_config(columnMap));
    gsc::FilterCriteria criteria;
    criteria.requireEyesOpen = eyesOpen;
    criteria.maxAge = maxAge;
    criteria.minAge = minAge;
    criteria.maxFd = maxFd;
    const auto ids = gsc::filter_subjects(records, criteria);

    std::vector<gsc::CohortEntry> cohort;
    int nAsd = 0;
    for (const std::string& id : ids) {
        for (const gsc::PhenotypeRecord& rec : records) {
            if (rec.id == id) {
                cohort.push_back({rec.id, rec.diagnosis});
                if (rec.diagnosis == gsc::Label::ASD) ++nAsd;
                break;
            }
        }
    }
    gsc::io::atomic_write(outPath, gsc::cohort_to_text(cohort));
    std::cout << "kept " << cohort.size() << " subjects (" << nAsd << " ASD, "
              << cohort.size() - static_cast<std::size_t>(nAsd) << " NT) -> " << outPath << "\n";
    for (const std::string& w : gsc::log::drain_warnings()) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_fit(const gsc::Config& cfg, const CommonPaths& paths, const std::string& outModel,
            const std::string& outTree, bool dumpTree) {
    const gsc::ExperimentConfig ec = experiment_config(cfg);
    if (ec.method == gsc::Method::Gft)
        throw gsc::DataError("fit requires a projection method (ours or sfm)");
    const gsc::RoiAtlas atlas = gsc::load_atlas(require_path(cfg, paths.atlas, "atlas"));
    const auto cohort = gsc::load_cohort(require_path(cfg, paths.cohort, "cohort"));
    const auto subjects = gsc::load_dataset(cohort, require_path(cfg, paths.timeseries, "timeseries"),
                                            atlas.r());

    const gsc::GftBasis basis = gsc::basis_for(ec, atlas, subjects.front().r());
    std::vector<gsc::NormalizedSpectra> spectra;
    std::vector<gsc::JointExpectancy> expectancy;
    std::vector<gsc::Label> labels;
    for (const gsc::SubjectRecord& s : subjects) {
        spectra.push_back(gsc::normalize_columns(gsc::gft_coefficients(s.X, basis), s.id));
        expectancy.push_back(gsc::joint_expectancy(spectra.back()));
        labels.push_back(s.label);
    }
    gsc::FktModel model = gsc::fit_fkt(expectancy, labels);
    model.graph = basis.sourceSpec;
    model.atlasChecksum = gsc::atlas_checksum(atlas);

    const int mEff = ec.mAll ? model.r - 1 : ec.m;
    const auto dims = gsc::dominant_dimensions(model, mEff);
    std::vector<gsc::FeatureVector> features;
    for (const gsc::NormalizedSpectra& y : spectra)
        features.push_back(gsc::fkt_features(gsc::project(y, model), dims.first, dims.second));
    const int minLeaf = gsc::tune_min_leaf(features, labels, ec.tuningGrid, ec.innerFolds,
                                           gsc::rng::derive_seed(ec.seed, 1));
    const gsc::DecisionTree tree = gsc::fit_tree(features, labels, minLeaf);

    gsc::io::atomic_write(outModel, gsc::model_to_string(model));
    std::cout << "wrote " << outModel << " (minLeaf=" << minLeaf << ")\n";
    if (!outTree.empty()) {
        gsc::io::atomic_write(outTree, gsc::tree_to_json(tree).dump(2) + "\n");
        std::cout << "wrote " << outTree << "\n";
    }
    if (dumpTree) std::cout << gsc::tree_to_text(tree);
    for (const std::string& w : gsc::log::drain_warnings()) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_evaluate(const gsc::Config& cfg, const CommonPaths& paths,
                 const std::vector<std::string>& methodNames, const std::string& outPath,
                 const std::string& tsvPath) {
    const gsc::RoiAtlas atlas = gsc::load_atlas(require_path(cfg, paths.atlas, "atlas"));
    const auto cohort = gsc::load_cohort(require_path(cfg, paths.cohort, "cohort"));
    const auto subjects = gsc::load_dataset(cohort, require_path(cfg, paths.timeseries, "timeseries"),
                                            atlas.r());

    std::vector<gsc::ExperimentConfig> configs;
    for (const std::string& name : methodNames) {
        gsc::ExperimentConfig ec = experiment_config(cfg);
        ec.method = gsc::parse_method(name);
        configs.push_back(ec);
    }
    const std::vector<gsc::EvalReport> reports = gsc::compare_methods(configs, subjects, atlas);

    std::string payload;
    if (reports.size() == 1) {
        payload = gsc::report_to_string(reports.front());
    } else {
        ordered_json j;
        j["format"] = "eval-report-set";
        j["version"] = 1;
        ordered_json arr = ordered_json::array();
        for (const gsc::EvalReport& r : reports) arr.push_back(gsc::report_to_json(r));
        j["reports"] = std::move(arr);
        payload = j.dump(2) + "\n";
    }
    gsc::io::atomic_write(outPath, payload);
    std::cout << "wrote " << outPath << "\n";
    if (!tsvPath.empty()) {
        gsc::io::atomic_write(tsvPath, gsc::reports_to_tsv(reports));
        std::cout << "wrote " << tsvPath << "\n";
    }
    for (const gsc::EvalReport& r : reports) {
        std::cout << r.method << ": mean=" << gsc::io::dec17(r.mean)
                  << " std=" << gsc::io::dec17(r.std) << "\n";
    }
    for (const std::string& w : gsc::log::drain_warnings()) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_report(const std::string& modelPath, const std::string& atlasPath, const std::string& m,
               double multiplier, const std::vector<int>& nodeModes, const std::string& outDir) {
    const gsc::FktModel model = gsc::model_from_string(gsc::io::read_file(modelPath));
    const gsc::RoiAtlas atlas = gsc::load_atlas(atlasPath);
    if (gsc::atlas_checksum(atlas) != model.atlasChecksum)
        throw gsc::DataError("atlas checksum mismatch: the model was fitted against a different atlas");

    const int mEff = (m == "all") ? model.r - 1
                                  : static_cast<int>(gsc::io::parse_long(m, "--m"));
    const auto dims = gsc::dominant_dimensions(model, mEff);
    const gsc::ModeReport report =
        gsc::export_mode_report(model, dims.first, dims.second, multiplier);
    gsc::io::atomic_write(fs::path(outDir) / "mode_report.json",
                          gsc::mode_report_to_json(report).dump(2) + "\n");
    std::cout << "wrote " << (fs::path(outDir) / "mode_report.json").string() << "\n";

    const gsc::GftBasis basis = model.graph.kind == gsc::GraphKind::Identity
                                    ? gsc::identity_basis(model.r)
                                    : gsc::gft_basis(gsc::build_graph(atlas, model.graph));
    std::set<int> modes(nodeModes.begin(), nodeModes.end());
    if (modes.empty()) {
        for (const gsc::ModeReportRow& row : report.rows)
            modes.insert(row.flaggedModes.begin(), row.flaggedModes.end());
    }
    for (int mode : modes) {
        const fs::path nodePath = fs::path(outDir) / ("mode_" + std::to_string(mode) + ".node");
        gsc::export_node_file(atlas, basis, mode, nodePath);
        std::cout << "wrote " << nodePath.string() << "\n";
    }
    return 0;
}

int cmd_synth(const std::string& outDir, int r, int n, int T, double alphaA, double noise,
              std::uint64_t seed, const std::string& planted, int modeA, int modeN,
              double strength, const std::string& graphKind, int K) {
    // Synthetic line atlas: nodes 10 mm apart on the x axis.
    gsc::RoiAtlas atlas;
    for (int i = 0; i < r; ++i) {
        gsc::Roi roi;
        roi.index = i + 1;
        roi.name = "node" + std::to_string(i + 1);
        roi.coord = Eigen::Vector3d(10.0 * i, 0.0, 0.0);
        atlas.rois.push_back(roi);
    }
    const gsc::GraphSpec spec = gsc::parse_graph_spec(graphKind, K, 0);
    const gsc::GftBasis basis = spec.kind == gsc::GraphKind::Identity
                                    ? gsc::identity_basis(r)
                                    : gsc::gft_basis(gsc::build_graph(atlas, spec));

    gsc::SyntheticSpec sspec;
    sspec.r = r;
    sspec.nSubjects = n;
    sspec.T = T;
    sspec.alphaA = alphaA;
    sspec.noise = noise;
    sspec.seed = seed;
    const int effModeA = modeA > 0 ? modeA : std::max(2, r / 4 + 1);
    const int effModeN = modeN > 0 ? modeN : std::min(r, (3 * r) / 4 + 1);
    double effStrength = strength;
    if (planted == "strong") {
        if (effStrength <= 0.0) effStrength = 5.0;
    } else if (planted == "weak") {
        if (effStrength <= 0.0) effStrength = 1.5;
    } else if (planted == "none") {
        effStrength = 0.0;
    } else {
        throw gsc::DataError("unknown --planted value: '" + planted +
                             "' (expected strong, weak, or none)");
    }
    if (effStrength > 0.0) {
        sspec.templateA = gsc::rank1_template(r, effModeA, effStrength);
        sspec.templateN = gsc::rank1_template(r, effModeN, effStrength);
        if (sspec.noise <= 0.0) sspec.noise = 1.0;
    } else {
        sspec.templateA = Eigen::MatrixXd::Zero(r, r);
        sspec.templateN = Eigen::MatrixXd::Zero(r, r);
        if (sspec.noise <= 0.0) sspec.noise = 1.0;
    }

    const auto subjects = gsc::generate_synthetic(sspec, basis);

    gsc::io::atomic_write(fs::path(outDir) / "atlas.txt", gsc::atlas_canonical_text(atlas));
    std::vector<gsc::CohortEntry> cohort;
    for (const gsc::SubjectRecord& s : subjects) cohort.push_back({s.id, s.label});
    gsc::io::atomic_write(fs::path(outDir) / "cohort.txt", gsc::cohort_to_text(cohort));
    for (const gsc::SubjectRecord& s : subjects)
        gsc::io::atomic_write(fs::path(outDir) / "ts" / (s.id + ".txt"),
                              gsc::timeseries_to_text(s.X));

    ordered_json echo;
    echo["format"] = "synthetic-spec";
    echo["version"] = 1;
    echo["r"] = r;
    echo["n"] = n;
    echo["T"] = T;
    echo["alphaA"] = alphaA;
    echo["noise"] = sspec.noise;
    echo["seed"] = seed;
    echo["planted"] = planted;
    echo["modeA"] = effModeA;
    echo["modeN"] = effModeN;
    echo["strength"] = effStrength;
    echo["graph"] = gsc::graph_kind_name(spec.kind);
    echo["K"] = K;
    gsc::io::atomic_write(fs::path(outDir) / "spec.json", echo.dump(2) + "\n");
    std::cout << "wrote " << n << " subjects to " << outDir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-spectral two-class classification pipeline"};
    app.require_subcommand(1);

    // --- build-graph ---
    auto* build = app.add_subcommand("build-graph", "Build a graph and its spectral basis");
    std::string bAtlas, bKind = "knn", bOut = ".";
    int bK = 2;
    std::uint64_t bSeed = 0;
    build->add_option("--atlas", bAtlas, "Atlas file")->required();
    build->add_option("--graph", bKind, "Graph kind: knn|wfc|uc|randwfc|identity");
    build->add_option("--K", bK, "Neighbor count for knn");
    build->add_option("--graph-seed", bSeed, "Seed for randwfc");
    build->add_option("--out", bOut, "Output directory");

    // --- filter ---
    auto* filter = app.add_subcommand("filter", "Filter a phenotype table into a cohort file");
    std::string fPheno, fMap, fOut = "cohort.txt";
    bool fEyes = false;
    double fMaxAge = -1.0, fMinAge = -1.0, fMaxFd = -1.0;
    filter->add_option("--phenotypes", fPheno, "Phenotype CSV")->required();
    filter->add_option("--column-map", fMap, "Column-map config file");
    filter->add_flag("--eyes-open", fEyes, "Require eyes-open acquisition");
    filter->add_option("--max-age", fMaxAge, "Keep age strictly below this");
    filter->add_option("--min-age", fMinAge, "Keep age strictly above this");
    filter->add_option("--max-fd", fMaxFd, "Keep mean framewise displacement strictly below this");
    filter->add_option("--out", fOut, "Cohort output file");

    // --- shared data/config flags for fit & evaluate ---
    auto addCommon = [](CLI::App* sub, CommonPaths& paths) {
        sub->add_option("--atlas", paths.atlas, "Atlas file");
        sub->add_option("--cohort", paths.cohort, "Cohort file (`id label` lines)");
        sub->add_option("--timeseries", paths.timeseries, "Directory with <id>.txt time-series");
        sub->add_option("--config", paths.configPath, "Config file (key = value)");
    };
    struct Overrides {
        std::string method, m, graph, graphK, banding, testFraction, trials, seed, graphSeed,
            threads, grid, folds;
        bool loocv = false, stratified = false;
    };
    auto addOverrides = [](CLI::App* sub, Overrides& ov) {
        sub->add_option("--method", ov.method, "ours|gft|sfm");
        sub->add_option("--m", ov.m, "Dominant dimensions per class, or 'all'");
        sub->add_option("--graph", ov.graph, "Graph kind: knn|wfc|uc|randwfc|identity");
        sub->add_option("--K", ov.graphK, "Neighbor count for knn")->type_name("INT");
        sub->add_option("--graph-seed", ov.graphSeed, "Seed for randwfc");
        sub->add_option("--banding", ov.banding, "perMode|threeBands");
        sub->add_option("--test-fraction", ov.testFraction, "Held-out fraction per trial");
        sub->add_option("--trials", ov.trials, "Number of random-split trials");
        sub->add_option("--seed", ov.seed, "Master seed");
        sub->add_option("--threads", ov.threads, "Worker threads for trials");
        sub->add_option("--tuning-grid", ov.grid, "Comma list of leaf sizes");
        sub->add_option("--tuning-folds", ov.folds, "Inner CV folds");
        sub->add_flag("--loocv", ov.loocv, "Leave-one-out protocol");
        sub->add_flag("--stratified", ov.stratified, "Stratified test sampling");
    };

    // --- fit ---
    auto* fit = app.add_subcommand("fit", "Fit a projection model and tree on a full cohort");
    CommonPaths fitPaths;
    Overrides fitOv;
    std::string fitOutModel = "model.json", fitOutTree;
    bool fitDump = false;
    addCommon(fit, fitPaths);
    addOverrides(fit, fitOv);
    fit->add_option("--out", fitOutModel, "Model JSON output");
    fit->add_option("--tree-out", fitOutTree, "Tree JSON output");
    fit->add_flag("--dump-tree", fitDump, "Print an indented text rendering of the tree");

    // --- evaluate ---
    auto* eval = app.add_subcommand("evaluate", "Run a split-trial or LOOCV evaluation");
    CommonPaths evalPaths;
    Overrides evalOv;
    std::string evalMethods, evalOut = "report.json", evalTsv;
    addCommon(eval, evalPaths);
    addOverrides(eval, evalOv);
    eval->add_option("--methods", evalMethods, "Comma list of methods sharing the same splits");
    eval->add_option("--out", evalOut, "Report JSON output");
    eval->add_option("--tsv", evalTsv, "Optional TSV summary output");

    // --- report ---
    auto* rep = app.add_subcommand("report", "Export discriminative-mode report and node files");
    std::string repModel, repAtlas, repM = "3", repOut = ".";
    double repMultiplier = 2.5;
    std::vector<int> repModes;
    rep->add_option("--model", repModel, "Model JSON")->required();
    rep->add_option("--atlas", repAtlas, "Atlas file")->required();
    rep->add_option("--m", repM, "Dominant dimensions per class, or 'all'");
    rep->add_option("--multiplier", repMultiplier, "Flagging multiplier");
    rep->add_option("--node-modes", repModes, "Explicit mode indices for node files");
    rep->add_option("--out", repOut, "Output directory");

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "Generate a synthetic planted dataset");
    std::string sOut = "synth", sPlanted = "strong", sGraph = "knn";
    int sR = 20, sN = 200, sT = 100, sModeA = 0, sModeN = 0, sK = 2;
    double sAlpha = 0.5, sNoise = 1.0, sStrength = 0.0;
    std::uint64_t sSeed = 0;
    synth->add_option("--out", sOut, "Output directory");
    synth->add_option("--r", sR, "Number of graph nodes");
    synth->add_option("--n", sN, "Number of subjects");
    synth->add_option("--T", sT, "Time-points per subject");
    synth->add_option("--alphaA", sAlpha, "ASD fraction");
    synth->add_option("--noise", sNoise, "Isotropic noise level");
    synth->add_option("--seed", sSeed, "Generator seed");
    synth->add_option("--planted", sPlanted, "strong|weak|none");
    synth->add_option("--modeA", sModeA, "Planted mode for class ASD (1-based)");
    synth->add_option("--modeN", sModeN, "Planted mode for class NT (1-based)");
    synth->add_option("--strength", sStrength, "Planted signal strength (std)");
    synth->add_option("--graph", sGraph, "Generation-basis graph kind");
    synth->add_option("--K", sK, "Neighbor count for knn");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (build->parsed()) return cmd_build_graph(bAtlas, bKind, bK, bSeed, bOut);
        if (filter->parsed()) {
            return cmd_filter(fPheno, fMap, fEyes,
                              fMaxAge >= 0 ? std::optional<double>(fMaxAge) : std::nullopt,
                              fMinAge >= 0 ? std::optional<double>(fMinAge) : std::nullopt,
                              fMaxFd >= 0 ? std::optional<double>(fMaxFd) : std::nullopt, fOut);
        }
        auto applyOverrides = [](gsc::Config& cfg, const Overrides& ov, const CLI::App* sub) {
            if (!ov.method.empty()) cfg.set("method", ov.method);
            if (!ov.m.empty()) cfg.set("m", ov.m);
            if (!ov.graph.empty()) cfg.set("graph", ov.graph);
            if (!ov.graphK.empty()) cfg.set("K", ov.graphK);
            if (!ov.graphSeed.empty()) cfg.set("graph.seed", ov.graphSeed);
            if (!ov.banding.empty()) cfg.set("banding", ov.banding);
            if (!ov.testFraction.empty()) cfg.set("test.fraction", ov.testFraction);
            if (!ov.trials.empty()) cfg.set("trials", ov.trials);
            if (!ov.seed.empty()) cfg.set("seed", ov.seed);
            if (!ov.threads.empty()) cfg.set("threads", ov.threads);
            if (!ov.grid.empty()) cfg.set("tuning.grid", ov.grid);
            if (!ov.folds.empty()) cfg.set("tuning.folds", ov.folds);
            if (sub->count("--loocv") > 0) cfg.set("loocv", "true");
            if (sub->count("--stratified") > 0) cfg.set("stratified", "true");
        };
        if (fit->parsed()) {
            gsc::Config cfg = load_config(fitPaths.configPath);
            applyOverrides(cfg, fitOv, fit);
            return cmd_fit(cfg, fitPaths, fitOutModel, fitOutTree, fitDump);
        }
        if (eval->parsed()) {
            gsc::Config cfg = load_config(evalPaths.configPath);
            applyOverrides(cfg, evalOv, eval);
            std::vector<std::string> methods;
            const std::string joined =
                !evalMethods.empty() ? evalMethods : cfg.get_string("methods", "");
            if (!joined.empty()) {
                for (const std::string& part : gsc::io::split(joined, ','))
                    if (!gsc::io::trim(part).empty()) methods.push_back(gsc::io::trim(part));
            } else {
                methods.push_back(cfg.get_string("method", "ours"));
            }
            return cmd_evaluate(cfg, evalPaths, methods, evalOut, evalTsv);
        }
        if (rep->parsed())
            return cmd_report(repModel, repAtlas, repM, repMultiplier, repModes, repOut);
        if (synth->parsed())
            return cmd_synth(sOut, sR, sN, sT, sAlpha, sNoise, sSeed, sPlanted, sModeA, sModeN,
                             sStrength, sGraph, sK);
    } catch (const gsc::GscError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
