#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "gsc/io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct RunResult {
    int exitCode = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "gsc_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args) {
    const char* bin = std::getenv("GSC_BIN");
    REQUIRE(bin != nullptr);
    const fs::path outFile = work_dir() / "stdout.txt";
    const fs::path errFile = work_dir() / "stderr.txt";
    const std::string cmd = std::string(bin) + " " + args + " > " + outFile.string() + " 2> " +
                            errFile.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exitCode = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = fs::exists(outFile) ? gsc::io::read_file(outFile) : "";
    r.err = fs::exists(errFile) ? gsc::io::read_file(errFile) : "";
    return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("usage errors exit with code 1") {
    CHECK(run("").exitCode == 1);
    CHECK(run("no-such-command").exitCode == 1);
    CHECK(run("evaluate --bogus-flag 1").exitCode == 1);
    CHECK(run("build-graph").exitCode == 1);  // missing required --atlas
}

TEST_CASE("help exits cleanly") {
    const RunResult r = run("--help");
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("build-graph") != std::string::npos);
}

TEST_CASE("data errors exit with code 2") {
    const fs::path bad = work_dir() / "bad_atlas.txt";
    gsc::io::atomic_write(bad, "1 a 0 0 0\n1 b 1 0 0\n");
    const RunResult r = run("build-graph --atlas " + q(bad));
    CHECK(r.exitCode == 2);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("synth then evaluate round-trips through files") {
    const fs::path synthDir = work_dir() / "synth";
    const RunResult gen = run("synth --out " + q(synthDir) +
                              " --r 8 --n 24 --T 40 --alphaA 0.5 --seed 11 --planted strong");
    REQUIRE(gen.exitCode == 0);
    CHECK(fs::exists(synthDir / "atlas.txt"));
    CHECK(fs::exists(synthDir / "cohort.txt"));
    CHECK(fs::exists(synthDir / "spec.json"));
    CHECK(fs::exists(synthDir / "ts" / "sub0001.txt"));
    CHECK(fs::exists(synthDir / "ts" / "sub0024.txt"));

    const fs::path report = work_dir() / "report.json";
    const fs::path tsv = work_dir() / "report.tsv";
    const RunResult ev = run("evaluate --atlas " + q(synthDir / "atlas.txt") + " --cohort " +
                             q(synthDir / "cohort.txt") + " --timeseries " + q(synthDir / "ts") +
                             " --m 2 --trials 3 --test-fraction 0.1 --seed 5 --out " + q(report) +
                             " --tsv " + q(tsv));
    REQUIRE(ev.exitCode == 0);
    REQUIRE(fs::exists(report));
    const ordered_json j = ordered_json::parse(gsc::io::read_file(report));
    CHECK(j.at("format") == "eval-report");
    CHECK(j.at("perTrialAccuracy").size() == 3);
    CHECK(j.at("mean").get<double>() >= 0.0);
    const std::string tsvText = gsc::io::read_file(tsv);
    CHECK(tsvText.find("method\tprotocol\tm\tmean\tstd\tcomparisons") == 0);

    // Same invocation -> byte-identical report.
    const fs::path report2 = work_dir() / "report2.json";
    const RunResult ev2 = run("evaluate --atlas " + q(synthDir / "atlas.txt") + " --cohort " +
                              q(synthDir / "cohort.txt") + " --timeseries " + q(synthDir / "ts") +
                              " --m 2 --trials 3 --test-fraction 0.1 --seed 5 --out " + q(report2));
    REQUIRE(ev2.exitCode == 0);
    CHECK(gsc::io::read_file(report) == gsc::io::read_file(report2));
}

TEST_CASE("multi-method comparison emits a report set") {
    const fs::path synthDir = work_dir() / "synth";  // reuse from previous case
    REQUIRE(fs::exists(synthDir / "atlas.txt"));
    const fs::path report = work_dir() / "compare.json";
    const RunResult ev = run("evaluate --atlas " + q(synthDir / "atlas.txt") + " --cohort " +
                             q(synthDir / "cohort.txt") + " --timeseries " + q(synthDir / "ts") +
                             " --methods ours,gft,sfm --m 2 --trials 3 --test-fraction 0.1"
                             " --seed 5 --out " + q(report));
    REQUIRE(ev.exitCode == 0);
    const ordered_json j = ordered_json::parse(gsc::io::read_file(report));
    CHECK(j.at("format") == "eval-report-set");
    REQUIRE(j.at("reports").size() == 3);
    CHECK(j.at("reports")[0].at("comparisons").size() == 2);
}

TEST_CASE("fit writes a model and dumps the tree") {
    const fs::path synthDir = work_dir() / "synth";
    const fs::path model = work_dir() / "model.json";
    const fs::path tree = work_dir() / "tree.json";
    const RunResult r = run("fit --atlas " + q(synthDir / "atlas.txt") + " --cohort " +
                            q(synthDir / "cohort.txt") + " --timeseries " + q(synthDir / "ts") +
                            " --m 2 --seed 3 --out " + q(model) + " --tree-out " + q(tree) +
                            " --dump-tree");
    REQUIRE(r.exitCode == 0);
    const ordered_json mj = ordered_json::parse(gsc::io::read_file(model));
    CHECK(mj.at("format") == "fkt-model");
    CHECK(mj.at("r") == 8);
    CHECK(mj.at("graph").at("kind") == "knn");
    CHECK(mj.at("atlasChecksum").get<std::string>().rfind("fnv1a64:", 0) == 0);
    const ordered_json tj = ordered_json::parse(gsc::io::read_file(tree));
    CHECK(tj.at("format") == "decision-tree");
    CHECK(r.out.find("<=") != std::string::npos);  // dumped tree text

    // gft cannot be fitted as a projection model
    const RunResult bad = run("fit --atlas " + q(synthDir / "atlas.txt") + " --cohort " +
                              q(synthDir / "cohort.txt") + " --timeseries " + q(synthDir / "ts") +
                              " --method gft --out " + q(work_dir() / "never.json"));
    CHECK(bad.exitCode == 2);
}

TEST_CASE("report exports mode summaries and node files") {
    const fs::path synthDir = work_dir() / "synth";
    const fs::path model = work_dir() / "model.json";
    REQUIRE(fs::exists(model));
    const fs::path outDir = work_dir() / "mode_report";
    const RunResult r = run("report --model " + q(model) + " --atlas " +
                            q(synthDir / "atlas.txt") + " --m 2 --node-modes 2 --out " + q(outDir));
    REQUIRE(r.exitCode == 0);
    const ordered_json j = ordered_json::parse(gsc::io::read_file(outDir / "mode_report.json"));
    CHECK(j.at("format") == "mode-report");
    CHECK(j.at("rows").size() == 4);  // 2 per class
    REQUIRE(fs::exists(outDir / "mode_2.node"));
    // Node files: x y z intensity size label, one row per region.
    const std::string node = gsc::io::read_file(outDir / "mode_2.node");
    std::size_t lines = 0;
    for (char c : node) lines += c == '\n';
    CHECK(lines == 8);

    // A different atlas must be rejected by checksum.
    const fs::path otherAtlas = work_dir() / "other_atlas.txt";
    std::string text = gsc::io::read_file(synthDir / "atlas.txt");
    text.replace(text.find("node1"), 5, "nodeX");
    gsc::io::atomic_write(otherAtlas, text);
    const RunResult bad =
        run("report --model " + q(model) + " --atlas " + q(otherAtlas) + " --out " + q(outDir));
    CHECK(bad.exitCode == 2);
    CHECK(bad.err.find("checksum") != std::string::npos);
}

TEST_CASE("build-graph writes graph and basis documents") {
    const fs::path synthDir = work_dir() / "synth";
    const fs::path outDir = work_dir() / "graph_out";
    const RunResult r =
        run("build-graph --atlas " + q(synthDir / "atlas.txt") + " --K 2 --out " + q(outDir));
    REQUIRE(r.exitCode == 0);
    const ordered_json gj = ordered_json::parse(gsc::io::read_file(outDir / "graph.json"));
    CHECK(gj.at("format") == "brain-graph");
    CHECK(gj.at("r") == 8);
    CHECK(gj.at("adjacencyRowMajor").size() == 64);
    const ordered_json bj = ordered_json::parse(gsc::io::read_file(outDir / "basis.json"));
    CHECK(bj.at("format") == "gft-basis");
    CHECK(bj.at("eigenvalues").size() == 8);
    CHECK(bj.at("eigenvalues")[0].get<double>() < 1e-10);
}

TEST_CASE("filter reduces a phenotype table to a cohort") {
    const fs::path csv = work_dir() / "pheno.csv";
    gsc::io::atomic_write(csv,
                          "SUB_ID,DX_GROUP,AGE_AT_SCAN,EYE_STATUS_AT_SCAN,func_mean_fd,SITE_ID\n"
                          "s1,1,14.0,1,0.08,A\n"
                          "s2,2,15.0,1,0.30,A\n"
                          "s3,1,25.0,1,0.08,B\n"
                          "s4,2,16.0,2,0.08,B\n"
                          "s5,2,17.0,1,0.08,B\n");
    const fs::path cohort = work_dir() / "filtered.txt";
    const RunResult r = run("filter --phenotypes " + q(csv) +
                            " --eyes-open --max-age 18 --max-fd 0.2 --out " + q(cohort));
    REQUIRE(r.exitCode == 0);
    CHECK(gsc::io::read_file(cohort) == "s1 ASD\ns5 NT\n");
    CHECK(r.out.find("kept 2") != std::string::npos);
}

TEST_CASE("loocv protocol is reachable from the command line") {
    const fs::path synthDir = work_dir() / "synth_small";
    REQUIRE(run("synth --out " + q(synthDir) +
                " --r 6 --n 8 --T 30 --alphaA 0.5 --seed 2 --planted strong")
                .exitCode == 0);
    const fs::path report = work_dir() / "loocv.json";
    const RunResult r = run("evaluate --atlas " + q(synthDir / "atlas.txt") + " --cohort " +
                            q(synthDir / "cohort.txt") + " --timeseries " + q(synthDir / "ts") +
                            " --m 2 --loocv --seed 5 --out " + q(report));
    REQUIRE(r.exitCode == 0);
    const ordered_json j = ordered_json::parse(gsc::io::read_file(report));
    CHECK(j.at("protocol") == "loocv(n=8)");
    CHECK(j.at("perTrialAccuracy").size() == 8);
}

TEST_CASE("config file values are overridden by flags") {
    const fs::path synthDir = work_dir() / "synth";
    const fs::path cfg = work_dir() / "exp.cfg";
    gsc::io::atomic_write(cfg, std::string("atlas = ") + (synthDir / "atlas.txt").string() +
                                   "\ncohort = " + (synthDir / "cohort.txt").string() +
                                   "\ntimeseries = " + (synthDir / "ts").string() +
                                   "\nm = 2\ntrials = 4\ntest.fraction = 0.1\nseed = 8\n");
    const fs::path rep1 = work_dir() / "cfg_rep1.json";
    const RunResult a = run("evaluate --config " + q(cfg) + " --out " + q(rep1));
    REQUIRE(a.exitCode == 0);
    const ordered_json j1 = ordered_json::parse(gsc::io::read_file(rep1));
    CHECK(j1.at("perTrialAccuracy").size() == 4);
    CHECK(j1.at("seed") == 8);

    const fs::path rep2 = work_dir() / "cfg_rep2.json";
    const RunResult b = run("evaluate --config " + q(cfg) + " --trials 2 --out " + q(rep2));
    REQUIRE(b.exitCode == 0);
    const ordered_json j2 = ordered_json::parse(gsc::io::read_file(rep2));
    CHECK(j2.at("perTrialAccuracy").size() == 2);
}
