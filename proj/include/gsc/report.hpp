#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsc/atlas.hpp"
#include "gsc/errors.hpp"
#include "gsc/eval.hpp"
#include "gsc/fkt.hpp"
#include "gsc/gft.hpp"
#include "gsc/io.hpp"

namespace gsc {

// --- evaluation report serialization ---------------------------------------

inline nlohmann::ordered_json report_to_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["format"] = "eval-report";
    j["version"] = 1;
    j["method"] = report.method;
    j["protocol"] = report.protocol;
    j["seed"] = report.seed;
    j["config"] = report.configEcho;
    j["perTrialAccuracy"] = report.perTrialAccuracy;
    j["mean"] = report.mean;
    j["std"] = report.std;
    nlohmann::ordered_json comparisons = nlohmann::ordered_json::array();
    for (const MethodComparison& c : report.comparisons)
        comparisons.push_back({{"method", c.method}, {"pValue", c.pValue}});
    j["comparisons"] = std::move(comparisons);
    j["warnings"] = report.warnings;
    return j;
}

inline std::string report_to_string(const EvalReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

// Tab-separated summary, one row per method.
inline std::string reports_to_tsv(const std::vector<EvalReport>& reports) {
    std::string out = "method\tprotocol\tm\tmean\tstd\tcomparisons\n";
    for (const EvalReport& report : reports) {
        std::string comparisons;
        for (const MethodComparison& c : report.comparisons) {
            if (!comparisons.empty()) comparisons += "; ";
            comparisons += "p[vs " + c.method + "]=" + io::dec17(c.pValue);
        }
        if (comparisons.empty()) comparisons = "-";
        const std::string m =
            report.configEcho.contains("m") ? report.configEcho["m"].get<std::string>() : "-";
        out += report.method + "\t" + report.protocol + "\t" + m + "\t" + io::dec17(report.mean) +
               "\t" + io::dec17(report.std) + "\t" + comparisons + "\n";
    }
    return out;
}

// --- discriminative-mode report ---------------------------------------------

// Per selected projection row: the absolute weight each spectral mode
// contributes, with outliers flagged by the multiplier·std rule.
struct ModeReportRow {
    std::string className;  // "ASD" or "NT"
    int rank = 0;           // 1-based rank within the class's dominant list
    int dim = 0;            // 1-based projection dimension
    std::vector<double> weights;  // |P(dim-1, :)|, one per mode
    std::vector<int> flaggedModes;  // 1-based mode indices
};

struct ModeReport {
    double multiplier = 2.5;
    std::vector<ModeReportRow> rows;
};

// Flag rule: |weight − mean(row)| > multiplier·std(row), with mean/std taken
// over the row's absolute weights (population std). A constant row (std 0)
// flags nothing.
inline ModeReport export_mode_report(const FktModel& model, const std::vector<int>& domA,
                                     const std::vector<int>& domN, double multiplier = 2.5) {
    ModeReport report;
    report.multiplier = multiplier;
    const int r = model.r;
    auto addRows = [&](const std::vector<int>& dims, const std::string& className) {
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const int dim = dims[k];
            if (dim < 1 || dim > r)
                throw DataError("export_mode_report: dimension " + std::to_string(dim) +
                                " out of range");
            ModeReportRow row;
            row.className = className;
            row.rank = static_cast<int>(k) + 1;
            row.dim = dim;
            row.weights.resize(static_cast<std::size_t>(r));
            double mean = 0.0;
            for (int j = 0; j < r; ++j) {
                row.weights[static_cast<std::size_t>(j)] = std::abs(model.P(dim - 1, j));
                mean += row.weights[static_cast<std::size_t>(j)];
            }
            mean /= static_cast<double>(r);
            double var = 0.0;
            for (double w : row.weights) var += (w - mean) * (w - mean);
            const double sd = std::sqrt(var / static_cast<double>(r));
            if (sd > 0.0) {
                for (int j = 0; j < r; ++j) {
                    if (std::abs(row.weights[static_cast<std::size_t>(j)] - mean) >
                        multiplier * sd)
                        row.flaggedModes.push_back(j + 1);
                }
            }
            report.rows.push_back(std::move(row));
        }
    };
    addRows(domA, "ASD");
    addRows(domN, "NT");
    return report;
}

inline nlohmann::ordered_json mode_report_to_json(const ModeReport& report) {
    nlohmann::ordered_json j;
    j["format"] = "mode-report";
    j["version"] = 1;
    j["multiplier"] = report.multiplier;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const ModeReportRow& row : report.rows) {
        nlohmann::ordered_json rj;
        rj["class"] = row.className;
        rj["rank"] = row.rank;
        rj["dim"] = row.dim;
        rj["weights"] = row.weights;
        rj["flaggedModes"] = row.flaggedModes;
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    return j;
}

// --- node-weight file export -------------------------------------------------

// One ROI per line: `x y z intensity size label`; intensity is the chosen
// mode's eigenvector entry, size its magnitude. The substitute for 3-D
// rendering: the file feeds external viewers.
inline std::string node_file_text(const RoiAtlas& atlas, const GftBasis& basis, int mode) {
    const int r = atlas.r();
    if (basis.r() != r) throw DataError("node file: atlas/basis size mismatch");
    if (mode < 1 || mode > r) throw DataError("node file: mode out of range");
    std::string out;
    for (int i = 0; i < r; ++i) {
        const Roi& roi = atlas.rois[static_cast<std::size_t>(i)];
        const double intensity = basis.V(i, mode - 1);
        out += io::dec17(roi.coord[0]) + " " + io::dec17(roi.coord[1]) + " " +
               io::dec17(roi.coord[2]) + " " + io::dec17(intensity) + " " +
               io::dec17(std::abs(intensity)) + " " + roi.name + "\n";
    }
    return out;
}

inline void export_node_file(const RoiAtlas& atlas, const GftBasis& basis, int mode,
                             const std::filesystem::path& path) {
    io::atomic_write(path, node_file_text(atlas, basis, mode));
}

}  // namespace gsc
