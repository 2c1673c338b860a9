#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "gsc/errors.hpp"
#include "gsc/fkt.hpp"
#include "gsc/spectra.hpp"

namespace gsc {

// Ordered feature values with a schema naming each position. The schema is
// identical across all subjects of one experiment.
struct FeatureVector {
    std::vector<double> values;
    std::vector<std::string> schema;
};

// Population variance (divide by count) of a sequence.
inline double population_variance(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    const auto n = row.size();
    if (n == 0) throw DataError("population_variance: empty input");
    const double mean = row.mean();
    return (row.array() - mean).square().sum() / static_cast<double>(n);
}

// Z = P·Y: rows of the projection act as spectral filters on every time-point.
inline Eigen::MatrixXd project(const NormalizedSpectra& spectra, const FktModel& model) {
    if (spectra.r() != model.r)
        throw DataError("project: spectra have " + std::to_string(spectra.r()) +
                        " rows but model expects " + std::to_string(model.r));
    return model.P * spectra.Y;
}

// Log-variance features over the class-dominant dimensions, in schema order
// [ASD_dom1..m, NT_dom1..m]. Dimension lists are 1-based and must exclude the
// null dimension (dimension 1). Zero variance is floored at 1e-300 before the
// log so degenerate rows stay finite.
inline FeatureVector fkt_features(const Eigen::MatrixXd& Z, const std::vector<int>& domA,
                                  const std::vector<int>& domN) {
    if (domA.empty() || domN.empty()) throw DataError("fkt_features: empty dimension lists");
    FeatureVector fv;
    auto addDims = [&](const std::vector<int>& dims, const std::string& prefix) {
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const int dim = dims[k];
            if (dim == FktModel::kNullDim)
                throw DataError("fkt_features: null dimension is not a feature source");
            if (dim < 2 || dim > static_cast<int>(Z.rows()))
                throw DataError("fkt_features: dimension " + std::to_string(dim) +
                                " out of range");
            const double var = population_variance(Z.row(dim - 1));
            fv.values.push_back(std::log(std::max(var, 1e-300)));
            fv.schema.push_back(prefix + std::to_string(k + 1));
        }
    };
    addDims(domA, "ASD_dom");
    addDims(domN, "NT_dom");
    return fv;
}

enum class Banding { PerMode, ThreeBands };

inline Banding parse_banding(const std::string& s) {
    if (s == "perMode") return Banding::PerMode;
    if (s == "threeBands") return Banding::ThreeBands;
    throw DataError("unknown banding: '" + s + "' (expected perMode or threeBands)");
}

inline std::string banding_name(Banding b) {
    return b == Banding::PerMode ? "perMode" : "threeBands";
}

// Spectral baseline features: per-mode time variance of the normalized
// coefficients, or three contiguous frequency bands (low/middle/high thirds
// of the modes) each summarized by the variance pooled over the band's rows.
inline FeatureVector gft_baseline_features(const NormalizedSpectra& spectra, Banding banding) {
    const int r = spectra.r();
    const int T = spectra.T();
    FeatureVector fv;
    if (banding == Banding::PerMode) {
        for (int k = 0; k < r; ++k) {
            fv.values.push_back(population_variance(spectra.Y.row(k)));
            fv.schema.push_back("GFT_mode_" + std::to_string(k + 1));
        }
        return fv;
    }
    if (r < 3) throw DataError("threeBands requires r >= 3");
    const int b1 = r / 3;
    const int b2 = (2 * r) / 3;
    const int starts[3] = {0, b1, b2};
    const int stops[3] = {b1, b2, r};
    const char* names[3] = {"GFT_band_low", "GFT_band_middle", "GFT_band_high"};
    for (int band = 0; band < 3; ++band) {
        const int len = stops[band] - starts[band];
        const auto blockRows = spectra.Y.middleRows(starts[band], len);
        const double count = static_cast<double>(len) * static_cast<double>(T);
        const double mean = blockRows.sum() / count;
        const double var = (blockRows.array() - mean).square().sum() / count;
        fv.values.push_back(var);
        fv.schema.push_back(names[band]);
    }
    return fv;
}

}  // namespace gsc
