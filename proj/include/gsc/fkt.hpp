#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gsc/errors.hpp"
#include "gsc/gft.hpp"
#include "gsc/io.hpp"
#include "gsc/spectra.hpp"

namespace gsc {

// Whitening of the global mean joint expectancy S̄. S̄ always has exactly one
// zero eigenvalue (the constant direction is annihilated by column
// centering); the whitening maps the remaining spectrum to 1 and leaves the
// null direction untouched, so Q₂·S̄·Q₂ᵀ = diag[0, I_{r−1}].
struct WhiteningTransform {
    Eigen::MatrixXd Q;       // eigenvectors of S̄, ascending eigenvalues
    Eigen::VectorXd lambda;  // eigenvalues, ascending
    Eigen::VectorXd gamma;   // diag scaling: gamma[0]=1, gamma[i]=lambda[i]^(-1/2)
    Eigen::MatrixXd Q2;      // gamma.asDiagonal() * Qᵀ

    int r() const { return static_cast<int>(Q.rows()); }
};

inline WhiteningTransform whiten(const JointExpectancy& globalMean) {
    const int r = globalMean.r();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(globalMean.S);
    if (solver.info() != Eigen::Success)
        throw NumericalError("whitening eigendecomposition failed to converge");
    WhiteningTransform w;
    w.lambda = solver.eigenvalues();
    w.Q = solver.eigenvectors();
    canonicalize_columns(w.Q);

    const double lambdaMax = w.lambda(r - 1);
    const double tau = 1e-9 * lambdaMax;
    int below = 0;
    for (int i = 0; i < r; ++i)
        if (w.lambda(i) < tau) ++below;
    if (below != 1)
        throw NumericalError("rank deficiency != 1 (" + std::to_string(below) +
                             " eigenvalues below tau=" + io::dec17(tau) +
                             "); disconnected graph or degenerate data");

    w.gamma.resize(r);
    w.gamma(0) = 1.0;
    for (int i = 1; i < r; ++i) w.gamma(i) = 1.0 / std::sqrt(w.lambda(i));
    w.Q2 = w.gamma.asDiagonal() * w.Q.transpose();
    return w;
}

// Discriminative projection model. Dimensions are 1-based in every public
// index list; dimension 1 is the null (non-discriminative) dimension. For
// every other dimension k, α_A·lambdaA[k] + α_N·lambdaN[k] = 1: a dimension
// where one class carries high energy is exactly the other class's low-energy
// dimension. Dimensions are ordered by descending lambdaA, so dimension 2 is
// the most ASD-dominant.
struct FktModel {
    int r = 0;
    Eigen::MatrixXd P;        // r×r projection; rows act as spectral filters
    Eigen::VectorXd lambdaA;  // per-dimension class-A energy
    Eigen::VectorXd lambdaN;  // per-dimension class-N energy
    double alphaA = 0.0;
    GraphSpec graph;                  // provenance of the basis
    std::uint64_t atlasChecksum = 0;  // ties the model to its atlas

    static constexpr int kNullDim = 1;
};

inline FktModel simultaneous_diagonalize(const WhiteningTransform& w,
                                         const JointExpectancy& meanA,
                                         const JointExpectancy& meanN, double alphaA) {
    const int r = w.r();
    if (meanA.r() != r || meanN.r() != r)
        throw DataError("simultaneous_diagonalize: dimension mismatch");
    if (!(alphaA > 0.0 && alphaA < 1.0))
        throw DataError("simultaneous_diagonalize: alphaA must lie in (0,1)");

    const Eigen::MatrixXd whitenedA = w.Q2 * meanA.S * w.Q2.transpose();

    // The null direction of S̄ is also a null direction of each psd class
    // mean, so the first row/column must vanish up to eigensolver leakage.
    double firstResidual = 0.0;
    for (int i = 0; i < r; ++i)
        firstResidual = std::max(firstResidual,
                                 std::max(std::abs(whitenedA(0, i)), std::abs(whitenedA(i, 0))));
    if (firstResidual > 1e-6)
        throw NumericalError("whitened class matrix leaks into the null direction (residual " +
                             io::dec17(firstResidual) + ")");

    Eigen::MatrixXd block = whitenedA.bottomRightCorner(r - 1, r - 1);
    block = ((block + block.transpose()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
    if (solver.info() != Eigen::Success)
        throw NumericalError("block eigendecomposition failed to converge");

    // Order block dimensions by descending class-A energy; ties keep the
    // lower original index.
    std::vector<int> order(static_cast<std::size_t>(r - 1));
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return ev(x) > ev(y); });

    Eigen::MatrixXd tPrime(r - 1, r - 1);
    for (int j = 0; j < r - 1; ++j) tPrime.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
    canonicalize_columns(tPrime);

    Eigen::MatrixXd t2 = Eigen::MatrixXd::Zero(r, r);
    t2(0, 0) = 1.0;
    t2.bottomRightCorner(r - 1, r - 1) = tPrime;

    FktModel model;
    model.r = r;
    model.alphaA = alphaA;
    model.P = t2.transpose() * w.Q2;

    const Eigen::MatrixXd diagA = t2.transpose() * whitenedA * t2;
    const Eigen::MatrixXd whitenedN = w.Q2 * meanN.S * w.Q2.transpose();
    const Eigen::MatrixXd diagN = t2.transpose() * whitenedN * t2;

    auto offDiagMax = [r](const Eigen::MatrixXd& m) {
        double worst = 0.0;
        for (int i = 1; i < r; ++i)
            for (int j = 1; j < r; ++j)
                if (i != j) worst = std::max(worst, std::abs(m(i, j)));
        return worst;
    };
    const double offA = offDiagMax(diagA);
    const double offN = offDiagMax(diagN);
    if (offA > 1e-6 || offN > 1e-6)
        throw NumericalError("class matrices were not simultaneously diagonalized (residuals " +
                             io::dec17(offA) + ", " + io::dec17(offN) +
                             "); inputs likely violate the mixture identity");

    model.lambdaA = diagA.diagonal();
    model.lambdaN = diagN.diagonal();
    for (int k = 1; k < r; ++k) {
        const double sum = alphaA * model.lambdaA(k) + (1.0 - alphaA) * model.lambdaN(k);
        if (std::abs(sum - 1.0) > 1e-8)
            throw NumericalError("complementarity violated at dimension " + std::to_string(k + 1) +
                                 ": " + io::dec17(sum));
    }
    return model;
}

// Convenience: class means → whitening → simultaneous diagonalization.
inline FktModel fit_fkt(const std::vector<JointExpectancy>& subjects,
                        const std::vector<Label>& labels) {
    const ClassMeans means = class_means(subjects, labels);
    const WhiteningTransform w = whiten(means.global);
    return simultaneous_diagonalize(w, means.meanA, means.meanN, means.alphaA);
}

// The m most class-dominant dimensions per class (1-based), ranked by the
// class-scaled energy α·λ, descending; ties prefer the lower dimension index;
// the null dimension is excluded. The two lists may overlap for large m.
inline std::pair<std::vector<int>, std::vector<int>> dominant_dimensions(const FktModel& model,
                                                                         int m) {
    const int r = model.r;
    if (m < 1 || m > r - 1)
        throw DataError("dominant_dimensions: m must lie in [1, r-1], got " + std::to_string(m));
    auto rank = [&](const Eigen::VectorXd& lambda, double scale) {
        std::vector<int> dims(static_cast<std::size_t>(r - 1));
        std::iota(dims.begin(), dims.end(), 1);  // 0-based rows 1..r-1
        std::stable_sort(dims.begin(), dims.end(), [&](int x, int y) {
            return scale * lambda(x) > scale * lambda(y);
        });
        dims.resize(static_cast<std::size_t>(m));
        for (int& d : dims) d += 1;  // to 1-based dimension indices
        return dims;
    };
    return {rank(model.lambdaA, model.alphaA), rank(model.lambdaN, 1.0 - model.alphaA)};
}

// --- model serialization -------------------------------------------------

inline nlohmann::ordered_json model_to_json(const FktModel& model) {
    nlohmann::ordered_json j;
    j["format"] = "fkt-model";
    j["version"] = 1;
    j["r"] = model.r;
    j["alphaA"] = model.alphaA;
    j["graph"] = {{"kind", graph_kind_name(model.graph.kind)},
                  {"K", model.graph.K},
                  {"seed", model.graph.seed}};
    j["atlasChecksum"] = "fnv1a64:" + io::to_hex(model.atlasChecksum);
    auto vec = [](const Eigen::VectorXd& v) {
        std::vector<double> out(v.data(), v.data() + v.size());
        return out;
    };
    j["lambdaA"] = vec(model.lambdaA);
    j["lambdaN"] = vec(model.lambdaN);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < model.r; ++i) {
        std::vector<double> row(static_cast<std::size_t>(model.r));
        for (int k = 0; k < model.r; ++k) row[static_cast<std::size_t>(k)] = model.P(i, k);
        rows.push_back(row);
    }
    j["P"] = std::move(rows);
    return j;
}

inline FktModel model_from_json(const nlohmann::ordered_json& j) {
    try {
        if (j.at("format") != "fkt-model") throw ParseError("not a model document");
        FktModel model;
        model.r = j.at("r").get<int>();
        model.alphaA = j.at("alphaA").get<double>();
        const auto& graph = j.at("graph");
        model.graph.kind = graph_kind_from_name(graph.at("kind").get<std::string>());
        model.graph.K = graph.at("K").get<int>();
        model.graph.seed = graph.at("seed").get<std::uint64_t>();
        const std::string checksum = j.at("atlasChecksum").get<std::string>();
        const std::string prefix = "fnv1a64:";
        if (checksum.rfind(prefix, 0) != 0) throw ParseError("bad checksum encoding");
        model.atlasChecksum = std::stoull(checksum.substr(prefix.size()), nullptr, 16);
        const auto lambdaA = j.at("lambdaA").get<std::vector<double>>();
        const auto lambdaN = j.at("lambdaN").get<std::vector<double>>();
        if (static_cast<int>(lambdaA.size()) != model.r ||
            static_cast<int>(lambdaN.size()) != model.r)
            throw ParseError("lambda length mismatch");
        model.lambdaA = Eigen::Map<const Eigen::VectorXd>(lambdaA.data(), model.r);
        model.lambdaN = Eigen::Map<const Eigen::VectorXd>(lambdaN.data(), model.r);
        model.P.resize(model.r, model.r);
        const auto& rows = j.at("P");
        if (static_cast<int>(rows.size()) != model.r) throw ParseError("P row count mismatch");
        for (int i = 0; i < model.r; ++i) {
            const auto row = rows.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
            if (static_cast<int>(row.size()) != model.r) throw ParseError("P column count mismatch");
            for (int k = 0; k < model.r; ++k) model.P(i, k) = row[static_cast<std::size_t>(k)];
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed model JSON: ") + e.what());
    }
}

inline std::string model_to_string(const FktModel& model) {
    return model_to_json(model).dump(2) + "\n";
}

inline FktModel model_from_string(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed model JSON: ") + e.what());
    }
    return model_from_json(j);
}

}  // namespace gsc
