#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gsc/errors.hpp"
#include "gsc/gft.hpp"
#include "gsc/log.hpp"

namespace gsc {

enum class Label { NT = 0, ASD = 1 };

inline std::string label_name(Label l) { return l == Label::ASD ? "ASD" : "NT"; }

inline Label parse_label(const std::string& s) {
    if (s == "ASD") return Label::ASD;
    if (s == "NT") return Label::NT;
    throw ParseError("unknown label: '" + s + "' (expected ASD or NT)");
}

// Spectral coefficients of every time-point: X̂ = Vᵀ·X.
inline Eigen::MatrixXd gft_coefficients(const Eigen::MatrixXd& X, const GftBasis& basis) {
    if (X.rows() != basis.V.rows())
        throw DataError("gft_coefficients: signal has " + std::to_string(X.rows()) +
                        " rows but basis expects " + std::to_string(basis.V.rows()));
    return basis.V.transpose() * X;
}

// Per-subject normalized spectra: every retained column has zero mean across
// the r modes and unit L2 norm. `dropped` counts degenerate columns removed.
struct NormalizedSpectra {
    Eigen::MatrixXd Y;
    int dropped = 0;

    int r() const { return static_cast<int>(Y.rows()); }
    int T() const { return static_cast<int>(Y.cols()); }
};

// Center each column by its mean over modes, scale to unit L2 norm. Columns
// whose centered norm is exactly zero carry no spectral-variance information
// and are dropped with a recorded warning (effective T shrinks).
inline NormalizedSpectra normalize_columns(const Eigen::MatrixXd& Xhat,
                                           const std::string& subjectId = "") {
    const int r = static_cast<int>(Xhat.rows());
    const int T = static_cast<int>(Xhat.cols());
    if (r < 2) throw DataError("normalize_columns: need at least 2 rows");
    NormalizedSpectra out;
    out.Y.resize(r, T);
    int kept = 0;
    for (int t = 0; t < T; ++t) {
        Eigen::VectorXd col = Xhat.col(t);
        col.array() -= col.mean();
        const double nrm = col.stableNorm();
        if (nrm == 0.0) {
            ++out.dropped;
            continue;
        }
        out.Y.col(kept++) = col / nrm;
    }
    if (kept == 0) {
        throw DataError("subject has no informative time-points" +
                        (subjectId.empty() ? std::string() : " (" + subjectId + ")"));
    }
    if (out.dropped > 0) {
        log::warn("normalize_columns: dropped " + std::to_string(out.dropped) +
                  " degenerate column(s)" +
                  (subjectId.empty() ? std::string() : " for subject " + subjectId));
    }
    out.Y.conservativeResize(r, kept);
    return out;
}

enum class ExpectancyKind { PerSubject, ClassMeanAsd, ClassMeanNt, GlobalMean };

// Trace-normalized second-moment matrix S = YYᵀ / tr(YYᵀ). Symmetric, psd,
// trace 1; class and global means of such matrices annihilate the constant
// vector because every column of Y is centered.
struct JointExpectancy {
    Eigen::MatrixXd S;
    ExpectancyKind kind = ExpectancyKind::PerSubject;
    double alpha = 0.0;  // class-A fraction; meaningful for GlobalMean

    int r() const { return static_cast<int>(S.rows()); }
};

inline JointExpectancy joint_expectancy(const NormalizedSpectra& spectra) {
    const Eigen::MatrixXd gram = spectra.Y * spectra.Y.transpose();
    const double trace = gram.trace();
    if (trace == 0.0) throw DataError("joint_expectancy: zero trace");
    JointExpectancy out;
    out.S = gram / trace;
    out.kind = ExpectancyKind::PerSubject;
    return out;
}

struct ClassMeans {
    JointExpectancy global;  // S̄, alpha = n_A/n_T
    JointExpectancy meanA;   // S̄ over ASD subjects
    JointExpectancy meanN;   // S̄ over NT subjects
    double alphaA = 0.0;
};

// Arithmetic means of already trace-normalized per-subject matrices, in fixed
// left-to-right order (bitwise reproducibility). The mixture identity
// S̄ = α_A·S̄^A + (1−α_A)·S̄^N holds by construction.
inline ClassMeans class_means(const std::vector<JointExpectancy>& subjects,
                              const std::vector<Label>& labels) {
    if (subjects.size() != labels.size())
        throw DataError("class_means: subjects/labels size mismatch");
    if (subjects.empty()) throw DataError("class_means: empty input");
    const int r = subjects.front().r();
    Eigen::MatrixXd sumA = Eigen::MatrixXd::Zero(r, r);
    Eigen::MatrixXd sumN = Eigen::MatrixXd::Zero(r, r);
    std::size_t nA = 0, nN = 0;
    for (std::size_t i = 0; i < subjects.size(); ++i) {
        if (subjects[i].r() != r) throw DataError("class_means: inconsistent matrix sizes");
        if (labels[i] == Label::ASD) {
            sumA += subjects[i].S;
            ++nA;
        } else {
            sumN += subjects[i].S;
            ++nN;
        }
    }
    if (nA == 0 || nN == 0) throw DataError("both classes required");
    ClassMeans out;
    out.alphaA = static_cast<double>(nA) / static_cast<double>(nA + nN);
    out.meanA.S = sumA / static_cast<double>(nA);
    out.meanA.kind = ExpectancyKind::ClassMeanAsd;
    out.meanN.S = sumN / static_cast<double>(nN);
    out.meanN.kind = ExpectancyKind::ClassMeanNt;
    out.global.S = out.alphaA * out.meanA.S + (1.0 - out.alphaA) * out.meanN.S;
    out.global.kind = ExpectancyKind::GlobalMean;
    out.global.alpha = out.alphaA;
    return out;
}

}  // namespace gsc
