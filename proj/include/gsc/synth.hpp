#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "gsc/dataset.hpp"
#include "gsc/errors.hpp"
#include "gsc/gft.hpp"
#include "gsc/rng.hpp"

namespace gsc {

// Synthetic two-class dataset description. Templates are per-class covariance
// matrices expressed in the generating basis (i.e., in mode space); each
// subject's time-points are drawn as x̂_t = C^(1/2)·g_t + noise·h_t with
// g, h standard normal, then mapped to signal space as x_t = V·x̂_t.
struct SyntheticSpec {
    int r = 10;
    int nSubjects = 20;
    int T = 50;
    double alphaA = 0.5;
    Eigen::MatrixXd templateA;  // r×r psd, mode-space covariance of class ASD
    Eigen::MatrixXd templateN;  // r×r psd, mode-space covariance of class NT
    double noise = 0.0;         // isotropic std added in mode space
    std::uint64_t seed = 0;
};

// Rank-1 template concentrating variance `strength`² on one mode (1-based).
inline Eigen::MatrixXd rank1_template(int r, int mode, double strength) {
    if (mode < 1 || mode > r) throw DataError("rank1_template: mode out of range");
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(r, r);
    c(mode - 1, mode - 1) = strength * strength;
    return c;
}

namespace detail {

// Symmetric psd square root; eigenvalues below -1e-10·max are rejected,
// small negatives are clamped to zero.
inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, const std::string& what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        ((m + m.transpose()) / 2.0).eval());
    if (solver.info() != Eigen::Success)
        throw NumericalError(what + ": eigendecomposition failed");
    Eigen::VectorXd ev = solver.eigenvalues();
    const double scale = std::max(1.0, std::abs(ev(ev.size() - 1)));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-10 * scale) throw DataError(what + ": template is not psd");
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    return solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace detail

// Deterministic from the seed: subject i draws from its own derived stream,
// so datasets are reproducible and independent of generation order.
inline std::vector<SubjectRecord> generate_synthetic(const SyntheticSpec& spec,
                                                     const GftBasis& basis) {
    if (spec.r < 2) throw DataError("generate_synthetic: r must be >= 2");
    if (basis.r() != spec.r) throw DataError("generate_synthetic: basis size mismatch");
    if (spec.T < 2) throw DataError("generate_synthetic: T must be >= 2");
    if (!(spec.alphaA > 0.0 && spec.alphaA < 1.0))
        throw DataError("generate_synthetic: alphaA must lie in (0,1)");
    if (spec.templateA.rows() != spec.r || spec.templateN.rows() != spec.r)
        throw DataError("generate_synthetic: template size mismatch");
    if (spec.noise < 0.0) throw DataError("generate_synthetic: negative noise");

    const Eigen::MatrixXd sqrtA = detail::psd_sqrt(spec.templateA, "class-A template");
    const Eigen::MatrixXd sqrtN = detail::psd_sqrt(spec.templateN, "class-N template");
    const long nA = std::llround(spec.alphaA * spec.nSubjects);
    if (nA < 1 || nA >= spec.nSubjects)
        throw DataError("generate_synthetic: alphaA leaves a class empty");

    std::vector<SubjectRecord> subjects;
    subjects.reserve(static_cast<std::size_t>(spec.nSubjects));
    for (int i = 0; i < spec.nSubjects; ++i) {
        const bool isA = i < nA;
        const Eigen::MatrixXd& sqrtC = isA ? sqrtA : sqrtN;
        rng::Engine eng(rng::derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
        Eigen::MatrixXd xhat(spec.r, spec.T);
        Eigen::VectorXd g(spec.r), h(spec.r);
        for (int t = 0; t < spec.T; ++t) {
            for (int k = 0; k < spec.r; ++k) g(k) = eng.normal();
            for (int k = 0; k < spec.r; ++k) h(k) = eng.normal();
            xhat.col(t) = sqrtC * g + spec.noise * h;
        }
        SubjectRecord subject;
        char id[16];
        std::snprintf(id, sizeof(id), "sub%04d", i + 1);
        subject.id = id;
        subject.label = isA ? Label::ASD : Label::NT;
        subject.X = basis.V * xhat;
        subjects.push_back(std::move(subject));
    }
    return subjects;
}

}  // namespace gsc
