#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gsc/gft.hpp"
#include "gsc/graph.hpp"

using namespace gsc;

namespace {

BrainGraph path4_unit() {
    // 4-node path with unit weights, adjacency built directly.
    BrainGraph g;
    g.adjacency = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i + 1 < 4; ++i) {
        g.adjacency(i, i + 1) = 1.0;
        g.adjacency(i + 1, i) = 1.0;
    }
    return g;
}

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

}  // namespace

TEST_CASE("path-4 Laplacian spectrum matches the closed form") {
    const GftBasis basis = gft_basis(path4_unit());
    const double s2 = std::sqrt(2.0);
    REQUIRE(basis.eigenvalues.size() == 4);
    CHECK(std::abs(basis.eigenvalues(0) - 0.0) < 1e-10);
    CHECK(std::abs(basis.eigenvalues(1) - (2.0 - s2)) < 1e-10);
    CHECK(std::abs(basis.eigenvalues(2) - 2.0) < 1e-10);
    CHECK(std::abs(basis.eigenvalues(3) - (2.0 + s2)) < 1e-10);
}

TEST_CASE("basis is orthonormal with ascending frequencies") {
    const RoiAtlas atlas = line_atlas(12);
    const GftBasis basis = gft_basis(build_graph(atlas, parse_graph_spec("knn", 3, 0)));
    const Eigen::MatrixXd gram = basis.V.transpose() * basis.V;
    CHECK((gram - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i + 1 < 12; ++i) CHECK(basis.eigenvalues(i) <= basis.eigenvalues(i + 1));
}

TEST_CASE("connected graph has constant first mode") {
    const RoiAtlas atlas = line_atlas(8);
    const GftBasis basis = gft_basis(build_graph(atlas, parse_graph_spec("knn", 2, 0)));
    CHECK(std::abs(basis.eigenvalues(0)) < 1e-12);
    const double expected = 1.0 / std::sqrt(8.0);
    for (int i = 0; i < 8; ++i) CHECK(basis.V(i, 0) == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("column sign canonicalization is deterministic") {
    const RoiAtlas atlas = line_atlas(10);
    const BrainGraph g = build_graph(atlas, parse_graph_spec("knn", 2, 0));
    const GftBasis a = gft_basis(g);
    const GftBasis b = gft_basis(g);
    CHECK(a.V == b.V);
    for (int j = 0; j < 10; ++j) {
        Eigen::Index where;
        a.V.col(j).cwiseAbs().maxCoeff(&where);
        CHECK(a.V(where, j) > 0.0);
    }
}

TEST_CASE("canonicalize flips a negative-peaked column") {
    Eigen::MatrixXd m(3, 2);
    m << 1.0, -3.0, -2.0, 1.0, 0.5, 1.0;
    canonicalize_columns(m);
    CHECK(m(1, 0) == 2.0);   // column 0 peak was -2 at row 1
    CHECK(m(0, 0) == -1.0);
    CHECK(m(0, 1) == 3.0);   // column 1 peak was -3 at row 0
}

TEST_CASE("identity basis is the identity transform") {
    const GftBasis basis = identity_basis(5);
    CHECK(basis.V == Eigen::MatrixXd::Identity(5, 5));
    CHECK(basis.eigenvalues.cwiseAbs().maxCoeff() == 0.0);

    RoiAtlas atlas = line_atlas(5);
    const GftBasis viaGraph = gft_basis(build_graph(atlas, parse_graph_spec("identity", 2, 0)));
    CHECK(viaGraph.V == basis.V);
}
