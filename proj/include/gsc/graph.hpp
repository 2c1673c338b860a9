#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gsc/atlas.hpp"
#include "gsc/errors.hpp"
#include "gsc/rng.hpp"

namespace gsc {

enum class GraphKind { Knn, Wfc, Uc, RandWfc, Identity };

inline std::string graph_kind_name(GraphKind kind) {
    switch (kind) {
        case GraphKind::Knn: return "knn";
        case GraphKind::Wfc: return "wfc";
        case GraphKind::Uc: return "uc";
        case GraphKind::RandWfc: return "randwfc";
        case GraphKind::Identity: return "identity";
    }
    return "?";
}

inline GraphKind graph_kind_from_name(const std::string& name) {
    if (name == "knn") return GraphKind::Knn;
    if (name == "wfc") return GraphKind::Wfc;
    if (name == "uc") return GraphKind::Uc;
    if (name == "randwfc") return GraphKind::RandWfc;
    if (name == "identity") return GraphKind::Identity;
    throw DataError("unknown graph kind: '" + name + "'");
}

// Graph construction request. K applies to knn; seed to randwfc. Identity is
// the degenerate "no graph" kind whose basis is the identity matrix (used by
// the spatial-only baseline and equivalence tests).
struct GraphSpec {
    GraphKind kind = GraphKind::Knn;
    int K = 2;
    std::uint64_t seed = 0;

    std::string to_string() const {
        switch (kind) {
            case GraphKind::Knn: return "knn(K=" + std::to_string(K) + ")";
            case GraphKind::Wfc: return "wfc";
            case GraphKind::Uc: return "uc";
            case GraphKind::RandWfc: return "randwfc(seed=" + std::to_string(seed) + ")";
            case GraphKind::Identity: return "identity";
        }
        return "?";
    }
};

inline GraphSpec parse_graph_spec(const std::string& kind, int K, std::uint64_t seed) {
    GraphSpec spec;
    spec.kind = graph_kind_from_name(kind);
    spec.K = K;
    spec.seed = seed;
    return spec;
}

// Symmetric nonnegative adjacency with zero diagonal, weights in 1/mm.
struct BrainGraph {
    Eigen::MatrixXd adjacency;
    GraphSpec spec;

    int r() const { return static_cast<int>(adjacency.rows()); }
};

namespace detail {

inline Eigen::MatrixXd pairwise_distances(const RoiAtlas& atlas) {
    const int r = atlas.r();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(r, r);
    for (int i = 0; i < r; ++i) {
        for (int j = i + 1; j < r; ++j) {
            const double dist =
                (atlas.rois[static_cast<std::size_t>(i)].coord -
                 atlas.rois[static_cast<std::size_t>(j)].coord).norm();
            if (dist == 0.0)
                throw DataError("zero distance between ROI " + std::to_string(i + 1) +
                                " and " + std::to_string(j + 1));
            d(i, j) = d(j, i) = dist;
        }
    }
    return d;
}

}  // namespace detail

// knn: directed K-nearest by Euclidean centroid distance with weight 1/d,
// then symmetrized as (A + Aᵀ)/2. Neighbor ties break by lower index.
// wfc/uc: complete graph with weights 1/d or 1. randwfc: complete graph with
// symmetric uniform(0,1) weights drawn from the seed, fixed per experiment.
inline BrainGraph build_graph(const RoiAtlas& atlas, const GraphSpec& spec) {
    const int r = atlas.r();
    detail::validate_atlas(atlas);
    BrainGraph graph;
    graph.spec = spec;
    graph.adjacency = Eigen::MatrixXd::Zero(r, r);
    Eigen::MatrixXd& a = graph.adjacency;

    switch (spec.kind) {
        case GraphKind::Identity:
            break;
        case GraphKind::Uc: {
            a.setOnes();
            a.diagonal().setZero();
            break;
        }
        case GraphKind::Wfc: {
            const Eigen::MatrixXd d = detail::pairwise_distances(atlas);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    if (i != j) a(i, j) = 1.0 / d(i, j);
            break;
        }
        case GraphKind::RandWfc: {
            rng::Engine eng(spec.seed);
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j)
                    a(i, j) = a(j, i) = eng.uniform01();
            break;
        }
        case GraphKind::Knn: {
            if (spec.K < 1 || spec.K > r - 1)
                throw DataError("knn K must lie in [1, r-1], got " + std::to_string(spec.K));
            const Eigen::MatrixXd d = detail::pairwise_distances(atlas);
            Eigen::MatrixXd directed = Eigen::MatrixXd::Zero(r, r);
            std::vector<int> order(static_cast<std::size_t>(r));
            for (int u = 0; u < r; ++u) {
                int count = 0;
                for (int v = 0; v < r; ++v)
                    if (v != u) order[static_cast<std::size_t>(count++)] = v;
                std::sort(order.begin(), order.begin() + count, [&](int x, int y) {
                    if (d(u, x) != d(u, y)) return d(u, x) < d(u, y);
                    return x < y;
                });
                for (int k = 0; k < spec.K; ++k) {
                    const int v = order[static_cast<std::size_t>(k)];
                    directed(u, v) = 1.0 / d(u, v);
                }
            }
            a = (directed + directed.transpose()) / 2.0;
            break;
        }
    }
    return graph;
}

inline Eigen::MatrixXd laplacian(const BrainGraph& graph) {
    const Eigen::VectorXd degree = graph.adjacency.rowwise().sum();
    Eigen::MatrixXd lap = -graph.adjacency;
    lap.diagonal() += degree;
    return lap;
}

// Connected components of the nonzero-weight graph; used for diagnostics.
inline std::vector<int> connected_components(const BrainGraph& graph) {
    const int r = graph.r();
    std::vector<int> comp(static_cast<std::size_t>(r), -1);
    int nComp = 0;
    std::vector<int> stack;
    for (int s = 0; s < r; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        stack.push_back(s);
        comp[static_cast<std::size_t>(s)] = nComp;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < r; ++v) {
                if (graph.adjacency(u, v) != 0.0 && comp[static_cast<std::size_t>(v)] < 0) {
                    comp[static_cast<std::size_t>(v)] = nComp;
                    stack.push_back(v);
                }
            }
        }
        ++nComp;
    }
    return comp;
}

}  // namespace gsc
