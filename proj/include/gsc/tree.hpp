#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsc/errors.hpp"
#include "gsc/features.hpp"
#include "gsc/rng.hpp"
#include "gsc/spectra.hpp"

namespace gsc {

// Binary numeric split node or leaf. Prediction descends with
// `value <= threshold` going left.
struct TreeNode {
    int feature = -1;          // split feature index; -1 for leaves
    double threshold = 0.0;
    int left = -1, right = -1;  // child node ids; -1 for leaves
    Label label = Label::NT;    // leaf label (majority, ties -> NT)
    int countNT = 0, countASD = 0;  // training instances reaching a leaf

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // node 0 is the root
    int minLeaf = 1;
    std::vector<std::string> schema;
};

namespace detail {

inline double entropy2(int a, int b) {
    const int n = a + b;
    double h = 0.0;
    for (int c : {a, b}) {
        if (c > 0 && c < n) {
            const double p = static_cast<double>(c) / static_cast<double>(n);
            h -= p * std::log2(p);
        }
    }
    return h;
}

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gainRatio = 0.0;
};

// Greedy gain-ratio split search: candidate thresholds are midpoints between
// consecutive distinct sorted values; feasible splits leave >= minLeaf
// instances on each side; requires strictly positive information gain. Ties
// on gain ratio keep the lower feature index, then the lower threshold
// (features scanned ascending, thresholds ascending, strict improvement).
inline SplitChoice best_split(const std::vector<FeatureVector>& features,
                              const std::vector<Label>& labels, const std::vector<int>& idx,
                              int minLeaf) {
    const int n = static_cast<int>(idx.size());
    int totalASD = 0;
    for (int i : idx)
        if (labels[static_cast<std::size_t>(i)] == Label::ASD) ++totalASD;
    const int totalNT = n - totalASD;
    const double parentEntropy = entropy2(totalNT, totalASD);

    SplitChoice best;
    const int d = static_cast<int>(features[static_cast<std::size_t>(idx[0])].values.size());
    std::vector<int> sorted(idx);
    for (int j = 0; j < d; ++j) {
        std::sort(sorted.begin(), sorted.end(), [&](int x, int y) {
            return features[static_cast<std::size_t>(x)].values[static_cast<std::size_t>(j)] <
                   features[static_cast<std::size_t>(y)].values[static_cast<std::size_t>(j)];
        });
        int leftASD = 0;
        for (int pos = 0; pos + 1 < n; ++pos) {
            const int i = sorted[static_cast<std::size_t>(pos)];
            if (labels[static_cast<std::size_t>(i)] == Label::ASD) ++leftASD;
            const double v =
                features[static_cast<std::size_t>(i)].values[static_cast<std::size_t>(j)];
            const double vNext = features[static_cast<std::size_t>(
                sorted[static_cast<std::size_t>(pos + 1)])].values[static_cast<std::size_t>(j)];
            if (v == vNext) continue;
            const int nl = pos + 1;
            const int nr = n - nl;
            if (nl < minLeaf || nr < minLeaf) continue;
            const int leftNT = nl - leftASD;
            const int rightASD = totalASD - leftASD;
            const int rightNT = nr - rightASD;
            const double wl = static_cast<double>(nl) / static_cast<double>(n);
            const double wr = static_cast<double>(nr) / static_cast<double>(n);
            const double gain =
                parentEntropy - wl * entropy2(leftNT, leftASD) - wr * entropy2(rightNT, rightASD);
            if (!(gain > 0.0)) continue;
            const double splitInfo = entropy2(nl, nr);
            const double gainRatio = gain / splitInfo;
            if (!best.found || gainRatio > best.gainRatio) {
                best.found = true;
                best.feature = j;
                best.threshold = (v + vNext) / 2.0;
                best.gainRatio = gainRatio;
            }
        }
    }
    return best;
}

inline int build_node(DecisionTree& tree, const std::vector<FeatureVector>& features,
                      const std::vector<Label>& labels, const std::vector<int>& idx) {
    int countASD = 0;
    for (int i : idx)
        if (labels[static_cast<std::size_t>(i)] == Label::ASD) ++countASD;
    const int countNT = static_cast<int>(idx.size()) - countASD;

    auto makeLeaf = [&]() {
        TreeNode leaf;
        leaf.countNT = countNT;
        leaf.countASD = countASD;
        leaf.label = countASD > countNT ? Label::ASD : Label::NT;
        tree.nodes.push_back(leaf);
        return static_cast<int>(tree.nodes.size()) - 1;
    };

    if (countASD == 0 || countNT == 0) return makeLeaf();
    const SplitChoice split = best_split(features, labels, idx, tree.minLeaf);
    if (!split.found) return makeLeaf();

    std::vector<int> leftIdx, rightIdx;
    for (int i : idx) {
        const double v = features[static_cast<std::size_t>(i)]
                             .values[static_cast<std::size_t>(split.feature)];
        (v <= split.threshold ? leftIdx : rightIdx).push_back(i);
    }
    TreeNode node;
    node.feature = split.feature;
    node.threshold = split.threshold;
    tree.nodes.push_back(node);
    const int self = static_cast<int>(tree.nodes.size()) - 1;
    const int left = build_node(tree, features, labels, leftIdx);
    const int right = build_node(tree, features, labels, rightIdx);
    tree.nodes[static_cast<std::size_t>(self)].left = left;
    tree.nodes[static_cast<std::size_t>(self)].right = right;
    return self;
}

}  // namespace detail

// Greedy top-down induction; recursion stops on purity, on infeasible splits
// (a child would drop below minLeaf), or when no split has positive gain.
inline DecisionTree fit_tree(const std::vector<FeatureVector>& features,
                             const std::vector<Label>& labels, int minLeaf) {
    if (minLeaf < 1) throw DataError("fit_tree: minLeaf must be >= 1");
    if (features.size() != labels.size()) throw DataError("fit_tree: features/labels mismatch");
    if (features.size() < 2) throw DataError("fit_tree: need at least 2 instances");
    for (const FeatureVector& fv : features) {
        if (fv.schema != features.front().schema)
            throw DataError("fit_tree: inconsistent feature schemas");
        for (double v : fv.values)
            if (!std::isfinite(v)) throw DataError("fit_tree: non-finite feature value");
    }
    DecisionTree tree;
    tree.minLeaf = minLeaf;
    tree.schema = features.front().schema;
    std::vector<int> idx(features.size());
    std::iota(idx.begin(), idx.end(), 0);
    detail::build_node(tree, features, labels, idx);
    return tree;
}

inline Label predict(const DecisionTree& tree, const FeatureVector& fv) {
    if (fv.schema != tree.schema) throw DataError("predict: feature schema mismatch");
    int at = 0;
    while (!tree.nodes[static_cast<std::size_t>(at)].is_leaf()) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(at)];
        const double v = fv.values[static_cast<std::size_t>(node.feature)];
        at = v <= node.threshold ? node.left : node.right;
    }
    return tree.nodes[static_cast<std::size_t>(at)].label;
}

// Leaf-size selection by stratified k-fold cross-validation over a grid;
// returns the value with the highest mean per-fold validation accuracy, ties
// preferring the smaller value. A fold whose training part is single-class
// still fits (the tree degenerates to a leaf); an entirely single-class
// dataset errors.
inline int tune_min_leaf(const std::vector<FeatureVector>& features,
                         const std::vector<Label>& labels, std::vector<int> grid, int folds,
                         std::uint64_t seed) {
    if (grid.empty()) throw DataError("tune_min_leaf: empty grid");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() == 1) return grid.front();
    if (folds < 2) throw DataError("tune_min_leaf: folds must be >= 2");
    const int n = static_cast<int>(features.size());
    bool sawASD = false, sawNT = false;
    for (Label l : labels) (l == Label::ASD ? sawASD : sawNT) = true;
    if (!sawASD || !sawNT) throw DataError("both classes required");

    // Stratified fold assignment: per class, shuffle then deal round-robin.
    std::vector<int> fold(static_cast<std::size_t>(n), 0);
    rng::Engine eng(seed);
    for (Label cls : {Label::NT, Label::ASD}) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (labels[static_cast<std::size_t>(i)] == cls) members.push_back(i);
        eng.shuffle(members);
        for (std::size_t k = 0; k < members.size(); ++k)
            fold[static_cast<std::size_t>(members[k])] = static_cast<int>(k) % folds;
    }

    int bestValue = grid.front();
    double bestScore = -1.0;
    for (int value : grid) {
        double scoreSum = 0.0;
        int scored = 0;
        for (int f = 0; f < folds; ++f) {
            std::vector<FeatureVector> trainF;
            std::vector<Label> trainL;
            std::vector<int> valIdx;
            for (int i = 0; i < n; ++i) {
                if (fold[static_cast<std::size_t>(i)] == f) {
                    valIdx.push_back(i);
                } else {
                    trainF.push_back(features[static_cast<std::size_t>(i)]);
                    trainL.push_back(labels[static_cast<std::size_t>(i)]);
                }
            }
            if (valIdx.empty() || trainF.size() < 2) continue;
            const DecisionTree tree = fit_tree(trainF, trainL, value);
            int hits = 0;
            for (int i : valIdx)
                if (predict(tree, features[static_cast<std::size_t>(i)]) ==
                    labels[static_cast<std::size_t>(i)])
                    ++hits;
            scoreSum += static_cast<double>(hits) / static_cast<double>(valIdx.size());
            ++scored;
        }
        const double score = scored > 0 ? scoreSum / scored : 0.0;
        if (score > bestScore) {
            bestScore = score;
            bestValue = value;
        }
    }
    return bestValue;
}

// --- serialization --------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json node_to_json(const DecisionTree& tree, int at) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(at)];
    nlohmann::ordered_json j;
    if (node.is_leaf()) {
        j["type"] = "leaf";
        j["label"] = label_name(node.label);
        j["counts"] = {{"NT", node.countNT}, {"ASD", node.countASD}};
        return j;
    }
    j["type"] = "split";
    j["feature"] = tree.schema[static_cast<std::size_t>(node.feature)];
    j["featureIndex"] = node.feature;
    j["threshold"] = node.threshold;
    j["left"] = node_to_json(tree, node.left);
    j["right"] = node_to_json(tree, node.right);
    return j;
}

inline int node_from_json(const nlohmann::ordered_json& j, DecisionTree& tree) {
    TreeNode node;
    if (j.at("type") == "leaf") {
        node.label = parse_label(j.at("label").get<std::string>());
        node.countNT = j.at("counts").at("NT").get<int>();
        node.countASD = j.at("counts").at("ASD").get<int>();
        tree.nodes.push_back(node);
        return static_cast<int>(tree.nodes.size()) - 1;
    }
    node.feature = j.at("featureIndex").get<int>();
    node.threshold = j.at("threshold").get<double>();
    tree.nodes.push_back(node);
    const int self = static_cast<int>(tree.nodes.size()) - 1;
    const int left = node_from_json(j.at("left"), tree);
    const int right = node_from_json(j.at("right"), tree);
    tree.nodes[static_cast<std::size_t>(self)].left = left;
    tree.nodes[static_cast<std::size_t>(self)].right = right;
    return self;
}

inline void render_node(const DecisionTree& tree, int at, int depth, std::string& out) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(at)];
    auto leafSuffix = [](const TreeNode& leaf) {
        const int total = leaf.countNT + leaf.countASD;
        const int wrong = leaf.label == Label::ASD ? leaf.countNT : leaf.countASD;
        std::string s = label_name(leaf.label) + " (" + std::to_string(total);
        if (wrong > 0) s += "/" + std::to_string(wrong);
        return s + ")";
    };
    if (node.is_leaf()) {
        out += leafSuffix(node) + "\n";
        return;
    }
    const std::string indent = [&] {
        std::string s;
        for (int k = 0; k < depth; ++k) s += "|   ";
        return s;
    }();
    const std::string name = tree.schema[static_cast<std::size_t>(node.feature)];
    for (int side = 0; side < 2; ++side) {
        const int child = side == 0 ? node.left : node.right;
        const std::string op = side == 0 ? " <= " : " > ";
        const TreeNode& c = tree.nodes[static_cast<std::size_t>(child)];
        out += indent + name + op + io::dec17(node.threshold);
        if (c.is_leaf()) {
            out += ": " + leafSuffix(c) + "\n";
        } else {
            out += "\n";
            render_node(tree, child, depth + 1, out);
        }
    }
}

}  // namespace detail

inline nlohmann::ordered_json tree_to_json(const DecisionTree& tree) {
    nlohmann::ordered_json j;
    j["format"] = "decision-tree";
    j["version"] = 1;
    j["minLeaf"] = tree.minLeaf;
    j["schema"] = tree.schema;
    j["root"] = detail::node_to_json(tree, 0);
    return j;
}

inline DecisionTree tree_from_json(const nlohmann::ordered_json& j) {
    try {
        if (j.at("format") != "decision-tree") throw ParseError("not a tree document");
        DecisionTree tree;
        tree.minLeaf = j.at("minLeaf").get<int>();
        tree.schema = j.at("schema").get<std::vector<std::string>>();
        detail::node_from_json(j.at("root"), tree);
        return tree;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed tree JSON: ") + e.what());
    }
}

// Indented text rendering in the classic decision-tree listing style.
inline std::string tree_to_text(const DecisionTree& tree) {
    std::string out;
    detail::render_node(tree, 0, 0, out);
    return out;
}

}  // namespace gsc
