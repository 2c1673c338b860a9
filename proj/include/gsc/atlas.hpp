#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gsc/errors.hpp"
#include "gsc/io.hpp"

namespace gsc {

struct Roi {
    int index = 0;  // 1-based
    std::string name;
    Eigen::Vector3d coord = Eigen::Vector3d::Zero();  // millimeters
};

// Named ROI centroids; defines the graph nodes. Indices are unique and
// contiguous 1..r, coordinates finite, no two ROIs coincident.
struct RoiAtlas {
    std::vector<Roi> rois;

    int r() const { return static_cast<int>(rois.size()); }
};

namespace detail {

inline void validate_atlas(const RoiAtlas& atlas) {
    const int r = atlas.r();
    if (r < 2) throw DataError("atlas must contain at least 2 ROIs");
    std::set<int> seen;
    for (const Roi& roi : atlas.rois) {
        if (!seen.insert(roi.index).second)
            throw ParseError("duplicate ROI index " + std::to_string(roi.index));
    }
    if (*seen.begin() != 1 || *seen.rbegin() != r)
        throw DataError("ROI indices must be contiguous 1.." + std::to_string(r));
    for (int i = 0; i < r; ++i) {
        if (atlas.rois[static_cast<std::size_t>(i)].index != i + 1)
            throw DataError("ROI at row " + std::to_string(i + 1) + " must carry index " +
                            std::to_string(i + 1));
    }
}

}  // namespace detail

// Text format: one ROI per line, `index name x y z`, '#' starts a comment.
inline RoiAtlas load_atlas(const std::filesystem::path& path) {
    std::istringstream in(io::read_file(path));
    RoiAtlas atlas;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string trimmed = io::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        const auto tokens = io::tokenize(trimmed);
        const std::string where = path.string() + ":" + std::to_string(lineNo);
        if (tokens.size() != 5)
            throw ParseError(where + ": expected 5 fields `index name x y z`, got " +
                             std::to_string(tokens.size()));
        Roi roi;
        roi.index = static_cast<int>(io::parse_long(tokens[0], where));
        roi.name = tokens[1];
        for (int k = 0; k < 3; ++k) {
            roi.coord[k] = io::parse_double(tokens[static_cast<std::size_t>(k + 2)], where);
            if (!std::isfinite(roi.coord[k]))
                throw ParseError(where + ": non-finite coordinate");
        }
        atlas.rois.push_back(std::move(roi));
    }
    detail::validate_atlas(atlas);
    return atlas;
}

// Canonical serialization; its FNV-1a64 hash ties fitted models to the atlas
// they were trained against.
inline std::string atlas_canonical_text(const RoiAtlas& atlas) {
    std::string out;
    for (const Roi& roi : atlas.rois) {
        out += std::to_string(roi.index);
        out += ' ';
        out += roi.name;
        for (int k = 0; k < 3; ++k) {
            out += ' ';
            out += io::dec17(roi.coord[k]);
        }
        out += '\n';
    }
    return out;
}

inline std::uint64_t atlas_checksum(const RoiAtlas& atlas) {
    return io::fnv1a64(atlas_canonical_text(atlas));
}

}  // namespace gsc
