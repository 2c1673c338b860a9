#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "gsc/atlas.hpp"
#include "gsc/errors.hpp"
#include "gsc/io.hpp"
#include "gsc/spectra.hpp"

namespace gsc {

// One subject: label and the r×T signal matrix (rows = ROIs/nodes).
struct SubjectRecord {
    std::string id;
    Label label = Label::NT;
    Eigen::MatrixXd X;

    int r() const { return static_cast<int>(X.rows()); }
    int T() const { return static_cast<int>(X.cols()); }
};

// Time-series file: one time-point per line, r whitespace-separated values
// (the transpose Xᵀ, the common ROI-extraction export layout); '#' lines are
// ignored. Returns the r×T matrix.
inline Eigen::MatrixXd load_timeseries(const std::filesystem::path& path) {
    std::istringstream in(io::read_file(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineNo = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string trimmed = io::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        const auto tokens = io::tokenize(trimmed);
        const std::string where = path.string() + ":" + std::to_string(lineNo);
        std::vector<double> values;
        values.reserve(tokens.size());
        for (const std::string& tok : tokens) {
            const double v = io::parse_double(tok, where);
            if (!std::isfinite(v)) throw DataError(where + ": non-finite sample");
            values.push_back(v);
        }
        if (width == 0) width = values.size();
        if (values.size() != width)
            throw ParseError(where + ": expected " + std::to_string(width) + " values, got " +
                             std::to_string(values.size()));
        rows.push_back(std::move(values));
    }
    if (rows.size() < 2) throw DataError(path.string() + ": need at least 2 time-points");
    if (width < 2) throw DataError(path.string() + ": need at least 2 signal rows");
    Eigen::MatrixXd X(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t k = 0; k < width; ++k)
            X(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) = rows[t][k];
    return X;
}

inline std::string timeseries_to_text(const Eigen::MatrixXd& X) {
    std::string out;
    for (Eigen::Index t = 0; t < X.cols(); ++t) {
        for (Eigen::Index k = 0; k < X.rows(); ++k) {
            if (k > 0) out += ' ';
            out += io::dec17(X(k, t));
        }
        out += '\n';
    }
    return out;
}

struct CohortEntry {
    std::string id;
    Label label = Label::NT;
};

// Cohort file: `id label` per line, '#' comments.
inline std::vector<CohortEntry> load_cohort(const std::filesystem::path& path) {
    std::istringstream in(io::read_file(path));
    std::vector<CohortEntry> entries;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string trimmed = io::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        const auto tokens = io::tokenize(trimmed);
        const std::string where = path.string() + ":" + std::to_string(lineNo);
        if (tokens.size() != 2) throw ParseError(where + ": expected `id label`");
        entries.push_back({tokens[0], parse_label(tokens[1])});
    }
    if (entries.empty()) throw DataError(path.string() + ": empty cohort");
    return entries;
}

inline std::string cohort_to_text(const std::vector<CohortEntry>& entries) {
    std::string out;
    for (const CohortEntry& e : entries) out += e.id + " " + label_name(e.label) + "\n";
    return out;
}

// Loads `<dir>/<id>.txt` for every cohort entry, checking the row count
// against the expected number of nodes.
inline std::vector<SubjectRecord> load_dataset(const std::vector<CohortEntry>& cohort,
                                               const std::filesystem::path& dir, int expectedR) {
    std::vector<SubjectRecord> subjects;
    subjects.reserve(cohort.size());
    for (const CohortEntry& entry : cohort) {
        SubjectRecord subject;
        subject.id = entry.id;
        subject.label = entry.label;
        subject.X = load_timeseries(dir / (entry.id + ".txt"));
        if (subject.r() != expectedR)
            throw DataError("subject " + entry.id + " has " + std::to_string(subject.r()) +
                            " signal rows but the atlas defines " + std::to_string(expectedR));
        subjects.push_back(std::move(subject));
    }
    return subjects;
}

}  // namespace gsc
