#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gsc/errors.hpp"
#include "gsc/io.hpp"
#include "gsc/log.hpp"
#include "gsc/spectra.hpp"

namespace gsc {

// Column-name mapping for the phenotype CSV plus the integer codings used by
// the source table. Defaults follow the public ABIDE-I collection.
struct PhenotypeColumnMap {
    std::string id = "SUB_ID";
    std::string dx = "DX_GROUP";
    std::string age = "AGE_AT_SCAN";
    std::string eye = "EYE_STATUS_AT_SCAN";
    std::string fd = "func_mean_fd";
    std::string site = "SITE_ID";
    long dxAsd = 1;
    long dxNt = 2;
    long eyeOpen = 1;
};

struct PhenotypeRecord {
    std::string id;
    Label diagnosis = Label::NT;
    double ageYears = 0.0;
    bool eyesOpen = false;
    double meanFd = 0.0;  // mean framewise displacement, millimeters
    std::string site;
};

namespace detail {

// Minimal RFC-4180 CSV line splitter (quoted fields, doubled quotes).
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

}  // namespace detail

// Parses the header-bearing CSV. Records with a missing or unparseable
// mapped field are excluded with a recorded warning, never silently kept.
inline std::vector<PhenotypeRecord> parse_phenotypes(const std::filesystem::path& path,
                                                     const PhenotypeColumnMap& map = {}) {
    std::istringstream in(io::read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty phenotype file");
    const auto header = detail::split_csv_line(line);
    std::map<std::string, std::size_t> byName;
    for (std::size_t i = 0; i < header.size(); ++i) byName[io::trim(header[i])] = i;
    auto column = [&](const std::string& name) {
        const auto it = byName.find(name);
        if (it == byName.end())
            throw ParseError(path.string() + ": missing column '" + name + "'");
        return it->second;
    };
    const std::size_t idCol = column(map.id);
    const std::size_t dxCol = column(map.dx);
    const std::size_t ageCol = column(map.age);
    const std::size_t eyeCol = column(map.eye);
    const std::size_t fdCol = column(map.fd);
    const auto siteIt = byName.find(map.site);

    std::vector<PhenotypeRecord> records;
    int lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (io::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        const std::string where = path.string() + ":" + std::to_string(lineNo);
        auto fieldAt = [&](std::size_t col) -> std::optional<std::string> {
            if (col >= fields.size()) return std::nullopt;
            const std::string v = io::trim(fields[col]);
            if (v.empty()) return std::nullopt;
            return v;
        };
        const auto idField = fieldAt(idCol);
        const auto dxField = fieldAt(dxCol);
        const auto ageField = fieldAt(ageCol);
        const auto eyeField = fieldAt(eyeCol);
        const auto fdField = fieldAt(fdCol);
        if (!idField || !dxField || !ageField || !eyeField || !fdField) {
            log::warn(where + ": record excluded, missing required field");
            continue;
        }
        PhenotypeRecord rec;
        rec.id = *idField;
        try {
            const long dx = io::parse_long(*dxField, where);
            if (dx == map.dxAsd) rec.diagnosis = Label::ASD;
            else if (dx == map.dxNt) rec.diagnosis = Label::NT;
            else throw ParseError(where + ": unknown diagnosis code " + std::to_string(dx));
            rec.ageYears = io::parse_double(*ageField, where);
            rec.eyesOpen = io::parse_long(*eyeField, where) == map.eyeOpen;
            rec.meanFd = io::parse_double(*fdField, where);
        } catch (const ParseError& e) {
            log::warn(std::string(e.what()) + "; record excluded");
            continue;
        }
        if (!(rec.ageYears > 0.0) || !(rec.meanFd >= 0.0) || !std::isfinite(rec.ageYears) ||
            !std::isfinite(rec.meanFd)) {
            log::warn(where + ": record excluded, out-of-range age or displacement");
            continue;
        }
        if (siteIt != byName.end()) {
            if (const auto site = fieldAt(siteIt->second)) rec.site = *site;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

// Inclusion criteria; age and displacement comparisons are strict.
struct FilterCriteria {
    bool requireEyesOpen = true;
    std::optional<double> maxAge;  // keep age < maxAge
    std::optional<double> minAge;  // keep age > minAge
    std::optional<double> maxFd;   // keep meanFd < maxFd
};

inline std::vector<std::string> filter_subjects(const std::vector<PhenotypeRecord>& records,
                                                const FilterCriteria& criteria) {
    std::vector<std::string> ids;
    for (const PhenotypeRecord& rec : records) {
        if (criteria.requireEyesOpen && !rec.eyesOpen) continue;
        if (criteria.maxAge && !(rec.ageYears < *criteria.maxAge)) continue;
        if (criteria.minAge && !(rec.ageYears > *criteria.minAge)) continue;
        if (criteria.maxFd && !(rec.meanFd < *criteria.maxFd)) continue;
        ids.push_back(rec.id);
    }
    return ids;
}

}  // namespace gsc
