#pragma once

#include <stdexcept>
#include <string>

namespace gsc {

// Error taxonomy shared by the library and the CLI exit-code mapping:
// usage problems exit 1, every GscError subclass below exits 2.
struct GscError : std::runtime_error {
    explicit GscError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files (atlas, time-series, phenotypes, config, JSON).
struct ParseError : GscError {
    explicit ParseError(const std::string& msg) : GscError(msg) {}
};

// Semantically invalid data (dimension mismatches, missing classes, bad ranges).
struct DataError : GscError {
    explicit DataError(const std::string& msg) : GscError(msg) {}
};

// Violated numerical contracts (rank deficiency, residuals above tolerance).
struct NumericalError : GscError {
    explicit NumericalError(const std::string& msg) : GscError(msg) {}
};

}  // namespace gsc
