#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gsc/errors.hpp"
#include "gsc/io.hpp"

namespace gsc {

// Declarative `key = value` configuration ('#' comments, blank lines
// ignored). Typed getters raise on malformed values; CLI flags override by
// calling set() after load. Keys are documented in docs/config.md.
class Config {
public:
    Config() = default;

    static Config load(const std::filesystem::path& path) {
        Config cfg;
        std::istringstream in(io::read_file(path));
        std::string line;
        int lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            const std::string trimmed = io::trim(line);
            if (trimmed.empty() || trimmed[0] == '#') continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ParseError(path.string() + ":" + std::to_string(lineNo) +
                                 ": expected `key = value`");
            const std::string key = io::trim(trimmed.substr(0, eq));
            const std::string value = io::trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ParseError(path.string() + ":" + std::to_string(lineNo) + ": empty key");
            cfg.values_[key] = value;
        }
        return cfg;
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    long get_long(const std::string& key, long fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return io::parse_long(it->second, "config key '" + key + "'");
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return io::parse_double(it->second, "config key '" + key + "'");
    }

    bool get_bool(const std::string& key, bool fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        const std::string& v = it->second;
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ParseError("config key '" + key + "': not a boolean: '" + v + "'");
    }

    std::vector<long> get_long_list(const std::string& key,
                                    const std::vector<long>& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<long> out;
        for (const std::string& part : io::split(it->second, ',')) {
            const std::string token = io::trim(part);
            if (token.empty()) continue;
            out.push_back(io::parse_long(token, "config key '" + key + "'"));
        }
        if (out.empty()) throw ParseError("config key '" + key + "': empty list");
        return out;
    }

    std::vector<std::string> get_string_list(const std::string& key,
                                             const std::vector<std::string>& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<std::string> out;
        for (const std::string& part : io::split(it->second, ',')) {
            const std::string token = io::trim(part);
            if (!token.empty()) out.push_back(token);
        }
        if (out.empty()) throw ParseError("config key '" + key + "': empty list");
        return out;
    }

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace gsc
