#pragma once

#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace gsc::log {

// Process-wide warning recorder. Library code records non-fatal conditions
// (dropped columns, resampled trials, skipped folds); callers may drain the
// buffer for inspection or reporting. Thread-safe.
class WarningLog {
public:
    static WarningLog& instance() {
        static WarningLog log;
        return log;
    }

    void record(std::string msg) {
        std::lock_guard<std::mutex> lock(mutex_);
        messages_.push_back(std::move(msg));
    }

    std::vector<std::string> drain() {
        std::lock_guard<std::mutex> lock(mutex_);
        std::vector<std::string> out;
        out.swap(messages_);
        return out;
    }

    std::size_t count() {
        std::lock_guard<std::mutex> lock(mutex_);
        return messages_.size();
    }

private:
    std::mutex mutex_;
    std::vector<std::string> messages_;
};

inline void warn(std::string msg) { WarningLog::instance().record(std::move(msg)); }

inline std::vector<std::string> drain_warnings() { return WarningLog::instance().drain(); }

}  // namespace gsc::log
