#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hhnet {

namespace detail {
inline std::string join_issues(const std::vector<std::string>& issues) {
    std::string msg;
    for (const auto& issue : issues) {
        if (!msg.empty()) msg += "; ";
        msg += issue;
    }
    return msg;
}
}  // namespace detail

// Input contract violation. Carries every issue found, not just the first,
// so callers can report them all at once.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : std::runtime_error(detail::join_issues(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

// Filesystem / stream failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerically degenerate request (e.g. a metric on an empty edge set).
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hhnet
