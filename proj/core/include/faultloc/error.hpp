#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace faultloc {

// Single exception type for all contract violations. `kind` is a stable
// machine-checkable tag (e.g. "UnknownPreset", "SingularMatrix"); `what()`
// carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

}  // namespace faultloc
