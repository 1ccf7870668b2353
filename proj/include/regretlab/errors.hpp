#pragma once

#include <stdexcept>
#include <string>

namespace regretlab {

// Thrown when an exact computation would exceed its configured budget.
// The message names the cap so callers can report or raise it.
class resource_limit_error : public std::runtime_error {
public:
    resource_limit_error(const std::string& what, long long cap)
        : std::runtime_error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
    long long cap() const { return cap_; }

private:
    long long cap_;
};

// Thrown when an operation's hypotheses are not met by the inputs
// (e.g. a curvature check on a game with zero strong convexity).
class not_applicable_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace regretlab
