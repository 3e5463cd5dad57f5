#pragma once

#include <stdexcept>
#include <string>

namespace torwave {

// Raised when a search would exceed its configured work budget.
// Callers get an error, never a silently truncated count.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a grid computation cannot reach the requested resolution.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace torwave
