#pragma once

#include <stdexcept>
#include <string>

namespace bratteli {

/// A violated mathematical precondition or invariant. `invariant()` names the
/// rule (e.g. "transition probability", "paths not tail equivalent").
class DomainError : public std::runtime_error {
public:
    DomainError(std::string invariant, const std::string& detail)
        : std::runtime_error(detail.empty() ? invariant : invariant + ": " + detail),
          invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

/// Malformed input text (files, rationals, group elements, command lines).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bratteli
