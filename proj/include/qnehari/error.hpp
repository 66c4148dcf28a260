#pragma once

#include <stdexcept>
#include <string>

namespace qnehari {

/// Raised when an argument lies outside the domain of an operation
/// (zero quaternion inverse, |w| >= 1 kernel centre, short Hankel symbol...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised by star_inv when the constant coefficient vanishes.
class NotInvertibleError : public DomainError {
public:
    explicit NotInvertibleError(const std::string& what) : DomainError(what) {}
};

/// Malformed lab configuration or symbol specification.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qnehari
