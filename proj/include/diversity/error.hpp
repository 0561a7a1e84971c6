#pragma once

#include <stdexcept>
#include <string>

namespace diversity {

/// A well-formed input that violates a mathematical precondition
/// (invalid diversity, infeasible cover, failed verification, ...).
class DomainError : public std::runtime_error
{
public:
    DomainError(std::string code, const std::string & message, std::string witness = {}) :
        std::runtime_error(message), code_(std::move(code)), witness_(std::move(witness))
    {
    }

    const std::string & code() const noexcept { return code_; }
    const std::string & witness() const noexcept { return witness_; }

private:
    std::string code_;
    std::string witness_;
};

/// Input that cannot even be interpreted: missing table entries, bad labels,
/// malformed files.
class StructuralError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace diversity
