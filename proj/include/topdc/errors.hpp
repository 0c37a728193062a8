#pragma once

#include <stdexcept>
#include <string>

namespace topdc {

/// Malformed or incomplete input (missing key, wrong type, unknown field).
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Well-formed input that describes an unphysical device (eta > 1, energy mismatch, ...).
class PhysicsError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation applied to an incompatible setup (pulsed pump in a CW-only formula, wrong scheme).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace topdc
