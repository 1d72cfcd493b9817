#ifndef OSG_ERRORS_HPP
#define OSG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace osg {

/// Input-level failure: a parameter or precondition is out of range.
/// The message names the offending field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration document or CLI flag is malformed.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Output path or stream failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Two computation routes that must agree have drifted apart.
class ToleranceError : public std::runtime_error {
public:
    explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric invariant (positivity, agreement of eigenvalue routes) broke.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Wavefunction support reached the spatial grid boundary.
class GridViolation : public std::runtime_error {
public:
    explicit GridViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Two grid functions that must share a grid do not.
class GridMismatch : public std::runtime_error {
public:
    explicit GridMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// The requested time scan ends while the scanned quantity is still positive.
class ScanTooShort : public std::runtime_error {
public:
    explicit ScanTooShort(const std::string& what) : std::runtime_error(what) {}
};

/// An input is at a removable singularity of the requested quantity.
class DegenerateInput : public std::runtime_error {
public:
    explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

} // namespace osg

#endif // OSG_ERRORS_HPP
