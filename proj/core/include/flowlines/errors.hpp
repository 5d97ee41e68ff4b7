#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace flowlines {

class FlowFamily;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grid or truncation too coarse for the requested operation, or two
/// operands at different resolutions.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Request beyond what the implementation supports (e.g. Sobolev order > 4).
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Stream function not monotone across the channel, or flow-line family not
/// monotone in psi.
class StagnationError : public Error {
public:
    using Error::Error;
};

/// a_psi dropped below the ellipticity floor somewhere on the grid.
class EllipticityError : public Error {
public:
    EllipticityError(const std::string& what, double min_a_psi)
        : Error(what), min_a_psi_(min_a_psi) {}

    double min_a_psi() const noexcept { return min_a_psi_; }

    /// The iterate that failed the check, when raised from inside a solve.
    const std::shared_ptr<const FlowFamily>& last_iterate() const noexcept { return last_; }
    void attach_iterate(std::shared_ptr<const FlowFamily> a) { last_ = std::move(a); }

private:
    double min_a_psi_;
    std::shared_ptr<const FlowFamily> last_;
};

}  // namespace flowlines
