#pragma once

#include <stdexcept>
#include <string>

namespace resonance {

/// Backward-time evolution requested for a state with mass on modes where
/// the shifted semigroup contracts; the extension to t < 0 only exists on
/// the kernel and the strictly unstable part.
class BackwardFlowError : public std::runtime_error {
public:
    explicit BackwardFlowError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation needs pointwise eigenfunction values but the eigensystem is
/// purely abstract (no realization attached).
class UnsupportedBasisError : public std::runtime_error {
public:
    explicit UnsupportedBasisError(const std::string& what) : std::runtime_error(what) {}
};

/// A standing hypothesis on the nonlinearity failed a numeric spot check.
/// Carries the offending sample so reports can show it.
class HypothesisViolation : public std::runtime_error {
public:
    HypothesisViolation(const std::string& hypothesis, const std::string& what,
                        double witness_x, double witness_value)
        : std::runtime_error(what),
          hypothesis_(hypothesis),
          witness_x_(witness_x),
          witness_value_(witness_value) {}

    [[nodiscard]] const std::string& hypothesis() const noexcept { return hypothesis_; }
    [[nodiscard]] double witness_x() const noexcept { return witness_x_; }
    [[nodiscard]] double witness_value() const noexcept { return witness_value_; }

private:
    std::string hypothesis_;
    double witness_x_;
    double witness_value_;
};

/// A checker was asked for a verdict that requires metadata (asymptotic
/// limits, a floor function) the model does not carry.
class MetadataError : public std::runtime_error {
public:
    explicit MetadataError(const std::string& what) : std::runtime_error(what) {}
};

/// Trajectory norm crossed the divergence guard.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

/// lambda + nu falls on (or numerically too close to) the spectrum, so the
/// origin has no hyperbolic linearization and no well-defined index.
class NonhyperbolicOriginError : public std::runtime_error {
public:
    NonhyperbolicOriginError(const std::string& what, double lambda_plus_nu)
        : std::runtime_error(what), lambda_plus_nu_(lambda_plus_nu) {}
    [[nodiscard]] double lambda_plus_nu() const noexcept { return lambda_plus_nu_; }

private:
    double lambda_plus_nu_;
};

/// No radius in the search grid produced a uniform sign for the kernel
/// pairing, so no isolating neighborhood could be certified.
class ConditionNotVerified : public std::runtime_error {
public:
    explicit ConditionNotVerified(const std::string& what) : std::runtime_error(what) {}
};

/// Config file problem, with the 1-based line number when known.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(what), line_(line) {}
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace resonance
