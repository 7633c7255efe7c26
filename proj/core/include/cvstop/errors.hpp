#ifndef CVSTOP_ERRORS_HPP
#define CVSTOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cvstop {

// Bad configuration: rejected parameters, malformed config files, invalid
// grids.  The CLI maps this family to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure at run time: non-finite payoffs, missing roots,
// unavailable diagnostics.  The CLI maps this family to exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument fed to an evaluation (NaN coordinates, nonpositive
// variances, ...).
struct InputError : NumericError {
  explicit InputError(const std::string& msg) : NumericError(msg) {}
};

// A payoff or density evaluated to a non-finite value during integration.
struct EvaluationError : NumericError {
  explicit EvaluationError(const std::string& msg) : NumericError(msg) {}
};

// Drift constants violate their defining inequalities (e.g. beta*m >= 1).
struct CertificateError : ConfigError {
  explicit CertificateError(const std::string& msg) : ConfigError(msg) {}
};

// No sign change found when solving for a decision threshold.
struct NoThresholdError : NumericError {
  explicit NoThresholdError(const std::string& msg) : NumericError(msg) {}
};

// Derivative requested at a boundary node of the environment grid.
struct BoundaryDerivativeError : NumericError {
  explicit BoundaryDerivativeError(const std::string& msg) : NumericError(msg) {}
};

// A convergence diagnostic cannot be computed from the recorded history.
struct DiagnosticUnavailableError : NumericError {
  explicit DiagnosticUnavailableError(const std::string& msg) : NumericError(msg) {}
};

// Bayes update with a zero-probability observation.
struct UndefinedPosteriorError : NumericError {
  explicit UndefinedPosteriorError(const std::string& msg) : NumericError(msg) {}
};

// Closed form evaluated outside its domain (e.g. a negative base under a
// fractional exponent).
struct DomainError : NumericError {
  explicit DomainError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace cvstop

#endif
