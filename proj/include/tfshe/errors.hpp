#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace tfshe {

// Parameter outside the admissible set. The message names the violated inequality.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An integral that is infinite for the requested parameters.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double residual)
        : std::runtime_error(format(what, estimate, residual)),
          estimate_(estimate), residual_(residual) {}
    double estimate() const noexcept { return estimate_; }
    double residual() const noexcept { return residual_; }

private:
    static std::string format(const std::string& what, double estimate, double residual) {
        std::ostringstream os;
        os.precision(6);
        os << what << " (estimate " << estimate << ", residual " << residual << ")";
        return os.str();
    }
    double estimate_;
    double residual_;
};

// Time stepping left its stable regime (overflow, non-positive pivot, etc).
class InstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fits or MC statistics that do not have enough resolved data.
class UnderResolvedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IOError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tfshe
