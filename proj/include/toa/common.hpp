#pragma once
#include <complex>
#include <stdexcept>
#include <string>

namespace toa {

using Complex = std::complex<double>;
using namespace std::complex_literals;

// Atomic-style units used throughout: hbar = 1, so h = 2*pi.
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.0;
inline constexpr double planck_h = 2.0 * pi;

// Base class for numerical failures (tolerance not met, series blow-up, ...).
struct NumericsError : std::runtime_error {
  explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested tolerance could not be certified; carries the best estimate found.
struct ToleranceError : NumericsError {
  Complex best{};
  double achieved{};
  ToleranceError(const std::string& msg, Complex b, double a)
      : NumericsError(msg), best(b), achieved(a) {}
};

// Iteration/series failed to converge within its budget.
struct ConvergenceError : NumericsError {
  explicit ConvergenceError(const std::string& msg) : NumericsError(msg) {}
};

// Arguments outside the mathematical domain of the routine.
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace toa
