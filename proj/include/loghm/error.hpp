#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace loghm {

enum class Errc {
  contract_violation,
  noninvertible,
  normalization,
  composition_domain,
  domain,
  degenerate_dilatation,
  unsupported_representation,
  unknown_name,
  parameter_range,
  inadmissible_dilatation,
  inadmissible_phi,
  quadrature_failure,
  precondition,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::contract_violation: return "contract violation";
    case Errc::noninvertible: return "division by non-invertible series";
    case Errc::normalization: return "normalization error";
    case Errc::composition_domain: return "composition domain error";
    case Errc::domain: return "domain error";
    case Errc::degenerate_dilatation: return "degenerate dilatation";
    case Errc::unsupported_representation: return "unsupported representation";
    case Errc::unknown_name: return "unknown name";
    case Errc::parameter_range: return "parameter out of range";
    case Errc::inadmissible_dilatation: return "inadmissible dilatation";
    case Errc::inadmissible_phi: return "inadmissible phi";
    case Errc::quadrature_failure: return "quadrature failure";
    case Errc::precondition: return "precondition violated";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised when successive refinements of a line integral fail to agree.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, std::complex<double> previous,
                  std::complex<double> last)
      : Error(Errc::quadrature_failure, what), previous_(previous), last_(last) {}

  std::complex<double> previous_estimate() const noexcept { return previous_; }
  std::complex<double> last_estimate() const noexcept { return last_; }

 private:
  std::complex<double> previous_;
  std::complex<double> last_;
};

}  // namespace loghm
