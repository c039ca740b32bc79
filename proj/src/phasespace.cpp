#include "gaussbayes/phasespace.hpp"

#include <cmath>

namespace gaussbayes {

void ProbeSpec::validate() const {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("ProbeSpec: s must be finite and >= 0");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) || !std::isfinite(psi)) {
    throw DomainError("ProbeSpec: non-finite parameter");
  }
}

GaussianState ProbeSpec::state() const {
  validate();
  return displace(squeeze(vacuum<double>(), s, psi), alpha);
}

QfiEstimate qfi_fidelity(const StateFamily& family, double theta, double dtheta) {
  if (!(dtheta > 0.0)) throw DomainError("qfi_fidelity: dtheta must be positive");
  const double f = fidelity(family(theta), family(theta + dtheta));
  double gap = 1.0 - std::sqrt(f);
  QfiEstimate out;
  if (gap < 0.0) {
    gap = 0.0;
    out.clamped = true;
  }
  out.value = 8.0 * gap / (dtheta * dtheta);
  return out;
}

}  // namespace gaussbayes
