#include "ising2mm/series.hpp"

namespace ising2mm {

SigmaCoefficients<double> lagrange_sigma_coeffs(double tau, double h, std::size_t order) {
    if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0,1)");
    return lagrange_sigma_coeffs_t<double>(tau, std::cosh(h), order);
}

SigmaCoefficients<Real50> lagrange_sigma_coeffs_hp(double tau, double h, std::size_t order) {
    if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0,1)");
    const Real50 H(h);
    return lagrange_sigma_coeffs_t<Real50>(Real50(tau), cosh(H), order);
}

}  // namespace ising2mm
