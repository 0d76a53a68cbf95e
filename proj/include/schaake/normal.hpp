#pragma once

namespace schaake {

/// Standard normal density.
double normal_pdf(double z) noexcept;

/// Standard normal CDF.
double normal_cdf(double z) noexcept;

/// Upper tail 1 - Phi(z), accurate for large z.
double normal_sf(double z) noexcept;

/**
 * Standard normal quantile.
 *
 * Wichura's AS241 rational approximation followed by one Newton step.
 * p must lie in (0, 1); the endpoints map to -inf / +inf.
 */
double normal_quantile(double p);

}  // namespace schaake
