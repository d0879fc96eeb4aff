#pragma once

namespace reslab {

double norm_pdf(double x) noexcept;
double norm_cdf(double x) noexcept;
// Inverse of norm_cdf on (0, 1); throws DomainError outside.
double norm_quantile(double p);

}  // namespace reslab
