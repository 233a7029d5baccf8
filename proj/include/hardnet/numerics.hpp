#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hardnet/rng.hpp"

namespace hardnet {

// Standard normal density and CDF. The CDF is erfc-based and keeps full
// relative accuracy deep into the left tail.
double normal_pdf(double x);
double normal_cdf(double x);

// Inverse standard normal CDF (Wichura's AS241), relative error below 1e-13
// over (0,1).
double inv_normal_cdf(double p);

// The session threshold c with Phi(c) = 1/n.
double threshold_c(int n);

// Draw from N(0,1) conditioned on t <= c (resp. t >= c). Inverse-CDF
// transform; switches to a tail rejection sampler when the conditioning
// boundary is deeper than 6 sigma. Guarantees the strict support convention
// used by the threshold map: below-draws satisfy t < c, above-draws t >= c.
double trunc_normal_below(double c, Rng& rng);
double trunc_normal_above(double c, Rng& rng);

// Pairwise (tree) summation; error grows like log(n) instead of n.
double pairwise_sum(std::span<const double> xs);

// Two-sided Kolmogorov-Smirnov statistic of a sample against N(0,1).
// The sample is sorted in place.
double ks_statistic_normal(std::vector<double>& sample);

// Critical KS value at level alpha for sample size n (asymptotic Kolmogorov
// quantile with the Stephens finite-n correction).
double ks_critical(double alpha, std::size_t n);

// Singular values of a dense matrix, descending, via one-sided Jacobi.
// Jacobi keeps high relative accuracy on the small singular values, which is
// what the non-degeneracy checks read off.
class Matrix;
std::vector<double> singular_values(const Matrix& a);
double min_singular_value(const Matrix& a);

}  // namespace hardnet
