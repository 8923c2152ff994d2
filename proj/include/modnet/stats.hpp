#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace modnet {

struct CorrelationResult {
  double r = 0.0;
  double p = 1.0;  // two-sided
  std::size_t n = 0;
};

// Pearson correlation with a two-sided p-value from t = r sqrt((n-2)/(1-r^2))
// against Student t with n-2 degrees of freedom. Needs n >= 3 and two
// non-constant series; throws UndefinedCorrelationError otherwise.
CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys);

// Two-sided tail probability P(|T| >= |t|) for Student t with `dof` degrees
// of freedom, via the regularized incomplete beta function.
double student_t_two_sided(double t, double dof);

// True when both labelings induce the same set partition (labels may be
// permuted).
bool same_partition(std::span<const std::size_t> a, std::span<const std::size_t> b);

// Hubert-Arabie adjusted Rand index. Returns 1 when both labelings put every
// item in one cluster (the index is 0/0 there) or have fewer than two items.
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

double mean(std::span<const double> xs);

}  // namespace modnet
