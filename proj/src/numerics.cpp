#include "hardnet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hardnet/matrix.hpp"

namespace hardnet {

double normal_pdf(double x) {
  static const double kInvSqrt2Pi = 0.3989422804014326779;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
  static const double kInvSqrt2 = 0.7071067811865475244;
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

// Wichura's algorithm AS241 (PPND16).
double inv_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -HUGE_VAL;
    if (p == 1.0) return HUGE_VAL;
    throw std::domain_error("inv_normal_cdf: p outside [0,1]");
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

double threshold_c(int n) {
  if (n < 2) throw std::invalid_argument("threshold_c: n must be >= 2");
  return inv_normal_cdf(1.0 / n);
}

namespace {

// Robert's exponential rejection for N(0,1) | X >= a, a > 0.
double robert_tail(double a, Rng& rng) {
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double x = a - std::log(rng.uniform_open()) / alpha;
    const double d = x - alpha;
    if (rng.uniform_open() <= std::exp(-0.5 * d * d)) return x;
  }
}

}  // namespace

double trunc_normal_below(double c, Rng& rng) {
  double t;
  if (c <= -6.0) {
    t = -robert_tail(-c, rng);
  } else {
    t = inv_normal_cdf(rng.uniform_open() * normal_cdf(c));
  }
  // Keep the support strict so the threshold map (>= ties to 1) inverts the
  // target bit exactly.
  if (t >= c) t = std::nextafter(c, -HUGE_VAL);
  return t;
}

double trunc_normal_above(double c, Rng& rng) {
  double t;
  if (c >= 6.0) {
    t = robert_tail(c, rng);
  } else {
    const double fc = normal_cdf(c);
    t = inv_normal_cdf(fc + rng.uniform_open() * (1.0 - fc));
  }
  if (t < c) t = c;
  return t;
}

double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n <= 32) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

double ks_statistic_normal(std::vector<double>& sample) {
  if (sample.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

double ks_critical(double alpha, std::size_t n) {
  // Survival function of the Kolmogorov distribution.
  auto q = [](double lam) {
    double s = 0.0;
    for (int j = 1; j <= 100; ++j) {
      const double term = 2.0 * ((j % 2 == 1) ? 1.0 : -1.0) *
                          std::exp(-2.0 * j * j * lam * lam);
      s += term;
      if (std::fabs(term) < 1e-16) break;
    }
    return s;
  };
  double lo = 0.2, hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (q(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double lam = 0.5 * (lo + hi);
  const double sn = std::sqrt(static_cast<double>(n));
  return lam / (sn + 0.12 + 0.11 / sn);
}

std::vector<double> singular_values(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m == 0 || n == 0) return {};
  // Column-major working copy; one-sided Jacobi orthogonalizes columns.
  std::vector<double> col(m * n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) col[c * m + r] = a.at(r, c);

  const double tol = 1e-14;
  bool rotated = true;
  for (int sweep = 0; sweep < 60 && rotated; ++sweep) {
    rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* cp = &col[p * m];
        double* cq = &col[q * m];
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          app += cp[i] * cp[i];
          aqq += cq[i] * cq[i];
          apq += cp[i] * cq[i];
        }
        if (apq == 0.0 || std::fabs(apq) <= tol * std::sqrt(app * aqq))
          continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = ((zeta >= 0.0) ? 1.0 : -1.0) /
                         (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double xp = cp[i], xq = cq[i];
          cp[i] = cs * xp - sn * xq;
          cq[i] = sn * xp + cs * xq;
        }
      }
    }
  }
  std::vector<double> sv(n);
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += col[c * m + i] * col[c * m + i];
    sv[c] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

double min_singular_value(const Matrix& a) { return singular_values(a).back(); }

}  // namespace hardnet
