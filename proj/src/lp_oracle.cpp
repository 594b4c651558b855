#include <cmath>
#include <vector>

#include "ergodia/capacity_bounds.hpp"
#include "ergodia/error.hpp"

namespace ergodia {

namespace {

using Real = long double;

// max c.x  s.t.  A x <= b, x >= 0, with b >= 0 so the slack basis is feasible.
// Tableau simplex with Bland's rule.
Real simplex_maximize(const std::vector<std::vector<Real>>& a, const std::vector<Real>& b,
                      const std::vector<Real>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  constexpr Real tol = 1e-13L;
  // Rows 0..m-1: constraints over n structural + m slack columns, last column rhs.
  std::vector<std::vector<Real>> t(m + 1, std::vector<Real>(n + m + 1, 0.0L));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0L;
    t[i][n + m] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  while (true) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j)
      if (t[m][j] < -tol) {
        enter = j;
        break;
      }
    if (enter == n + m) break;
    std::size_t leave = m;
    Real best = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= tol) continue;
      const Real ratio = t[i][n + m] / t[i][enter];
      if (leave == m || ratio < best - tol || (std::fabs(ratio - best) <= tol && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == m) throw DomainError("lp_oracle: unbounded problem");
    const Real pivot = t[leave][enter];
    for (Real& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const Real f = t[i][enter];
      if (f == 0.0L) continue;
      for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  return t[m][n + m];
}

}  // namespace

double lp_oracle(int users, double snr, double eps, const std::set<Edge>& edges) {
  if (users < 1) throw DomainError("K must be positive");
  if (users > 12) throw ResourceError("lp_oracle is limited to K <= 12");
  if (!(snr >= 0.0) || !(eps >= 0.0)) throw DomainError("snr and eps must be non-negative");
  const Real c1 = std::log2(1.0L + static_cast<Real>(snr));
  const Real c2 = std::log2(1.0L + 2.0L * static_cast<Real>(snr)) + static_cast<Real>(eps);
  const auto n = static_cast<std::size_t>(users);
  std::vector<std::vector<Real>> a;
  std::vector<Real> b;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Real> row(n, 0.0L);
    row[k] = 1.0L;
    a.push_back(std::move(row));
    b.push_back(c1);
  }
  for (const auto& [r, t] : edges) {
    if (r < 1 || t < 1 || r > users || t > users || r == t) throw ConfigError("edge endpoint out of range");
    std::vector<Real> row(n, 0.0L);
    row[static_cast<std::size_t>(r - 1)] = 1.0L;
    row[static_cast<std::size_t>(t - 1)] = 1.0L;
    a.push_back(std::move(row));
    b.push_back(c2);
  }
  return static_cast<double>(simplex_maximize(a, b, std::vector<Real>(n, 1.0L)));
}

}  // namespace ergodia
