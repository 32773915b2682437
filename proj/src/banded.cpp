#include "cnls/banded.hpp"

#include <cmath>

namespace cnls::banded {

InertiaResult inertia(const SymBanded& A, double shift, double zero_tol) {
  const int n = A.size();
  const int bw = A.bandwidth();
  // L stored like A; d separately
  std::vector<double> d(n, 0.0);
  std::vector<double> l(std::size_t(n) * (bw + 1), 0.0);
  auto lat = [&](int i, int j) -> double& {
    return l[std::size_t(i) * (bw + 1) + (i - j)];
  };
  InertiaResult res;
  for (int k = 0; k < n; ++k) {
    double dk = A.at(k, k) - shift;
    int m0 = std::max(0, k - bw);
    for (int m = m0; m < k; ++m) dk -= lat(k, m) * lat(k, m) * d[m];
    if (std::abs(dk) <= zero_tol) ++res.near_zero;
    if (dk == 0.0) {
      res.breakdown = true;
      dk = 1e-300;
    }
    d[k] = dk;
    if (dk < 0.0) ++res.negative;
    int imax = std::min(n - 1, k + bw);
    for (int i = k + 1; i <= imax; ++i) {
      double v = (i - k <= bw) ? A.at(i, k) : 0.0;
      int mm0 = std::max(0, i - bw);
      for (int m = std::max(m0, mm0); m < k; ++m) v -= lat(i, m) * lat(k, m) * d[m];
      lat(i, k) = v / dk;
    }
  }
  return res;
}

}  // namespace cnls::banded
