#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

// Symmetric banded matrices stored by lower band, plus an LDL^T inertia
// count (Sylvester). Used by the Sturm negative-eigenvalue counters.

namespace cnls::banded {

class SymBanded {
 public:
  SymBanded(int n, int bandwidth)
      : n_(n), bw_(bandwidth), a_(std::size_t(n) * (bandwidth + 1), 0.0) {}

  int size() const { return n_; }
  int bandwidth() const { return bw_; }

  // entry (i, j) with j <= i and i - j <= bandwidth
  double& at(int i, int j) { return a_[std::size_t(i) * (bw_ + 1) + (i - j)]; }
  double at(int i, int j) const { return a_[std::size_t(i) * (bw_ + 1) + (i - j)]; }

  void add(int i, int j, double v) {
    if (j > i) std::swap(i, j);
    if (i - j > bw_) throw std::out_of_range("SymBanded::add outside band");
    at(i, j) += v;
  }

 private:
  int n_, bw_;
  std::vector<double> a_;
};

struct InertiaResult {
  int negative = 0;
  int near_zero = 0;  // pivots within |pivot| < zero_tol
  bool breakdown = false;
};

// Negative-pivot count of A - shift*I by banded LDL^T without pivoting.
InertiaResult inertia(const SymBanded& A, double shift, double zero_tol = 0.0);

}  // namespace cnls::banded
