#pragma once

#include <vector>

namespace tesim {

/// General banded matrix with kl sub- and ku super-diagonals, stored in the
/// usual band layout with kl extra rows of head-room so the LU factorization
/// can pivot.  Intended for the tensor-grid Jacobians: tridiagonal in 1D,
/// bandwidth = nodes_x in 2D.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);

  int size() const { return n_; }

  /// Entry A(i, j); only positions with -ku <= i-j <= kl are addressable.
  double& at(int i, int j);
  double get(int i, int j) const;

  /// Reset all entries to zero (keeps the factorization invalid).
  void clear();

  /// In-place LU with partial pivoting.  Throws std::runtime_error if a
  /// pivot degenerates (matrix numerically singular).
  void factor();

  /// Solve A x = b using the factorization; b is overwritten with x.
  void solve(std::vector<double>& b) const;

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<double> ab_;  // column j at ab_[j*ldab_], row kl_+ku_+i-j
  std::vector<int> piv_;
  bool factored_ = false;

  double& ref(int i, int j) { return ab_[j * ldab_ + (kl_ + ku_ + i - j)]; }
  double val(int i, int j) const {
    return ab_[j * ldab_ + (kl_ + ku_ + i - j)];
  }
};

}  // namespace tesim
