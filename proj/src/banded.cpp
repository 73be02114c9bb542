#include "tesim/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tesim {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1) {
  if (n < 1 || kl < 0 || ku < 0)
    throw std::invalid_argument("BandedMatrix: bad dimensions");
  ab_.assign(static_cast<size_t>(ldab_) * n_, 0.0);
  piv_.assign(n_, 0);
}

double& BandedMatrix::at(int i, int j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_)
    throw std::out_of_range("BandedMatrix::at: outside band");
  factored_ = false;
  return ref(i, j);
}

double BandedMatrix::get(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_)
    return 0.0;
  return val(i, j);
}

void BandedMatrix::clear() {
  std::fill(ab_.begin(), ab_.end(), 0.0);
  factored_ = false;
}

void BandedMatrix::factor() {
  // Band LU with partial pivoting; fill extends the upper band to kl+ku.
  const int kv = kl_ + ku_;
  for (int j = 0; j < n_; ++j) {
    const int ilast = std::min(j + kl_, n_ - 1);
    int jp = j;
    double amax = std::abs(val(j, j));
    for (int i = j + 1; i <= ilast; ++i) {
      const double a = std::abs(val(i, j));
      if (a > amax) {
        amax = a;
        jp = i;
      }
    }
    piv_[j] = jp;
    if (amax == 0.0 || !std::isfinite(amax))
      throw std::runtime_error("BandedMatrix::factor: singular pivot");
    const int clast = std::min(j + kv, n_ - 1);
    if (jp != j)
      for (int c = j; c <= clast; ++c) std::swap(ref(j, c), ref(jp, c));
    const double pivot = val(j, j);
    for (int i = j + 1; i <= ilast; ++i) {
      const double m = val(i, j) / pivot;
      ref(i, j) = m;
      for (int c = j + 1; c <= clast; ++c) ref(i, c) -= m * val(j, c);
    }
  }
  factored_ = true;
}

void BandedMatrix::solve(std::vector<double>& b) const {
  if (!factored_)
    throw std::logic_error("BandedMatrix::solve: factor() not called");
  if (static_cast<int>(b.size()) != n_)
    throw std::invalid_argument("BandedMatrix::solve: rhs size mismatch");
  const int kv = kl_ + ku_;
  for (int j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    const int ilast = std::min(j + kl_, n_ - 1);
    for (int i = j + 1; i <= ilast; ++i) b[i] -= val(i, j) * b[j];
  }
  for (int i = n_ - 1; i >= 0; --i) {
    const int clast = std::min(i + kv, n_ - 1);
    double acc = b[i];
    for (int c = i + 1; c <= clast; ++c) acc -= val(i, c) * b[c];
    b[i] = acc / val(i, i);
  }
}

}  // namespace tesim
