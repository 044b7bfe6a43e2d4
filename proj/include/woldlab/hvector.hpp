#pragma once

#include <complex>
#include <initializer_list>
#include <map>
#include <utility>

#include "woldlab/lanes.hpp"

namespace woldlab {

using Complex = std::complex<double>;

/// Finite-support vector over basis indices. Coefficients with modulus at or
/// below tolerance() are never stored.
class HVector {
 public:
  using Entries = std::map<BasisIndex, Complex>;

  HVector() = default;
  explicit HVector(Entries entries);
  HVector(std::initializer_list<std::pair<const BasisIndex, Complex>> entries);

  static HVector basis(BasisIndex index, Complex coefficient = 1.0);

  const Entries& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  Complex at(const BasisIndex& index) const;

  double norm() const;
  double norm_squared() const;

  HVector& operator+=(const HVector& other);
  HVector& operator-=(const HVector& other);
  HVector& operator*=(Complex scalar);

  friend HVector operator+(HVector a, const HVector& b) { return a += b; }
  friend HVector operator-(HVector a, const HVector& b) { return a -= b; }
  friend HVector operator*(Complex s, HVector v) { return v *= s; }
  friend HVector operator*(HVector v, Complex s) { return v *= s; }

  /// Adds `coefficient * e_index`, pruning the entry if it cancels.
  void add(const BasisIndex& index, Complex coefficient);

 private:
  void prune();
  Entries entries_;
};

/// Hermitian inner product, linear in the first argument:
/// <x, y> = sum_k x_k conj(y_k).
Complex inner(const HVector& x, const HVector& y);

double distance(const HVector& x, const HVector& y);

}  // namespace woldlab
