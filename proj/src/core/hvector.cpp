#include "woldlab/hvector.hpp"

#include <cmath>

#include "woldlab/tolerance.hpp"

namespace woldlab {

HVector::HVector(Entries entries) : entries_(std::move(entries)) { prune(); }

HVector::HVector(std::initializer_list<std::pair<const BasisIndex, Complex>> entries) {
  for (const auto& [index, c] : entries) add(index, c);
}

HVector HVector::basis(BasisIndex index, Complex coefficient) {
  HVector v;
  v.add(index, coefficient);
  return v;
}

Complex HVector::at(const BasisIndex& index) const {
  auto it = entries_.find(index);
  return it == entries_.end() ? Complex{} : it->second;
}

double HVector::norm_squared() const {
  double s = 0.0;
  for (const auto& [_, c] : entries_) s += std::norm(c);
  return s;
}

double HVector::norm() const { return std::sqrt(norm_squared()); }

void HVector::add(const BasisIndex& index, Complex coefficient) {
  const double eps = tolerance();
  auto [it, inserted] = entries_.try_emplace(index, coefficient);
  if (!inserted) it->second += coefficient;
  if (std::abs(it->second) <= eps) entries_.erase(it);
}

HVector& HVector::operator+=(const HVector& other) {
  for (const auto& [index, c] : other.entries_) add(index, c);
  return *this;
}

HVector& HVector::operator-=(const HVector& other) {
  for (const auto& [index, c] : other.entries_) add(index, -c);
  return *this;
}

HVector& HVector::operator*=(Complex scalar) {
  for (auto& [_, c] : entries_) c *= scalar;
  prune();
  return *this;
}

void HVector::prune() {
  const double eps = tolerance();
  std::erase_if(entries_, [eps](const auto& kv) { return std::abs(kv.second) <= eps; });
}

Complex inner(const HVector& x, const HVector& y) {
  const auto& a = x.entries();
  const auto& b = y.entries();
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  Complex s{};
  for (const auto& [index, c] : small) {
    auto it = large.find(index);
    if (it == large.end()) continue;
    s += (&small == &a) ? c * std::conj(it->second) : it->second * std::conj(c);
  }
  return s;
}

double distance(const HVector& x, const HVector& y) {
  double s = 0.0;
  auto ix = x.entries().begin();
  auto iy = y.entries().begin();
  while (ix != x.entries().end() || iy != y.entries().end()) {
    if (iy == y.entries().end() || (ix != x.entries().end() && ix->first < iy->first)) {
      s += std::norm(ix->second);
      ++ix;
    } else if (ix == x.entries().end() || iy->first < ix->first) {
      s += std::norm(iy->second);
      ++iy;
    } else {
      s += std::norm(ix->second - iy->second);
      ++ix;
      ++iy;
    }
  }
  return std::sqrt(s);
}

}  // namespace woldlab
