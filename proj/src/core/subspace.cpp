#include "woldlab/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "woldlab/errors.hpp"

namespace woldlab {

const char* to_string(OrbitClosure::Kind kind) {
  switch (kind) {
    case OrbitClosure::Kind::none: return "none";
    case OrbitClosure::Kind::forward_orbit: return "forward_orbit";
    case OrbitClosure::Kind::full_orbit: return "full_orbit";
  }
  return "none";
}

Subspace::Subspace(std::vector<HVector> generators, OrbitClosure closure)
    : generators_(std::move(generators)), closure_(std::move(closure)) {
  if (!is_orthonormal(generators_, 1e3 * tolerance()))
    throw MalformedInput("subspace generators are not orthonormal");
}

HVector Subspace::project(const HVector& x) const {
  HVector out;
  for (const auto& g : generators_) out += inner(x, g) * g;
  return out;
}

double Subspace::residual(const HVector& x) const { return remove_components(x, generators_).norm(); }

bool Subspace::contains(const HVector& x, double tol) const { return residual(x) <= tol; }

HVector remove_components(HVector x, const std::vector<HVector>& basis) {
  for (const auto& b : basis) {
    const Complex c = inner(x, b);
    if (c == Complex{}) continue;
    for (const auto& [index, coeff] : b.entries()) x.add(index, -c * coeff);
  }
  return x;
}

bool append_orthonormal(std::vector<HVector>& basis, const HVector& candidate, double drop) {
  // two passes of MGS keep the basis orthonormal to ~1e-15
  HVector r = remove_components(remove_components(candidate, basis), basis);
  const double n = r.norm();
  if (n < drop) return false;
  r *= 1.0 / n;
  basis.push_back(std::move(r));
  return true;
}

std::vector<HVector> extend_basis(const std::vector<HVector>& basis, const std::vector<HVector>& candidates,
                                  double drop) {
  std::vector<HVector> all = basis;
  for (const auto& c : candidates) append_orthonormal(all, c, drop);
  return {all.begin() + static_cast<std::ptrdiff_t>(basis.size()), all.end()};
}

std::vector<HVector> orthonormalize(const std::vector<HVector>& vectors, double drop) {
  return extend_basis({}, vectors, drop);
}

bool is_orthonormal(const std::vector<HVector>& vectors, double tol) {
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (std::abs(vectors[i].norm() - 1.0) > tol) return false;
    for (std::size_t j = i + 1; j < vectors.size(); ++j)
      if (std::abs(inner(vectors[i], vectors[j])) > tol) return false;
  }
  return true;
}

double max_cross_inner(const std::vector<HVector>& a, const std::vector<HVector>& b) {
  double m = 0.0;
  for (const auto& x : a)
    for (const auto& y : b) m = std::max(m, std::abs(inner(x, y)));
  return m;
}

}  // namespace woldlab
