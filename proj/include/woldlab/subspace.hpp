#pragma once

#include <string>
#include <vector>

#include "woldlab/hvector.hpp"
#include "woldlab/tolerance.hpp"

namespace woldlab {

struct OrbitClosure {
  enum class Kind { none, forward_orbit, full_orbit };
  Kind kind = Kind::none;
  std::string of;  // name of the operator generating the orbit

  static OrbitClosure none() { return {}; }
  static OrbitClosure forward(std::string name) { return {Kind::forward_orbit, std::move(name)}; }
  static OrbitClosure full(std::string name) { return {Kind::full_orbit, std::move(name)}; }
};

const char* to_string(OrbitClosure::Kind kind);

/// Orthonormal generator list plus a closure tag.
class Subspace {
 public:
  Subspace() = default;
  /// Throws MalformedInput unless the generators are orthonormal.
  explicit Subspace(std::vector<HVector> generators, OrbitClosure closure = {});

  const std::vector<HVector>& generators() const { return generators_; }
  const OrbitClosure& closure() const { return closure_; }
  std::size_t dimension() const { return generators_.size(); }
  bool is_zero() const { return generators_.empty(); }

  HVector project(const HVector& x) const;
  /// ||x - P x||.
  double residual(const HVector& x) const;
  bool contains(const HVector& x, double tol = kRankTolerance) const;

 private:
  std::vector<HVector> generators_;
  OrbitClosure closure_;
};

/// Modified Gram-Schmidt in input order; vectors whose residual norm falls
/// below `drop` are discarded.
std::vector<HVector> orthonormalize(const std::vector<HVector>& vectors,
                                    double drop = kRankTolerance);

/// Extends `basis` (orthonormal) by the Gram-Schmidt residues of `candidates`
/// and returns only the new vectors.
std::vector<HVector> extend_basis(const std::vector<HVector>& basis,
                                  const std::vector<HVector>& candidates,
                                  double drop = kRankTolerance);

/// Appends the normalized Gram-Schmidt residue of `candidate` to the
/// orthonormal `basis` unless it falls below `drop`.
bool append_orthonormal(std::vector<HVector>& basis, const HVector& candidate, double drop = kRankTolerance);

/// x minus its projection onto the span of orthonormal `basis`.
HVector remove_components(HVector x, const std::vector<HVector>& basis);

bool is_orthonormal(const std::vector<HVector>& vectors, double tol);

/// max |<a_i, b_j>|
double max_cross_inner(const std::vector<HVector>& a, const std::vector<HVector>& b);

}  // namespace woldlab
