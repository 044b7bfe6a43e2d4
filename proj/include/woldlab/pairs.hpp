#pragma once

#include <vector>

#include "woldlab/wold.hpp"

namespace woldlab {

/// Closed span of V2^n H0 on the window. Refuses a non-commuting pair or an
/// H0 that is not inside the H_0 computed for V1.
CertifiedSubspace h0_plus(const StructuredIsometry& v1, const StructuredIsometry& v2, const Subspace& h0, int depth);

struct Exhaustion {
  Subspace h1;                    // window complement of everything peeled off
  std::vector<HVector> removed;   // orthonormal basis of the peeled part
  int iterations = 0;             // number of nonzero H_0n+ removed
  Certificate certificate = Certificate::undecided(0);
};

Exhaustion exhaust_h0(const StructuredIsometry& v1, const StructuredIsometry& v2, int max_iter, int depth);

/// Window basis of the intersection over i <= depth of ker(A* B^i).
std::vector<HVector> joint_kernel(const StructuredIsometry& a, const StructuredIsometry& b, int depth,
                                  std::int64_t window);

Certificate weak_bishift_classify(const StructuredIsometry& v1, const StructuredIsometry& v2, int depth);

struct PairReport {
  CertifiedSubspace uu;  // both unitary
  CertifiedSubspace us;  // V1 unitary, V2 shift
  CertifiedSubspace su;  // V1 shift, V2 unitary
  CertifiedSubspace ws;  // remainder, spanned by wandering vectors of either operator
  std::vector<HVector> wandering_v1;
  std::vector<HVector> wandering_v2;
  int depth = 0;
  std::int64_t window = 0;
};

PairReport pair_decompose(const StructuredIsometry& v1, const StructuredIsometry& v2, int depth);

/// Searches lane-graded window subspaces and the computed pair parts for a
/// nonzero reducing subspace on which the pair doubly commutes. A true verdict
/// is relative to that family and never exact.
Certificate is_completely_non_doubly_commuting(const StructuredIsometry& v1, const StructuredIsometry& v2,
                                               std::int64_t window);

/// Orthonormal basis of span(a) intersected with span(b); both inputs
/// orthonormal.
std::vector<HVector> intersect(const std::vector<HVector>& a, const std::vector<HVector>& b);

/// Orthonormal basis of span(window indices) minus span(basis).
std::vector<HVector> window_complement(const std::vector<BasisIndex>& window, const std::vector<HVector>& basis);

}  // namespace woldlab
