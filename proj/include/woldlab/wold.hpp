#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "woldlab/certificate.hpp"
#include "woldlab/isometry.hpp"
#include "woldlab/subspace.hpp"

namespace woldlab {

/// A window basis together with the certificate that qualifies it.
struct CertifiedSubspace {
  Subspace subspace;
  Certificate certificate = Certificate::undecided(0);
};

/// Wold decomposition H = H_u (+) H_s restricted to an index window.
struct WoldResult {
  std::vector<HVector> shift_wandering_basis;  // ker V* inside the window
  std::vector<HVector> unitary_window_basis;   // H_u inside the window
  std::vector<HVector> shift_window_basis;     // V^n ker V* vectors lying inside the window
  int depth = 0;
  std::int64_t window = 0;
  bool exact = false;
  Certificate certificate = Certificate::undecided(0);
};

/// Orthonormal basis of ker V* among vectors supported in the window. Exact
/// when the whole kernel is finite dimensional and sits inside the window.
CertifiedSubspace kernel_of_adjoint(const StructuredIsometry& v, std::int64_t window);

/// Wold decomposition on `window` (defaults to `depth`). Exact when the
/// adjoint kernel is exact and every kernel orbit drifts out of the window
/// for good within `depth` steps.
WoldResult wold_decompose(const StructuredIsometry& v, int depth, std::optional<std::int64_t> window = {});

/// Wold components (P_{H_u} x, P_{H_s} x) of a window vector. Refuses when
/// x is not covered by the window bases.
std::pair<HVector, HVector> wold_components(const WoldResult& wold, const HVector& x);

/// <V^n x, x> = 0 for n = 1..horizon, closed by support drift when possible.
Certificate is_wandering(const StructuredIsometry& v, const HVector& x, int horizon = kDefaultDepth);

/// <V^n x, V^m x> = 0 for -horizon <= m < n <= horizon (negative powers are
/// adjoint powers), closed by forward and backward drift when possible.
Certificate is_strongly_wandering(const StructuredIsometry& v, const HVector& x, int horizon = kDefaultDepth);

/// Lanes spanning a finite-dimensional V-invariant (hence reducing) subspace.
std::set<int> closed_finite_lanes(const StructuredIsometry& v);

struct WanderingSpanResult {
  CertifiedSubspace h0;
  CertifiedSubspace hw;
  std::vector<HVector> unitary_wandering;  // certified wandering vectors found in H_u
  WoldResult wold;
  Certificate certificate = Certificate::undecided(0);
};

struct WanderingSearch {
  std::vector<HVector> candidates;  // user-supplied vectors tried in addition to the window basis
  int budget = 4096;                // maximal number of wandering tests
};

/// H = H_0 (+) H_w with H_w the span of wandering vectors, on the window.
WanderingSpanResult wandering_span_decompose(const StructuredIsometry& v, int depth,
                                             const WanderingSearch& search = {});

/// Max over window basis vectors x of ||P V x - V P x|| and ||P V* x - V* P x||
/// with P the projection onto `basis`; the argmax is reported through `worst`.
/// Basis vectors whose images under V or V* leave the window are skipped.
double reducing_defect(const StructuredIsometry& v, const std::vector<HVector>& basis,
                       const std::vector<BasisIndex>& window, BasisIndex* worst = nullptr);

struct UnitaryExtension {
  StructuredIsometry unitary;
  std::map<BasisIndex, BasisIndex> embedding;  // original index -> index in the extension
  std::vector<int> widened_lanes;              // naturals lanes turned into integer lanes
  std::vector<int> added_lanes;                // backward lanes for non-basis kernel vectors
};

/// Minimal unitary extension; refuses unless the Wold decomposition at
/// `depth` is exact.
UnitaryExtension minimal_unitary_extension(const StructuredIsometry& v, int depth = kDefaultDepth);

/// Every new basis vector of the extension reaches the original space under
/// forward powers within `horizon` steps (checked on the window).
Certificate extension_is_minimal(const UnitaryExtension& ext, std::int64_t window, int horizon = kDefaultDepth);

/// Unitarity of an operator, certified via its adjoint kernel.
bool is_unitary(const StructuredIsometry& u, std::int64_t window = kDefaultDepth);

/// (+)_{|n| <= horizon} U^n (C w) for a strongly wandering w.
Subspace bilateral_orbit(const StructuredIsometry& u, const HVector& w, int horizon = kDefaultDepth);

}  // namespace woldlab
