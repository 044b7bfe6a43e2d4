#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "woldlab/pairs.hpp"
#include "woldlab/spectral.hpp"

namespace woldlab {

/// Unilateral shift of the given multiplicity, one naturals lane per copy.
StructuredIsometry shift(int multiplicity = 1);
/// S^k on a single naturals lane.
StructuredIsometry shift_power(int k);
StructuredIsometry bilateral_shift(int multiplicity = 1);
/// V f = f, V e_i = e_{i+1}: lane 0 = finite(1) "f", lane 1 = naturals "e".
StructuredIsometry example_fixed_plus_shift();
/// Cyclic permutation of a finite lane of size `period`, plus a shift lane.
StructuredIsometry cycle_plus_shift(int period = 2);
/// B on lane 0, S on lane 1.
StructuredIsometry bilateral_plus_shift();
/// S (x) I and I (x) S on l^2(N^2), one quadrant lane.
StructuredIsometry grid_horizontal();
StructuredIsometry grid_vertical();

Arc default_kerchy_arc();  // [0, 3/5)
/// L^2(alpha) + L^2(2 alpha) + L^2(alpha); refuses unless alpha and its
/// double cover the circle.
SpectralUnitary example_kerchy(const Arc& alpha = default_kerchy_arc());
/// Multiplication by z on L^2(alpha).
SpectralUnitary arc_multiplication(const Arc& alpha);

/// Unitary part given spectrally (multiplication by z on a proper arc), shift
/// part given structurally.
struct FinalExample {
  SpectralUnitary unitary_part;
  StructuredIsometry shift_part;
  WoldResult shift_wold;
  SpectralUnitary extension;
};

struct FinalReport {
  SpectralDecision unitary_wandering;          // wandering vectors inside H_u
  std::vector<HVector> strongly_wandering_basis;  // certified generators of W
  bool ws_equals_s = false;                     // W = H_s
  Certificate certificate = Certificate::undecided(0);
};

FinalExample example_final(const Arc& alpha, int shift_generators);
FinalReport analyze_final(const FinalExample& example, int horizon = kDefaultDepth);

struct OperatorPair {
  StructuredIsometry v1;
  StructuredIsometry v2;
};

using CatalogItem = std::variant<StructuredIsometry, OperatorPair, SpectralUnitary, FinalExample>;

struct CatalogEntry {
  std::string name;
  std::string description;
  std::function<CatalogItem()> build;
  std::map<std::string, std::string> expected;  // operation -> compact JSON summary
};

const std::vector<CatalogEntry>& fixtures();
/// Throws MalformedInput for unknown names.
const CatalogEntry& catalog_entry(const std::string& name);

/// Compact JSON summary of running `operation` on the entry at default depth.
std::string summarize(const CatalogEntry& entry, const std::string& operation, int depth = kDefaultDepth);

}  // namespace woldlab
