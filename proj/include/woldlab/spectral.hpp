#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "woldlab/wold.hpp"

namespace woldlab {

/// Angle in turns, kept exact so that breakpoints compare exactly.
using Angle = boost::multiprecision::cpp_rational;

/// Simplest fraction within 1e-12 of `turns`, reduced mod 1 when `wrap`.
Angle to_angle(double turns, bool wrap = true);
/// Accepts "p/q" or a decimal literal.
Angle parse_angle(const std::string& text, bool wrap = true);
double to_double(const Angle& a);
std::string to_string(const Angle& a);

/// Half-open arc [start, start + length) on the circle, in turns.
struct Arc {
  Angle start;
  Angle length;

  static Arc make(Angle start, Angle length);
  static Arc full() { return make(0, 1); }
  bool is_full() const { return length == 1; }
  Angle end() const;  // start + length, not reduced
  bool contains(const Angle& a) const;
  friend bool operator==(const Arc&, const Arc&) = default;
};

struct Atom {
  Angle angle;
  int multiplicity = 1;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Direct sum of multiplication by z on L^2 of arcs (normalized Lebesgue
/// measure) and finitely many eigenvalues.
struct SpectralUnitary {
  std::vector<Arc> continuous_pieces;
  std::vector<Atom> atoms;

  /// Throws MalformedInput on repeated atom angles or nonpositive multiplicities.
  static SpectralUnitary make(std::vector<Arc> pieces, std::vector<Atom> atoms = {});
  SpectralUnitary direct_sum(const SpectralUnitary& other) const;
};

/// values[i] is the multiplicity on [breakpoints[i], breakpoints[i+1]) with an
/// implicit final breakpoint at 1. breakpoints[0] is always 0 and adjacent
/// values always differ.
struct MultiplicityProfile {
  std::vector<Angle> breakpoints;
  std::vector<int> values;
  std::vector<Atom> atom_overrides;

  static MultiplicityProfile constant(int value);
  int at(const Angle& a) const;
  int max() const;
  int min() const;
  bool is_constant() const { return values.size() == 1; }
  Angle interval_end(std::size_t i) const;
  MultiplicityProfile operator+(const MultiplicityProfile& other) const;
  friend bool operator==(const MultiplicityProfile&, const MultiplicityProfile&) = default;
};

/// Builds a profile from (start, end, value) steps over [0, 1); merges equal
/// neighbours.
MultiplicityProfile make_profile(std::vector<Angle> breakpoints, std::vector<int> values,
                                 std::vector<Atom> atoms = {});

MultiplicityProfile multiplicity_profile(const SpectralUnitary& u);

/// Image of the arc under z -> z^2.
std::vector<Arc> arc_double(const Arc& a);

struct SpectralDecision {
  bool value = false;
  std::string reason;
  std::optional<Arc> obstruction;  // an uncovered arc when one is the reason
};

SpectralDecision is_bilateral_shift(const SpectralUnitary& u);
SpectralDecision has_wandering_vector(const SpectralUnitary& u);

/// One bilateral-shift layer of a cover: on each interval of the input
/// profile the layer uses one copy of the spectral measure. `copies[i]` names
/// the copy used on interval i; `fresh` marks the intervals where that copy is
/// used for the first time.
struct CoverLayer {
  std::vector<int> copies;
  MultiplicityProfile fresh;
  SpectralUnitary unitary() const { return SpectralUnitary::make({Arc::full()}); }
};

struct BilateralCover {
  MultiplicityProfile profile;
  std::vector<CoverLayer> layers;
  bool exhausts = false;  // fresh parts sum to the input profile
};

/// Throws Refused when an atom is present or an arc is uncovered.
BilateralCover bilateral_cover(const SpectralUnitary& u);

/// Adds one full-circle piece per shift wandering generator.
SpectralUnitary spectral_of_extension(const WoldResult& wold, const SpectralUnitary& unitary_part);

/// Restriction to a sub-arc: every piece is intersected with `a`.
SpectralUnitary restrict_to_arc(const SpectralUnitary& u, const Arc& a);

}  // namespace woldlab
