#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "woldlab/certificate.hpp"
#include "woldlab/hvector.hpp"
#include "woldlab/lanes.hpp"

namespace woldlab {

/// Grid translation used by tail rules between quadrant lanes.
struct GridOffset {
  std::int64_t di = 0;
  std::int64_t dj = 0;
  auto operator<=>(const GridOffset&) const = default;
};

/// Maps every position of `source_lane` in the tail region to a single phased
/// basis vector of `target_lane`.
///
/// Tail region: position >= threshold on finite and naturals lanes,
/// |position| >= threshold on integer lanes, anti-diagonal >= threshold on
/// quadrant lanes. Line lanes translate by `offset`, quadrant lanes by `grid`.
struct TailRule {
  int source_lane = 0;
  std::int64_t threshold = 0;
  int target_lane = 0;
  std::int64_t offset = 0;
  GridOffset grid;
  Complex phase = 1.0;
};

/// An isometry on the closed span of a countable orthonormal basis, given by
/// finitely many explicit columns and one tail rule per infinite lane.
///
/// Instances only come out of make(), which checks totality, unit columns,
/// pairwise orthogonality and disjointness of tail images; a constructed
/// value is therefore always an isometry.
class StructuredIsometry {
 public:
  using Columns = std::map<BasisIndex, HVector>;

  static StructuredIsometry make(std::vector<LaneSpec> lanes, Columns explicit_columns,
                                 std::vector<TailRule> tail_rules, std::string name = {});

  const std::string& name() const { return name_; }
  const std::vector<LaneSpec>& lanes() const { return lanes_; }
  const LaneSpec& lane(int id) const;
  bool has_lane(int id) const;
  bool contains(const BasisIndex& index) const;

  const Columns& explicit_columns() const { return columns_; }
  const std::vector<TailRule>& tail_rules() const { return rules_; }
  const TailRule* rule_for(int source_lane) const;

  /// True when `index` is handled by its lane's tail rule.
  bool in_tail(const BasisIndex& index) const;
  /// True when `index` lies in the image of some tail rule.
  bool in_tail_image(const BasisIndex& index) const;

  /// V e_index.
  HVector column(const BasisIndex& index) const;
  /// V* e_index.
  HVector row(const BasisIndex& index) const;

  /// Canonical finite index window: all of every finite lane, positions
  /// 0..n-1 on naturals and quadrant lanes, -floor(n/2)..ceil(n/2)-1 on
  /// integer lanes. Lanes in declaration order, positions ascending.
  std::vector<BasisIndex> window(std::int64_t n) const;
  bool in_window(const BasisIndex& index, std::int64_t n) const;

  /// Indices that are not in the range of any column (finite part only);
  /// `infinite_misses` lists lanes where the complement of the range is
  /// infinite.
  std::vector<BasisIndex> missed_indices(std::vector<int>* infinite_misses = nullptr) const;

  /// Largest |position| touched by the explicit core (keys and supports).
  std::int64_t core_radius() const;
  std::int64_t max_abs_offset() const;

  StructuredIsometry renamed(std::string name) const;

 private:
  StructuredIsometry() = default;
  void validate() const;
  void build_row_index();

  std::string name_;
  std::vector<LaneSpec> lanes_;
  Columns columns_;
  std::vector<TailRule> rules_;
  // row index: e_b -> [(k, <V e_k, e_b>)] over explicit columns
  std::map<BasisIndex, std::vector<std::pair<BasisIndex, Complex>>> row_index_;
};

bool rule_covers(const TailRule& rule, const LaneSpec& source, std::int64_t position);
std::int64_t rule_target(const TailRule& rule, const LaneSpec& source, std::int64_t position);

HVector apply(const StructuredIsometry& v, const HVector& x);
HVector apply_adjoint(const StructuredIsometry& v, const HVector& x);
/// V^n x for n >= 0, (V*)^{-n} x for n < 0.
HVector apply_power(const StructuredIsometry& v, const HVector& x, int n);

bool same_lanes(const StructuredIsometry& a, const StructuredIsometry& b);

/// VW in structured form.
StructuredIsometry compose(const StructuredIsometry& v, const StructuredIsometry& w);

/// First basis index on which the two operators differ, or nullopt when they
/// are the same operator. Exact: tails are compared symbolically.
std::optional<BasisIndex> first_difference(const StructuredIsometry& a,
                                           const StructuredIsometry& b);

/// VW = WV. Always exact: both products are compared in structured form.
Certificate commutes(const StructuredIsometry& v, const StructuredIsometry& w,
                     std::int64_t window);

/// V*W = WV*. Refuses non-commuting input. Exact when every lane is a line
/// lane (the deep tails are compared symbolically); quadrant lanes are
/// window-certified only.
Certificate doubly_commutes(const StructuredIsometry& v, const StructuredIsometry& w,
                            std::int64_t window);

}  // namespace woldlab
