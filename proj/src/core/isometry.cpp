#include "woldlab/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <set>
#include <sstream>

#include "woldlab/errors.hpp"
#include "woldlab/tolerance.hpp"

namespace woldlab {

namespace {

constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

struct Ray {
  std::int64_t lo;
  std::int64_t hi;
};

bool is_line(DomainKind kind) { return kind != DomainKind::quadrant; }

std::int64_t quadrant_count(std::int64_t diagonals) { return diagonals * (diagonals + 1) / 2; }

std::string fmt_double(double x) {
  std::ostringstream out;
  out.precision(3);
  out << x;
  return out.str();
}

// Image of a line-lane rule as inclusive position intervals of the target lane.
std::vector<Ray> image_rays(const TailRule& rule, const LaneSpec& source) {
  const std::int64_t t = rule.threshold;
  const std::int64_t o = rule.offset;
  switch (source.kind) {
    case DomainKind::finite:
      if (t >= source.size) return {};
      return {{t + o, source.size - 1 + o}};
    case DomainKind::naturals: return {{t + o, kPosInf}};
    case DomainKind::integers:
      if (t == 0) return {{kNegInf, kPosInf}};
      return {{kNegInf, -t + o}, {t + o, kPosInf}};
    case DomainKind::quadrant: break;
  }
  return {};
}

bool ray_contains(const Ray& r, std::int64_t p) { return r.lo <= p && p <= r.hi; }

bool quadrant_image_contains(const TailRule& rule, std::int64_t position) {
  const GridPoint g = grid_point(position);
  return g.i >= rule.grid.di && g.j >= rule.grid.dj &&
         g.i + g.j >= rule.threshold + rule.grid.di + rule.grid.dj;
}

// Complement of `rays` inside [lo, hi]; returns false when it is unbounded.
bool finite_gaps(std::vector<Ray> rays, std::int64_t lo, std::int64_t hi, std::vector<std::int64_t>& out) {
  std::sort(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) { return a.lo < b.lo; });
  std::int64_t cursor = lo;  // first position not yet known to be covered
  bool cursor_done = false;
  for (const Ray& r : rays) {
    if (cursor_done) break;
    if (r.hi < cursor) continue;
    if (r.lo > cursor) {
      if (cursor == kNegInf) return false;
      const std::int64_t gap_end = std::min(r.lo - 1, hi);
      for (std::int64_t p = cursor; p <= gap_end; ++p) out.push_back(p);
    }
    if (r.hi == kPosInf) {
      cursor_done = true;
    } else {
      cursor = std::max(cursor, r.hi + 1);
    }
    if (!cursor_done && cursor > hi) cursor_done = true;
  }
  if (!cursor_done) {
    if (hi == kPosInf || cursor == kNegInf) return false;
    for (std::int64_t p = cursor; p <= hi; ++p) out.push_back(p);
  }
  return true;
}

}  // namespace

bool rule_covers(const TailRule& rule, const LaneSpec& source, std::int64_t position) {
  if (!source.contains(position)) return false;
  switch (source.kind) {
    case DomainKind::finite:
    case DomainKind::naturals: return position >= rule.threshold;
    case DomainKind::integers: return position >= rule.threshold || position <= -rule.threshold;
    case DomainKind::quadrant: return grid_diagonal(position) >= rule.threshold;
  }
  return false;
}

std::int64_t rule_target(const TailRule& rule, const LaneSpec& source, std::int64_t position) {
  if (source.kind == DomainKind::quadrant) {
    const GridPoint g = grid_point(position);
    return grid_position({g.i + rule.grid.di, g.j + rule.grid.dj});
  }
  return position + rule.offset;
}

StructuredIsometry StructuredIsometry::make(std::vector<LaneSpec> lanes, Columns explicit_columns,
                                            std::vector<TailRule> tail_rules, std::string name) {
  StructuredIsometry v;
  v.name_ = std::move(name);
  v.lanes_ = std::move(lanes);
  v.columns_ = std::move(explicit_columns);
  v.rules_ = std::move(tail_rules);
  std::sort(v.rules_.begin(), v.rules_.end(),
            [](const TailRule& a, const TailRule& b) { return a.source_lane < b.source_lane; });
  v.validate();
  v.build_row_index();
  return v;
}

StructuredIsometry StructuredIsometry::renamed(std::string name) const {
  StructuredIsometry v = *this;
  v.name_ = std::move(name);
  return v;
}

const LaneSpec& StructuredIsometry::lane(int id) const {
  for (const auto& l : lanes_)
    if (l.id == id) return l;
  throw MalformedInput("unknown lane " + std::to_string(id));
}

bool StructuredIsometry::has_lane(int id) const {
  return std::any_of(lanes_.begin(), lanes_.end(), [id](const LaneSpec& l) { return l.id == id; });
}

bool StructuredIsometry::contains(const BasisIndex& index) const {
  for (const auto& l : lanes_)
    if (l.id == index.lane) return l.contains(index.position);
  return false;
}

const TailRule* StructuredIsometry::rule_for(int source_lane) const {
  for (const auto& r : rules_)
    if (r.source_lane == source_lane) return &r;
  return nullptr;
}

bool StructuredIsometry::in_tail(const BasisIndex& index) const {
  const TailRule* r = rule_for(index.lane);
  return r != nullptr && rule_covers(*r, lane(index.lane), index.position);
}

bool StructuredIsometry::in_tail_image(const BasisIndex& index) const {
  for (const auto& r : rules_) {
    if (r.target_lane != index.lane) continue;
    const LaneSpec& src = lane(r.source_lane);
    if (src.kind == DomainKind::quadrant) {
      if (quadrant_image_contains(r, index.position)) return true;
    } else {
      for (const Ray& ray : image_rays(r, src))
        if (ray_contains(ray, index.position)) return true;
    }
  }
  return false;
}

void StructuredIsometry::validate() const {
  const double eps = tolerance();
  std::set<int> ids;
  for (const auto& l : lanes_) {
    if (l.id < 0) throw MalformedInput("lane id " + std::to_string(l.id) + " is negative");
    if (!ids.insert(l.id).second) throw MalformedInput("duplicate lane id " + std::to_string(l.id));
    if (l.kind == DomainKind::finite && l.size < 1)
      throw MalformedInput("finite lane " + std::to_string(l.id) + " needs size >= 1");
  }
  if (lanes_.empty()) throw MalformedInput("operator declares no lanes");

  std::set<int> sources;
  for (const auto& r : rules_) {
    const std::string tag = "tail rule on lane " + std::to_string(r.source_lane);
    if (!has_lane(r.source_lane) || !has_lane(r.target_lane))
      throw MalformedInput(tag + " references an unknown lane");
    if (!sources.insert(r.source_lane).second) throw MalformedInput("lane " + std::to_string(r.source_lane) + " has more than one tail rule");
    if (r.threshold < 0) throw MalformedInput(tag + ": negative threshold");
    if (std::abs(std::abs(r.phase) - 1.0) > eps) throw MalformedInput(tag + ": phase is not unimodular");
    const LaneSpec& src = lane(r.source_lane);
    const LaneSpec& dst = lane(r.target_lane);
    if ((src.kind == DomainKind::quadrant) != (dst.kind == DomainKind::quadrant))
      throw MalformedInput(tag + ": quadrant lanes only map to quadrant lanes");
    if (src.kind == DomainKind::quadrant) {
      if (r.grid.di < 0 || r.grid.dj < 0) throw MalformedInput(tag + ": grid offset must be nonnegative");
      continue;
    }
    if (src.kind == DomainKind::finite && r.threshold >= src.size)
      throw MalformedInput(tag + ": threshold beyond the finite lane");
    for (const Ray& ray : image_rays(r, src)) {
      const bool ok = [&] {
        switch (dst.kind) {
          case DomainKind::finite: return ray.lo != kNegInf && ray.hi != kPosInf && ray.lo >= 0 && ray.hi < dst.size;
          case DomainKind::naturals: return ray.lo != kNegInf && ray.lo >= 0;
          case DomainKind::integers: return true;
          case DomainKind::quadrant: return false;
        }
        return false;
      }();
      if (!ok) throw MalformedInput(tag + ": image leaves the domain of lane " + std::to_string(dst.id));
    }
  }

  // disjoint tail images
  for (std::size_t a = 0; a < rules_.size(); ++a) {
    for (std::size_t b = a + 1; b < rules_.size(); ++b) {
      const TailRule& ra = rules_[a];
      const TailRule& rb = rules_[b];
      if (ra.target_lane != rb.target_lane) continue;
      const LaneSpec& sa = lane(ra.source_lane);
      const LaneSpec& sb = lane(rb.source_lane);
      bool overlap = false;
      if (sa.kind == DomainKind::quadrant) {
        overlap = true;  // two translated quadrants always meet
      } else {
        for (const Ray& x : image_rays(ra, sa))
          for (const Ray& y : image_rays(rb, sb))
            if (std::max(x.lo, y.lo) <= std::min(x.hi, y.hi)) overlap = true;
      }
      if (overlap)
        throw MalformedInput("tail rules of lanes " + std::to_string(ra.source_lane) + " and " +
                             std::to_string(rb.source_lane) + " have overlapping images");
    }
  }

  // totality: explicit columns exactly where no rule applies
  for (const auto& [key, col] : columns_) {
    if (!contains(key)) throw MalformedInput("column " + to_string(key) + " is outside the declared lanes");
    if (in_tail(key)) throw MalformedInput("column " + to_string(key) + " is also covered by a tail rule");
    for (const auto& [index, c] : col.entries()) {
      (void)c;
      if (!contains(index))
        throw MalformedInput("column " + to_string(key) + " has an entry at " + to_string(index) + " outside the declared lanes");
    }
  }
  for (const auto& l : lanes_) {
    const TailRule* r = rule_for(l.id);
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    switch (l.kind) {
      case DomainKind::finite:
        lo = 0;
        hi = r ? r->threshold - 1 : l.size - 1;
        break;
      case DomainKind::naturals:
        if (!r) throw MalformedInput("naturals lane " + std::to_string(l.id) + " needs a tail rule");
        hi = r->threshold - 1;
        break;
      case DomainKind::integers:
        if (!r) throw MalformedInput("integer lane " + std::to_string(l.id) + " needs a tail rule");
        lo = -r->threshold + 1;
        hi = r->threshold - 1;
        break;
      case DomainKind::quadrant:
        if (!r) throw MalformedInput("quadrant lane " + std::to_string(l.id) + " needs a tail rule");
        hi = quadrant_count(r->threshold) - 1;
        break;
    }
    for (std::int64_t p = lo; p <= hi; ++p)
      if (!columns_.contains({l.id, p}))
        throw MalformedInput("no image for basis index " + to_string({l.id, p}));
  }

  // isometry: unit, orthogonal explicit columns that avoid tail images
  for (const auto& [key, col] : columns_) {
    const double n = col.norm();
    if (std::abs(n - 1.0) > eps)
      throw MalformedInput("column " + to_string(key) + " is not a unit vector: ||c|| = " + fmt_double(n));
    for (const auto& [index, c] : col.entries()) {
      (void)c;
      if (in_tail_image(index))
        throw MalformedInput("column " + to_string(key) + " is not orthogonal to the tail image " + to_string(index));
    }
  }
  for (auto a = columns_.begin(); a != columns_.end(); ++a) {
    for (auto b = std::next(a); b != columns_.end(); ++b) {
      const double ip = std::abs(inner(a->second, b->second));
      if (ip > eps)
        throw MalformedInput("columns " + to_string(a->first) + " and " + to_string(b->first) +
                             " not orthogonal: |<c,c'>| = " + fmt_double(ip));
    }
  }
}

void StructuredIsometry::build_row_index() {
  for (const auto& [key, col] : columns_)
    for (const auto& [index, c] : col.entries()) row_index_[index].emplace_back(key, c);
}

HVector StructuredIsometry::column(const BasisIndex& index) const {
  if (!contains(index)) throw MalformedInput("basis index " + to_string(index) + " is outside the declared lanes");
  if (auto it = columns_.find(index); it != columns_.end()) return it->second;
  const TailRule* r = rule_for(index.lane);
  const LaneSpec& src = lane(index.lane);
  return HVector::basis({r->target_lane, rule_target(*r, src, index.position)}, r->phase);
}

HVector StructuredIsometry::row(const BasisIndex& index) const {
  if (!contains(index)) throw MalformedInput("basis index " + to_string(index) + " is outside the declared lanes");
  HVector out;
  if (auto it = row_index_.find(index); it != row_index_.end())
    for (const auto& [key, c] : it->second) out.add(key, std::conj(c));
  for (const auto& r : rules_) {
    if (r.target_lane != index.lane) continue;
    const LaneSpec& src = lane(r.source_lane);
    std::int64_t p = 0;
    if (src.kind == DomainKind::quadrant) {
      const GridPoint g = grid_point(index.position);
      if (g.i < r.grid.di || g.j < r.grid.dj) continue;
      p = grid_position({g.i - r.grid.di, g.j - r.grid.dj});
    } else {
      p = index.position - r.offset;
    }
    if (rule_covers(r, src, p)) out.add({r.source_lane, p}, std::conj(r.phase));
  }
  return out;
}

std::vector<BasisIndex> StructuredIsometry::window(std::int64_t n) const {
  std::vector<BasisIndex> out;
  for (const auto& l : lanes_) {
    switch (l.kind) {
      case DomainKind::finite:
        for (std::int64_t p = 0; p < l.size; ++p) out.push_back({l.id, p});
        break;
      case DomainKind::naturals:
      case DomainKind::quadrant:
        for (std::int64_t p = 0; p < n; ++p) out.push_back({l.id, p});
        break;
      case DomainKind::integers:
        for (std::int64_t p = -(n / 2); p < n - n / 2; ++p) out.push_back({l.id, p});
        break;
    }
  }
  return out;
}

bool StructuredIsometry::in_window(const BasisIndex& index, std::int64_t n) const {
  for (const auto& l : lanes_) {
    if (l.id != index.lane) continue;
    const std::int64_t p = index.position;
    switch (l.kind) {
      case DomainKind::finite: return l.contains(p);
      case DomainKind::naturals:
      case DomainKind::quadrant: return p >= 0 && p < n;
      case DomainKind::integers: return p >= -(n / 2) && p < n - n / 2;
    }
  }
  return false;
}

std::vector<BasisIndex> StructuredIsometry::missed_indices(std::vector<int>* infinite_misses) const {
  std::set<BasisIndex> core_rows;
  for (const auto& [key, col] : columns_)
    for (const auto& [index, c] : col.entries()) core_rows.insert(index);

  std::vector<BasisIndex> out;
  for (const auto& l : lanes_) {
    std::vector<std::int64_t> gaps;
    bool finite = true;
    if (l.kind == DomainKind::quadrant) {
      const TailRule* into = nullptr;
      for (const auto& r : rules_)
        if (r.target_lane == l.id) into = &r;
      if (into == nullptr || into->grid.di != 0 || into->grid.dj != 0) {
        finite = false;
      } else {
        for (std::int64_t p = 0; p < quadrant_count(into->threshold); ++p) gaps.push_back(p);
      }
    } else {
      std::vector<Ray> rays;
      for (const auto& r : rules_)
        if (r.target_lane == l.id)
          for (const Ray& ray : image_rays(r, lane(r.source_lane))) rays.push_back(ray);
      std::int64_t lo = 0;
      std::int64_t hi = kPosInf;
      if (l.kind == DomainKind::finite) hi = l.size - 1;
      if (l.kind == DomainKind::integers) lo = kNegInf;
      finite = finite_gaps(rays, lo, hi, gaps);
    }
    if (!finite) {
      if (infinite_misses) infinite_misses->push_back(l.id);
      continue;
    }
    for (std::int64_t p : gaps)
      if (!core_rows.contains({l.id, p})) out.push_back({l.id, p});
  }
  return out;
}

std::int64_t StructuredIsometry::core_radius() const {
  std::int64_t r = 0;
  for (const auto& [key, col] : columns_) {
    r = std::max(r, std::abs(key.position));
    for (const auto& [index, c] : col.entries()) r = std::max(r, std::abs(index.position));
  }
  for (const auto& rule : rules_) {
    r = std::max(r, rule.threshold);
    const LaneSpec& src = lane(rule.source_lane);
    if (src.kind == DomainKind::finite) r = std::max(r, src.size + std::abs(rule.offset));
  }
  for (const auto& l : lanes_)
    if (l.kind == DomainKind::finite) r = std::max(r, l.size);
  return r;
}

std::int64_t StructuredIsometry::max_abs_offset() const {
  std::int64_t m = 0;
  for (const auto& r : rules_) m = std::max({m, std::abs(r.offset), r.grid.di + r.grid.dj});
  return m;
}

HVector apply(const StructuredIsometry& v, const HVector& x) {
  HVector out;
  for (const auto& [index, c] : x.entries()) {
    const HVector col = v.column(index);
    for (const auto& [k, a] : col.entries()) out.add(k, c * a);
  }
  return out;
}

HVector apply_adjoint(const StructuredIsometry& v, const HVector& x) {
  HVector out;
  for (const auto& [index, c] : x.entries()) {
    const HVector r = v.row(index);
    for (const auto& [k, a] : r.entries()) out.add(k, c * a);
  }
  return out;
}

HVector apply_power(const StructuredIsometry& v, const HVector& x, int n) {
  HVector y = x;
  for (int k = 0; k < n; ++k) y = apply(v, y);
  for (int k = 0; k < -n; ++k) y = apply_adjoint(v, y);
  return y;
}

bool same_lanes(const StructuredIsometry& a, const StructuredIsometry& b) {
  if (a.lanes().size() != b.lanes().size()) return false;
  for (std::size_t i = 0; i < a.lanes().size(); ++i) {
    const LaneSpec& x = a.lanes()[i];
    const LaneSpec& y = b.lanes()[i];
    if (x.id != y.id || x.kind != y.kind || (x.kind == DomainKind::finite && x.size != y.size)) return false;
  }
  return true;
}

namespace {

// Threshold from which the composite of rule `w` (on `src`) followed by rule
// `v` (on w's target lane) applies uniformly.
std::int64_t composite_threshold(const TailRule& w, const LaneSpec& src, const TailRule& v) {
  switch (src.kind) {
    case DomainKind::quadrant: return std::max(w.threshold, v.threshold - (w.grid.di + w.grid.dj));
    case DomainKind::integers: return std::max(w.threshold, v.threshold + std::abs(w.offset));
    case DomainKind::finite:
    case DomainKind::naturals: return std::max({w.threshold, v.threshold - w.offset, std::int64_t{0}});
  }
  return w.threshold;
}

// Explicit-region positions of a lane given its rule threshold (or none).
std::vector<std::int64_t> explicit_positions(const LaneSpec& l, std::optional<std::int64_t> threshold) {
  std::vector<std::int64_t> out;
  switch (l.kind) {
    case DomainKind::finite: {
      const std::int64_t hi = threshold ? std::min(*threshold, l.size) : l.size;
      for (std::int64_t p = 0; p < hi; ++p) out.push_back(p);
      break;
    }
    case DomainKind::naturals:
      for (std::int64_t p = 0; p < *threshold; ++p) out.push_back(p);
      break;
    case DomainKind::integers:
      for (std::int64_t p = -*threshold + 1; p < *threshold; ++p) out.push_back(p);
      break;
    case DomainKind::quadrant:
      for (std::int64_t p = 0; p < quadrant_count(*threshold); ++p) out.push_back(p);
      break;
  }
  return out;
}

}  // namespace

StructuredIsometry compose(const StructuredIsometry& v, const StructuredIsometry& w) {
  if (!same_lanes(v, w)) throw MalformedInput("compose: operators act on different lane sets");
  std::vector<TailRule> rules;
  StructuredIsometry::Columns columns;
  for (const auto& l : v.lanes()) {
    const TailRule* rw = w.rule_for(l.id);
    std::optional<std::int64_t> threshold;
    if (rw != nullptr) {
      const TailRule* rv = v.rule_for(rw->target_lane);
      if (rv != nullptr) {
        TailRule r;
        r.source_lane = l.id;
        r.threshold = composite_threshold(*rw, l, *rv);
        r.target_lane = rv->target_lane;
        r.offset = rw->offset + rv->offset;
        r.grid = {rw->grid.di + rv->grid.di, rw->grid.dj + rv->grid.dj};
        r.phase = rw->phase * rv->phase;
        if (!(l.kind == DomainKind::finite && r.threshold >= l.size)) {
          threshold = r.threshold;
          rules.push_back(r);
        }
      } else if (l.kind != DomainKind::finite) {
        throw MalformedComposition("compose: infinite lane " + std::to_string(l.id) +
                                   " is carried into a lane without a tail rule");
      }
    }
    for (std::int64_t p : explicit_positions(l, threshold))
      columns.emplace(BasisIndex{l.id, p}, apply(v, w.column({l.id, p})));
  }
  std::string name = v.name().empty() || w.name().empty() ? std::string{} : v.name() + "*" + w.name();
  try {
    return StructuredIsometry::make(v.lanes(), std::move(columns), std::move(rules), std::move(name));
  } catch (const MalformedInput& e) {
    throw MalformedComposition(std::string("compose: ") + e.what());
  }
}

std::optional<BasisIndex> first_difference(const StructuredIsometry& a, const StructuredIsometry& b) {
  if (!same_lanes(a, b)) throw MalformedInput("operators act on different lane sets");
  const double eps = tolerance();
  for (const auto& l : a.lanes()) {
    const TailRule* ra = a.rule_for(l.id);
    const TailRule* rb = b.rule_for(l.id);
    if (l.kind == DomainKind::finite) {
      for (std::int64_t p = 0; p < l.size; ++p)
        if (distance(a.column({l.id, p}), b.column({l.id, p})) > eps) return BasisIndex{l.id, p};
      continue;
    }
    const std::int64_t t = std::max(ra->threshold, rb->threshold);
    for (std::int64_t p : explicit_positions(l, t))
      if (distance(a.column({l.id, p}), b.column({l.id, p})) > eps) return BasisIndex{l.id, p};
    const bool same_rule = ra->target_lane == rb->target_lane && ra->offset == rb->offset &&
                           ra->grid == rb->grid && std::abs(ra->phase - rb->phase) <= eps;
    if (!same_rule) {
      const std::int64_t deep = l.kind == DomainKind::quadrant ? quadrant_count(t) : t;
      return BasisIndex{l.id, deep};
    }
  }
  return std::nullopt;
}

Certificate commutes(const StructuredIsometry& v, const StructuredIsometry& w, std::int64_t window) {
  if (!same_lanes(v, w)) throw MalformedInput("commutes: operators act on different lane sets");
  const double eps = tolerance();
  const int horizon = static_cast<int>(window);
  for (const BasisIndex& b : v.window(window)) {
    const HVector e = HVector::basis(b);
    if (distance(apply(v, apply(w, e)), apply(w, apply(v, e))) > eps) return Certificate::fails(b, horizon, "VW e != WV e");
  }
  if (auto diff = first_difference(compose(v, w), compose(w, v)))
    return Certificate::fails(*diff, horizon, "VW e != WV e beyond the window");
  return Certificate::holds(horizon, true, "products agree in structured form");
}

namespace {

struct DeepMove {
  int lane;
  std::int64_t offset;
  Complex phase;
};

// Action of V on deep positions of `lane` at the given end (+1 / -1).
std::optional<DeepMove> deep_forward(const StructuredIsometry& v, int lane) {
  const TailRule* r = v.rule_for(lane);
  if (r == nullptr) return std::nullopt;
  return DeepMove{r->target_lane, r->offset, r->phase};
}

std::optional<DeepMove> deep_adjoint(const StructuredIsometry& v, int lane, int end) {
  for (const auto& r : v.tail_rules()) {
    if (r.target_lane != lane) continue;
    for (const Ray& ray : image_rays(r, v.lane(r.source_lane))) {
      if ((end > 0 && ray.hi == kPosInf) || (end < 0 && ray.lo == kNegInf))
        return DeepMove{r.source_lane, -r.offset, std::conj(r.phase)};
    }
  }
  return std::nullopt;
}

std::optional<DeepMove> then(std::optional<DeepMove> first, const std::function<std::optional<DeepMove>(int)>& next) {
  if (!first) return std::nullopt;
  auto second = next(first->lane);
  if (!second) return std::nullopt;
  return DeepMove{second->lane, first->offset + second->offset, first->phase * second->phase};
}

}  // namespace

Certificate doubly_commutes(const StructuredIsometry& v, const StructuredIsometry& w, std::int64_t window) {
  const Certificate c = commutes(v, w, window);
  if (!c.is_true()) throw Refused("doubly_commutes: operators do not commute, witness " + to_string(c.witness()));
  const double eps = tolerance();
  const int horizon = static_cast<int>(window);

  auto check = [&](const BasisIndex& b) {
    const HVector e = HVector::basis(b);
    return distance(apply_adjoint(v, apply(w, e)), apply(w, apply_adjoint(v, e))) <= eps;
  };

  bool line_only = true;
  for (const auto& l : v.lanes()) line_only = line_only && is_line(l.kind);

  std::set<BasisIndex> checked;
  for (const BasisIndex& b : v.window(window)) {
    if (!check(b)) return Certificate::fails(b, horizon, "V*W e != WV* e");
    checked.insert(b);
  }
  if (!line_only) return Certificate::holds(horizon, false, "checked on the window only (quadrant lanes)");

  // Beyond radius R every lane acts by its tail rule; compare those symbolically.
  const std::int64_t radius = std::max(v.core_radius(), w.core_radius()) +
                              2 * (v.max_abs_offset() + w.max_abs_offset()) + 2;
  for (const auto& l : v.lanes()) {
    const std::int64_t lo = l.kind == DomainKind::integers ? -radius + 1 : 0;
    const std::int64_t hi = l.kind == DomainKind::finite ? l.size - 1 : radius - 1;
    for (std::int64_t p = lo; p <= hi; ++p) {
      const BasisIndex b{l.id, p};
      if (checked.contains(b)) continue;
      if (!check(b)) return Certificate::fails(b, horizon, "V*W e != WV* e");
    }
  }
  for (const auto& l : v.lanes()) {
    if (l.kind == DomainKind::finite) continue;
    for (int end : {+1, -1}) {
      if (end < 0 && l.kind != DomainKind::integers) continue;
      auto lhs = then(deep_forward(w, l.id), [&](int lane) { return deep_adjoint(v, lane, end); });
      auto rhs = then(deep_adjoint(v, l.id, end), [&](int lane) { return deep_forward(w, lane); });
      const bool same = (!lhs && !rhs) ||
                        (lhs && rhs && lhs->lane == rhs->lane && lhs->offset == rhs->offset &&
                         std::abs(lhs->phase - rhs->phase) <= eps);
      if (!same) return Certificate::fails(BasisIndex{l.id, end * radius}, horizon, "deep tails differ");
    }
  }
  return Certificate::holds(horizon, true, "core checked and tails compared symbolically");
}

}  // namespace woldlab
