#include "woldlab/wold.hpp"

#include <algorithm>
#include <cmath>

#include "woldlab/errors.hpp"
#include "woldlab/tolerance.hpp"

namespace woldlab {

namespace {

// Per-lane [min, max] of positions touched by a set of vectors.
class LaneExtent {
 public:
  void add(const HVector& x) {
    for (const auto& [b, c] : x.entries()) {
      (void)c;
      auto [it, inserted] = span_.try_emplace(b.lane, b.position, b.position);
      if (!inserted) {
        it->second.first = std::min(it->second.first, b.position);
        it->second.second = std::max(it->second.second, b.position);
      }
    }
  }

  // True when `b` lies strictly past every recorded position of its lane in
  // direction `drift`.
  bool beyond(const BasisIndex& b, int drift) const {
    auto it = span_.find(b.lane);
    if (it == span_.end()) return true;
    return drift > 0 ? b.position > it->second.second : b.position < it->second.first;
  }

 private:
  std::map<int, std::pair<std::int64_t, std::int64_t>> span_;
};

// +1 / -1 when forward iteration moves e_b monotonically outwards on a
// self-loop tail forever, 0 otherwise.
int forward_drift(const StructuredIsometry& v, const BasisIndex& b) {
  const TailRule* r = v.rule_for(b.lane);
  if (r == nullptr || r->target_lane != b.lane) return 0;
  const LaneSpec& lane = v.lane(b.lane);
  if (!rule_covers(*r, lane, b.position)) return 0;
  switch (lane.kind) {
    case DomainKind::finite: return 0;
    case DomainKind::naturals: return r->offset > 0 ? 1 : 0;
    case DomainKind::quadrant: return r->grid.di + r->grid.dj > 0 ? 1 : 0;
    case DomainKind::integers:
      if (r->offset > 0 && (r->threshold == 0 || b.position >= r->threshold)) return 1;
      if (r->offset < 0 && (r->threshold == 0 || b.position <= -r->threshold)) return -1;
      return 0;
  }
  return 0;
}

// Same for adjoint iteration (only integer lanes can escape backwards).
int backward_drift(const StructuredIsometry& v, const BasisIndex& b) {
  const TailRule* r = v.rule_for(b.lane);
  if (r == nullptr || r->target_lane != b.lane || r->offset == 0) return 0;
  const LaneSpec& lane = v.lane(b.lane);
  if (lane.kind != DomainKind::integers) return 0;
  const std::int64_t t = r->threshold;
  const std::int64_t o = r->offset;
  if (t == 0) return o > 0 ? -1 : 1;
  if (o > 0 && b.position <= -t + o) return -1;
  if (o < 0 && b.position >= t + o) return 1;
  return 0;
}

bool escapes_forward(const StructuredIsometry& v, const HVector& y, const LaneExtent& past) {
  for (const auto& [b, c] : y.entries()) {
    (void)c;
    const int d = forward_drift(v, b);
    if (d == 0 || !past.beyond(b, d)) return false;
  }
  return true;
}

bool escapes_backward(const StructuredIsometry& v, const HVector& y, const LaneExtent& past) {
  for (const auto& [b, c] : y.entries()) {
    (void)c;
    const int d = backward_drift(v, b);
    if (d == 0 || !past.beyond(b, d)) return false;
  }
  return true;
}

// Smallest E such that V*^e y is disjoint from y for every e >= E, for y on
// backward-escaping self-loop lanes.
int backward_self_overlap(const StructuredIsometry& v, const HVector& y) {
  std::map<int, std::pair<std::int64_t, std::int64_t>> span;
  for (const auto& [b, c] : y.entries()) {
    (void)c;
    auto [it, inserted] = span.try_emplace(b.lane, b.position, b.position);
    if (!inserted) {
      it->second.first = std::min(it->second.first, b.position);
      it->second.second = std::max(it->second.second, b.position);
    }
  }
  std::int64_t e = 1;
  for (const auto& [lane, range] : span) {
    const std::int64_t step = std::abs(v.rule_for(lane)->offset);
    e = std::max(e, (range.second - range.first) / step + 1);
  }
  return static_cast<int>(e);
}

HVector restrict_to(const HVector& x, const StructuredIsometry& v, std::int64_t window) {
  HVector out;
  for (const auto& [b, c] : x.entries())
    if (v.in_window(b, window)) out.add(b, c);
  return out;
}

bool inside(const HVector& x, const StructuredIsometry& v, std::int64_t window) {
  return std::all_of(x.entries().begin(), x.entries().end(),
                     [&](const auto& kv) { return v.in_window(kv.first, window); });
}

HVector normalized(HVector x) {
  const double n = x.norm();
  if (n > 0.0) x *= 1.0 / n;
  return x;
}

}  // namespace

CertifiedSubspace kernel_of_adjoint(const StructuredIsometry& v, std::int64_t window) {
  std::set<BasisIndex> core_rows;
  for (const auto& [key, col] : v.explicit_columns())
    for (const auto& [b, c] : col.entries()) core_rows.insert(b);

  std::vector<HVector> restricted;
  for (const auto& [key, col] : v.explicit_columns()) restricted.push_back(restrict_to(col, v, window));
  const std::vector<HVector> range = orthonormalize(restricted);

  std::vector<HVector> candidates;
  for (const BasisIndex& b : v.window(window)) {
    if (core_rows.contains(b) || (!v.in_tail_image(b) && v.row(b).is_zero()))
      candidates.push_back(HVector::basis(b));
  }
  std::vector<HVector> kernel = extend_basis(range, candidates);

  std::vector<int> infinite;
  const std::vector<BasisIndex> missed = v.missed_indices(&infinite);
  bool exact = infinite.empty();
  for (const BasisIndex& b : missed) exact = exact && v.in_window(b, window);
  for (const BasisIndex& b : core_rows) exact = exact && v.in_window(b, window);

  const int horizon = static_cast<int>(window);
  Certificate cert = exact ? Certificate::holds(horizon, true, "kernel lies inside the window")
                           : Certificate::holds(horizon, false, "kernel truncated to the window");
  return {Subspace(std::move(kernel)), cert};
}

// finer than kRankTolerance so that H_u is orthogonal to every restricted
// orbit vector within tolerance()
// Dense Gram-Schmidt on window coordinates; no pruning of small entries.
class WindowBasis {
 public:
  explicit WindowBasis(const std::vector<BasisIndex>& indices) : indices_(indices) {
    for (std::size_t i = 0; i < indices.size(); ++i) slot_.emplace(indices[i], i);
  }

  std::vector<Complex> dense(const HVector& x) const {
    std::vector<Complex> out(indices_.size());
    for (const auto& [b, c] : x.entries())
      if (auto it = slot_.find(b); it != slot_.end()) out[it->second] = c;
    return out;
  }

  HVector sparse(const std::vector<Complex>& x) const {
    HVector out;
    for (std::size_t i = 0; i < x.size(); ++i) out.add(indices_[i], x[i]);
    return out;
  }

  bool full() const { return q_.size() >= indices_.size(); }
  std::size_t size() const { return q_.size(); }
  const std::vector<Complex>& operator[](std::size_t k) const { return q_[k]; }

  bool append(std::vector<Complex> x, double drop) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : q_) {
        Complex c{};
        for (std::size_t i = 0; i < x.size(); ++i) c += std::conj(q[i]) * x[i];
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * q[i];
      }
    }
    double n = 0;
    for (const Complex& c : x) n += std::norm(c);
    n = std::sqrt(n);
    if (n < drop) return false;
    for (Complex& c : x) c /= n;
    q_.push_back(std::move(x));
    return true;
  }

 private:
  std::vector<BasisIndex> indices_;
  std::map<BasisIndex, std::size_t> slot_;
  std::vector<std::vector<Complex>> q_;
};

// Smallest restricted-orbit residual admitted to the shift span.
constexpr double kOrbitDrop = 1e-8;

WoldResult wold_decompose(const StructuredIsometry& v, int depth, std::optional<std::int64_t> window_opt) {
  if (depth < 1) throw MalformedInput("depth must be positive");
  const std::int64_t window = window_opt.value_or(depth);
  WoldResult out;
  out.depth = depth;
  out.window = window;

  const CertifiedSubspace kernel = kernel_of_adjoint(v, window);
  out.shift_wandering_basis = kernel.subspace.generators();

  LaneExtent window_extent;
  for (const BasisIndex& b : v.window(window)) window_extent.add(HVector::basis(b));

  const std::vector<BasisIndex> indices = v.window(window);
  WindowBasis shift_span(indices);
  bool all_escaped = true;
  for (const HVector& k : out.shift_wandering_basis) {
    HVector y = k;
    bool escaped = false;
    for (int n = 0; n <= depth; ++n) {
      if (n > 0) y = apply(v, y);
      if (!inside(y, v, window) && escapes_forward(v, y, window_extent)) {
        escaped = true;
        break;
      }
      const HVector r = restrict_to(y, v, window);
      if (!shift_span.full() && r.norm() >= kOrbitDrop) shift_span.append(shift_span.dense(r), kOrbitDrop);
      if (inside(y, v, window) && out.shift_window_basis.size() < indices.size())
        append_orthonormal(out.shift_window_basis, y);
    }
    all_escaped = all_escaped && escaped;
  }

  for (std::size_t i = 0; i < indices.size() && !shift_span.full(); ++i) {
    std::vector<Complex> e(indices.size());
    e[i] = 1.0;
    if (shift_span.append(std::move(e), kRankTolerance))
      out.unitary_window_basis.push_back(shift_span.sparse(shift_span[shift_span.size() - 1]));
  }

  out.exact = kernel.certificate.exact() && all_escaped;
  out.certificate = out.exact ? Certificate::holds(depth, true, "kernel orbits left the window for good")
                              : Certificate::undecided(depth, all_escaped ? "adjoint kernel truncated to the window"
                                                                          : "kernel orbit did not stabilize");
  return out;
}

std::pair<HVector, HVector> wold_components(const WoldResult& wold, const HVector& x) {
  HVector xu;
  for (const auto& u : wold.unitary_window_basis) xu += inner(x, u) * u;
  HVector xs = x - xu;
  if (remove_components(xs, wold.shift_window_basis).norm() > kRankTolerance)
    throw Refused("vector is not covered by the window bases of the Wold decomposition");
  return {xu, xs};
}

Certificate is_wandering(const StructuredIsometry& v, const HVector& x, int horizon) {
  if (x.is_zero()) throw MalformedInput("is_wandering: zero vector");
  if (horizon < 1) throw MalformedInput("horizon must be positive");
  const double eps = tolerance();
  LaneExtent start;
  start.add(x);
  HVector y = x;
  for (int n = 1; n <= horizon; ++n) {
    y = apply(v, y);
    if (std::abs(inner(y, x)) > eps) return Certificate::fails(Exponent{n}, n, "<V^n x, x> != 0");
    if (escapes_forward(v, y, start))
      return Certificate::holds(n, true, "orbit drifted past the support for good");
  }
  return Certificate::undecided(horizon, "no witness within the horizon and no drift certificate");
}

Certificate is_strongly_wandering(const StructuredIsometry& v, const HVector& x, int horizon) {
  if (x.is_zero()) throw MalformedInput("is_strongly_wandering: zero vector");
  if (horizon < 1) throw MalformedInput("horizon must be positive");
  const double eps = tolerance();
  const int h = horizon;
  // orbit[k + h] = V^k x for k in [-h, h]
  std::vector<HVector> orbit(2 * h + 1);
  orbit[h] = x;
  for (int k = 1; k <= h; ++k) orbit[h + k] = apply(v, orbit[h + k - 1]);
  for (int k = 1; k <= h; ++k) orbit[h - k] = orbit[h - k + 1].is_zero() ? HVector{} : apply_adjoint(v, orbit[h - k + 1]);
  auto at = [&](int k) -> const HVector& { return orbit[h + k]; };

  for (int n = 1; n <= h; ++n)
    if (std::abs(inner(at(n), x)) > eps) return Certificate::fails(ExponentPair{n, 0}, h, "<V^n x, x> != 0");
  for (int d = 1; d <= 2 * h; ++d)
    for (int m = -h; m + d <= h; ++m)
      if (std::abs(inner(at(m + d), at(m))) > eps)
        return Certificate::fails(ExponentPair{m + d, m}, h, "<V^n x, V^m x> != 0");

  // forward closure: V^F x escapes past every support seen in [-h, F-1]
  int forward = -1;
  {
    LaneExtent seen;
    for (int k = -h; k < 0; ++k) seen.add(at(k));
    for (int k = 0; k <= h; ++k) {
      if (k > 0 && escapes_forward(v, at(k), seen)) {
        forward = k;
        break;
      }
      seen.add(at(k));
    }
  }
  // backward closure: V*^A x vanishes, or escapes past every support in
  // [-A+1, h] and its backward translates stop overlapping it within range
  int backward = -1;
  {
    for (int a = 1; a <= h && backward < 0; ++a) {
      if (at(-a).is_zero()) {
        backward = a;
        break;
      }
      LaneExtent later;
      for (int k = -a + 1; k <= h; ++k) later.add(at(k));
      if (escapes_backward(v, at(-a), later) && a + backward_self_overlap(v, at(-a)) <= h) backward = a;
    }
  }
  if (forward > 0 && backward > 0)
    return Certificate::holds(h, true, "two-sided orbit closed by drift");
  return Certificate::undecided(h, "orbit orthogonal within the horizon but not closed by drift");
}

std::set<int> closed_finite_lanes(const StructuredIsometry& v) {
  std::set<int> lanes;
  for (const auto& l : v.lanes())
    if (l.kind == DomainKind::finite) lanes.insert(l.id);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = lanes.begin(); it != lanes.end();) {
      const LaneSpec& l = v.lane(*it);
      bool closed = true;
      for (std::int64_t p = 0; p < l.size && closed; ++p) {
        const HVector col = v.column({l.id, p});
        for (const auto& [b, c] : col.entries()) {
          (void)c;
          if (!lanes.contains(b.lane)) closed = false;
        }
      }
      if (!closed) {
        it = lanes.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return lanes;
}

double reducing_defect(const StructuredIsometry& v, const std::vector<HVector>& basis,
                       const std::vector<BasisIndex>& window, BasisIndex* worst) {
  auto project = [&](const HVector& x) {
    HVector out;
    for (const auto& g : basis) {
      const Complex c = inner(x, g);
      if (c != Complex{}) out += c * g;
    }
    return out;
  };
  const std::set<BasisIndex> members(window.begin(), window.end());
  auto within = [&](const HVector& x) {
    return std::all_of(x.entries().begin(), x.entries().end(),
                       [&](const auto& kv) { return members.contains(kv.first); });
  };
  double defect = 0.0;
  for (const BasisIndex& b : window) {
    const HVector e = HVector::basis(b);
    if (!within(apply(v, e)) || !within(apply_adjoint(v, e))) continue;
    const HVector pe = project(e);
    const double d = std::max(distance(project(apply(v, e)), apply(v, pe)),
                              distance(project(apply_adjoint(v, e)), apply_adjoint(v, pe)));
    if (d > defect) {
      defect = d;
      if (worst) *worst = b;
    }
  }
  return defect;
}

WanderingSpanResult wandering_span_decompose(const StructuredIsometry& v, int depth, const WanderingSearch& search) {
  WanderingSpanResult out;
  out.wold = wold_decompose(v, depth);
  const WoldResult& wold = out.wold;
  const std::int64_t window = wold.window;
  const std::vector<HVector>& unitary = wold.unitary_window_basis;
  const Subspace unitary_span(unitary);

  std::vector<HVector> found;
  int budget = search.budget;
  auto try_candidate = [&](const HVector& c) {
    if (budget <= 0 || c.is_zero()) return;
    if (!found.empty() && Subspace(orthonormalize(found)).contains(c)) return;
    --budget;
    if (is_wandering(v, c, depth).is_true()) found.push_back(normalized(c));
  };

  // (i) basis vectors of the unitary window part, then the basis itself
  for (const BasisIndex& b : v.window(window)) {
    const HVector e = HVector::basis(b);
    if (unitary_span.contains(e)) try_candidate(e);
  }
  for (const HVector& u : unitary) try_candidate(u);
  // (ii) user candidates: the unitary component of a wandering vector lies in H_w
  for (const HVector& c : search.candidates) {
    if (budget <= 0 || c.is_zero()) continue;
    --budget;
    if (is_wandering(v, c, depth).is_true()) {
      const HVector cu = unitary_span.project(c);
      if (!cu.is_zero()) found.push_back(normalized(cu));
    }
  }
  // (iii) orbit images of what was found, kept when inside the window
  const std::size_t seeds = found.size();
  for (std::size_t s = 0; s < seeds && budget > 0; ++s) {
    HVector fwd = found[s];
    HVector bwd = found[s];
    for (int n = 1; n <= depth; ++n) {
      fwd = apply(v, fwd);
      bwd = apply_adjoint(v, bwd);
      if (inside(fwd, v, window)) try_candidate(fwd);
      if (inside(bwd, v, window)) try_candidate(bwd);
    }
  }

  std::vector<HVector> wandering_unitary = orthonormalize(found);
  out.unitary_wandering = found;
  std::vector<HVector> h0 = extend_basis(wandering_unitary, unitary);

  std::vector<HVector> hw = wold.shift_window_basis;
  for (const HVector& w : extend_basis(hw, wandering_unitary)) hw.push_back(w);

  // H_0 is pinned when its leftovers live on closed finite lanes: a finite
  // unitary block has no wandering vectors and, next to a shift part and
  // bilateral pieces, cannot contribute to any wandering vector either.
  const std::set<int> finite = closed_finite_lanes(v);
  bool pinned = wold.exact;
  for (const HVector& x : h0)
    for (const auto& [b, c] : x.entries()) {
      (void)c;
      if (!finite.contains(b.lane)) pinned = false;
    }

  const double eps = tolerance();
  BasisIndex worst{};
  const double defect = reducing_defect(v, h0, v.window(window), &worst);
  Certificate reducing = defect <= 1e3 * eps
                             ? Certificate::holds(depth, pinned, "P_H0 commutes with V and V* on the window")
                             : Certificate::fails(worst, depth, "P_H0 does not commute with V on the window");

  out.h0 = {Subspace(h0), reducing};
  out.hw = {Subspace(hw, OrbitClosure::forward(v.name())), reducing};
  if (reducing.is_false()) {
    out.certificate = reducing;
  } else if (pinned) {
    out.certificate = Certificate::holds(depth, true, "H_0 pinned to closed finite lanes");
  } else {
    out.certificate = Certificate::undecided(depth, "membership of unitary window vectors in H_w not settled");
  }
  return out;
}

bool is_unitary(const StructuredIsometry& u, std::int64_t window) {
  const CertifiedSubspace k = kernel_of_adjoint(u, window);
  return k.certificate.exact() && k.subspace.is_zero();
}

UnitaryExtension minimal_unitary_extension(const StructuredIsometry& v, int depth) {
  const std::int64_t reach = 2 * (v.core_radius() + v.max_abs_offset()) + 4;
  const WoldResult wold = wold_decompose(v, depth, std::min<std::int64_t>(depth, reach));
  if (!wold.exact) throw Refused("minimal_unitary_extension: Wold decomposition is not exact at depth " + std::to_string(depth));

  const double eps = tolerance();
  std::vector<HVector> pending = wold.shift_wandering_basis;
  std::vector<LaneSpec> lanes = v.lanes();
  StructuredIsometry::Columns columns = v.explicit_columns();
  std::vector<TailRule> rules = v.tail_rules();
  UnitaryExtension ext{v, {}, {}, {}};

  // Widen naturals lanes whose only kernel content is e_0..e_{o-1}.
  for (auto& lane : lanes) {
    if (lane.kind != DomainKind::naturals) continue;
    auto rule = std::find_if(rules.begin(), rules.end(), [&](const TailRule& r) { return r.source_lane == lane.id; });
    if (rule == rules.end() || rule->target_lane != lane.id || rule->offset <= 0) continue;
    const std::int64_t o = rule->offset;
    std::vector<std::size_t> mine;
    bool basis_aligned = true;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      bool touches = false;
      for (const auto& [b, c] : pending[k].entries()) {
        (void)c;
        touches = touches || b.lane == lane.id;
      }
      if (!touches) continue;
      mine.push_back(k);
      const auto& e = pending[k].entries();
      basis_aligned = basis_aligned && e.size() == 1 && e.begin()->first.position < o &&
                      std::abs(std::abs(e.begin()->second) - 1.0) <= eps;
    }
    if (!basis_aligned || mine.size() != static_cast<std::size_t>(o)) continue;

    lane.kind = DomainKind::integers;
    for (std::int64_t p = -rule->threshold + 1; p < 0; ++p)
      columns.emplace(BasisIndex{lane.id, p}, HVector::basis({lane.id, p + o}, rule->phase));
    ext.widened_lanes.push_back(lane.id);
    for (auto it = mine.rbegin(); it != mine.rend(); ++it) pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(*it));
  }

  // Remaining kernel vectors get a backward lane each: e_{(N,0)} -> k,
  // e_{(N,p)} -> e_{(N,p-1)}.
  int next_id = 0;
  for (const auto& l : lanes) next_id = std::max(next_id, l.id + 1);
  for (const HVector& k : pending) {
    const int id = next_id++;
    lanes.push_back({id, DomainKind::naturals, 0, "backward"});
    columns.emplace(BasisIndex{id, 0}, k);
    rules.push_back({id, 1, id, -1, {}, 1.0});
    ext.added_lanes.push_back(id);
  }

  const std::string name = v.name().empty() ? std::string{"U"} : "ext(" + v.name() + ")";
  ext.unitary = StructuredIsometry::make(std::move(lanes), std::move(columns), std::move(rules), name);
  for (const auto& [key, col] : v.explicit_columns()) ext.embedding.emplace(key, key);
  for (const BasisIndex& b : v.window(depth)) ext.embedding.emplace(b, b);
  return ext;
}

Certificate extension_is_minimal(const UnitaryExtension& ext, std::int64_t window, int horizon) {
  auto original = [&](const BasisIndex& b) {
    if (std::find(ext.added_lanes.begin(), ext.added_lanes.end(), b.lane) != ext.added_lanes.end()) return false;
    if (std::find(ext.widened_lanes.begin(), ext.widened_lanes.end(), b.lane) != ext.widened_lanes.end())
      return b.position >= 0;
    return true;
  };
  for (const BasisIndex& b : ext.unitary.window(window)) {
    if (original(b)) continue;
    HVector y = HVector::basis(b);
    bool reached = false;
    for (int n = 1; n <= horizon && !reached; ++n) {
      y = apply(ext.unitary, y);
      reached = std::all_of(y.entries().begin(), y.entries().end(), [&](const auto& kv) { return original(kv.first); });
    }
    if (!reached) return Certificate::fails(b, horizon, "new basis vector does not reach the original space");
  }
  return Certificate::holds(horizon, false, "every new window vector is U^-n of an original vector");
}

Subspace bilateral_orbit(const StructuredIsometry& u, const HVector& w, int horizon) {
  if (!is_unitary(u, horizon)) throw Refused("bilateral_orbit: operator is not unitary");
  const Certificate c = is_strongly_wandering(u, w, horizon);
  if (c.is_false()) throw Refused("bilateral_orbit: vector is not wandering, witness " + to_string(c.witness()));
  if (!c.is_true()) throw Refused("bilateral_orbit: wandering property not certified within the horizon");
  const HVector unit = normalized(w);
  std::vector<HVector> generators;
  HVector back = unit;
  std::vector<HVector> negative;
  for (int n = 1; n <= horizon; ++n) {
    back = apply_adjoint(u, back);
    negative.push_back(back);
  }
  for (auto it = negative.rbegin(); it != negative.rend(); ++it) generators.push_back(*it);
  HVector fwd = unit;
  generators.push_back(fwd);
  for (int n = 1; n <= horizon; ++n) {
    fwd = apply(u, fwd);
    generators.push_back(fwd);
  }
  return Subspace(std::move(generators), OrbitClosure::full(u.name()));
}

}  // namespace woldlab
