#include "woldlab/pairs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "woldlab/errors.hpp"
#include "woldlab/tolerance.hpp"

namespace woldlab {

namespace {

void require_commuting(const StructuredIsometry& v1, const StructuredIsometry& v2, std::int64_t window,
                       const char* op) {
  if (!same_lanes(v1, v2)) throw MalformedInput(std::string(op) + ": operators act on different lane sets");
  const Certificate c = commutes(v1, v2, window);
  if (!c.is_true()) throw Refused(std::string(op) + ": operators do not commute, witness " + to_string(c.witness()));
}

std::vector<BasisIndex> support_of(const std::vector<HVector>& vs) {
  std::set<BasisIndex> s;
  for (const auto& v : vs)
    for (const auto& [b, c] : v.entries()) {
      (void)c;
      s.insert(b);
    }
  return {s.begin(), s.end()};
}

// Basis of span(vs) obtained by projecting unit vectors in index order, so
// that coordinate subspaces come out as basis vectors.
std::vector<HVector> canonical(const std::vector<HVector>& vs) {
  if (vs.empty()) return {};
  std::vector<HVector> projected;
  for (const BasisIndex& b : support_of(vs)) {
    HVector p;
    const HVector e = HVector::basis(b);
    for (const auto& g : vs) p += inner(e, g) * g;
    projected.push_back(p);
  }
  std::vector<HVector> out = orthonormalize(projected);
  return out.size() == vs.size() ? out : vs;
}

bool coordinate_aligned(const std::vector<HVector>& basis) {
  const double eps = kRankTolerance;
  for (const BasisIndex& b : support_of(basis)) {
    double mass = 0.0;
    for (const auto& g : basis) mass += std::norm(g.at(b));
    if (std::abs(mass - 1.0) > eps) return false;
  }
  return true;
}

double max_defect(const StructuredIsometry& v1, const StructuredIsometry& v2, const std::vector<HVector>& basis,
                  const std::vector<BasisIndex>& window, BasisIndex* worst, int* which) {
  BasisIndex w1{}, w2{};
  const double d1 = reducing_defect(v1, basis, window, &w1);
  const double d2 = reducing_defect(v2, basis, window, &w2);
  if (d1 >= d2) {
    if (worst) *worst = w1;
    if (which) *which = 1;
    return d1;
  }
  if (worst) *worst = w2;
  if (which) *which = 2;
  return d2;
}

// Forward orbit vectors of `gens` under v that stay inside the window.
std::vector<HVector> orbit_in_window(const StructuredIsometry& v, const std::vector<HVector>& gens, int depth,
                                     const std::set<BasisIndex>& window) {
  std::vector<HVector> out;
  for (const HVector& g : gens) {
    HVector y = g;
    for (int n = 0; n <= depth; ++n) {
      if (n > 0) y = apply(v, y);
      const bool inside = std::all_of(y.entries().begin(), y.entries().end(),
                                      [&](const auto& kv) { return window.contains(kv.first); });
      if (inside) out.push_back(y);
    }
  }
  return out;
}

}  // namespace

std::vector<HVector> intersect(const std::vector<HVector>& a, const std::vector<HVector>& b) {
  if (a.empty() || b.empty()) return {};
  const int n = static_cast<int>(a.size());
  std::vector<HVector> r;
  for (const auto& x : a) r.push_back(remove_components(x, b));
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = inner(r[j], r[i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g);
  std::vector<HVector> common;
  for (int k = 0; k < n; ++k) {
    if (eig.eigenvalues()(k) > kRankTolerance * kRankTolerance) continue;
    HVector x;
    for (int i = 0; i < n; ++i) x += eig.eigenvectors()(i, k) * a[i];
    common.push_back(x);
  }
  return canonical(orthonormalize(common));
}

std::vector<HVector> window_complement(const std::vector<BasisIndex>& window, const std::vector<HVector>& basis) {
  std::vector<HVector> units;
  for (const BasisIndex& b : window) units.push_back(HVector::basis(b));
  return extend_basis(basis, units);
}

CertifiedSubspace h0_plus(const StructuredIsometry& v1, const StructuredIsometry& v2, const Subspace& h0, int depth) {
  require_commuting(v1, v2, depth, "h0_plus");
  const WanderingSpanResult ws = wandering_span_decompose(v1, depth);
  for (const HVector& g : h0.generators())
    if (!ws.h0.subspace.contains(g)) throw Refused("h0_plus: H0 is not inside the H_0 computed for V1");

  std::vector<HVector> basis;
  std::vector<HVector> layer = h0.generators();
  bool stabilized = layer.empty();
  for (int n = 0; n <= depth && !stabilized; ++n) {
    bool added = false;
    for (const HVector& g : layer) {
      HVector r = remove_components(g, basis);
      const double norm = r.norm();
      if (norm > kRankTolerance) {
        r *= 1.0 / norm;
        basis.push_back(std::move(r));
        added = true;
      }
    }
    if (!added && n > 0) stabilized = true;
    for (HVector& g : layer) g = apply(v2, g);
  }

  const double eps = tolerance();
  const std::vector<BasisIndex> window = v1.window(depth);
  BasisIndex worst{};
  int which = 0;
  const double defect = max_defect(v1, v2, basis, window, &worst, &which);
  double unitary_defect = 0.0;
  for (const HVector& g : basis) unitary_defect = std::max(unitary_defect, distance(apply(v1, apply_adjoint(v1, g)), g));

  Certificate cert = Certificate::undecided(depth, "span of V2^n H0 did not stabilize");
  if (defect > 1e3 * eps) {
    cert = Certificate::fails(worst, depth, which == 1 ? "not reducing for V1" : "not reducing for V2", false);
  } else if (unitary_defect > 1e3 * eps) {
    cert = Certificate::fails(Label{"V1 V1* != I on H0+"}, depth, "V1 not unitary on the span", false);
  } else if (stabilized) {
    const bool exact = ws.certificate.exact();
    cert = exact ? Certificate::holds(depth, true, "reduces V1 and V2, V1 unitary on it")
                 : Certificate::undecided(depth, "stabilized, but H_0 of V1 is not pinned");
  }
  return {Subspace(canonical(basis), OrbitClosure::forward(v2.name())), cert};
}

Exhaustion exhaust_h0(const StructuredIsometry& v1, const StructuredIsometry& v2, int max_iter, int depth) {
  require_commuting(v1, v2, depth, "exhaust_h0");
  if (max_iter < 1) throw MalformedInput("max_iter must be positive");
  const WanderingSpanResult ws = wandering_span_decompose(v1, depth);
  Exhaustion out;
  bool exact = ws.certificate.exact();
  bool converged = false;
  for (int it = 0; it <= max_iter; ++it) {
    // H_0 of the restriction to the complement of what was peeled so far
    std::vector<HVector> residual;
    for (const HVector& g : ws.h0.subspace.generators()) residual.push_back(remove_components(g, out.removed));
    const std::vector<HVector> h0n = orthonormalize(residual);
    if (h0n.empty()) {
      converged = true;
      break;
    }
    if (it == max_iter) break;
    const CertifiedSubspace plus = h0_plus(v1, v2, Subspace(h0n), depth);
    exact = exact && plus.certificate.exact();
    for (HVector& g : extend_basis(out.removed, plus.subspace.generators())) out.removed.push_back(std::move(g));
    ++out.iterations;
  }
  out.h1 = Subspace(window_complement(v1.window(depth), out.removed));
  if (!converged) {
    out.certificate = Certificate::undecided(depth, "H_0n+ still nonzero after max_iter peels");
  } else if (exact) {
    out.certificate = Certificate::holds(depth, true, "H_0 exhausted");
  } else {
    out.certificate = Certificate::undecided(depth, "exhausted on the window, H_0 not pinned");
  }
  return out;
}

std::vector<HVector> joint_kernel(const StructuredIsometry& a, const StructuredIsometry& b, int depth,
                                  std::int64_t window) {
  const std::vector<BasisIndex> w = b.window(window);
  std::vector<HVector> images;
  for (const BasisIndex& idx : w) images.push_back(HVector::basis(idx));
  std::vector<HVector> rows;  // orthonormal basis of the conjugated row space
  for (int i = 0; i <= depth && rows.size() < w.size(); ++i) {
    std::map<BasisIndex, HVector> functionals;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (i > 0) images[k] = apply(b, images[k]);
      const HVector y = apply_adjoint(a, images[k]);
      for (const auto& [row, c] : y.entries()) functionals[row].add(w[k], std::conj(c));
    }
    std::vector<HVector> candidates;
    for (auto& [row, f] : functionals) candidates.push_back(std::move(f));
    for (HVector& r : extend_basis(rows, candidates)) rows.push_back(std::move(r));
  }
  return window_complement(w, rows);
}

Certificate weak_bishift_classify(const StructuredIsometry& v1, const StructuredIsometry& v2, int depth) {
  require_commuting(v1, v2, depth, "weak_bishift_classify");
  const WoldResult w1 = wold_decompose(v1, depth);
  const WoldResult w2 = wold_decompose(v2, depth);
  const WoldResult w12 = wold_decompose(compose(v1, v2), depth);

  if (w12.exact && !w12.unitary_window_basis.empty())
    return Certificate::fails(Label{"V1V2 has a unitary part"}, depth, "product isometry is not a shift");

  const std::vector<HVector> m1 = joint_kernel(v2, v1, depth, depth);
  const std::vector<HVector> m2 = joint_kernel(v1, v2, depth, depth);
  // The unitary part of V1 on M1 sits inside M1 and H_u(V1).
  const std::vector<HVector> u1 = intersect(m1, w1.unitary_window_basis);
  const std::vector<HVector> u2 = intersect(m2, w2.unitary_window_basis);

  if (!u1.empty() || !u2.empty())
    return Certificate::undecided(depth, "a joint kernel meets the unitary part on the window");
  if (!(w1.exact && w2.exact && w12.exact))
    return Certificate::undecided(depth, "Wold decompositions did not stabilize");
  return Certificate::holds(depth, true, "both restrictions and V1V2 are shifts");
}

PairReport pair_decompose(const StructuredIsometry& v1, const StructuredIsometry& v2, int depth) {
  require_commuting(v1, v2, depth, "pair_decompose");
  const WoldResult w1 = wold_decompose(v1, depth);
  const WoldResult w2 = wold_decompose(v2, depth);
  const std::vector<BasisIndex> window = v1.window(depth);
  const std::set<BasisIndex> window_set(window.begin(), window.end());

  const std::vector<HVector> hs1 = window_complement(window, w1.unitary_window_basis);
  const std::vector<HVector> hs2 = window_complement(window, w2.unitary_window_basis);
  std::vector<HVector> uu = intersect(w1.unitary_window_basis, w2.unitary_window_basis);
  std::vector<HVector> us = intersect(w1.unitary_window_basis, hs2);
  std::vector<HVector> su = intersect(hs1, w2.unitary_window_basis);
  std::vector<HVector> taken = uu;
  taken.insert(taken.end(), us.begin(), us.end());
  taken.insert(taken.end(), su.begin(), su.end());
  std::vector<HVector> ws = window_complement(window, orthonormalize(taken));

  PairReport out;
  out.depth = depth;
  out.window = depth;

  auto in_ws = [&](const HVector& x) { return remove_components(x, ws).norm() <= kRankTolerance; };
  for (const HVector& k : w1.shift_wandering_basis)
    if (in_ws(k)) out.wandering_v1.push_back(k);
  for (const HVector& k : w2.shift_wandering_basis)
    if (in_ws(k)) out.wandering_v2.push_back(k);
  if (!w1.unitary_window_basis.empty())
    for (const HVector& x : wandering_span_decompose(v1, depth).unitary_wandering)
      if (in_ws(x)) out.wandering_v1.push_back(x);
  if (!w2.unitary_window_basis.empty())
    for (const HVector& x : wandering_span_decompose(v2, depth).unitary_wandering)
      if (in_ws(x)) out.wandering_v2.push_back(x);

  const double eps = tolerance();
  const bool wold_exact = w1.exact && w2.exact;
  auto certify = [&](std::vector<HVector> basis, const char* part, bool covered) -> CertifiedSubspace {
    BasisIndex worst{};
    int which = 0;
    const double defect = max_defect(v1, v2, basis, window, &worst, &which);
    Certificate c = Certificate::undecided(depth, std::string(part) + " not pinned beyond the window");
    if (defect > 1e3 * eps) {
      c = Certificate::fails(worst, depth, std::string(part) + (which == 1 ? " does not reduce V1" : " does not reduce V2"),
                             false);
    } else if (!covered) {
      c = Certificate::undecided(depth, std::string(part) + " not covered by the wandering generators");
    } else if (wold_exact && coordinate_aligned(basis)) {
      c = Certificate::holds(depth, true, std::string(part) + " lane-aligned and reducing");
    }
    return {Subspace(std::move(basis)), c};
  };

  auto covers = [&](const StructuredIsometry& v, const std::vector<HVector>& gens) {
    const std::vector<HVector> span = orthonormalize(orbit_in_window(v, gens, depth, window_set));
    return std::all_of(ws.begin(), ws.end(), [&](const HVector& x) { return remove_components(x, span).norm() <= 1e-7; });
  };
  const bool covered = covers(v1, out.wandering_v1) && covers(v2, out.wandering_v2);

  out.uu = certify(std::move(uu), "uu", true);
  out.us = certify(std::move(us), "us", true);
  out.su = certify(std::move(su), "su", true);
  out.ws = certify(std::move(ws), "ws", covered);
  return out;
}

Certificate is_completely_non_doubly_commuting(const StructuredIsometry& v1, const StructuredIsometry& v2,
                                               std::int64_t window) {
  require_commuting(v1, v2, window, "is_completely_non_doubly_commuting");
  const int horizon = static_cast<int>(window);
  const Certificate whole = doubly_commutes(v1, v2, window);
  if (whole.is_true())
    return Certificate::fails(Label{"whole space"}, horizon, "the pair doubly commutes", whole.exact());

  // One of the operators unitary on a reducing part forces double commutation there.
  const PairReport parts = pair_decompose(v1, v2, horizon);
  for (const auto* part : {&parts.uu, &parts.us, &parts.su}) {
    if (part->subspace.is_zero() || part->certificate.is_false()) continue;
    const char* name = part == &parts.uu ? "uu part" : part == &parts.us ? "us part" : "su part";
    return Certificate::fails(Label{name}, horizon, "a pair part reduces to a doubly commuting pair",
                              part->certificate.exact());
  }

  // Closed components of the index graph inside the window are reducing.
  const std::vector<BasisIndex> idx = v1.window(window);
  std::map<BasisIndex, std::size_t> slot;
  for (std::size_t k = 0; k < idx.size(); ++k) slot[idx[k]] = k;
  std::vector<std::size_t> parent(idx.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> open(idx.size(), false);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const HVector e = HVector::basis(idx[k]);
    for (const HVector& y : {apply(v1, e), apply(v2, e), apply_adjoint(v1, e), apply_adjoint(v2, e)})
      for (const auto& [b, c] : y.entries()) {
        (void)c;
        auto it = slot.find(b);
        if (it == slot.end()) {
          open[k] = true;
          continue;
        }
        parent[find(k)] = find(it->second);
      }
  }
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t k = 0; k < idx.size(); ++k) components[find(k)].push_back(k);
  const double eps = tolerance();
  for (const auto& [root, members] : components) {
    if (std::any_of(members.begin(), members.end(), [&](std::size_t k) { return open[k]; })) continue;
    if (members.size() == idx.size()) continue;  // the whole space was checked above
    const bool dc = std::all_of(members.begin(), members.end(), [&](std::size_t k) {
      const HVector e = HVector::basis(idx[k]);
      return distance(apply_adjoint(v1, apply(v2, e)), apply(v2, apply_adjoint(v1, e))) <= eps;
    });
    if (dc)
      return Certificate::fails(Label{"component of " + to_string(idx[members.front()])}, horizon,
                                "a finite lane component reduces to a doubly commuting pair");
  }
  return Certificate::holds(horizon, false, "no reducing subspace in the lane-graded family doubly commutes");
}

}  // namespace woldlab
