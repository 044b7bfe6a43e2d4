#include "woldlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "woldlab/errors.hpp"

namespace woldlab {

namespace {

using boost::multiprecision::cpp_int;

Angle wrap_unit(Angle a) {
  const cpp_int whole = boost::multiprecision::numerator(a) / boost::multiprecision::denominator(a);
  a -= Angle(whole);
  if (a < 0) a += 1;
  return a;
}

struct Interval {
  Angle lo;
  Angle hi;  // lo < hi, both in [0, 1]
};

std::vector<Interval> linear_pieces(const Arc& a) {
  if (a.is_full()) return {{0, 1}};
  const Angle e = a.start + a.length;
  if (e <= 1) return {{a.start, e}};
  return {{a.start, 1}, {0, e - 1}};
}

Arc uncovered_run(const MultiplicityProfile& p) {
  const std::size_t n = p.values.size();
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i)
    if (p.values[i] == 0) {
      first = i;
      break;
    }
  if (first == 0 && p.values.back() == 0 && n > 1) {
    // run wraps through 0: start at the beginning of the trailing zero run
    std::size_t s = n - 1;
    while (s > 0 && p.values[s - 1] == 0) --s;
    std::size_t e = 0;
    while (e + 1 < n && p.values[e + 1] == 0) ++e;
    return Arc::make(p.breakpoints[s], (1 - p.breakpoints[s]) + p.interval_end(e));
  }
  std::size_t e = first;
  while (e + 1 < n && p.values[e + 1] == 0) ++e;
  return Arc::make(p.breakpoints[first], p.interval_end(e) - p.breakpoints[first]);
}

std::string describe(const Arc& a) {
  return "[" + to_string(a.start) + ", " + to_string(a.end()) + ")";
}

}  // namespace

Angle to_angle(double turns, bool wrap) {
  if (!std::isfinite(turns)) throw MalformedInput("angle is not finite");
  // continued-fraction convergents until within 1e-12
  long double x = turns;
  const long double target = turns;
  cpp_int h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  Angle best;
  for (int step = 0; step < 64; ++step) {
    const long double a = std::floor(x);
    const cpp_int ai(static_cast<long long>(a));
    const cpp_int h = ai * h0 + h1;
    const cpp_int k = ai * k0 + k1;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    best = Angle(h, k);
    const long double approx = static_cast<long double>(h.convert_to<long double>() / k.convert_to<long double>());
    if (std::fabs(approx - target) <= 1e-12L) break;
    const long double frac = x - a;
    if (frac <= 0) break;
    x = 1.0L / frac;
  }
  return wrap ? wrap_unit(best) : best;
}

Angle parse_angle(const std::string& text, bool wrap) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const cpp_int p(text.substr(0, slash));
      const cpp_int q(text.substr(slash + 1));
      if (q == 0) throw MalformedInput("angle '" + text + "' has zero denominator");
      const Angle a(p, q);
      return wrap ? wrap_unit(a) : a;
    }
    std::size_t used = 0;
    const double d = std::stod(text, &used);
    if (used != text.size()) throw MalformedInput("angle '" + text + "' is not a number");
    return to_angle(d, wrap);
  } catch (const std::invalid_argument&) {
    throw MalformedInput("angle '" + text + "' is not a number");
  } catch (const std::out_of_range&) {
    throw MalformedInput("angle '" + text + "' is out of range");
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const MalformedInput*>(&e)) throw;
    throw MalformedInput("angle '" + text + "' is not a number");
  }
}

double to_double(const Angle& a) { return a.convert_to<double>(); }

std::string to_string(const Angle& a) {
  std::ostringstream out;
  out << boost::multiprecision::numerator(a);
  if (boost::multiprecision::denominator(a) != 1) out << "/" << boost::multiprecision::denominator(a);
  return out.str();
}

Arc Arc::make(Angle start, Angle length) {
  if (length <= 0 || length > 1) throw MalformedInput("arc length must lie in (0, 1], got " + to_string(length));
  if (length == 1) return {0, 1};
  return {wrap_unit(std::move(start)), std::move(length)};
}

Angle Arc::end() const { return start + length; }

bool Arc::contains(const Angle& a) const { return wrap_unit(a - start) < length; }

SpectralUnitary SpectralUnitary::make(std::vector<Arc> pieces, std::vector<Atom> atoms) {
  std::set<Angle> seen;
  for (Atom& a : atoms) {
    if (a.multiplicity < 1) throw MalformedInput("atom multiplicity must be at least 1");
    a.angle = wrap_unit(a.angle);
    if (!seen.insert(a.angle).second) throw MalformedInput("repeated atom angle " + to_string(a.angle));
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.angle < y.angle; });
  return {std::move(pieces), std::move(atoms)};
}

SpectralUnitary SpectralUnitary::direct_sum(const SpectralUnitary& other) const {
  std::vector<Arc> pieces = continuous_pieces;
  pieces.insert(pieces.end(), other.continuous_pieces.begin(), other.continuous_pieces.end());
  std::map<Angle, int> atom_mult;
  for (const Atom& a : atoms) atom_mult[a.angle] += a.multiplicity;
  for (const Atom& a : other.atoms) atom_mult[a.angle] += a.multiplicity;
  std::vector<Atom> merged;
  for (const auto& [angle, m] : atom_mult) merged.push_back({angle, m});
  return make(std::move(pieces), std::move(merged));
}

MultiplicityProfile MultiplicityProfile::constant(int value) { return {{Angle(0)}, {value}, {}}; }

int MultiplicityProfile::at(const Angle& a) const {
  const Angle x = wrap_unit(a);
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

int MultiplicityProfile::max() const { return *std::max_element(values.begin(), values.end()); }
int MultiplicityProfile::min() const { return *std::min_element(values.begin(), values.end()); }

Angle MultiplicityProfile::interval_end(std::size_t i) const {
  return i + 1 < breakpoints.size() ? breakpoints[i + 1] : Angle(1);
}

MultiplicityProfile MultiplicityProfile::operator+(const MultiplicityProfile& other) const {
  std::set<Angle> cuts(breakpoints.begin(), breakpoints.end());
  cuts.insert(other.breakpoints.begin(), other.breakpoints.end());
  std::vector<Angle> b(cuts.begin(), cuts.end());
  std::vector<int> v;
  for (const Angle& x : b) v.push_back(at(x) + other.at(x));
  std::map<Angle, int> atom_mult;
  for (const Atom& a : atom_overrides) atom_mult[a.angle] += a.multiplicity;
  for (const Atom& a : other.atom_overrides) atom_mult[a.angle] += a.multiplicity;
  std::vector<Atom> atoms;
  for (const auto& [angle, m] : atom_mult) atoms.push_back({angle, m});
  return make_profile(std::move(b), std::move(v), std::move(atoms));
}

MultiplicityProfile make_profile(std::vector<Angle> breakpoints, std::vector<int> values, std::vector<Atom> atoms) {
  if (breakpoints.size() != values.size() || breakpoints.empty())
    throw MalformedInput("profile needs one value per breakpoint");
  if (breakpoints.front() != 0) {
    breakpoints.insert(breakpoints.begin(), Angle(0));
    values.insert(values.begin(), values.back());
  }
  MultiplicityProfile p;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (values[i] < 0) throw MalformedInput("profile values must be nonnegative");
    if (i > 0 && breakpoints[i] <= breakpoints[i - 1]) throw MalformedInput("profile breakpoints must increase");
    if (breakpoints[i] >= 1) throw MalformedInput("profile breakpoints must lie in [0, 1)");
    if (!p.values.empty() && p.values.back() == values[i]) continue;
    p.breakpoints.push_back(breakpoints[i]);
    p.values.push_back(values[i]);
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.angle < y.angle; });
  p.atom_overrides = std::move(atoms);
  return p;
}

MultiplicityProfile multiplicity_profile(const SpectralUnitary& u) {
  std::set<Angle> cuts{Angle(0)};
  for (const Arc& a : u.continuous_pieces) {
    cuts.insert(a.start);
    cuts.insert(wrap_unit(a.end()));
  }
  std::vector<Angle> b(cuts.begin(), cuts.end());
  std::vector<int> v;
  for (const Angle& x : b) {
    int count = 0;
    for (const Arc& a : u.continuous_pieces) count += a.contains(x) ? 1 : 0;
    v.push_back(count);
  }
  return make_profile(std::move(b), std::move(v), u.atoms);
}

std::vector<Arc> arc_double(const Arc& a) {
  if (2 * a.length >= 1) return {Arc::full()};
  return {Arc::make(2 * a.start, 2 * a.length)};
}

SpectralDecision is_bilateral_shift(const SpectralUnitary& u) {
  if (!u.atoms.empty()) return {false, "atoms present", std::nullopt};
  const MultiplicityProfile p = multiplicity_profile(u);
  if (p.min() == 0) return {false, "support not full circle", uncovered_run(p)};
  if (!p.is_constant()) return {false, "non-constant multiplicity", std::nullopt};
  return {true, "constant multiplicity " + std::to_string(p.values.front()) + " on the full circle", std::nullopt};
}

SpectralDecision has_wandering_vector(const SpectralUnitary& u) {
  const MultiplicityProfile p = multiplicity_profile(u);
  if (p.min() == 0) {
    const Arc gap = uncovered_run(p);
    return {false, "uncovered arc " + describe(gap), gap};
  }
  return {true, "continuous multiplicity at least 1 on the full circle", std::nullopt};
}

BilateralCover bilateral_cover(const SpectralUnitary& u) {
  if (!u.atoms.empty()) throw Refused("bilateral_cover: atom at angle " + to_string(u.atoms.front().angle));
  BilateralCover cover;
  cover.profile = multiplicity_profile(u);
  const MultiplicityProfile& p = cover.profile;
  if (p.min() == 0) throw Refused("bilateral_cover: uncovered arc " + describe(uncovered_run(p)));

  const int layers = p.max();
  MultiplicityProfile total = MultiplicityProfile::constant(0);
  for (int l = 1; l <= layers; ++l) {
    CoverLayer layer;
    std::vector<int> fresh;
    for (int v : p.values) {
      if (v >= l) {
        layer.copies.push_back(l);
        fresh.push_back(1);
      } else {
        layer.copies.push_back((l - 1) % v + 1);
        fresh.push_back(0);
      }
    }
    layer.fresh = make_profile(p.breakpoints, fresh);
    total = total + layer.fresh;
    cover.layers.push_back(std::move(layer));
  }
  cover.exhausts = total == p;
  return cover;
}

SpectralUnitary spectral_of_extension(const WoldResult& wold, const SpectralUnitary& unitary_part) {
  if (!wold.exact) throw Refused("spectral_of_extension: Wold decomposition is not exact");
  std::vector<Arc> pieces = unitary_part.continuous_pieces;
  for (std::size_t k = 0; k < wold.shift_wandering_basis.size(); ++k) pieces.push_back(Arc::full());
  return SpectralUnitary::make(std::move(pieces), unitary_part.atoms);
}

SpectralUnitary restrict_to_arc(const SpectralUnitary& u, const Arc& a) {
  std::vector<Arc> pieces;
  for (const Arc& piece : u.continuous_pieces)
    for (const Interval& x : linear_pieces(piece))
      for (const Interval& y : linear_pieces(a)) {
        const Angle lo = std::max(x.lo, y.lo);
        const Angle hi = std::min(x.hi, y.hi);
        if (lo < hi) pieces.push_back(Arc::make(lo, hi - lo));
      }
  std::vector<Atom> atoms;
  for (const Atom& atom : u.atoms)
    if (a.contains(atom.angle)) atoms.push_back(atom);
  return SpectralUnitary::make(std::move(pieces), std::move(atoms));
}

}  // namespace woldlab
