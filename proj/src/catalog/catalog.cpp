#include "woldlab/catalog.hpp"

#include <algorithm>

#include "woldlab/errors.hpp"
#include "woldlab/report.hpp"

namespace woldlab {

StructuredIsometry shift(int multiplicity) {
  if (multiplicity < 1) throw MalformedInput("shift multiplicity must be positive");
  std::vector<LaneSpec> lanes;
  std::vector<TailRule> rules;
  for (int i = 0; i < multiplicity; ++i) {
    lanes.push_back({i, DomainKind::naturals, 0, multiplicity == 1 ? "e" : "e" + std::to_string(i)});
    rules.push_back({i, 0, i, 1, {}, 1.0});
  }
  return StructuredIsometry::make(lanes, {}, rules, multiplicity == 1 ? "S" : "S^(" + std::to_string(multiplicity) + ")");
}

StructuredIsometry shift_power(int k) {
  if (k < 1) throw MalformedInput("shift power must be positive");
  return StructuredIsometry::make({{0, DomainKind::naturals, 0, "e"}}, {}, {{0, 0, 0, k, {}, 1.0}},
                                  "S^" + std::to_string(k));
}

StructuredIsometry bilateral_shift(int multiplicity) {
  if (multiplicity < 1) throw MalformedInput("shift multiplicity must be positive");
  std::vector<LaneSpec> lanes;
  std::vector<TailRule> rules;
  for (int i = 0; i < multiplicity; ++i) {
    lanes.push_back({i, DomainKind::integers, 0, multiplicity == 1 ? "b" : "b" + std::to_string(i)});
    rules.push_back({i, 0, i, 1, {}, 1.0});
  }
  return StructuredIsometry::make(lanes, {}, rules, multiplicity == 1 ? "B" : "B^(" + std::to_string(multiplicity) + ")");
}

StructuredIsometry example_fixed_plus_shift() {
  return StructuredIsometry::make({{0, DomainKind::finite, 1, "f"}, {1, DomainKind::naturals, 0, "e"}},
                                  {{{0, 0}, HVector::basis({0, 0})}}, {{1, 0, 1, 1, {}, 1.0}}, "V");
}

StructuredIsometry cycle_plus_shift(int period) {
  if (period < 1) throw MalformedInput("cycle period must be positive");
  StructuredIsometry::Columns columns;
  for (int p = 0; p < period; ++p) columns.emplace(BasisIndex{0, p}, HVector::basis({0, (p + 1) % period}));
  return StructuredIsometry::make({{0, DomainKind::finite, period, "c"}, {1, DomainKind::naturals, 0, "e"}}, columns,
                                  {{1, 0, 1, 1, {}, 1.0}}, "C" + std::to_string(period) + "+S");
}

StructuredIsometry bilateral_plus_shift() {
  return StructuredIsometry::make({{0, DomainKind::integers, 0, "b"}, {1, DomainKind::naturals, 0, "e"}}, {},
                                  {{0, 0, 0, 1, {}, 1.0}, {1, 0, 1, 1, {}, 1.0}}, "B+S");
}

StructuredIsometry grid_horizontal() {
  return StructuredIsometry::make({{0, DomainKind::quadrant, 0, "grid"}}, {}, {{0, 0, 0, 0, {1, 0}, 1.0}}, "SxI");
}

StructuredIsometry grid_vertical() {
  return StructuredIsometry::make({{0, DomainKind::quadrant, 0, "grid"}}, {}, {{0, 0, 0, 0, {0, 1}, 1.0}}, "IxS");
}

Arc default_kerchy_arc() { return Arc::make(0, Angle(3, 5)); }

SpectralUnitary example_kerchy(const Arc& alpha) {
  const std::vector<Arc> doubled = arc_double(alpha);
  std::vector<Arc> cover = doubled;
  cover.push_back(alpha);
  if (multiplicity_profile(SpectralUnitary::make(cover)).min() == 0)
    throw MalformedInput("example_kerchy: alpha and its double do not cover the circle");
  std::vector<Arc> pieces{alpha};
  pieces.insert(pieces.end(), doubled.begin(), doubled.end());
  pieces.push_back(alpha);
  return SpectralUnitary::make(std::move(pieces));
}

SpectralUnitary arc_multiplication(const Arc& alpha) { return SpectralUnitary::make({alpha}); }

FinalExample example_final(const Arc& alpha, int shift_generators) {
  if (alpha.is_full()) throw MalformedInput("example_final: alpha must be a proper arc");
  StructuredIsometry s = shift(shift_generators);
  WoldResult w = wold_decompose(s, kDefaultDepth);
  SpectralUnitary unitary = arc_multiplication(alpha);
  SpectralUnitary ext = spectral_of_extension(w, unitary);
  return {std::move(unitary), std::move(s), std::move(w), std::move(ext)};
}

FinalReport analyze_final(const FinalExample& example, int horizon) {
  FinalReport out;
  out.unitary_wandering = has_wandering_vector(example.unitary_part);
  bool all_certified = example.shift_wold.exact;
  for (const HVector& k : example.shift_wold.shift_wandering_basis) {
    const Certificate c = is_strongly_wandering(example.shift_part, k, horizon);
    all_certified = all_certified && c.is_true() && c.exact();
    if (c.is_true()) out.strongly_wandering_basis.push_back(k);
  }
  if (out.unitary_wandering.value) {
    out.certificate = Certificate::fails(Label{"unitary part has wandering vectors"}, horizon,
                                         "W_u is nonzero, so W is larger than H_s");
  } else if (all_certified) {
    out.ws_equals_s = true;
    out.certificate = Certificate::holds(horizon, true, "W_u = {0} and every shift generator is strongly wandering");
  } else {
    out.certificate = Certificate::undecided(horizon, "shift generators not certified strongly wandering");
  }
  return out;
}

namespace {

std::string dump(const Json& j) { return j.dump(); }

Json cert_summary(const Certificate& c) {
  Json out{{"verdict", to_string(c.verdict())}, {"exact", c.exact()}};
  if (c.is_false()) out["witness"] = to_string(c.witness());
  return out;
}

std::string summarize_operator(const StructuredIsometry& v, const std::string& op, int depth) {
  if (op == "wold") {
    const WoldResult w = wold_decompose(v, depth);
    return dump({{"exact", w.exact},
                 {"unitary_dim", w.unitary_window_basis.size()},
                 {"shift_wandering_dim", w.shift_wandering_basis.size()}});
  }
  if (op == "wander") {
    const WanderingSpanResult r = wandering_span_decompose(v, depth);
    Json out = cert_summary(r.certificate);
    out["h0_dim"] = r.h0.subspace.dimension();
    return dump(out);
  }
  if (op == "extension") {
    const UnitaryExtension ext = minimal_unitary_extension(v, depth);
    return dump({{"unitary", is_unitary(ext.unitary, depth)},
                 {"widened", ext.widened_lanes.size()},
                 {"added", ext.added_lanes.size()}});
  }
  throw MalformedInput("unknown operator summary '" + op + "'");
}

std::string summarize_pair(const OperatorPair& p, const std::string& op, int depth) {
  if (op == "commutes") return dump(cert_summary(commutes(p.v1, p.v2, depth)));
  if (op == "doubly_commutes") return dump(cert_summary(doubly_commutes(p.v1, p.v2, depth)));
  if (op == "weak_bishift") return dump(cert_summary(weak_bishift_classify(p.v1, p.v2, depth)));
  if (op == "cndc") return dump(cert_summary(is_completely_non_doubly_commuting(p.v1, p.v2, depth)));
  if (op == "pair_decompose") {
    const PairReport r = pair_decompose(p.v1, p.v2, depth);
    return dump({{"uu", r.uu.subspace.dimension()},
                 {"us", r.us.subspace.dimension()},
                 {"su", r.su.subspace.dimension()},
                 {"ws", r.ws.subspace.dimension()},
                 {"ws_verdict", to_string(r.ws.certificate.verdict())}});
  }
  if (op == "h0_plus") {
    const WanderingSpanResult ws = wandering_span_decompose(p.v1, depth);
    const CertifiedSubspace h = h0_plus(p.v1, p.v2, ws.h0.subspace, depth);
    Json out = cert_summary(h.certificate);
    out["dim"] = h.subspace.dimension();
    return dump(out);
  }
  if (op == "exhaust") {
    const Exhaustion e = exhaust_h0(p.v1, p.v2, 8, depth);
    Json out = cert_summary(e.certificate);
    out["iterations"] = e.iterations;
    out["removed_dim"] = e.removed.size();
    return dump(out);
  }
  throw MalformedInput("unknown pair summary '" + op + "'");
}

std::string summarize_spectral(const SpectralUnitary& u, const std::string& op) {
  if (op == "profile") {
    Json j = to_json(multiplicity_profile(u));
    j.erase("atoms");
    return dump(j);
  }
  if (op == "bilateral_shift") {
    const SpectralDecision d = is_bilateral_shift(u);
    return dump({{"value", d.value}, {"reason", d.reason}});
  }
  if (op == "has_wandering") return dump({{"value", has_wandering_vector(u).value}});
  if (op == "cover") {
    try {
      const BilateralCover c = bilateral_cover(u);
      return dump({{"layers", c.layers.size()}, {"exhausts", c.exhausts}});
    } catch (const Refused&) {
      return dump({{"refused", true}});
    }
  }
  throw MalformedInput("unknown spectral summary '" + op + "'");
}

std::string summarize_final(const FinalExample& f, const std::string& op, int depth) {
  if (op == "final") {
    const FinalReport r = analyze_final(f, depth);
    Json profile = to_json(multiplicity_profile(f.extension));
    profile.erase("atoms");
    return dump({{"unitary_has_wandering", r.unitary_wandering.value},
                 {"ws_equals_s", r.ws_equals_s},
                 {"extension_profile", profile}});
  }
  throw MalformedInput("unknown summary '" + op + "'");
}

CatalogEntry op_entry(std::string name, std::string description, StructuredIsometry (*build)(),
                      std::map<std::string, std::string> expected) {
  return {std::move(name), std::move(description), [build] { return CatalogItem{build()}; }, std::move(expected)};
}

std::vector<CatalogEntry> make_fixtures() {
  std::vector<CatalogEntry> f;
  f.push_back(op_entry("shift", "unilateral shift S", [] { return shift(1); },
                       {{"wold", R"({"exact":true,"unitary_dim":0,"shift_wandering_dim":1})"},
                        {"wander", R"({"verdict":"true","exact":true,"h0_dim":0})"},
                        {"extension", R"({"unitary":true,"widened":1,"added":0})"}}));
  f.push_back(op_entry("shift_x2", "unilateral shift of multiplicity 2", [] { return shift(2); },
                       {{"wold", R"({"exact":true,"unitary_dim":0,"shift_wandering_dim":2})"}}));
  f.push_back(op_entry("shift_squared", "S^2 on one lane", [] { return shift_power(2); },
                       {{"wold", R"({"exact":true,"unitary_dim":0,"shift_wandering_dim":2})"},
                        {"extension", R"({"unitary":true,"widened":1,"added":0})"}}));
  f.push_back(op_entry("shift_cubed", "S^3 on one lane", [] { return shift_power(3); },
                       {{"wold", R"({"exact":true,"unitary_dim":0,"shift_wandering_dim":3})"}}));
  f.push_back(op_entry("bilateral", "bilateral shift B", [] { return bilateral_shift(1); },
                       {{"wold", R"({"exact":true,"unitary_dim":64,"shift_wandering_dim":0})"},
                        {"wander", R"({"verdict":"true","exact":true,"h0_dim":0})"}}));
  f.push_back(op_entry("bilateral_x2", "B + B", [] { return bilateral_shift(2); },
                       {{"wold", R"({"exact":true,"unitary_dim":128,"shift_wandering_dim":0})"}}));
  f.push_back(op_entry("fixed_plus_shift", "V f = f, V e_i = e_{i+1}", example_fixed_plus_shift,
                       {{"wold", R"({"exact":true,"unitary_dim":1,"shift_wandering_dim":1})"},
                        {"wander", R"({"verdict":"true","exact":true,"h0_dim":1})"},
                        {"extension", R"({"unitary":true,"widened":1,"added":0})"}}));
  f.push_back(op_entry("cycle2_plus_shift", "2-cycle on a finite lane plus S", [] { return cycle_plus_shift(2); },
                       {{"wold", R"({"exact":true,"unitary_dim":2,"shift_wandering_dim":1})"},
                        {"wander", R"({"verdict":"true","exact":true,"h0_dim":2})"}}));
  f.push_back(op_entry("bilateral_plus_shift", "B + S", bilateral_plus_shift,
                       {{"wold", R"({"exact":true,"unitary_dim":64,"shift_wandering_dim":1})"},
                        {"wander", R"({"verdict":"true","exact":true,"h0_dim":0})"}}));
  f.push_back(op_entry("grid_horizontal", "S (x) I on l^2(N^2)", grid_horizontal,
                       {{"wold", R"({"exact":false,"unitary_dim":0,"shift_wandering_dim":10})"}}));
  f.push_back(op_entry("grid_vertical", "I (x) S on l^2(N^2)", grid_vertical,
                       {{"wold", R"({"exact":false,"unitary_dim":0,"shift_wandering_dim":11})"}}));

  auto pair = [](std::string name, std::string description, OperatorPair (*build)(),
                 std::map<std::string, std::string> expected) {
    return CatalogEntry{std::move(name), std::move(description), [build] { return CatalogItem{build()}; },
                        std::move(expected)};
  };
  f.push_back(pair("s2_s3", "(S^2, S^3)", [] { return OperatorPair{shift_power(2), shift_power(3)}; },
                   {{"commutes", R"({"verdict":"true","exact":true})"},
                    {"doubly_commutes", R"({"verdict":"false","exact":true,"witness":"e[0:0]"})"},
                    {"weak_bishift", R"({"verdict":"true","exact":true})"},
                    {"pair_decompose", R"({"uu":0,"us":0,"su":0,"ws":64,"ws_verdict":"true"})"},
                    {"cndc", R"({"verdict":"true","exact":false})"}}));
  f.push_back(pair("grid", "(S (x) I, I (x) S)", [] { return OperatorPair{grid_horizontal(), grid_vertical()}; },
                   {{"commutes", R"({"verdict":"true","exact":true})"},
                    {"doubly_commutes", R"({"verdict":"true","exact":false})"},
                    {"cndc", R"({"verdict":"false","exact":false,"witness":"whole space"})"}}));
  f.push_back(pair("b_b", "(B, B)", [] { return OperatorPair{bilateral_shift(1), bilateral_shift(1)}; },
                   {{"commutes", R"({"verdict":"true","exact":true})"},
                    {"doubly_commutes", R"({"verdict":"true","exact":true})"},
                    {"weak_bishift", R"({"verdict":"false","exact":true,"witness":"V1V2 has a unitary part"})"},
                    {"pair_decompose", R"({"uu":64,"us":0,"su":0,"ws":0,"ws_verdict":"true"})"},
                    {"cndc", R"({"verdict":"false","exact":true,"witness":"whole space"})"}}));
  f.push_back(pair("s_s", "(S, S)", [] { return OperatorPair{shift(1), shift(1)}; },
                   {{"commutes", R"({"verdict":"true","exact":true})"},
                    {"doubly_commutes", R"({"verdict":"false","exact":true,"witness":"e[0:0]"})"},
                    {"weak_bishift", R"({"verdict":"true","exact":true})"},
                    {"pair_decompose", R"({"uu":0,"us":0,"su":0,"ws":64,"ws_verdict":"true"})"},
                    {"exhaust", R"({"verdict":"true","exact":true,"iterations":0,"removed_dim":0})"}}));
  f.push_back(pair("fixed_plus_shift_pair", "(V, V) for V f = f, V e_i = e_{i+1}",
                   [] { return OperatorPair{example_fixed_plus_shift(), example_fixed_plus_shift()}; },
                   {{"commutes", R"({"verdict":"true","exact":true})"},
                    {"h0_plus", R"({"verdict":"true","exact":true,"dim":1})"},
                    {"exhaust", R"({"verdict":"true","exact":true,"iterations":1,"removed_dim":1})"},
                    {"pair_decompose", R"({"uu":1,"us":0,"su":0,"ws":64,"ws_verdict":"true"})"}}));
  f.push_back(pair("cycle2_pair", "(C2 + S, C2 + S)",
                   [] { return OperatorPair{cycle_plus_shift(2), cycle_plus_shift(2)}; },
                   {{"commutes", R"({"verdict":"true","exact":true})"},
                    {"h0_plus", R"({"verdict":"true","exact":true,"dim":2})"},
                    {"exhaust", R"({"verdict":"true","exact":true,"iterations":1,"removed_dim":2})"},
                    {"pair_decompose", R"({"uu":2,"us":0,"su":0,"ws":64,"ws_verdict":"true"})"}}));

  auto spectral = [](std::string name, std::string description, SpectralUnitary (*build)(),
                     std::map<std::string, std::string> expected) {
    return CatalogEntry{std::move(name), std::move(description), [build] { return CatalogItem{build()}; },
                        std::move(expected)};
  };
  f.push_back(spectral("kerchy", "L^2(a) + L^2(2a) + L^2(a), a = [0, 3/5)", [] { return example_kerchy(); },
                       {{"profile", R"({"breakpoints":["0","3/5"],"values":[3,1]})"},
                        {"bilateral_shift", R"({"value":false,"reason":"non-constant multiplicity"})"},
                        {"has_wandering", R"({"value":true})"},
                        {"cover", R"({"layers":3,"exhausts":true})"}}));
  f.push_back(spectral("arc", "multiplication by z on L^2([0, 1/4))",
                       [] { return arc_multiplication(Arc::make(0, Angle(1, 4))); },
                       {{"profile", R"({"breakpoints":["0","1/4"],"values":[1,0]})"},
                        {"bilateral_shift", R"({"value":false,"reason":"support not full circle"})"},
                        {"has_wandering", R"({"value":false})"},
                        {"cover", R"({"refused":true})"}}));
  f.push_back(spectral("full_circle", "bilateral shift in spectral form", [] { return SpectralUnitary::make({Arc::full()}); },
                       {{"profile", R"({"breakpoints":["0"],"values":[1]})"},
                        {"bilateral_shift", R"({"value":true,"reason":"constant multiplicity 1 on the full circle"})"},
                        {"cover", R"({"layers":1,"exhausts":true})"}}));
  f.push_back({"final", "L^2([0, 1/4)) + one shift generator",
               [] { return CatalogItem{example_final(Arc::make(0, Angle(1, 4)), 1)}; },
               {{"final",
                 R"({"unitary_has_wandering":false,"ws_equals_s":true,"extension_profile":{"breakpoints":["0","1/4"],"values":[2,1]}})"}}});
  return f;
}

}  // namespace

const std::vector<CatalogEntry>& fixtures() {
  static const std::vector<CatalogEntry> entries = make_fixtures();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  const auto& all = fixtures();
  auto it = std::find_if(all.begin(), all.end(), [&](const CatalogEntry& e) { return e.name == name; });
  if (it == all.end()) throw MalformedInput("unknown catalog entry '" + name + "'");
  return *it;
}

std::string summarize(const CatalogEntry& entry, const std::string& operation, int depth) {
  const CatalogItem item = entry.build();
  struct Visitor {
    const std::string& op;
    int depth;
    std::string operator()(const StructuredIsometry& v) const { return summarize_operator(v, op, depth); }
    std::string operator()(const OperatorPair& p) const { return summarize_pair(p, op, depth); }
    std::string operator()(const SpectralUnitary& u) const { return summarize_spectral(u, op); }
    std::string operator()(const FinalExample& f) const { return summarize_final(f, op, depth); }
  };
  return std::visit(Visitor{operation, depth}, item);
}

}  // namespace woldlab
