#include "woldlab/report.hpp"

#include <fstream>

#include "woldlab/errors.hpp"

namespace woldlab {

namespace {

double clean(double x) { return x == 0.0 ? 0.0 : x; }

Json witness_json(const Witness& w) {
  struct Visitor {
    Json operator()(std::monostate) const { return nullptr; }
    Json operator()(const Exponent& e) const { return Json{{"n", e.n}}; }
    Json operator()(const ExponentPair& p) const { return Json{{"n", p.n}, {"m", p.m}}; }
    Json operator()(const BasisIndex& b) const { return to_json(b); }
    Json operator()(const Label& l) const { return l.text; }
  };
  return std::visit(Visitor{}, w);
}

Angle angle_from_json(const Json& j, const char* field, bool wrap) {
  if (j.is_number()) return to_angle(j.get<double>(), wrap);
  if (j.is_string()) return parse_angle(j.get<std::string>(), wrap);
  throw MalformedInput(std::string("spectral description: '") + field + "' must be a number or a 'p/q' string");
}

const Json& field(const Json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name))
    throw MalformedInput(std::string("spectral description: missing field '") + name + "'");
  return obj.at(name);
}

}  // namespace

Json to_json(const BasisIndex& b) { return Json{{"lane", b.lane}, {"position", b.position}}; }

Json to_json(const HVector& x) {
  Json out = Json::array();
  for (const auto& [b, c] : x.entries())
    out.push_back({{"lane", b.lane}, {"position", b.position}, {"re", clean(c.real())}, {"im", clean(c.imag())}});
  return out;
}

Json to_json(const std::vector<HVector>& basis) {
  Json out = Json::array();
  for (const auto& v : basis) out.push_back(to_json(v));
  return out;
}

Json to_json(const Certificate& c) {
  return Json{{"verdict", to_string(c.verdict())},
              {"witness", witness_json(c.witness())},
              {"horizon", c.horizon()},
              {"exact", c.exact()},
              {"note", c.note()}};
}

Json to_json(const WoldResult& w) {
  Json out = to_json(w.certificate);
  out["bases"] = Json::array({to_json(w.unitary_window_basis), to_json(w.shift_wandering_basis)});
  out["depth"] = w.depth;
  out["window"] = w.window;
  out["unitary_basis"] = to_json(w.unitary_window_basis);
  out["shift_wandering_basis"] = to_json(w.shift_wandering_basis);
  out["shift_window_dimension"] = w.shift_window_basis.size();
  return out;
}

Json to_json(const CertifiedSubspace& s) {
  Json out{{"dimension", s.subspace.dimension()}, {"basis", to_json(s.subspace.generators())}};
  out["certificate"] = to_json(s.certificate);
  if (s.subspace.closure().kind != OrbitClosure::Kind::none)
    out["closure"] = {{"kind", to_string(s.subspace.closure().kind)}, {"of", s.subspace.closure().of}};
  return out;
}

Json to_json(const WanderingSpanResult& r) {
  Json out = to_json(r.certificate);
  out["bases"] = Json::array({to_json(r.h0.subspace.generators()), to_json(r.hw.subspace.generators())});
  out["h0"] = to_json(r.h0);
  out["hw"] = to_json(r.hw);
  out["unitary_wandering"] = to_json(r.unitary_wandering);
  out["wold"] = to_json(r.wold);
  return out;
}

Json to_json(const PairReport& r) {
  Json out{{"uu", to_json(r.uu)}, {"us", to_json(r.us)}, {"su", to_json(r.su)}, {"ws", to_json(r.ws)}};
  out["depth"] = r.depth;
  out["window"] = r.window;
  out["wandering_generators"] = {{"v1", to_json(r.wandering_v1)}, {"v2", to_json(r.wandering_v2)}};
  return out;
}

Json to_json(const Exhaustion& e) {
  Json out = to_json(e.certificate);
  out["iterations"] = e.iterations;
  out["removed"] = to_json(e.removed);
  out["h1_dimension"] = e.h1.dimension();
  return out;
}

Json to_json(const Arc& a) { return Json{{"start", to_string(a.start)}, {"length", to_string(a.length)}}; }

Json to_json(const SpectralUnitary& u) {
  Json arcs = Json::array();
  for (const Arc& a : u.continuous_pieces) arcs.push_back(to_json(a));
  Json atoms = Json::array();
  for (const Atom& a : u.atoms) atoms.push_back({{"angle", to_string(a.angle)}, {"mult", a.multiplicity}});
  return Json{{"arcs", arcs}, {"atoms", atoms}};
}

Json to_json(const MultiplicityProfile& p) {
  Json b = Json::array();
  for (const Angle& x : p.breakpoints) b.push_back(to_string(x));
  Json atoms = Json::array();
  for (const Atom& a : p.atom_overrides) atoms.push_back({{"angle", to_string(a.angle)}, {"mult", a.multiplicity}});
  return Json{{"breakpoints", b}, {"values", p.values}, {"atoms", atoms}};
}

Json to_json(const SpectralDecision& d) {
  Json out{{"value", d.value}, {"reason", d.reason}};
  out["obstruction"] = d.obstruction ? to_json(*d.obstruction) : Json(nullptr);
  return out;
}

Json to_json(const BilateralCover& c) {
  Json layers = Json::array();
  for (const CoverLayer& l : c.layers) layers.push_back({{"copies", l.copies}, {"fresh", to_json(l.fresh)}});
  return Json{{"layer_count", c.layers.size()}, {"profile", to_json(c.profile)}, {"exhausts", c.exhausts}, {"layers", layers}};
}

SpectralUnitary spectral_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedInput("spectral description must be a JSON object");
  std::vector<Arc> arcs;
  if (j.contains("arcs")) {
    for (const Json& a : j.at("arcs"))
      arcs.push_back(Arc::make(angle_from_json(field(a, "start"), "start", true),
                               angle_from_json(field(a, "length"), "length", false)));
  }
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    for (const Json& a : j.at("atoms")) {
      const Json& m = field(a, "mult");
      if (!m.is_number_integer()) throw MalformedInput("spectral description: 'mult' must be an integer");
      atoms.push_back({angle_from_json(field(a, "angle"), "angle", true), m.get<int>()});
    }
  }
  return SpectralUnitary::make(std::move(arcs), std::move(atoms));
}

SpectralUnitary parse_spectral_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(0, "json", e.what());
  }
  return spectral_from_json(j);
}

}  // namespace woldlab
