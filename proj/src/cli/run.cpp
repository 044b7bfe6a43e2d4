#include "woldlab/cli.hpp"

#include <charconv>
#include <sstream>

#include "woldlab/catalog.hpp"
#include "woldlab/errors.hpp"
#include "woldlab/format.hpp"
#include "woldlab/report.hpp"

namespace woldlab {

namespace {

constexpr std::string_view kCatalogPrefix = "catalog:";

bool is_catalog(const std::string& input) { return input.rfind(kCatalogPrefix, 0) == 0; }

std::string catalog_name(const std::string& input) { return input.substr(kCatalogPrefix.size()); }

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

const char* kind_of(const CatalogItem& item) {
  switch (item.index()) {
    case 0: return "operator";
    case 1: return "pair";
    case 2: return "spectral";
    default: return "final";
  }
}

StructuredIsometry load_operator(const std::string& input) {
  if (!is_catalog(input)) return parse_operator_file(input);
  const CatalogItem item = catalog_entry(catalog_name(input)).build();
  if (const auto* v = std::get_if<StructuredIsometry>(&item)) return *v;
  throw MalformedInput("catalog entry '" + catalog_name(input) + "' is a " + kind_of(item) + ", not an operator");
}

OperatorPair load_pair(const std::vector<std::string>& inputs) {
  if (inputs.size() == 2) return {load_operator(inputs[0]), load_operator(inputs[1])};
  if (inputs.size() == 1 && is_catalog(inputs[0])) {
    const CatalogItem item = catalog_entry(catalog_name(inputs[0])).build();
    if (const auto* p = std::get_if<OperatorPair>(&item)) return *p;
    throw MalformedInput("catalog entry '" + catalog_name(inputs[0]) + "' is a " + kind_of(item) + ", not a pair");
  }
  throw MalformedInput("pair needs two --input operators or one catalog pair");
}

const std::string& single_input(const RunConfig& c) {
  if (c.inputs.size() != 1) throw MalformedInput(c.command + " needs exactly one --input");
  return c.inputs.front();
}

int exit_for(const Certificate& c) { return c.decided() ? kExitDecided : kExitUndecided; }

int worst(int a, int b) { return std::max(a, b); }

std::string number(double x) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

bool is_vector(const Json& j) {
  return j.is_array() && !j.empty() &&
         std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_object() && e.contains("re") && e.contains("lane"); });
}

std::string vector_text(const Json& j) {
  std::string out;
  for (const Json& e : j) {
    if (!out.empty()) out += ", ";
    const double re = e["re"].get<double>();
    const double im = e["im"].get<double>();
    out += std::to_string(e["lane"].get<int>()) + ":" + std::to_string(e["position"].get<std::int64_t>()) + "=" + number(re);
    if (im != 0.0) out += (im > 0 ? "+" : "") + number(im) + "i";
  }
  return out;
}

void render_text(const Json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_text(v, path.empty() ? k : path + "." + k, out);
  } else if (j.is_array()) {
    if (j.empty()) {
      out << path << ": []\n";
    } else if (is_vector(j)) {
      out << path << ": " << vector_text(j) << "\n";
    } else if (std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); })) {
      out << path << ": ";
      for (std::size_t i = 0; i < j.size(); ++i) out << (i ? ", " : "") << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
      out << "\n";
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], path + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

std::string render(const Json& j, OutputFormat f) {
  if (f == OutputFormat::json) return j.dump(2) + "\n";
  std::ostringstream out;
  render_text(j, "", out);
  return out.str();
}

RunResult run_wold(const RunConfig& c) {
  const StructuredIsometry v = load_operator(single_input(c));
  const WoldResult w = wold_decompose(v, c.depth);
  Json j{{"command", "wold"}, {"operator", v.name()}};
  j.update(to_json(w));
  return {exit_for(w.certificate), render(j, c.format), {}};
}

RunResult run_wander(const RunConfig& c) {
  const StructuredIsometry v = load_operator(single_input(c));
  Json j{{"command", "wander"}, {"operator", v.name()}};
  if (!c.vector.empty()) {
    const HVector x = parse_vector(c.vector);
    for (const auto& [b, coeff] : x.entries()) {
      (void)coeff;
      if (!v.contains(b)) throw MalformedInput("vector index " + to_string(b) + " is not in the operator's space");
    }
    const Certificate cert = c.strong ? is_strongly_wandering(v, x, c.horizon) : is_wandering(v, x, c.horizon);
    j["property"] = c.strong ? "strongly_wandering" : "wandering";
    j["vector"] = to_json(x);
    j.update(to_json(cert));
    return {exit_for(cert), render(j, c.format), {}};
  }
  const WanderingSpanResult r = wandering_span_decompose(v, c.depth);
  j.update(to_json(r));
  return {exit_for(r.certificate), render(j, c.format), {}};
}

RunResult run_pair(const RunConfig& c) {
  const OperatorPair p = load_pair(c.inputs);
  Json j{{"command", "pair"}, {"operators", {p.v1.name(), p.v2.name()}}};
  const Certificate commute = commutes(p.v1, p.v2, c.depth);
  j["commutes"] = to_json(commute);
  if (!commute.is_true()) return {kExitDecided, render(j, c.format), {}};

  int code = kExitDecided;
  const Certificate dc = doubly_commutes(p.v1, p.v2, c.depth);
  const Certificate wb = weak_bishift_classify(p.v1, p.v2, c.depth);
  const Certificate cndc = is_completely_non_doubly_commuting(p.v1, p.v2, c.depth);
  const PairReport parts = pair_decompose(p.v1, p.v2, c.depth);
  const Exhaustion ex = exhaust_h0(p.v1, p.v2, 8, c.depth);
  j["doubly_commutes"] = to_json(dc);
  j["weak_bishift"] = to_json(wb);
  j["completely_non_doubly_commuting"] = to_json(cndc);
  j["decomposition"] = to_json(parts);
  j["h0_exhaustion"] = to_json(ex);
  for (const Certificate* cert : {&dc, &wb, &cndc, &parts.uu.certificate, &parts.us.certificate,
                                  &parts.su.certificate, &parts.ws.certificate, &ex.certificate})
    code = worst(code, exit_for(*cert));
  return {code, render(j, c.format), {}};
}

Json spectral_report(const SpectralUnitary& u) {
  Json j{{"spectral", to_json(u)}, {"profile", to_json(multiplicity_profile(u))}};
  const SpectralDecision bs = is_bilateral_shift(u);
  j["bilateral_shift"] = bs.value;
  j["bilateral_shift_reason"] = bs.reason;
  j["has_wandering_vector"] = to_json(has_wandering_vector(u));
  try {
    j["cover"] = to_json(bilateral_cover(u));
  } catch (const Refused& e) {
    j["cover"] = {{"refused", e.what()}};
  }
  return j;
}

RunResult run_spectral(const RunConfig& c) {
  const std::string& input = single_input(c);
  Json j{{"command", "spectral"}};
  int code = kExitDecided;
  if (is_catalog(input)) {
    const CatalogItem item = catalog_entry(catalog_name(input)).build();
    if (const auto* u = std::get_if<SpectralUnitary>(&item)) {
      j.update(spectral_report(*u));
    } else if (const auto* f = std::get_if<FinalExample>(&item)) {
      const FinalReport r = analyze_final(*f, c.horizon);
      j["unitary_part"] = spectral_report(f->unitary_part);
      j["shift_part"] = to_json(f->shift_wold);
      j["extension"] = spectral_report(f->extension);
      j["strongly_wandering_basis"] = to_json(r.strongly_wandering_basis);
      j["ws_equals_s"] = r.ws_equals_s;
      j["final"] = to_json(r.certificate);
      code = exit_for(r.certificate);
    } else {
      throw MalformedInput("catalog entry '" + catalog_name(input) + "' is not spectral");
    }
  } else {
    j.update(spectral_report(parse_spectral_file(input)));
  }
  return {code, render(j, c.format), {}};
}

RunResult run_catalog(const RunConfig& c) {
  if (c.inputs.empty()) {
    Json list = Json::array();
    for (const CatalogEntry& e : fixtures()) {
      Json expected = Json::object();
      for (const auto& [op, value] : e.expected) expected[op] = Json::parse(value);
      list.push_back({{"name", e.name}, {"kind", kind_of(e.build())}, {"description", e.description}, {"expected", expected}});
    }
    if (c.format == OutputFormat::text) {
      std::ostringstream out;
      for (const Json& e : list) out << e["name"].get<std::string>() << "  " << e["kind"].get<std::string>() << "  " << e["description"].get<std::string>() << "\n";
      return {kExitDecided, out.str(), {}};
    }
    return {kExitDecided, render(Json{{"command", "catalog"}, {"entries", list}}, c.format), {}};
  }
  const std::string& input = single_input(c);
  if (!is_catalog(input)) throw MalformedInput("catalog export needs --input catalog:<name>");
  const CatalogEntry& e = catalog_entry(catalog_name(input));
  const CatalogItem item = e.build();
  std::vector<std::string> texts;
  if (const auto* v = std::get_if<StructuredIsometry>(&item)) texts.push_back(export_operator(*v));
  if (const auto* p = std::get_if<OperatorPair>(&item)) {
    texts.push_back(export_operator(p->v1));
    texts.push_back(export_operator(p->v2));
  }
  if (c.format == OutputFormat::text) {
    if (const auto* u = std::get_if<SpectralUnitary>(&item)) return {kExitDecided, to_json(*u).dump(2) + "\n", {}};
    if (texts.empty()) throw MalformedInput("catalog entry '" + e.name + "' has no operator description");
    std::string out;
    for (const auto& t : texts) out += t;
    return {kExitDecided, out, {}};
  }
  Json j{{"command", "catalog"}, {"name", e.name}, {"kind", kind_of(item)}, {"description", e.description}};
  if (!texts.empty()) j["operators"] = texts;
  if (const auto* u = std::get_if<SpectralUnitary>(&item)) j["spectral"] = to_json(*u);
  return {kExitDecided, render(j, c.format), {}};
}

}  // namespace

RunResult run(const RunConfig& config) {
  try {
    if (config.depth < 1) throw MalformedInput("depth must be at least 1");
    if (config.horizon < 1) throw MalformedInput("horizon must be at least 1");
    for (const auto& in : config.inputs)
      if (is_catalog(in)) (void)catalog_entry(catalog_name(in));
    if (config.command == "wold") return run_wold(config);
    if (config.command == "wander") return run_wander(config);
    if (config.command == "pair") return run_pair(config);
    if (config.command == "spectral") return run_spectral(config);
    if (config.command == "catalog") return run_catalog(config);
    throw MalformedInput("unknown command '" + config.command + "'");
  } catch (const Error& e) {
    return {kExitInvalid, {}, e.what()};
  }
}

}  // namespace woldlab
