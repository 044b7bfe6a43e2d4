#include "woldlab/format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "woldlab/errors.hpp"

namespace woldlab {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string fmt(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

Complex phase_from_turns(double t) {
  const double a = 2.0 * std::numbers::pi * t;
  return {std::cos(a), std::sin(a)};
}

double turns_of(Complex phase) {
  double t = std::arg(phase) / (2.0 * std::numbers::pi);
  if (t < 0) t += 1.0;
  if (std::abs(t) < 1e-15 || std::abs(t - 1.0) < 1e-15) t = 0.0;
  return t;
}

const char* kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::finite: return "finite";
    case DomainKind::naturals: return "naturals";
    case DomainKind::integers: return "integers";
    case DomainKind::quadrant: return "quadrant";
  }
  return "?";
}

class LineParser {
 public:
  LineParser(std::size_t line, std::vector<std::string> tokens) : line_(line), tok_(std::move(tokens)) {}

  std::size_t size() const { return tok_.size(); }
  const std::string& at(std::size_t i, const char* field) const {
    if (i >= tok_.size()) throw ParseError(line_, field, "missing");
    return tok_[i];
  }
  std::int64_t integer(std::size_t i, const char* field) const {
    std::int64_t v = 0;
    if (!parse_number(at(i, field), v)) throw ParseError(line_, field, "expected an integer, got '" + tok_[i] + "'");
    return v;
  }
  double real(std::size_t i, const char* field) const {
    double v = 0;
    if (!parse_number(at(i, field), v)) throw ParseError(line_, field, "expected a number, got '" + tok_[i] + "'");
    return v;
  }
  BasisIndex index(std::size_t i, const char* field) const {
    try {
      return parse_index(at(i, field));
    } catch (const MalformedInput& e) {
      throw ParseError(line_, field, e.what());
    }
  }
  [[noreturn]] void fail(const char* field, const std::string& what) const { throw ParseError(line_, field, what); }

 private:
  std::size_t line_;
  std::vector<std::string> tok_;
};

}  // namespace

BasisIndex parse_index(const std::string& text) {
  const auto colon = text.find(':');
  std::int64_t lane = 0;
  std::int64_t pos = 0;
  if (colon == std::string::npos || !parse_number(std::string_view(text).substr(0, colon), lane) ||
      !parse_number(std::string_view(text).substr(colon + 1), pos) || lane < 0)
    throw MalformedInput("expected an index 'lane:position', got '" + text + "'");
  return {static_cast<int>(lane), pos};
}

HVector parse_vector(const std::string& text) {
  HVector x;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw MalformedInput("empty vector entry in '" + text + "'");
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw MalformedInput("vector entry '" + item + "' lacks '='");
    const BasisIndex b = parse_index(item.substr(0, eq));
    std::string value = item.substr(eq + 1);
    double re = 0.0;
    double im = 0.0;
    if (!value.empty() && value.back() == 'i') {
      value.pop_back();
      // split at the last sign that is not an exponent sign or the leading sign
      std::size_t split = std::string::npos;
      for (std::size_t k = value.size(); k-- > 1;)
        if ((value[k] == '+' || value[k] == '-') && value[k - 1] != 'e' && value[k - 1] != 'E') {
          split = k;
          break;
        }
      const std::string re_part = split == std::string::npos ? "" : value.substr(0, split);
      std::string im_part = split == std::string::npos ? value : value.substr(split);
      if (im_part == "+" || im_part == "-" || im_part.empty()) im_part += "1";
      if ((!re_part.empty() && !parse_number(re_part, re)) || !parse_number(im_part, im))
        throw MalformedInput("bad coefficient in vector entry '" + item + "'");
    } else if (!parse_number(value, re)) {
      throw MalformedInput("bad coefficient in vector entry '" + item + "'");
    }
    x.add(b, {re, im});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (x.is_zero()) throw MalformedInput("vector '" + text + "' is zero");
  return x;
}

StructuredIsometry parse_operator(std::istream& in) {
  std::string name;
  std::vector<LaneSpec> lanes;
  StructuredIsometry::Columns columns;
  std::vector<TailRule> rules;
  bool header = false;
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto tokens = split_ws(raw);
    if (tokens.empty()) continue;
    const LineParser p(line_no, tokens);
    const std::string& key = tokens[0];
    if (!header) {
      if (key != "woldlab-operator" || p.size() != 2 || tokens[1] != "1")
        p.fail("header", "expected 'woldlab-operator 1'");
      header = true;
    } else if (key == "name") {
      name = p.at(1, "name");
    } else if (key == "lane") {
      LaneSpec l{static_cast<int>(p.integer(1, "lane id")), DomainKind::naturals, 0, ""};
      const std::string& kind = p.at(2, "lane kind");
      std::size_t next = 3;
      if (kind == "finite") {
        l.kind = DomainKind::finite;
        l.size = p.integer(3, "lane size");
        next = 4;
      } else if (kind == "naturals") {
        l.kind = DomainKind::naturals;
      } else if (kind == "integers") {
        l.kind = DomainKind::integers;
      } else if (kind == "quadrant") {
        l.kind = DomainKind::quadrant;
      } else {
        p.fail("lane kind", "unknown lane kind '" + kind + "'");
      }
      if (next < p.size()) l.label = p.at(next, "lane label");
      if (next + 1 < p.size()) p.fail("lane", "trailing tokens");
      lanes.push_back(l);
    } else if (key == "column") {
      const BasisIndex k = p.index(1, "column index");
      if ((p.size() - 2) % 3 != 0) p.fail("column entries", "expected triples 'lane:pos re im'");
      HVector col;
      for (std::size_t i = 2; i < p.size(); i += 3) col.add(p.index(i, "column row"), {p.real(i + 1, "re"), p.real(i + 2, "im")});
      if (!columns.emplace(k, col).second) p.fail("column index", "column " + to_string(k) + " given twice");
    } else if (key == "tail") {
      if (p.size() != 6) p.fail("tail", "expected 'tail SRC THRESH TGT OFFSET PHASE'");
      TailRule r;
      r.source_lane = static_cast<int>(p.integer(1, "tail source"));
      r.threshold = p.integer(2, "tail threshold");
      r.target_lane = static_cast<int>(p.integer(3, "tail target"));
      const std::string& off = p.at(4, "tail offset");
      if (const auto c = off.find(','); c != std::string::npos) {
        if (!parse_number(std::string_view(off).substr(0, c), r.grid.di) ||
            !parse_number(std::string_view(off).substr(c + 1), r.grid.dj))
          p.fail("tail offset", "expected 'di,dj', got '" + off + "'");
      } else {
        r.offset = p.integer(4, "tail offset");
      }
      r.phase = phase_from_turns(p.real(5, "tail phase"));
      rules.push_back(r);
    } else {
      p.fail("keyword", "unknown keyword '" + key + "'");
    }
  }
  if (!header) throw ParseError(line_no, "header", "empty operator description");
  return StructuredIsometry::make(std::move(lanes), std::move(columns), std::move(rules), name);
}

StructuredIsometry parse_operator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  return parse_operator(in);
}

std::string export_operator(const StructuredIsometry& v) {
  std::ostringstream out;
  out << "woldlab-operator 1\n";
  if (!v.name().empty()) out << "name " << v.name() << "\n";
  for (const LaneSpec& l : v.lanes()) {
    out << "lane " << l.id << " " << kind_name(l.kind);
    if (l.kind == DomainKind::finite) out << " " << l.size;
    if (!l.label.empty()) out << " " << l.label;
    out << "\n";
  }
  for (const auto& [k, col] : v.explicit_columns()) {
    out << "column " << to_string(k);
    for (const auto& [b, c] : col.entries()) out << "  " << to_string(b) << " " << fmt(c.real()) << " " << fmt(c.imag());
    out << "\n";
  }
  for (const TailRule& r : v.tail_rules()) {
    out << "tail " << r.source_lane << " " << r.threshold << " " << r.target_lane << " ";
    if (v.lane(r.source_lane).kind == DomainKind::quadrant)
      out << r.grid.di << "," << r.grid.dj;
    else
      out << r.offset;
    out << " " << fmt(turns_of(r.phase)) << "\n";
  }
  return out.str();
}

}  // namespace woldlab
