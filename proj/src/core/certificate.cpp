#include "woldlab/certificate.hpp"

namespace woldlab {

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::holds: return "true";
    case Verdict::fails: return "false";
    case Verdict::undecided: return "undecided";
  }
  return "undecided";
}

std::string to_string(const Witness& witness) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "none"; }
    std::string operator()(const Exponent& e) const { return "n=" + std::to_string(e.n); }
    std::string operator()(const ExponentPair& p) const {
      return "(n,m)=(" + std::to_string(p.n) + "," + std::to_string(p.m) + ")";
    }
    std::string operator()(const BasisIndex& b) const { return "e[" + to_string(b) + "]"; }
    std::string operator()(const Label& l) const { return l.text; }
  };
  return std::visit(Visitor{}, witness);
}

Certificate::Certificate(Verdict verdict, Witness witness, int horizon, bool exact, std::string note)
    : verdict_(verdict), witness_(std::move(witness)), horizon_(horizon), exact_(exact), note_(std::move(note)) {}

Certificate Certificate::holds(int horizon, bool exact, std::string note) {
  return {Verdict::holds, std::monostate{}, horizon, exact, std::move(note)};
}

Certificate Certificate::fails(Witness witness, int horizon, std::string note, bool exact) {
  if (std::holds_alternative<std::monostate>(witness)) witness = Label{"unspecified"};
  return {Verdict::fails, std::move(witness), horizon, exact, std::move(note)};
}

Certificate Certificate::undecided(int horizon, std::string note) {
  return {Verdict::undecided, std::monostate{}, horizon, false, std::move(note)};
}

Certificate Certificate::with_note(std::string note) const {
  Certificate c = *this;
  c.note_ = std::move(note);
  return c;
}

}  // namespace woldlab
