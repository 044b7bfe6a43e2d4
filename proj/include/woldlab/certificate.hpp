#pragma once

#include <string>
#include <variant>

#include "woldlab/lanes.hpp"

namespace woldlab {

enum class Verdict { holds, fails, undecided };

/// Serialized as "true" / "false" / "undecided".
const char* to_string(Verdict verdict);

struct Exponent {
  int n = 0;
  auto operator<=>(const Exponent&) const = default;
};

struct ExponentPair {
  int n = 0;
  int m = 0;
  auto operator<=>(const ExponentPair&) const = default;
};

/// Free-form witness, used when the counterexample is a subspace or a
/// component rather than an index.
struct Label {
  std::string text;
  auto operator<=>(const Label&) const = default;
};

using Witness = std::variant<std::monostate, Exponent, ExponentPair, BasisIndex, Label>;

std::string to_string(const Witness& witness);

/// Outcome of a depth-bounded check. A failing verdict always carries a
/// witness; an exact certificate is always decided.
class Certificate {
 public:
  static Certificate holds(int horizon, bool exact, std::string note = {});
  /// A window-found witness that is not proven to persist passes exact = false.
  static Certificate fails(Witness witness, int horizon, std::string note = {}, bool exact = true);
  static Certificate undecided(int horizon, std::string note = {});

  Verdict verdict() const { return verdict_; }
  const Witness& witness() const { return witness_; }
  int horizon() const { return horizon_; }
  bool exact() const { return exact_; }
  const std::string& note() const { return note_; }

  bool is_true() const { return verdict_ == Verdict::holds; }
  bool is_false() const { return verdict_ == Verdict::fails; }
  bool decided() const { return verdict_ != Verdict::undecided; }

  Certificate with_note(std::string note) const;

 private:
  Certificate(Verdict verdict, Witness witness, int horizon, bool exact, std::string note);

  Verdict verdict_;
  Witness witness_;
  int horizon_;
  bool exact_;
  std::string note_;
};

}  // namespace woldlab
