#pragma once

#include <string>

#include "mlgw/errors.hpp"

namespace mlgw {

/* Training/inference variants.
     independent: one policy per label, no shared policy.
     reg:         shared policy regularizes the per-label returns; actions are
                  still drawn from the per-label policy.
     reg_plus:    additionally draws actions from the renormalized elementwise
                  product of the per-label and shared policies. */
enum class Variant { independent, reg, reg_plus };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::independent: return "i";
    case Variant::reg: return "reg";
    case Variant::reg_plus: return "reg+";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "i" || s == "I") return Variant::independent;
  if (s == "reg" || s == "REG") return Variant::reg;
  if (s == "reg+" || s == "REG+") return Variant::reg_plus;
  throw InputError("unknown variant '" + s + "' (expected i, reg, or reg+)");
}

// Evaluation mode: transductive keeps test nodes in the training graph
// (labels hidden); inductive removes them during training entirely.
enum class Mode { transductive, inductive };

inline std::string to_string(Mode m) {
  return m == Mode::transductive ? "trans" : "ind";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "trans" || s == "transductive") return Mode::transductive;
  if (s == "ind" || s == "inductive") return Mode::inductive;
  throw InputError("unknown mode '" + s + "' (expected trans or ind)");
}

// Supervision regime over a k-fold split: tr1 trains on one fold and tests on
// the rest; tr4 trains on all folds but one and tests on the held-out fold.
enum class Regime { tr1, tr4 };

inline std::string to_string(Regime r) { return r == Regime::tr1 ? "tr1" : "tr4"; }

inline Regime parse_regime(const std::string& s) {
  if (s == "tr1" || s == "Tr-1") return Regime::tr1;
  if (s == "tr4" || s == "Tr-4") return Regime::tr4;
  throw InputError("unknown regime '" + s + "' (expected tr1 or tr4)");
}

}  // namespace mlgw
