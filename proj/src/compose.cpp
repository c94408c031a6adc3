#include "syge/compose.hpp"

namespace syge {

PhraseType phrase_type_from(const std::string& s) {
  // short names plus the type strings used by the original benchmark files
  if (s == "AN" || s == "an" || s == "adjectivenouns") return PhraseType::AN;
  if (s == "VO" || s == "vo" || s == "verbobjects") return PhraseType::VO;
  if (s == "NN" || s == "nn" || s == "compoundnouns") return PhraseType::NN;
  throw std::invalid_argument("unknown phrase type: " + s);
}

ComposeStrategy strategy_from(const std::string& s) {
  if (s == "add") return ComposeStrategy::Add;
  if (s == "syn-rh") return ComposeStrategy::SynRh;
  if (s == "syn-rt") return ComposeStrategy::SynRt;
  if (s == "syn-bid") return ComposeStrategy::SynBiD;
  throw std::invalid_argument("unknown composition strategy: " + s +
                              " (expected add|syn-rh|syn-rt|syn-bid)");
}

}  // namespace syge
