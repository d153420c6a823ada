// Ehrenfeucht-Fraisse games: the decidable stand-in for elementary
// equivalence at bounded quantifier rank, and the constructive counterpart
// that produces a separating sentence when the game is lost.
#pragma once

#include <optional>

#include "fmw/logic.hpp"
#include "fmw/structure.hpp"

namespace fmw {

// Duplicator wins the k-round game iff a and b agree on all sentences of
// quantifier rank <= k. Positions (pairs of pebble sequences) are memoized
// as-is. Signatures must coincide; the equality flag decides whether partial
// maps must respect identity.
bool ef_equivalent(const FiniteStructure& a, const FiniteStructure& b, int rounds);

// A sentence of quantifier rank <= rounds true in a and false in b, when the
// structures are not equivalent at that rank; nullopt otherwise. Built from
// the rank-k type of a and then greedily pruned; the result is re-checked by
// eval before being returned.
std::optional<Formula> distinguishing_sentence(const FiniteStructure& a,
                                               const FiniteStructure& b, int rounds);

}  // namespace fmw
