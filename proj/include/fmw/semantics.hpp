// Tarskian evaluation and bounded model search. eval is the trusted,
// straightforward recursion; the searcher is a separate grounding-based
// engine whose results are re-checked against eval by the callers that care.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fmw/logic.hpp"
#include "fmw/structure.hpp"

namespace fmw {

using Assignment = std::map<std::string, int>;

// Throws VocabularyNotContained if f mentions symbols outside a's signature
// and UnboundVariable if a free variable has no binding.
bool eval(const FiniteStructure& a, const Formula& f, const Assignment& env = {});

struct SearchLimits {
  long long node_budget = 50'000'000;  // backtracking decisions across one call
  long long* spent = nullptr;  // when set, decisions consumed are accumulated here
};

// A model of the theory with exactly the given domain size, or nullopt.
// Structures respect the theory's functional hints by construction.
// Throws ResourceBudgetExceeded when the budget runs out, which is distinct
// from "no model".
std::optional<FiniteStructure> find_model(const Theory& gamma, int size,
                                          const SearchLimits& limits = {});

// One representative per isomorphism class of the size-n models, in the
// canonical order. Representatives are the canonically least members of
// their classes.
std::vector<FiniteStructure> enumerate_models(const Theory& gamma, int size,
                                              const SearchLimits& limits = {});

// Domain sizes in [1, max_size] at which f has a model.
std::set<int> spectrum(const Formula& f, int max_size, const SearchLimits& limits = {});

struct EntailedUpToBound {
  int bound;
};
struct Refuted {
  FiniteStructure countermodel;
};
using BoundedEntailment = std::variant<EntailedUpToBound, Refuted>;

// Searches for a countermodel of size <= max_size over the joint vocabulary.
// Countermodels are re-checked by eval before being returned.
BoundedEntailment entails_bounded(const Theory& gamma, const Formula& phi, int max_size,
                                  const SearchLimits& limits = {});

bool is_entailed(const BoundedEntailment& v);

// Decision procedure for sentences whose only predicate is equality: such a
// sentence has a model iff it has one of size <= max(1, quantifier rank), so
// the search over bare sets up to that size is exact. Throws NotPureEquality
// if any relation symbol occurs.
std::optional<FiniteStructure> pure_equality_finite_model(const Formula& f);

}  // namespace fmw
