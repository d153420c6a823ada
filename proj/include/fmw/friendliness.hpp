// Bounded checking of the consequence relation "every model of the theory
// reaches, through a base move (r-grid) and an expansion move (s-grid), a
// richer structure satisfying both the theory and the candidate conclusion".
// Everything here is exhaustive up to explicit size bounds; conclusiveness of
// a verdict beyond the bounds is reported, never assumed.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fmw/logic.hpp"
#include "fmw/semantics.hpp"
#include "fmw/structure.hpp"

namespace fmw {

struct FriendlinessConfig {
  BaseRelation base = BaseRelation::R3;
  ExpansionRelation expansion = ExpansionRelation::S1;
  // Largest base-model domain examined.
  int base_bound = 3;
  // Largest expanded-model domain examined (s2/s3 only). 0 means "same as
  // base_bound". s1 keeps the domain fixed, so any other value is rejected.
  int ext_bound = 0;
  // Whether equality belongs to the ambient language. r3/r4 are only
  // supported with equality, where over finite structures they collapse to
  // isomorphism; without it they are rejected rather than approximated.
  bool equality = true;

  // Returns a copy with ext_bound resolved. Throws InvalidConfig on bad
  // bounds and EqualityFreeUnsupported for r3/r4 without equality.
  FriendlinessConfig validated() const;
};

// A successful move for one base model. a_prime is the base relabeled onto
// {0..n-1} (under r2/r3/r4 any isomorphic copy admits a witness exactly when
// this one does, so the relabeled representative stands for them all), and
// a_dprime extends it under the canonical-prefix convention: a_prime is the
// initial segment of a_dprime's domain.
struct Witness {
  FiniteStructure base;
  FiniteStructure a_prime;
  FiniteStructure a_dprime;
};

// Smallest-domain, canonically least structure a_dprime over the joint
// vocabulary with a_dprime |= gamma and phi, related to `base` as the config
// demands, or nullopt when no such structure exists within the size bounds.
// Preconditions: base |= gamma (InvalidConfig otherwise) and base's signature
// contains gamma's vocabulary. The returned witness is re-checked against
// eval and the s-condition before being handed back.
std::optional<Witness> find_witness(const FiniteStructure& base, const Theory& gamma,
                                    const Formula& phi, const FriendlinessConfig& cfg,
                                    const SearchLimits& limits = {});

struct FriendlinessOutcome {
  // True when every base model within bounds admitted a witness.
  bool friendly = false;
  // A negative verdict is conclusive for the unbounded question exactly under
  // s1 with equality, where a refuting base refutes outright. A positive
  // verdict is never conclusive: witnesses beyond any finite bound may be
  // required, or an infinite base model may lack one.
  bool conclusive = false;
  // One witness per base model (one representative per isomorphism class,
  // sizes ascending, canonical order within a size) when friendly.
  std::vector<Witness> witnesses;
  // The first base model in that order admitting no witness, when not.
  std::optional<FiniteStructure> refuting_base;
  FriendlinessConfig config;
};

// Checks every isomorphism class of models of gamma with domain size up to
// cfg.base_bound. Throws EqualityPresent if the sentences use equality while
// cfg says the language has none.
FriendlinessOutcome bounded_friendly(const Theory& gamma, const Formula& phi,
                                     const FriendlinessConfig& cfg,
                                     const SearchLimits& limits = {});

// Re-validates a witness against an arbitrary cell of the relation grid:
// base-to-a_prime must satisfy `r` (equal under r1, isomorphic otherwise),
// a_prime must model gamma, a_dprime must extend a_prime per `s` and satisfy
// gamma and phi under eval. Uses only the trusted evaluation paths, never the
// clause engine.
bool witness_valid(const Witness& w, const Theory& gamma, const Formula& phi,
                   BaseRelation r, ExpansionRelation s);

// --- definability ---------------------------------------------------------

struct ImplicitCheck {
  // No two models of the theory with the same domain agree on every other
  // symbol yet differ on `predicate`, for domains up to the bound.
  bool defined_up_to_bound = false;
  // A disagreeing pair when one exists: identical except at `predicate`.
  std::optional<std::pair<FiniteStructure, FiniteStructure>> counterexample;
};

// Padoa-style search: duplicate the theory with `predicate` renamed, demand a
// disagreement, and look for a joint model of size <= bound.
ImplicitCheck implicitly_defines(const Theory& gamma, const std::string& predicate,
                                 int arity, int bound, const SearchLimits& limits = {});

// Searches for a formula psi over the remaining vocabulary, with free
// variables x1..x{arity}, such that gamma entails (up to models of size
// entail_bound) that psi holds exactly where `predicate` does. Candidates are
// enumerated by connective depth up to max_depth, deduplicated by their truth
// tables on a small panel of structures; the first certified candidate wins.
// Best-effort: nullopt means no definition was found at this depth, not that
// none exists.
std::optional<Formula> find_explicit_definition(const Theory& gamma,
                                                const std::string& predicate, int arity,
                                                int max_depth, int entail_bound,
                                                const SearchLimits& limits = {});

}  // namespace fmw
