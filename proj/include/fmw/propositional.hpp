// The propositional fragment, where the consequence relation is decidable
// outright. Three deliberately independent routes to the same verdict; tests
// hold them to exact agreement.
#pragma once

#include "fmw/logic.hpp"

namespace fmw {

// Every valuation of gamma's variables satisfying gamma must extend, on
// phi's remaining variables, to one satisfying phi. Throws NotPropositional
// on quantifiers, equality, or atoms with arguments; TooManyVariables beyond
// 20 variables.
bool prop_friendly(const Theory& gamma, const Formula& phi);

// Equivalent characterization through the shared vocabulary: the verdict
// holds iff every consequence of phi expressible over the shared variables
// is already a consequence of gamma. Enumerates all boolean functions over
// the shared variables; throws TooManySharedVariables beyond 4.
bool prop_friendly_via_refinement(const Theory& gamma, const Formula& phi);

// Another equivalent characterization: phi is consistent with every complete
// description, in gamma's vocabulary, of a gamma-satisfying valuation.
bool prop_consistency_characterization(const Theory& gamma, const Formula& phi);

}  // namespace fmw
