// Bundled instances (theories, structures, sentence families), randomized
// cross-check suites, and the runnable reproduction registry behind
// `fmw repro`. Every registry entry carries a self-contained claim and checks
// it end to end, reporting pass or fail.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fmw/friendliness.hpp"
#include "fmw/logic.hpp"
#include "fmw/report.hpp"
#include "fmw/semantics.hpp"
#include "fmw/structure.hpp"

namespace fmw {

// --- fixed instances ------------------------------------------------------

// Field axioms over relation graphs: Plus(x,y,z) is x+y=z, Times likewise,
// Zero/One pick out the constants. Includes derivable cancellation laws for
// propagation strength; the finite models are exactly the finite fields.
std::string field_theory_text();
Theory field_theory();

// R is a total, injective, non-surjective map. Satisfiable, but on no finite
// domain.
Formula dedekind_phi();

// "forall x, y. x = y" plus "exists x, y. R(x,y)".
Theory one_point_r_theory();
// "forall x, y. x = y" plus "exists x, y. ~ R(x,y)".
Theory one_point_r_complement_theory();

// There are at least n distinct elements (n >= 1).
Formula at_least_sentence(int n);
// {at_least_sentence(j) : 1 <= j <= k}.
Theory at_least_fragment(int k);

// E symmetric and irreflexive, with closed odd walks excluded up to the
// given length (3 or 5 here).
Theory graph_fragment_3();
Theory graph_fragment_5();
// The colour expansion sentence: edges join differently coloured vertices.
Formula two_colorable_phi();

// forall x. P(x) <-> exists y. E(x,y)
Theory beth_demo_theory();

FiniteStructure cycle_graph(int n);
// The five-element prime field, as relation graphs with functional hints.
FiniteStructure z5_field();

// Exhaustive satisfiability at one exact size: enumerate every structure over
// sig by table expansion and evaluate. Independent of the clause engine.
bool brute_satisfiable_at(const Formula& f, const Signature& sig, int size);

// --- randomized generators (deterministic per seed) -----------------------

Formula random_prop_formula(std::mt19937& rng, const std::vector<std::string>& vars,
                            int depth);
// A closed formula over sig; quantifier rank <= rank. May use equality when
// sig.equality_enabled.
Formula random_fo_sentence(std::mt19937& rng, const Signature& sig, int rank);
// Equality is the only predicate; quantifier rank between 1 and rank.
Formula random_pure_equality_sentence(std::mt19937& rng, int rank);

// --- cross-check suites ---------------------------------------------------

struct SuiteStats {
  int instances = 0;
  int violations = 0;
  // How often each named check fired non-vacuously.
  std::map<std::string, int> checked;
  std::string first_failure;  // empty when clean

  void tally(const std::string& name, bool precondition, bool holds);
};

// Four-way agreement: the three propositional procedures and the first-order
// checker on 0-ary signatures with (r1,s1) at bounds (1,1).
SuiteStats prop_agreement_suite(int count, unsigned seed);

// The seven closure laws (right weakening, singleton cumulative transitivity,
// local left strengthening / equivalence / monotony, local disjunction in the
// premisses, proof by exhaustion), exactly, on random propositional instances.
SuiteStats prop_property_suite(int count, unsigned seed);

// The same laws on random first-order instances under (r3,s1) with base
// bound 3 (s1 pins the extension to the same size). Side conditions hold by
// construction — entailments are arranged syntactically, vocabulary
// inclusions by disjoining a vocabulary-filling contradiction — so each law
// fires whenever its friendliness preconditions come out true.
SuiteStats fo_property_suite(int count, unsigned seed, const SearchLimits& limits = {});

// Witness transfer and verdict monotonicity across the r/s grid at bounds
// (3,4): s1 witnesses remain valid under s2/s3, r1 witnesses under r2..r4,
// verdicts agree across r and grow monotone along s.
SuiteStats lattice_suite(int count, unsigned seed, const SearchLimits& limits = {});

// --- reproduction registry ------------------------------------------------

struct ReproEntry {
  std::string name;
  std::string claim;
  std::function<Report(const SearchLimits&)> run;
};

const std::vector<ReproEntry>& repro_registry();

// Throws UnknownRepro for names outside the registry.
Report run_repro(const std::string& name, const SearchLimits& limits = {});

}  // namespace fmw
