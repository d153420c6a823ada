#include <doctest.h>

#include <random>
#include <set>

#include "fmw/corpus.hpp"
#include "fmw/errors.hpp"
#include "fmw/parser.hpp"
#include "fmw/report.hpp"
#include "fmw/semantics.hpp"
#include "oracle_helpers.hpp"

using fmw::FiniteStructure;
using fmw::Formula;
using fmw::Signature;
using fmw::Theory;

TEST_CASE("the bundled field axioms hold in the five-element prime field") {
  const FiniteStructure f5 = fmw::z5_field();
  f5.validate(true);
  CHECK(f5.domain_size == 5);
  for (const auto& axiom : fmw::field_theory().sentences) {
    CHECK(oracle::eval_ref(f5, axiom));
  }
}

TEST_CASE("the field theory text parses with its functional hints") {
  const Theory t = fmw::field_theory();
  CHECK(t.sentences.size() >= 20);
  CHECK(t.functional_hints ==
        std::set<std::pair<std::string, int>>{
            {"One", 0}, {"Plus", 2}, {"Times", 2}, {"Zero", 0}});
  const Signature sig = t.vocabulary();
  CHECK(sig.symbols ==
        std::map<std::string, int>{
            {"One", 1}, {"Plus", 3}, {"Times", 3}, {"Zero", 1}});
}

TEST_CASE("cycle graphs") {
  for (int n = 3; n <= 6; ++n) {
    const FiniteStructure c = fmw::cycle_graph(n);
    c.validate();
    CHECK(c.domain_size == n);
    CHECK(c.tuples("E").size() == 2u * n);  // both directions of each edge
    CHECK(oracle::bipartite_ref(c) == (n % 2 == 0));
  }
  CHECK_THROWS_AS(fmw::cycle_graph(2), fmw::Error);
}

TEST_CASE("counting sentences") {
  CHECK(fmw::quantifier_rank(fmw::at_least_sentence(1)) == 1);
  CHECK(fmw::quantifier_rank(fmw::at_least_sentence(4)) == 4);
  CHECK(fmw::spectrum(fmw::at_least_sentence(3), 5) == std::set<int>{3, 4, 5});
  CHECK_THROWS_AS(fmw::at_least_sentence(0), fmw::Error);
  CHECK(fmw::at_least_fragment(3).sentences.size() == 3);
}

TEST_CASE("the map sentence has no finite model") {
  const Formula phi = fmw::dedekind_phi();
  for (int size = 1; size <= 3; ++size) {
    Signature sig;
    sig.symbols = {{"R", 2}};
    sig.equality_enabled = true;
    bool any = false;
    for (const auto& s : oracle::all_structures(sig, size)) {
      if (oracle::eval_ref(s, phi)) {
        any = true;
        break;
      }
    }
    CHECK_FALSE(any);
  }
}

TEST_CASE("one-point theories force a single element") {
  CHECK(fmw::find_model(fmw::one_point_r_theory(), 1).has_value());
  CHECK_FALSE(fmw::find_model(fmw::one_point_r_theory(), 2).has_value());
  CHECK(fmw::find_model(fmw::one_point_r_complement_theory(), 1).has_value());
}

TEST_CASE("exhaustive satisfiability probe agrees with the model finder") {
  std::mt19937 rng(808u);
  Signature sig;
  sig.symbols = {{"P", 1}, {"E", 2}};
  sig.equality_enabled = true;
  for (int i = 0; i < 20; ++i) {
    const Formula f = fmw::random_fo_sentence(rng, sig, 2);
    for (int size = 1; size <= 2; ++size) {
      Theory t;
      t.sentences.push_back(f);
      CHECK(fmw::brute_satisfiable_at(f, sig, size) ==
            fmw::find_model(t, size).has_value());
    }
  }
}

TEST_CASE("generators are deterministic per seed") {
  const std::vector<std::string> vars = {"P", "Q", "R"};
  std::mt19937 a(5u);
  std::mt19937 b(5u);
  for (int i = 0; i < 10; ++i) {
    CHECK(fmw::random_prop_formula(a, vars, 3) ==
          fmw::random_prop_formula(b, vars, 3));
  }
  Signature sig;
  sig.symbols = {{"P", 1}, {"E", 2}};
  sig.equality_enabled = true;
  std::mt19937 c(9u);
  std::mt19937 d(9u);
  bool all_same_across_seeds = true;
  std::mt19937 e(10u);
  for (int i = 0; i < 10; ++i) {
    const Formula fc = fmw::random_fo_sentence(c, sig, 3);
    CHECK(fc == fmw::random_fo_sentence(d, sig, 3));
    all_same_across_seeds =
        all_same_across_seeds && (fc == fmw::random_fo_sentence(e, sig, 3));
  }
  CHECK_FALSE(all_same_across_seeds);
}

TEST_CASE("pure-equality generator stays inside its fragment") {
  std::mt19937 rng(77u);
  for (int i = 0; i < 30; ++i) {
    const Formula f = fmw::random_pure_equality_sentence(rng, 3);
    CHECK(fmw::vocabulary(f).symbols.empty());
    CHECK(fmw::free_vars(f).empty());
    const int rank = fmw::quantifier_rank(f);
    CHECK(rank >= 1);
    CHECK(rank <= 3);
  }
}

TEST_CASE("propositional agreement suite runs clean") {
  const fmw::SuiteStats st = fmw::prop_agreement_suite(150, 42u);
  CHECK(st.instances == 150);
  CHECK(st.violations == 0);
  CHECK(st.first_failure.empty());
  CHECK(st.checked.at("agreement") == 150);
}

TEST_CASE("propositional law suite runs clean and exercises every law") {
  const fmw::SuiteStats st = fmw::prop_property_suite(200, 43u);
  CHECK(st.instances == 200);
  CHECK(st.violations == 0);
  for (const char* law :
       {"right-weakening", "cumulative-transitivity", "left-strengthening",
        "left-equivalence", "monotony", "disjunction-in-premisses",
        "exhaustion"}) {
    INFO("law: ", law);
    CHECK(st.checked.count(law) == 1);
    CHECK(st.checked.at(law) > 0);
  }
}

TEST_CASE("first-order law suite runs clean at a small sample") {
  const fmw::SuiteStats st = fmw::fo_property_suite(6, 44u);
  CHECK(st.instances == 6);
  CHECK(st.violations == 0);
  CHECK(st.first_failure.empty());
}

TEST_CASE("grid suite runs clean at a small sample") {
  const fmw::SuiteStats st = fmw::lattice_suite(4, 45u);
  CHECK(st.instances == 4);
  CHECK(st.violations == 0);
  CHECK(st.checked.at("verdict-base-relation-invariant") > 0);
  CHECK(st.checked.at("verdict-expansion-monotone") > 0);
}

TEST_CASE("reproduction registry integrity") {
  const auto& entries = fmw::repro_registry();
  CHECK(entries.size() == 10);
  std::set<std::string> names;
  for (const auto& e : entries) {
    CHECK(!e.name.empty());
    CHECK(!e.claim.empty());
    CHECK(e.run != nullptr);
    names.insert(e.name);
  }
  CHECK(names.size() == entries.size());

  CHECK_THROWS_AS(fmw::run_repro("no-such-entry"), fmw::Error);
  try {
    fmw::run_repro("no-such-entry");
  } catch (const fmw::Error& e) {
    CHECK(e.code() == fmw::ErrorCode::UnknownRepro);
  }
}

TEST_CASE("a fast reproduction entry passes end to end") {
  const fmw::Report r = fmw::run_repro("spectrum-dedekind");
  CHECK(r.passed());
  CHECK(r.body.at("schema") == 1);
  CHECK(r.body.contains("checks"));

  const std::string text = r.human_text();
  CHECK(text.find("pass") != std::string::npos);
  const std::string json = r.json_text();
  CHECK(json.find("\"schema\":1") != std::string::npos);
}

TEST_CASE("reports attach the caveat exactly when inconclusive") {
  fmw::Report open_verdict = fmw::make_report("demo");
  fmw::set_verdict(open_verdict, "anything", false);
  CHECK(open_verdict.body.contains("caveat"));
  const std::string caveat = open_verdict.body.at("caveat").get<std::string>();
  CHECK(caveat.find("infinite") != std::string::npos);

  fmw::Report closed = fmw::make_report("demo");
  fmw::set_verdict(closed, "anything", true);
  CHECK_FALSE(closed.body.contains("caveat"));
}
