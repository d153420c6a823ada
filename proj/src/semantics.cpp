#include "fmw/semantics.hpp"

#include <algorithm>

#include "ground_solver.hpp"

namespace fmw {

namespace {

int lookup(const std::vector<std::pair<std::string, int>>& env, const std::string& name) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == name) return it->second;
  }
  throw Error(ErrorCode::UnboundVariable, "unbound variable " + name);
}

bool eval_rec(const FiniteStructure& a, const Formula& f,
              std::vector<std::pair<std::string, int>>& env) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Atom: {
      std::vector<int> tuple;
      tuple.reserve(f.terms().size());
      for (const auto& v : f.terms()) tuple.push_back(lookup(env, v));
      return a.holds(f.relation_name(), tuple);
    }
    case Formula::Kind::Equals:
      return lookup(env, f.terms()[0]) == lookup(env, f.terms()[1]);
    case Formula::Kind::Not:
      return !eval_rec(a, f.child(0), env);
    case Formula::Kind::And:
      return eval_rec(a, f.child(0), env) && eval_rec(a, f.child(1), env);
    case Formula::Kind::Or:
      return eval_rec(a, f.child(0), env) || eval_rec(a, f.child(1), env);
    case Formula::Kind::Implies:
      return !eval_rec(a, f.child(0), env) || eval_rec(a, f.child(1), env);
    case Formula::Kind::Iff:
      return eval_rec(a, f.child(0), env) == eval_rec(a, f.child(1), env);
    case Formula::Kind::ForAll: {
      env.emplace_back(f.bound_var(), 0);
      for (int e = 0; e < a.domain_size; ++e) {
        env.back().second = e;
        if (!eval_rec(a, f.child(0), env)) {
          env.pop_back();
          return false;
        }
      }
      env.pop_back();
      return true;
    }
    case Formula::Kind::Exists: {
      env.emplace_back(f.bound_var(), 0);
      for (int e = 0; e < a.domain_size; ++e) {
        env.back().second = e;
        if (eval_rec(a, f.child(0), env)) {
          env.pop_back();
          return true;
        }
      }
      env.pop_back();
      return false;
    }
  }
  return false;
}

}  // namespace

bool eval(const FiniteStructure& a, const Formula& f, const Assignment& assignment) {
  Signature voc = vocabulary(f);
  for (const auto& [name, ar] : voc.symbols) {
    if (!a.signature.has(name) || a.signature.arity(name) != ar) {
      throw Error(ErrorCode::VocabularyNotContained,
                  "formula symbol " + name + " is not interpreted by the structure");
    }
  }
  std::vector<std::pair<std::string, int>> env;
  for (const auto& [name, value] : assignment) {
    if (value < 0 || value >= a.domain_size) {
      throw Error(ErrorCode::TupleOutOfRange,
                  "assignment sends " + name + " outside the domain");
    }
    env.emplace_back(name, value);
  }
  return eval_rec(a, f, env);
}

std::optional<FiniteStructure> find_model(const Theory& gamma, int size,
                                          const SearchLimits& limits) {
  if (size < 1) {
    throw Error(ErrorCode::DomainMismatch, "model size must be at least 1");
  }
  internal::GroundModelSearch search(gamma.vocabulary(), size, gamma.sentences, false);
  long long budget = limits.node_budget;
  auto model = search.next(budget);
  if (limits.spent) *limits.spent += limits.node_budget - budget;
  if (model) model->validate(true);
  return model;
}

std::vector<FiniteStructure> enumerate_models(const Theory& gamma, int size,
                                              const SearchLimits& limits) {
  if (size < 1) {
    throw Error(ErrorCode::DomainMismatch, "model size must be at least 1");
  }
  internal::GroundModelSearch search(gamma.vocabulary(), size, gamma.sentences, true);
  long long budget = limits.node_budget;
  std::vector<FiniteStructure> reps;
  std::vector<int> perm_base(size);
  for (int i = 0; i < size; ++i) perm_base[i] = i;
  while (auto model = search.next(budget)) {
    bool minimal = true;
    if (size <= 6) {
      // Canonical rejection: keep a model only if no relabeling is smaller.
      std::vector<int> perm = perm_base;
      while (std::next_permutation(perm.begin(), perm.end())) {
        FiniteStructure relabeled;
        relabeled.signature = model->signature;
        relabeled.domain_size = size;
        for (const auto& [name, table] : model->relations) {
          auto& out = relabeled.relations[name];
          for (const auto& t : table) {
            std::vector<int> m(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) m[i] = perm[t[i]];
            out.insert(std::move(m));
          }
        }
        if (canonical_less(relabeled, *model)) {
          minimal = false;
          break;
        }
      }
    } else {
      for (const auto& kept : reps) {
        if (find_isomorphism(kept, *model)) {
          minimal = false;
          break;
        }
      }
    }
    if (minimal) reps.push_back(std::move(*model));
  }
  if (limits.spent) *limits.spent += limits.node_budget - budget;
  // Branch order already yields ascending models; keep the contract explicit.
  std::sort(reps.begin(), reps.end(),
            [](const FiniteStructure& a, const FiniteStructure& b) {
              return canonical_less(a, b);
            });
  return reps;
}

std::set<int> spectrum(const Formula& f, int max_size, const SearchLimits& limits) {
  if (!free_vars(f).empty()) {
    throw Error(ErrorCode::FreeVariableInSentence,
                "spectrum is defined for sentences only");
  }
  Theory t;
  t.sentences.push_back(f);
  std::set<int> out;
  for (int n = 1; n <= max_size; ++n) {
    if (find_model(t, n, limits)) out.insert(n);
  }
  return out;
}

BoundedEntailment entails_bounded(const Theory& gamma, const Formula& phi, int max_size,
                                  const SearchLimits& limits) {
  if (!free_vars(phi).empty()) {
    throw Error(ErrorCode::FreeVariableInSentence,
                "bounded entailment is defined for sentences only");
  }
  Signature joint = joint_vocabulary(gamma, phi);
  std::vector<Formula> goal = gamma.sentences;
  goal.push_back(Formula::negation(phi));
  long long budget = limits.node_budget;
  for (int n = 1; n <= max_size; ++n) {
    internal::GroundModelSearch search(joint, n, goal, false);
    long long before = budget;
    auto counter = search.next(budget);
    if (limits.spent) *limits.spent += before - budget;
    if (!counter) continue;
    counter->validate(true);
    // The searcher is not trusted: re-check the verdict by direct evaluation.
    for (const auto& g : gamma.sentences) {
      if (!eval(*counter, g)) {
        throw std::logic_error("countermodel fails a premise on re-evaluation");
      }
    }
    if (eval(*counter, phi)) {
      throw std::logic_error("countermodel satisfies the conclusion on re-evaluation");
    }
    return Refuted{std::move(*counter)};
  }
  return EntailedUpToBound{max_size};
}

bool is_entailed(const BoundedEntailment& v) {
  return std::holds_alternative<EntailedUpToBound>(v);
}

std::optional<FiniteStructure> pure_equality_finite_model(const Formula& f) {
  if (!free_vars(f).empty()) {
    throw Error(ErrorCode::FreeVariableInSentence,
                "pure-equality satisfiability is defined for sentences only");
  }
  Signature voc = vocabulary(f);
  if (!voc.symbols.empty()) {
    throw Error(ErrorCode::NotPureEquality,
                "sentence uses relation symbol " + voc.symbols.begin()->first);
  }
  int limit = std::max(1, quantifier_rank(f));
  for (int n = 1; n <= limit; ++n) {
    Signature sig;
    sig.equality_enabled = true;
    FiniteStructure bare = empty_structure(sig, n);
    if (eval(bare, f)) return bare;
  }
  return std::nullopt;
}

}  // namespace fmw
