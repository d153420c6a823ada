// Reference implementations the tests check the library against. Everything
// here is written the slow, obvious way against the public formula AST, and
// shares no code with the engines under test: evaluation is a plain
// recursion, model enumeration walks every relation table bit by bit,
// isomorphism tries all permutations.
#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "fmw/logic.hpp"
#include "fmw/structure.hpp"

namespace oracle {

// --- evaluation -----------------------------------------------------------

inline bool eval_ref(const fmw::FiniteStructure& a, const fmw::Formula& f,
                     std::map<std::string, int>& env) {
  using K = fmw::Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Atom: {
      std::vector<int> tuple;
      tuple.reserve(f.terms().size());
      for (const auto& t : f.terms()) {
        tuple.push_back(env.at(t));
      }
      auto it = a.relations.find(f.relation_name());
      return it != a.relations.end() && it->second.count(tuple) != 0;
    }
    case K::Equals:
      return env.at(f.terms()[0]) == env.at(f.terms()[1]);
    case K::Not:
      return !eval_ref(a, f.child(0), env);
    case K::And:
      return eval_ref(a, f.child(0), env) && eval_ref(a, f.child(1), env);
    case K::Or:
      return eval_ref(a, f.child(0), env) || eval_ref(a, f.child(1), env);
    case K::Implies:
      return !eval_ref(a, f.child(0), env) || eval_ref(a, f.child(1), env);
    case K::Iff:
      return eval_ref(a, f.child(0), env) == eval_ref(a, f.child(1), env);
    case K::ForAll:
    case K::Exists: {
      const bool want_all = f.kind() == K::ForAll;
      const std::string& var = f.bound_var();
      const auto old = env.find(var);
      const std::optional<int> saved =
          old == env.end() ? std::nullopt : std::optional<int>(old->second);
      bool result = want_all;
      for (int d = 0; d < a.domain_size; ++d) {
        env[var] = d;
        const bool inner = eval_ref(a, f.child(0), env);
        if (want_all && !inner) {
          result = false;
          break;
        }
        if (!want_all && inner) {
          result = true;
          break;
        }
      }
      if (saved.has_value()) {
        env[var] = *saved;
      } else {
        env.erase(var);
      }
      return result;
    }
  }
  return false;
}

inline bool eval_ref(const fmw::FiniteStructure& a, const fmw::Formula& f) {
  std::map<std::string, int> env;
  return eval_ref(a, f, env);
}

// --- exhaustive structure enumeration -------------------------------------

inline std::vector<std::vector<int>> all_tuples(int size, int arity) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(arity, 0);
  while (true) {
    out.push_back(t);
    int i = arity - 1;
    while (i >= 0 && ++t[i] == size) {
      t[i] = 0;
      --i;
    }
    if (i < 0) {
      break;
    }
  }
  return out;
}

// Every structure over sig with the given domain size. Functional hints are
// deliberately ignored: this is the unpruned space.
inline std::vector<fmw::FiniteStructure> all_structures(const fmw::Signature& sig,
                                                        int size) {
  std::uint64_t total = 1;
  for (const auto& [name, arity] : sig.symbols) {
    std::uint64_t cells = 1;
    for (int i = 0; i < arity; ++i) {
      cells *= static_cast<std::uint64_t>(size);
    }
    assert(cells <= 24);
    total <<= cells;
    assert(total <= (1ull << 22));
  }
  (void)total;

  std::vector<fmw::FiniteStructure> out;
  fmw::FiniteStructure base;
  base.signature = sig;
  base.domain_size = size;
  for (const auto& [name, arity] : sig.symbols) {
    base.relations[name] = {};
  }
  out.push_back(base);
  for (const auto& [name, arity] : sig.symbols) {
    const auto tuples = all_tuples(size, arity);
    std::vector<fmw::FiniteStructure> next;
    for (const auto& s : out) {
      for (std::uint64_t mask = 0; mask < (1ull << tuples.size()); ++mask) {
        fmw::FiniteStructure t = s;
        for (std::size_t i = 0; i < tuples.size(); ++i) {
          if (mask & (1ull << i)) {
            t.relations[name].insert(tuples[i]);
          }
        }
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline std::vector<fmw::FiniteStructure> models_ref(const fmw::Theory& gamma,
                                                    const fmw::Signature& sig,
                                                    int size) {
  std::vector<fmw::FiniteStructure> out;
  for (const auto& s : all_structures(sig, size)) {
    bool ok = true;
    for (const auto& f : gamma.sentences) {
      if (!eval_ref(s, f)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.push_back(s);
    }
  }
  return out;
}

// --- isomorphism ----------------------------------------------------------

inline bool is_isomorphism(const fmw::FiniteStructure& a, const fmw::FiniteStructure& b,
                           const std::vector<int>& perm) {
  for (const auto& [name, table] : a.relations) {
    std::set<std::vector<int>> image;
    for (const auto& t : table) {
      std::vector<int> m;
      m.reserve(t.size());
      for (int x : t) {
        m.push_back(perm[x]);
      }
      image.insert(std::move(m));
    }
    if (image != b.tuples(name)) {
      return false;
    }
  }
  return true;
}

inline bool isomorphic_ref(const fmw::FiniteStructure& a, const fmw::FiniteStructure& b) {
  if (a.domain_size != b.domain_size || a.signature.symbols != b.signature.symbols) {
    return false;
  }
  std::vector<int> perm(a.domain_size);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (is_isomorphism(a, b, perm)) {
      return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Partition into isomorphism classes; returns the class count.
inline int iso_class_count_ref(const std::vector<fmw::FiniteStructure>& models) {
  std::vector<fmw::FiniteStructure> reps;
  for (const auto& m : models) {
    bool fresh = true;
    for (const auto& r : reps) {
      if (isomorphic_ref(m, r)) {
        fresh = false;
        break;
      }
    }
    if (fresh) {
      reps.push_back(m);
    }
  }
  return static_cast<int>(reps.size());
}

// --- propositional --------------------------------------------------------

inline void prop_vars(const fmw::Formula& f, std::set<std::string>& out) {
  using K = fmw::Formula::Kind;
  if (f.kind() == K::Atom) {
    out.insert(f.relation_name());
    return;
  }
  for (std::size_t i = 0; i < f.child_count(); ++i) {
    prop_vars(f.child(i), out);
  }
}

inline bool eval_prop(const fmw::Formula& f, const std::map<std::string, bool>& v) {
  using K = fmw::Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Atom:
      return v.at(f.relation_name());
    case K::Not:
      return !eval_prop(f.child(0), v);
    case K::And:
      return eval_prop(f.child(0), v) && eval_prop(f.child(1), v);
    case K::Or:
      return eval_prop(f.child(0), v) || eval_prop(f.child(1), v);
    case K::Implies:
      return !eval_prop(f.child(0), v) || eval_prop(f.child(1), v);
    case K::Iff:
      return eval_prop(f.child(0), v) == eval_prop(f.child(1), v);
    default:
      assert(false && "not propositional");
      return false;
  }
}

// Textbook definition, evaluated by brute force: every valuation of gamma's
// vocabulary satisfying gamma extends, on phi's remaining variables, to one
// satisfying gamma and phi.
inline bool prop_friendly_ref(const fmw::Theory& gamma, const fmw::Formula& phi) {
  std::set<std::string> gv;
  for (const auto& f : gamma.sentences) {
    prop_vars(f, gv);
  }
  std::set<std::string> extra_set;
  prop_vars(phi, extra_set);
  std::vector<std::string> gvars(gv.begin(), gv.end());
  std::vector<std::string> extra;
  for (const auto& v : extra_set) {
    if (gv.count(v) == 0) {
      extra.push_back(v);
    }
  }
  assert(gvars.size() + extra.size() <= 20);

  const auto sat_gamma = [&](const std::map<std::string, bool>& v) {
    for (const auto& f : gamma.sentences) {
      if (!eval_prop(f, v)) {
        return false;
      }
    }
    return true;
  };

  for (std::uint64_t gm = 0; gm < (1ull << gvars.size()); ++gm) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < gvars.size(); ++i) {
      v[gvars[i]] = (gm >> i) & 1;
    }
    if (!sat_gamma(v)) {
      continue;
    }
    bool extendable = false;
    for (std::uint64_t em = 0; em < (1ull << extra.size()); ++em) {
      std::map<std::string, bool> w = v;
      for (std::size_t i = 0; i < extra.size(); ++i) {
        w[extra[i]] = (em >> i) & 1;
      }
      if (sat_gamma(w) && eval_prop(phi, w)) {
        extendable = true;
        break;
      }
    }
    if (!extendable) {
      return false;
    }
  }
  return true;
}

// --- graphs ---------------------------------------------------------------

// 2-colorability of the symmetrized edge relation, by breadth-first layering.
inline bool bipartite_ref(const fmw::FiniteStructure& g,
                          const std::string& edge = "E") {
  std::vector<std::vector<int>> adj(g.domain_size);
  auto it = g.relations.find(edge);
  if (it != g.relations.end()) {
    for (const auto& t : it->second) {
      if (t.size() == 2) {
        adj[t[0]].push_back(t[1]);
        adj[t[1]].push_back(t[0]);
        if (t[0] == t[1]) {
          return false;  // a loop is an odd closed walk
        }
      }
    }
  }
  std::vector<int> color(g.domain_size, -1);
  for (int s = 0; s < g.domain_size; ++s) {
    if (color[s] != -1) {
      continue;
    }
    color[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int w : adj[u]) {
        if (color[w] == -1) {
          color[w] = 1 - color[u];
          q.push(w);
        } else if (color[w] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

// --- sentence pools for the game tests ------------------------------------

// A spread of pure-equality sentences of small quantifier rank. Sound oracle
// direction: round-bounded equivalence must imply agreement on every pool
// member of rank within the bound.
inline std::vector<fmw::Formula> equality_pool() {
  using F = fmw::Formula;
  std::vector<F> pool;
  // rank 1
  pool.push_back(F::exists("x", F::equals("x", "x")));
  pool.push_back(F::forall("x", F::equals("x", "x")));
  pool.push_back(F::exists("x", F::negation(F::equals("x", "x"))));
  // rank 2
  pool.push_back(F::exists(
      "x", F::exists("y", F::negation(F::equals("x", "y")))));
  pool.push_back(F::forall("x", F::forall("y", F::equals("x", "y"))));
  pool.push_back(F::forall(
      "x", F::exists("y", F::negation(F::equals("x", "y")))));
  pool.push_back(F::exists("x", F::forall("y", F::equals("x", "y"))));
  // rank 3
  pool.push_back(F::exists(
      "x", F::exists("y", F::exists("z",
          F::conjunction(F::negation(F::equals("x", "y")),
                         F::conjunction(F::negation(F::equals("x", "z")),
                                        F::negation(F::equals("y", "z"))))))));
  return pool;
}

// Graph sentences of small rank over a single binary symbol E.
inline std::vector<fmw::Formula> graph_pool() {
  using F = fmw::Formula;
  std::vector<F> pool;
  pool.push_back(F::exists("x", F::atom("E", {"x", "x"})));
  pool.push_back(F::exists("x", F::exists("y", F::atom("E", {"x", "y"}))));
  pool.push_back(F::forall("x", F::exists("y", F::atom("E", {"x", "y"}))));
  pool.push_back(F::exists("x", F::forall("y", F::negation(F::atom("E", {"x", "y"})))));
  pool.push_back(F::forall(
      "x", F::forall("y", F::implication(F::atom("E", {"x", "y"}),
                                         F::atom("E", {"y", "x"})))));
  pool.push_back(F::exists(
      "x", F::exists("y", F::exists("z",
          F::conjunction(F::atom("E", {"x", "y"}),
                         F::conjunction(F::atom("E", {"y", "z"}),
                                        F::atom("E", {"z", "x"})))))));
  return pool;
}

}  // namespace oracle
