#include "fmw/friendliness.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "ground_solver.hpp"

namespace fmw {

namespace {

bool next_tuple(std::vector<int>& t, int m) {
  for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) {
    if (++t[i] < m) return true;
    t[i] = 0;
  }
  return false;
}

void check_language(const Theory& gamma, const Formula& phi, const FriendlinessConfig& cfg) {
  if (cfg.equality) return;
  for (const auto& s : gamma.sentences) {
    if (uses_equality(s)) {
      throw Error(ErrorCode::EqualityPresent,
                  "theory uses equality but the configuration says the language has none");
    }
  }
  if (uses_equality(phi)) {
    throw Error(ErrorCode::EqualityPresent,
                "conclusion uses equality but the configuration says the language has none");
  }
}

}  // namespace

FriendlinessConfig FriendlinessConfig::validated() const {
  FriendlinessConfig c = *this;
  if (c.base_bound < 1) {
    throw Error(ErrorCode::InvalidConfig, "base bound must be at least 1");
  }
  if ((c.base == BaseRelation::R3 || c.base == BaseRelation::R4) && !c.equality) {
    throw Error(ErrorCode::EqualityFreeUnsupported,
                std::string(to_string(c.base)) +
                    " needs equality; over finite structures it is checked as "
                    "isomorphism, which equality-free languages cannot pin down");
  }
  if (c.expansion == ExpansionRelation::S1) {
    if (c.ext_bound != 0 && c.ext_bound != c.base_bound) {
      throw Error(ErrorCode::InvalidConfig,
                  "s1 keeps the domain fixed; the extension bound cannot differ "
                  "from the base bound");
    }
    c.ext_bound = c.base_bound;
  } else {
    if (c.ext_bound == 0) c.ext_bound = c.base_bound;
    if (c.ext_bound < c.base_bound) {
      throw Error(ErrorCode::InvalidConfig,
                  "extension bound smaller than base bound leaves the largest "
                  "bases with nothing to expand into");
    }
  }
  return c;
}

std::optional<Witness> find_witness(const FiniteStructure& base, const Theory& gamma,
                                    const Formula& phi, const FriendlinessConfig& cfg_in,
                                    const SearchLimits& limits) {
  FriendlinessConfig cfg = cfg_in.validated();
  check_language(gamma, phi, cfg);

  Signature gamma_voc = gamma.vocabulary();
  gamma_voc.equality_enabled = cfg.equality;
  Signature joint = joint_vocabulary(gamma, phi);
  joint.equality_enabled = cfg.equality;

  for (const auto& s : gamma.sentences) {
    if (!eval(base, s)) {
      throw Error(ErrorCode::InvalidConfig,
                  "the supposed base model does not satisfy the theory");
    }
  }
  FiniteStructure a_prime = reduct(base, gamma_voc);

  int n = base.domain_size;
  int hi = cfg.expansion == ExpansionRelation::S1 ? n : std::max(n, cfg.ext_bound);

  std::vector<Formula> targets = gamma.sentences;
  targets.push_back(phi);

  long long budget = limits.node_budget;
  auto record_spent = [&](long long before) {
    if (limits.spent) *limits.spent += before - budget;
  };
  for (int m = n; m <= hi; ++m) {
    internal::GroundModelSearch search(joint, m, targets, /*canonical_order=*/true);
    for (const auto& [name, arity] : gamma_voc.symbols) {
      std::vector<int> t(arity, 0);
      do {
        bool prefix = std::all_of(t.begin(), t.end(), [n](int e) { return e < n; });
        if (prefix) {
          search.freeze(name, t, a_prime.holds(name, t));
        } else if (cfg.expansion == ExpansionRelation::S2) {
          // The old symbol's tuple set must not grow with the domain.
          search.freeze(name, t, false);
        }
      } while (next_tuple(t, m));
    }
    long long before = budget;
    std::optional<FiniteStructure> model = search.next(budget);
    record_spent(before);
    if (!model) continue;

    Witness w{base, a_prime, std::move(*model)};
    w.a_dprime.validate(true);
    for (const auto& s : gamma.sentences) {
      if (!eval(w.a_dprime, s)) {
        throw std::logic_error("witness search produced a structure eval rejects (theory)");
      }
    }
    if (!eval(w.a_dprime, phi)) {
      throw std::logic_error("witness search produced a structure eval rejects (conclusion)");
    }
    if (!check_S(cfg.expansion, w.a_prime, w.a_dprime)) {
      throw std::logic_error("witness search violated the expansion condition");
    }
    return w;
  }
  return std::nullopt;
}

FriendlinessOutcome bounded_friendly(const Theory& gamma, const Formula& phi,
                                     const FriendlinessConfig& cfg_in,
                                     const SearchLimits& limits) {
  FriendlinessConfig cfg = cfg_in.validated();
  check_language(gamma, phi, cfg);

  FriendlinessOutcome out;
  out.config = cfg;
  for (int n = 1; n <= cfg.base_bound; ++n) {
    for (const FiniteStructure& base : enumerate_models(gamma, n, limits)) {
      std::optional<Witness> w = find_witness(base, gamma, phi, cfg, limits);
      if (!w) {
        out.friendly = false;
        out.conclusive = cfg.expansion == ExpansionRelation::S1 && cfg.equality;
        out.refuting_base = base;
        out.witnesses.clear();
        return out;
      }
      out.witnesses.push_back(std::move(*w));
    }
  }
  out.friendly = true;
  out.conclusive = false;
  return out;
}

bool witness_valid(const Witness& w, const Theory& gamma, const Formula& phi,
                   BaseRelation r, ExpansionRelation s) {
  FiniteStructure base_view = reduct(w.base, w.a_prime.signature);
  if (r == BaseRelation::R1) {
    if (!(base_view == w.a_prime)) return false;
  } else {
    if (!find_isomorphism(base_view, w.a_prime)) return false;
  }
  for (const auto& g : gamma.sentences) {
    if (!eval(w.a_prime, g)) return false;
  }
  if (!check_S(s, w.a_prime, w.a_dprime)) return false;
  for (const auto& g : gamma.sentences) {
    if (!eval(w.a_dprime, g)) return false;
  }
  return eval(w.a_dprime, phi);
}

// --- definability ---------------------------------------------------------

namespace {

Formula rename_relation(const Formula& f, const std::string& from, const std::string& to) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Equals:
      return f;
    case Formula::Kind::Atom:
      return f.relation_name() == from ? Formula::atom(to, f.terms()) : f;
    case Formula::Kind::Not:
      return Formula::negation(rename_relation(f.child(0), from, to));
    case Formula::Kind::And:
      return Formula::conjunction(rename_relation(f.child(0), from, to),
                                  rename_relation(f.child(1), from, to));
    case Formula::Kind::Or:
      return Formula::disjunction(rename_relation(f.child(0), from, to),
                                  rename_relation(f.child(1), from, to));
    case Formula::Kind::Implies:
      return Formula::implication(rename_relation(f.child(0), from, to),
                                  rename_relation(f.child(1), from, to));
    case Formula::Kind::Iff:
      return Formula::iff(rename_relation(f.child(0), from, to),
                          rename_relation(f.child(1), from, to));
    case Formula::Kind::ForAll:
      return Formula::forall(f.bound_var(), rename_relation(f.child(0), from, to));
    case Formula::Kind::Exists:
      return Formula::exists(f.bound_var(), rename_relation(f.child(0), from, to));
  }
  throw std::logic_error("unhandled formula kind");
}

// The predicate does not have to occur in the theory (any structure interprets
// it then), but if it does the arities must agree.
Signature with_predicate(Signature voc, const std::string& predicate, int arity) {
  if (arity < 0) throw Error(ErrorCode::InvalidConfig, "arity must be >= 0");
  if (voc.has(predicate)) {
    if (voc.arity(predicate) != arity) {
      throw Error(ErrorCode::ArityClash, predicate + " has arity " +
                                             std::to_string(voc.arity(predicate)) +
                                             " in the theory, not " + std::to_string(arity));
    }
  } else {
    voc.symbols.emplace(predicate, arity);
  }
  return voc;
}

std::vector<std::string> arg_vars(int arity) {
  std::vector<std::string> xs;
  for (int i = 1; i <= arity; ++i) xs.push_back("x" + std::to_string(i));
  return xs;
}

}  // namespace

ImplicitCheck implicitly_defines(const Theory& gamma, const std::string& predicate,
                                 int arity, int bound, const SearchLimits& limits) {
  Signature voc = with_predicate(gamma.vocabulary(), predicate, arity);
  if (bound < 1) throw Error(ErrorCode::InvalidConfig, "bound must be at least 1");

  std::string doppel = predicate + "_IMG";
  while (voc.has(doppel)) doppel += "_I";

  Theory doubled;
  doubled.functional_hints = gamma.functional_hints;
  for (const auto& s : gamma.sentences) {
    doubled.sentences.push_back(s);
    doubled.sentences.push_back(rename_relation(s, predicate, doppel));
  }
  std::vector<std::string> xs = arg_vars(arity);
  Formula disagree =
      Formula::negation(Formula::iff(Formula::atom(predicate, xs), Formula::atom(doppel, xs)));
  for (int i = arity - 1; i >= 0; --i) disagree = Formula::exists(xs[i], disagree);
  doubled.sentences.push_back(disagree);

  for (int n = 1; n <= bound; ++n) {
    std::optional<FiniteStructure> m = find_model(doubled, n, limits);
    if (!m) continue;
    FiniteStructure left = reduct(*m, voc);
    FiniteStructure right = left;
    right.relations[predicate] = m->tuples(doppel);
    if (left.relations.at(predicate) == right.relations.at(predicate)) {
      throw std::logic_error("disagreement model does not disagree");
    }
    for (const auto& s : gamma.sentences) {
      if (!eval(left, s) || !eval(right, s)) {
        throw std::logic_error("Padoa counterexample fails the theory under eval");
      }
    }
    return ImplicitCheck{false, std::make_pair(std::move(left), std::move(right))};
  }
  return ImplicitCheck{true, std::nullopt};
}

namespace {

// Truth table of f on every (structure, full-assignment) pair of the panel.
std::vector<std::uint64_t> fingerprint(const Formula& f,
                                       const std::vector<FiniteStructure>& panel,
                                       const std::vector<std::string>& vars) {
  std::vector<std::uint64_t> bits;
  std::uint64_t word = 0;
  int fill = 0;
  auto push = [&](bool b) {
    if (b) word |= 1ULL << fill;
    if (++fill == 64) {
      bits.push_back(word);
      word = 0;
      fill = 0;
    }
  };
  for (const auto& a : panel) {
    std::vector<int> tup(vars.size(), 0);
    do {
      Assignment env;
      for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = tup[i];
      push(eval(a, f, env));
    } while (next_tuple(tup, a.domain_size));
  }
  if (fill != 0) bits.push_back(word);
  return bits;
}

std::vector<FiniteStructure> build_panel(const Signature& reduced) {
  std::vector<FiniteStructure> panel;
  // Exhaustive for the small sizes when that stays tiny, deterministic random
  // sample otherwise.
  Signature bare;  // no symbols
  bare.equality_enabled = reduced.equality_enabled;
  try {
    std::uint64_t total = 0;
    std::vector<ExpansionRange> ranges;
    for (int n = 1; n <= 2; ++n) {
      ranges.emplace_back(empty_structure(bare, n), reduced);
      total += ranges.back().count();
    }
    if (total <= 320) {
      for (const auto& r : ranges) {
        for (std::uint64_t i = 0; i < r.count(); ++i) panel.push_back(r.at(i));
      }
      return panel;
    }
  } catch (const Error&) {
    // too many expansions to even count; fall through to sampling
  }
  panel.clear();
  std::mt19937_64 rng(0x9E3779B97F4A7C15ULL);
  for (int n = 1; n <= 3; ++n) {
    try {
      ExpansionRange r(empty_structure(bare, n), reduced);
      for (int k = 0; k < 16; ++k) {
        panel.push_back(r.at(rng() % r.count()));
      }
    } catch (const Error&) {
      break;  // table space too large to index at this size
    }
  }
  return panel;
}

}  // namespace

std::optional<Formula> find_explicit_definition(const Theory& gamma,
                                                const std::string& predicate, int arity,
                                                int max_depth, int entail_bound,
                                                const SearchLimits& limits) {
  Signature voc = with_predicate(gamma.vocabulary(), predicate, arity);
  if (max_depth < 0 || entail_bound < 1) {
    throw Error(ErrorCode::InvalidConfig, "depth must be >= 0 and the bound >= 1");
  }

  Signature reduced = voc;
  reduced.symbols.erase(predicate);
  for (auto it = reduced.functional_hints.begin(); it != reduced.functional_hints.end();) {
    it = it->first == predicate ? reduced.functional_hints.erase(it) : std::next(it);
  }

  std::vector<std::string> xs = arg_vars(arity);
  std::vector<std::string> ys;
  for (int i = 1; i <= max_depth; ++i) ys.push_back("y" + std::to_string(i));
  std::vector<std::string> all_vars = xs;
  all_vars.insert(all_vars.end(), ys.begin(), ys.end());
  std::set<std::string> xset(xs.begin(), xs.end());

  std::vector<FiniteStructure> panel = build_panel(reduced);

  auto certify = [&](const Formula& psi) {
    Formula target = Formula::iff(psi, Formula::atom(predicate, xs));
    for (int i = arity - 1; i >= 0; --i) target = Formula::forall(xs[i], target);
    return is_entailed(entails_bounded(gamma, target, entail_bound, limits));
  };

  constexpr std::size_t kLevelCap = 2500;
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<std::vector<Formula>> levels;

  auto admit = [&](std::vector<Formula>& level, const Formula& f) {
    if (level.size() >= kLevelCap) return;
    if (seen.insert(fingerprint(f, panel, all_vars)).second) level.push_back(f);
  };

  for (int depth = 0; depth <= max_depth; ++depth) {
    std::vector<Formula> level;
    if (depth == 0) {
      admit(level, Formula::verum());
      admit(level, Formula::falsum());
      for (const auto& [name, ar] : reduced.symbols) {
        if (ar > 0 && all_vars.empty()) continue;
        std::vector<int> pick(ar, 0);
        do {
          std::vector<std::string> args;
          for (int p : pick) args.push_back(all_vars[p]);
          admit(level, Formula::atom(name, args));
        } while (next_tuple(pick, static_cast<int>(all_vars.size())));
      }
      if (reduced.equality_enabled) {
        for (std::size_t i = 0; i < all_vars.size(); ++i) {
          for (std::size_t j = i + 1; j < all_vars.size(); ++j) {
            admit(level, Formula::equals(all_vars[i], all_vars[j]));
          }
        }
      }
    } else {
      const std::vector<Formula>& fresh = levels[depth - 1];
      for (const auto& f : fresh) admit(level, Formula::negation(f));
      for (const auto& f : fresh) {
        for (const auto& y : ys) {
          admit(level, Formula::exists(y, f));
          admit(level, Formula::forall(y, f));
        }
      }
      for (const auto& f : fresh) {
        for (int lo = 0; lo < depth; ++lo) {
          for (const auto& g : levels[lo]) {
            admit(level, Formula::conjunction(f, g));
            admit(level, Formula::disjunction(f, g));
            if (level.size() >= kLevelCap) break;
          }
          if (level.size() >= kLevelCap) break;
        }
        if (level.size() >= kLevelCap) break;
      }
    }
    for (const auto& f : level) {
      std::set<std::string> fv = free_vars(f);
      if (std::includes(xset.begin(), xset.end(), fv.begin(), fv.end()) && certify(f)) {
        return f;
      }
    }
    levels.push_back(std::move(level));
  }
  return std::nullopt;
}

}  // namespace fmw
