#include "fmw/logic.hpp"

#include <algorithm>
#include <functional>

namespace fmw {

bool Signature::contained_in(const Signature& other) const {
  for (const auto& [name, ar] : symbols) {
    auto it = other.symbols.find(name);
    if (it == other.symbols.end() || it->second != ar) return false;
  }
  return true;
}

Signature signature_union(const Signature& a, const Signature& b) {
  Signature out = a;
  for (const auto& [name, ar] : b.symbols) {
    auto [it, inserted] = out.symbols.emplace(name, ar);
    if (!inserted && it->second != ar) {
      throw Error(ErrorCode::ArityClash,
                  "symbol " + name + " used with arities " + std::to_string(it->second) +
                      " and " + std::to_string(ar));
    }
  }
  out.equality_enabled = a.equality_enabled || b.equality_enabled;
  out.functional_hints.insert(b.functional_hints.begin(), b.functional_hints.end());
  return out;
}

Signature signature_intersection(const Signature& a, const Signature& b) {
  Signature out;
  for (const auto& [name, ar] : a.symbols) {
    auto it = b.symbols.find(name);
    if (it == b.symbols.end()) continue;
    if (it->second != ar) {
      throw Error(ErrorCode::ArityClash,
                  "symbol " + name + " used with arities " + std::to_string(ar) + " and " +
                      std::to_string(it->second));
    }
    out.symbols.emplace(name, ar);
  }
  out.equality_enabled = a.equality_enabled && b.equality_enabled;
  std::set_intersection(a.functional_hints.begin(), a.functional_hints.end(),
                        b.functional_hints.begin(), b.functional_hints.end(),
                        std::inserter(out.functional_hints, out.functional_hints.begin()));
  return out;
}

namespace {

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_str(const std::string& s) { return std::hash<std::string>{}(s); }

}  // namespace

Formula Formula::make(Node n) {
  std::size_t h = combine(0x51ed2701, static_cast<std::size_t>(n.kind));
  h = combine(h, hash_str(n.name));
  for (const auto& t : n.terms) h = combine(h, hash_str(t));
  for (const auto& c : n.children) h = combine(h, c.hash());
  n.cached_hash = h;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::verum() { return make({Kind::True, "", {}, {}}); }
Formula Formula::falsum() { return make({Kind::False, "", {}, {}}); }

Formula Formula::atom(std::string relation, std::vector<std::string> args) {
  return make({Kind::Atom, std::move(relation), std::move(args), {}});
}

Formula Formula::equals(std::string lhs, std::string rhs) {
  return make({Kind::Equals, "", {std::move(lhs), std::move(rhs)}, {}});
}

Formula Formula::negation(Formula f) { return make({Kind::Not, "", {}, {std::move(f)}}); }

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return make({Kind::And, "", {}, {std::move(lhs), std::move(rhs)}});
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return make({Kind::Or, "", {}, {std::move(lhs), std::move(rhs)}});
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return make({Kind::Implies, "", {}, {std::move(lhs), std::move(rhs)}});
}

Formula Formula::iff(Formula lhs, Formula rhs) {
  return make({Kind::Iff, "", {}, {std::move(lhs), std::move(rhs)}});
}

Formula Formula::forall(std::string var, Formula body) {
  return make({Kind::ForAll, std::move(var), {}, {std::move(body)}});
}

Formula Formula::exists(std::string var, Formula body) {
  return make({Kind::Exists, std::move(var), {}, {std::move(body)}});
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->cached_hash != other.node_->cached_hash) return false;
  if (node_->kind != other.node_->kind || node_->name != other.node_->name ||
      node_->terms != other.node_->terms ||
      node_->children.size() != other.node_->children.size())
    return false;
  for (std::size_t i = 0; i < node_->children.size(); ++i) {
    if (!(node_->children[i] == other.node_->children[i])) return false;
  }
  return true;
}

std::size_t Formula::hash() const { return node_->cached_hash; }

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound,
                  std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Atom:
    case Formula::Kind::Equals:
      for (const auto& v : f.terms()) {
        if (std::find(bound.rbegin(), bound.rend(), v) == bound.rend()) out.insert(v);
      }
      return;
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists:
      bound.push_back(f.bound_var());
      collect_free(f.child(0), bound, out);
      bound.pop_back();
      return;
    default:
      for (std::size_t i = 0; i < f.child_count(); ++i) collect_free(f.child(i), bound, out);
  }
}

void collect_vocabulary(const Formula& f, Signature& sig) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      int ar = static_cast<int>(f.terms().size());
      auto [it, inserted] = sig.symbols.emplace(f.relation_name(), ar);
      if (!inserted && it->second != ar) {
        throw Error(ErrorCode::ArityClash,
                    "symbol " + f.relation_name() + " used with arities " +
                        std::to_string(it->second) + " and " + std::to_string(ar));
      }
      return;
    }
    case Formula::Kind::Equals:
      sig.equality_enabled = true;
      return;
    default:
      for (std::size_t i = 0; i < f.child_count(); ++i) collect_vocabulary(f.child(i), sig);
  }
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(f, bound, out);
  return out;
}

Signature vocabulary(const Formula& f) {
  Signature sig;
  collect_vocabulary(f, sig);
  return sig;
}

int quantifier_rank(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists:
      return 1 + quantifier_rank(f.child(0));
    default: {
      int r = 0;
      for (std::size_t i = 0; i < f.child_count(); ++i)
        r = std::max(r, quantifier_rank(f.child(i)));
      return r;
    }
  }
}

bool uses_equality(const Formula& f) {
  if (f.kind() == Formula::Kind::Equals) return true;
  for (std::size_t i = 0; i < f.child_count(); ++i)
    if (uses_equality(f.child(i))) return true;
  return false;
}

Signature Theory::vocabulary() const {
  Signature sig;
  for (const auto& s : sentences) {
    if (!free_vars(s).empty()) {
      throw Error(ErrorCode::FreeVariableInSentence,
                  "theory member has free variable " + *free_vars(s).begin());
    }
    sig = signature_union(sig, fmw::vocabulary(s));
  }
  for (const auto& [name, coord] : functional_hints) {
    if (!sig.has(name)) {
      throw Error(ErrorCode::PredicateUnknown,
                  "functional hint names symbol " + name + " that no sentence uses");
    }
    if (coord < 0 || coord >= sig.arity(name)) {
      throw Error(ErrorCode::InvalidConfig,
                  "functional hint coordinate out of range for " + name);
    }
    sig.functional_hints.emplace(name, coord);
  }
  return sig;
}

Signature joint_vocabulary(const Theory& gamma, const Formula& phi) {
  return signature_union(gamma.vocabulary(), vocabulary(phi));
}

}  // namespace fmw
