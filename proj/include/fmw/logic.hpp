// First-order syntax: signatures, formulas, theories, and the handful of
// syntactic measures everything else is defined against.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fmw/errors.hpp"

namespace fmw {

// A relational signature. Function and constant symbols are represented as
// relations; a functional hint (name, coordinate) records that exactly one
// tuple per choice of the remaining coordinates is intended at the marked
// output coordinate. Hints guide the model finder; eval ignores them.
struct Signature {
  std::map<std::string, int> symbols;  // name -> arity (>= 0)
  bool equality_enabled = false;
  std::set<std::pair<std::string, int>> functional_hints;

  bool has(const std::string& name) const { return symbols.count(name) != 0; }
  int arity(const std::string& name) const { return symbols.at(name); }

  // true when every symbol of this signature occurs in `other` with the same
  // arity. The equality flag and hints do not participate.
  bool contained_in(const Signature& other) const;

  bool operator==(const Signature& o) const {
    return symbols == o.symbols && equality_enabled == o.equality_enabled &&
           functional_hints == o.functional_hints;
  }
};

// Throws ErrorCode::ArityClash when a shared name has different arities.
Signature signature_union(const Signature& a, const Signature& b);
Signature signature_intersection(const Signature& a, const Signature& b);

// Immutable formula AST with cheap copies. Equals is kept separate from Atom
// so equality-free modes can reject it syntactically.
class Formula {
 public:
  enum class Kind {
    True,
    False,
    Atom,
    Equals,
    Not,
    And,
    Or,
    Implies,
    Iff,
    ForAll,
    Exists,
  };

  static Formula verum();
  static Formula falsum();
  static Formula atom(std::string relation, std::vector<std::string> args);
  static Formula equals(std::string lhs, std::string rhs);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  Kind kind() const { return node_->kind; }

  // Atom: relation name and argument variables. Equals: terms() = {lhs, rhs}.
  // Quantifiers: terms() = {bound variable}.
  const std::string& relation_name() const { return node_->name; }
  const std::vector<std::string>& terms() const { return node_->terms; }
  const std::string& bound_var() const { return node_->name; }

  std::size_t child_count() const { return node_->children.size(); }
  const Formula& child(std::size_t i) const { return node_->children[i]; }

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }
  std::size_t hash() const;

 private:
  struct Node {
    Kind kind;
    std::string name;                 // relation or bound variable
    std::vector<std::string> terms;   // atom args / equality operands
    std::vector<Formula> children;
    std::size_t cached_hash = 0;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

std::set<std::string> free_vars(const Formula& f);

// Minimal signature of f: exactly the relation symbols occurring in it, with
// equality enabled iff an Equals node occurs.
Signature vocabulary(const Formula& f);

int quantifier_rank(const Formula& f);

bool uses_equality(const Formula& f);

// A finite set of sentences. Functional hints declared alongside the sentences
// (e.g. by theory-file directives) ride on the derived signature.
struct Theory {
  std::vector<Formula> sentences;
  std::set<std::pair<std::string, int>> functional_hints;

  // Union of the member vocabularies with the declared hints attached.
  // Throws ErrorCode::ArityClash on conflicting use of a symbol and
  // ErrorCode::FreeVariableInSentence if a member is not a sentence.
  Signature vocabulary() const;
};

Signature joint_vocabulary(const Theory& gamma, const Formula& phi);

}  // namespace fmw
