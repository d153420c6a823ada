// Finite relational structures and the relations between them that the
// bounded friendliness checker is parameterized by.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fmw/logic.hpp"

namespace fmw {

// Domain is always {0, ..., domain_size-1}. Relations map symbol name to the
// set of satisfying tuples; std::set keeps tuples in lexicographic order,
// which the canonical serialization relies on.
struct FiniteStructure {
  Signature signature;
  int domain_size = 0;
  std::map<std::string, std::set<std::vector<int>>> relations;

  const std::set<std::vector<int>>& tuples(const std::string& name) const;
  bool holds(const std::string& name, const std::vector<int>& tuple) const;

  // Structural checks: every relation belongs to the signature, every symbol
  // has a table, arities and element ranges are respected. When
  // check_functional is set, each functional hint must name a table with
  // exactly one tuple per choice of the non-output coordinates.
  void validate(bool check_functional = false) const;

  bool operator==(const FiniteStructure& o) const {
    return domain_size == o.domain_size && relations == o.relations &&
           signature.symbols == o.signature.symbols;
  }
};

// Empty-relation structure over sig with the given domain size.
FiniteStructure empty_structure(Signature sig, int domain_size);

// Total order used wherever a deterministic representative or witness is
// required: domain size first, then relation tables by symbol name, a table
// pair decided by the first tuple (lexicographically) on which membership
// differs, with the containing side smaller. Coincides with byte order of the
// canonical serialization for single-digit domains.
bool canonical_less(const FiniteStructure& a, const FiniteStructure& b);

// Drop the relations outside `sig`. Throws SignatureNotContained unless sig
// is contained in a's signature.
FiniteStructure reduct(const FiniteStructure& a, const Signature& sig);

// All expansions of `a` to the larger signature `sig`, lazily indexable in a
// fixed order. New symbols with a functional hint range over their functional
// tables only; other new symbols over all 2^(size^arity) subsets.
class ExpansionRange {
 public:
  ExpansionRange(FiniteStructure base, Signature target);

  std::uint64_t count() const { return count_; }
  FiniteStructure at(std::uint64_t index) const;

  class iterator {
   public:
    iterator(const ExpansionRange* r, std::uint64_t i) : r_(r), i_(i) {}
    FiniteStructure operator*() const { return r_->at(i_); }
    iterator& operator++() { ++i_; return *this; }
    bool operator!=(const iterator& o) const { return i_ != o.i_; }

   private:
    const ExpansionRange* r_;
    std::uint64_t i_;
  };
  iterator begin() const { return iterator(this, 0); }
  iterator end() const { return iterator(this, count_); }

 private:
  struct NewSymbol {
    std::string name;
    int arity;
    std::optional<int> functional_coord;
    std::uint64_t options;  // number of distinct tables
  };
  FiniteStructure base_;
  Signature target_;
  std::vector<NewSymbol> new_symbols_;
  std::uint64_t count_;
};

ExpansionRange expansions(const FiniteStructure& a, const Signature& sig);

// Isomorphism search: returns a bijection (index i of a maps to out[i] in b)
// or nullopt. Backtracking over degree-profile-compatible candidates.
// Requires identical symbol sets; throws SignatureMismatch otherwise.
std::optional<std::vector<int>> find_isomorphism(const FiniteStructure& a,
                                                 const FiniteStructure& b);

// With equality, finite elementary equivalence is isomorphism. Equality-free
// signatures are rejected (EqualityFreeUnsupported); the EF-game module is
// the documented approximation for that case.
bool elementarily_equivalent_finite(const FiniteStructure& a, const FiniteStructure& b);

// How the checker may move from a base model to a richer one.
// R1: the very same structure. R2: an isomorphic copy. R3/R4: elementary
// embedding / elementary equivalence, which over finite structures with
// equality collapse to isomorphism.
enum class BaseRelation { R1, R2, R3, R4 };

// What the expansion step must preserve about the old vocabulary.
// S1: same domain, old symbols kept exactly (an expansion in the usual
// sense). S2: old symbols' tuple sets kept exactly even if the domain grew.
// S3: old symbols kept exactly on tuples over the old domain; tuples touching
// new elements are unconstrained.
enum class ExpansionRelation { S1, S2, S3 };

const char* to_string(BaseRelation r);
const char* to_string(ExpansionRelation s);
std::optional<BaseRelation> base_relation_from_string(const std::string& s);
std::optional<ExpansionRelation> expansion_relation_from_string(const std::string& s);

// a_prime sits as the initial segment {0..|a_prime|-1} of a_dprime's domain
// (the canonical-prefix convention); checks the S-condition under that
// embedding. Requires a_prime's signature contained in a_dprime's and
// |a_prime| <= |a_dprime|.
bool check_S(ExpansionRelation s, const FiniteStructure& a_prime,
             const FiniteStructure& a_dprime);

// Clone `elem` until the domain reaches target_size; every clone participates
// in exactly the tuples its original does, in every coordinate combination.
// Preserves satisfaction of equality-free sentences. Requires an
// equality-free signature (EqualityPresent) and target >= current size
// (TargetTooSmall).
FiniteStructure inflate(const FiniteStructure& a, int target_size, int elem);

}  // namespace fmw
