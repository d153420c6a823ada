// Internal engine behind find_model and the witness search: sentences are
// grounded over a fixed domain into a hash-consed NNF circuit, clausified
// (definitional variables only where a conjunction sits under a disjunction),
// and solved by chronological DPLL with unit propagation. Functional hints
// become exactly-one clause groups per cell, which is what makes function
// tables searchable cell by cell instead of bit by bit.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fmw/logic.hpp"
#include "fmw/structure.hpp"

namespace fmw::internal {

// Relation-bit layout: one block per symbol in name order; within a block,
// tuples in lexicographic order. Variable id order therefore matches the
// canonical structure order.
class GroundModelSearch {
 public:
  // canonical_order: branch on relation bits in canonical order, tuple-present
  // first, so the first model found is the canonically least and successive
  // models ascend. Otherwise a static heuristic order (fewest-cell symbols
  // first, function tables cell by cell) is used.
  GroundModelSearch(Signature sig, int domain_size, const std::vector<Formula>& sentences,
                    bool canonical_order);

  // Pin one relation bit. Must be called before the first next().
  void freeze(const std::string& relation, const std::vector<int>& tuple, bool value);

  // Next model in branch order, or nullopt when exhausted. Enumeration
  // resumes the depth-first search in place (flip the deepest unflipped
  // decision), so successive calls cost what the remaining tree costs, not
  // a restart. Decrements `budget` per decision; throws
  // ResourceBudgetExceeded when spent.
  std::optional<FiniteStructure> next(long long& budget);

 private:
  struct RelBlock {
    std::string name;
    int arity;
    long long base;  // first var id of the block
    std::optional<int> functional_coord;
  };

  long long var_of(const RelBlock& block, const std::vector<int>& tuple) const;
  void build_circuit_and_clauses(const std::vector<Formula>& sentences);
  int ground(const Formula& f, bool positive, std::vector<std::pair<std::string, int>>& env);
  int def_literal(int node);
  void assert_node(int node);
  void add_clause(std::vector<int> lits);
  bool solve(long long& budget, bool advance);
  bool backtrack_flip();
  bool propagate();
  bool assign(long long var, bool value);
  void undo_to(std::size_t mark);

  // circuit
  struct CNode {
    int kind;  // 0 literal, 1 and, 2 or
    int lit;
    std::vector<int> kids;
  };
  static constexpr int kTrue = -1;
  static constexpr int kFalse = -2;
  int mk_node(int kind, std::vector<int> kids);
  int mk_lit(int lit);

  Signature sig_;
  int domain_;
  std::vector<RelBlock> blocks_;
  long long original_count_ = 0;
  long long var_count_ = 0;

  std::vector<CNode> cnodes_;
  std::unordered_map<std::uint64_t, std::vector<int>> cons_buckets_;
  std::unordered_map<int, int> def_memo_;

  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> occ_;  // literal -> clause indices
  bool contradiction_ = false;

  std::vector<int8_t> value_;
  std::vector<long long> trail_;
  std::size_t qhead_ = 0;
  struct Decision {
    long long var;
    std::size_t order_pos;  // index into decision_order_; positions before it are assigned
    std::size_t trail_mark;
    bool flipped;
  };
  std::vector<Decision> decisions_;
  std::vector<long long> decision_order_;
  bool canonical_order_;
  bool started_ = false;
  bool at_model_ = false;  // last next() returned a model; resume by flipping past it
  bool exhausted_ = false;
};

}  // namespace fmw::internal
