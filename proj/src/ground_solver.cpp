#include "ground_solver.hpp"

#include <algorithm>

#include "fmw/errors.hpp"

namespace fmw::internal {

namespace {

inline int pos_lit(long long v) { return static_cast<int>(2 * v); }
inline int neg_lit(long long v) { return static_cast<int>(2 * v + 1); }
inline int negate(int lit) { return lit ^ 1; }
inline long long lit_var(int lit) { return lit >> 1; }

std::uint64_t mix(std::uint64_t seed, std::uint64_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

GroundModelSearch::GroundModelSearch(Signature sig, int domain_size,
                                     const std::vector<Formula>& sentences,
                                     bool canonical_order)
    : sig_(std::move(sig)), domain_(domain_size), canonical_order_(canonical_order) {
  long long base = 0;
  for (const auto& [name, ar] : sig_.symbols) {
    RelBlock block{name, ar, base, std::nullopt};
    for (const auto& [hname, coord] : sig_.functional_hints) {
      if (hname == name) block.functional_coord = coord;
    }
    long long bits = 1;
    for (int i = 0; i < ar; ++i) bits *= domain_;
    base += bits;
    blocks_.push_back(std::move(block));
  }
  original_count_ = base;
  var_count_ = base;
  value_.assign(static_cast<std::size_t>(var_count_), -1);
  occ_.assign(static_cast<std::size_t>(2 * var_count_), {});
  build_circuit_and_clauses(sentences);
}

long long GroundModelSearch::var_of(const RelBlock& block, const std::vector<int>& tuple) const {
  long long rank = 0;
  for (int v : tuple) rank = rank * domain_ + v;
  return block.base + rank;
}

int GroundModelSearch::mk_lit(int lit) {
  std::uint64_t h = mix(0xabcdef12, static_cast<std::uint64_t>(lit) * 2 + 1);
  auto& bucket = cons_buckets_[h];
  for (int id : bucket) {
    if (cnodes_[id].kind == 0 && cnodes_[id].lit == lit) return id;
  }
  cnodes_.push_back(CNode{0, lit, {}});
  bucket.push_back(static_cast<int>(cnodes_.size()) - 1);
  return static_cast<int>(cnodes_.size()) - 1;
}

int GroundModelSearch::mk_node(int kind, std::vector<int> kids) {
  // Fold constants, flatten same-kind children, sort, dedupe.
  std::vector<int> flat;
  for (int k : kids) {
    if (kind == 1) {
      if (k == kTrue) continue;
      if (k == kFalse) return kFalse;
    } else {
      if (k == kFalse) continue;
      if (k == kTrue) return kTrue;
    }
    if (k >= 0 && cnodes_[k].kind == kind) {
      flat.insert(flat.end(), cnodes_[k].kids.begin(), cnodes_[k].kids.end());
    } else {
      flat.push_back(k);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  // Complementary literal pair folds the whole node.
  {
    std::unordered_map<int, bool> seen;  // lit -> present
    for (int id : flat) {
      const CNode& c = cnodes_[id];
      if (c.kind != 0) continue;
      if (seen.count(negate(c.lit))) return kind == 1 ? kFalse : kTrue;
      seen.emplace(c.lit, true);
    }
  }
  if (flat.empty()) return kind == 1 ? kTrue : kFalse;
  if (flat.size() == 1) return flat[0];
  std::uint64_t h = mix(0x5eed0000 + static_cast<std::uint64_t>(kind), flat.size());
  for (int k : flat) h = mix(h, static_cast<std::uint64_t>(k));
  auto& bucket = cons_buckets_[h];
  for (int id : bucket) {
    if (cnodes_[id].kind == kind && cnodes_[id].kids == flat) return id;
  }
  cnodes_.push_back(CNode{kind, 0, std::move(flat)});
  bucket.push_back(static_cast<int>(cnodes_.size()) - 1);
  return static_cast<int>(cnodes_.size()) - 1;
}

int GroundModelSearch::ground(const Formula& f, bool positive,
                              std::vector<std::pair<std::string, int>>& env) {
  auto lookup = [&](const std::string& name) -> int {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    throw Error(ErrorCode::UnboundVariable, "unbound variable " + name + " while grounding");
  };
  switch (f.kind()) {
    case Formula::Kind::True:
      return positive ? kTrue : kFalse;
    case Formula::Kind::False:
      return positive ? kFalse : kTrue;
    case Formula::Kind::Atom: {
      const RelBlock* block = nullptr;
      for (const auto& b : blocks_) {
        if (b.name == f.relation_name()) { block = &b; break; }
      }
      if (block == nullptr || block->arity != static_cast<int>(f.terms().size())) {
        throw Error(ErrorCode::VocabularyNotContained,
                    "symbol " + f.relation_name() + " missing from the search signature");
      }
      std::vector<int> tuple;
      tuple.reserve(f.terms().size());
      for (const auto& v : f.terms()) tuple.push_back(lookup(v));
      long long var = var_of(*block, tuple);
      return mk_lit(positive ? pos_lit(var) : neg_lit(var));
    }
    case Formula::Kind::Equals: {
      bool eq = lookup(f.terms()[0]) == lookup(f.terms()[1]);
      return eq == positive ? kTrue : kFalse;
    }
    case Formula::Kind::Not:
      return ground(f.child(0), !positive, env);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool conj = (f.kind() == Formula::Kind::And) == positive;
      std::vector<int> kids = {ground(f.child(0), positive, env),
                               ground(f.child(1), positive, env)};
      return mk_node(conj ? 1 : 2, std::move(kids));
    }
    case Formula::Kind::Implies: {
      std::vector<int> kids = {ground(f.child(0), !positive, env),
                               ground(f.child(1), positive, env)};
      return mk_node(positive ? 2 : 1, std::move(kids));
    }
    case Formula::Kind::Iff: {
      // (a -> b) & (b -> a), with polarity pushed through both sides.
      int fwd = mk_node(positive ? 2 : 1, {ground(f.child(0), !positive, env),
                                           ground(f.child(1), positive, env)});
      int bwd = mk_node(positive ? 2 : 1, {ground(f.child(0), positive, env),
                                           ground(f.child(1), !positive, env)});
      return mk_node(positive ? 1 : 2, {fwd, bwd});
    }
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists: {
      bool conj = (f.kind() == Formula::Kind::ForAll) == positive;
      std::vector<int> kids;
      kids.reserve(domain_);
      env.emplace_back(f.bound_var(), 0);
      for (int e = 0; e < domain_; ++e) {
        env.back().second = e;
        kids.push_back(ground(f.child(0), positive, env));
        if (conj && kids.back() == kFalse) break;
        if (!conj && kids.back() == kTrue) break;
      }
      env.pop_back();
      return mk_node(conj ? 1 : 2, std::move(kids));
    }
  }
  return kFalse;
}

void GroundModelSearch::add_clause(std::vector<int> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 0; i + 1 < lits.size(); ++i) {
    if (lits[i + 1] == negate(lits[i]) && lit_var(lits[i]) == lit_var(lits[i + 1])) return;
  }
  if (lits.empty()) {
    contradiction_ = true;
    return;
  }
  clauses_.push_back(std::move(lits));
  int idx = static_cast<int>(clauses_.size()) - 1;
  for (int lit : clauses_.back()) occ_[lit].push_back(idx);
}

int GroundModelSearch::def_literal(int node) {
  if (node >= 0 && cnodes_[node].kind == 0) return cnodes_[node].lit;
  auto it = def_memo_.find(node);
  if (it != def_memo_.end()) return it->second;
  long long aux = var_count_++;
  value_.push_back(-1);
  occ_.push_back({});
  occ_.push_back({});
  int a = pos_lit(aux);
  const CNode& n = cnodes_[node];
  if (n.kind == 1) {
    for (int kid : n.kids) add_clause({negate(a), def_literal(kid)});
  } else {
    std::vector<int> clause = {negate(a)};
    for (int kid : n.kids) clause.push_back(def_literal(kid));
    add_clause(std::move(clause));
  }
  def_memo_[node] = a;
  return a;
}

void GroundModelSearch::assert_node(int node) {
  if (node == kTrue) return;
  if (node == kFalse) {
    contradiction_ = true;
    return;
  }
  const CNode& n = cnodes_[node];
  if (n.kind == 0) {
    add_clause({n.lit});
    return;
  }
  if (n.kind == 1) {
    for (int kid : n.kids) assert_node(kid);
    return;
  }
  std::vector<int> clause;
  for (int kid : n.kids) {
    if (kid >= 0 && cnodes_[kid].kind == 0) clause.push_back(cnodes_[kid].lit);
    else clause.push_back(def_literal(kid));
  }
  add_clause(std::move(clause));
}

void GroundModelSearch::build_circuit_and_clauses(const std::vector<Formula>& sentences) {
  std::vector<std::pair<std::string, int>> env;
  for (const auto& s : sentences) {
    assert_node(ground(s, true, env));
    if (contradiction_) return;
  }
  // Exactly-one clause group per functional cell.
  for (const auto& block : blocks_) {
    if (!block.functional_coord) continue;
    int coord = *block.functional_coord;
    std::vector<int> cell(static_cast<std::size_t>(block.arity) - 1, 0);
    auto emit_cell = [&]() {
      std::vector<int> alo;
      for (int v = 0; v < domain_; ++v) {
        std::vector<int> tuple(cell.begin(), cell.end());
        tuple.insert(tuple.begin() + coord, v);
        alo.push_back(pos_lit(var_of(block, tuple)));
      }
      for (std::size_t i = 0; i + 1 < alo.size(); ++i)
        for (std::size_t j = i + 1; j < alo.size(); ++j)
          add_clause({negate(alo[i]), negate(alo[j])});
      add_clause(std::move(alo));
    };
    if (block.arity == 1) {
      emit_cell();
    } else {
      for (;;) {
        emit_cell();
        int pos = block.arity - 2;
        while (pos >= 0 && cell[pos] == domain_ - 1) cell[pos--] = 0;
        if (pos < 0) break;
        ++cell[pos];
      }
    }
  }
}

void GroundModelSearch::freeze(const std::string& relation, const std::vector<int>& tuple,
                               bool value) {
  if (started_) {
    throw std::logic_error("freeze after search start");
  }
  for (const auto& block : blocks_) {
    if (block.name != relation) continue;
    long long var = var_of(block, tuple);
    add_clause({value ? pos_lit(var) : neg_lit(var)});
    return;
  }
  throw Error(ErrorCode::SignatureNotContained, "cannot freeze unknown relation " + relation);
}

bool GroundModelSearch::assign(long long var, bool value) {
  int8_t& slot = value_[static_cast<std::size_t>(var)];
  if (slot != -1) return slot == (value ? 1 : 0);
  slot = value ? 1 : 0;
  trail_.push_back(var);
  return true;
}

bool GroundModelSearch::propagate() {
  while (qhead_ < trail_.size()) {
    long long var = trail_[qhead_++];
    bool val = value_[static_cast<std::size_t>(var)] == 1;
    int falsified = val ? neg_lit(var) : pos_lit(var);
    for (int idx : occ_[falsified]) {
      const auto& clause = clauses_[idx];
      int unassigned_lit = -1;
      int unassigned_count = 0;
      bool satisfied = false;
      for (int lit : clause) {
        int8_t v = value_[static_cast<std::size_t>(lit_var(lit))];
        if (v == -1) {
          ++unassigned_count;
          unassigned_lit = lit;
          if (unassigned_count > 1) break;
        } else if ((v == 1) == ((lit & 1) == 0)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied || unassigned_count > 1) continue;
      if (unassigned_count == 0) return false;
      if (!assign(lit_var(unassigned_lit), (unassigned_lit & 1) == 0)) return false;
    }
  }
  return true;
}

void GroundModelSearch::undo_to(std::size_t mark) {
  while (trail_.size() > mark) {
    value_[static_cast<std::size_t>(trail_.back())] = -1;
    trail_.pop_back();
  }
  qhead_ = mark;
}

bool GroundModelSearch::backtrack_flip() {
  for (;;) {
    if (decisions_.empty()) return false;
    Decision d = decisions_.back();
    decisions_.pop_back();
    undo_to(d.trail_mark);
    if (!d.flipped) {
      decisions_.push_back({d.var, d.order_pos, trail_.size(), true});
      assign(d.var, false);
      return true;
    }
  }
}

bool GroundModelSearch::solve(long long& budget, bool advance) {
  if (advance) {
    // Step off the model the previous call stopped at.
    do {
      if (!backtrack_flip()) return false;
    } while (!propagate());
  } else {
    for (const auto& clause : clauses_) {
      if (clause.size() == 1) {
        if (!assign(lit_var(clause[0]), (clause[0] & 1) == 0)) return false;
      }
    }
    if (!propagate()) return false;
  }
  for (;;) {
    std::size_t start = decisions_.empty() ? 0 : decisions_.back().order_pos + 1;
    long long next_var = -1;
    std::size_t pos = 0;
    for (std::size_t i = start; i < decision_order_.size(); ++i) {
      if (value_[static_cast<std::size_t>(decision_order_[i])] == -1) {
        next_var = decision_order_[i];
        pos = i;
        break;
      }
    }
    if (next_var == -1) return true;
    if (--budget < 0) {
      throw Error(ErrorCode::ResourceBudgetExceeded, "node budget exhausted during search");
    }
    decisions_.push_back({next_var, pos, trail_.size(), false});
    assign(next_var, true);
    while (!propagate()) {
      if (!backtrack_flip()) return false;
    }
  }
}

std::optional<FiniteStructure> GroundModelSearch::next(long long& budget) {
  if (exhausted_ || contradiction_) {
    exhausted_ = true;
    return std::nullopt;
  }
  bool advance = at_model_;
  at_model_ = false;
  if (!started_) {
    started_ = true;
    // Branch on relation bits only. Definitional variables never need a
    // decision: unit propagation forces a definition variable false whenever
    // its subcircuit is false, so once every relation bit is assigned without
    // conflict the asserted clauses are all satisfied. Leaves of the search
    // then differ in relation bits, which keeps the enumeration duplicate-free.
    if (canonical_order_) {
      for (long long v = 0; v < original_count_; ++v) decision_order_.push_back(v);
    } else {
      std::vector<const RelBlock*> order;
      for (const auto& b : blocks_) order.push_back(&b);
      auto cells = [&](const RelBlock* b) {
        long long c = 1;
        int eff = b->arity - (b->functional_coord ? 1 : 0);
        for (int i = 0; i < eff; ++i) c *= domain_;
        return c;
      };
      std::stable_sort(order.begin(), order.end(), [&](const RelBlock* x, const RelBlock* y) {
        return cells(x) < cells(y);
      });
      for (const RelBlock* b : order) {
        if (b->functional_coord) {
          int coord = *b->functional_coord;
          std::vector<int> cell(static_cast<std::size_t>(b->arity) - 1, 0);
          for (;;) {
            for (int v = 0; v < domain_; ++v) {
              std::vector<int> tuple(cell.begin(), cell.end());
              tuple.insert(tuple.begin() + coord, v);
              decision_order_.push_back(var_of(*b, tuple));
            }
            if (b->arity == 1) break;
            int pos = b->arity - 2;
            while (pos >= 0 && cell[pos] == domain_ - 1) cell[pos--] = 0;
            if (pos < 0) break;
            ++cell[pos];
          }
        } else {
          long long bits = 1;
          for (int i = 0; i < b->arity; ++i) bits *= domain_;
          for (long long r = 0; r < bits; ++r) decision_order_.push_back(b->base + r);
        }
      }
    }
  }
  if (!solve(budget, advance)) {
    exhausted_ = true;
    decisions_.clear();
    undo_to(0);
    return std::nullopt;
  }
  FiniteStructure model;
  model.signature = sig_;
  model.domain_size = domain_;
  for (const auto& block : blocks_) {
    auto& table = model.relations[block.name];
    std::vector<int> tuple(block.arity, 0);
    long long bits = 1;
    for (int i = 0; i < block.arity; ++i) bits *= domain_;
    for (long long r = 0; r < bits; ++r) {
      if (value_[static_cast<std::size_t>(block.base + r)] == 1) {
        long long rank = r;
        for (int i = block.arity - 1; i >= 0; --i) {
          tuple[i] = static_cast<int>(rank % domain_);
          rank /= domain_;
        }
        table.insert(tuple);
      }
    }
  }
  at_model_ = true;
  return model;
}

}  // namespace fmw::internal
