#include "fmw/games.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "fmw/semantics.hpp"

namespace fmw {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 0x811c9dc5;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x + 1)) * 0x01000193;
    return h;
  }
};

// All index tuples over [0,m)^arity that mention index m-1 (the newest pebble).
void newest_index_tuples(int m, int arity, std::vector<std::vector<int>>& out) {
  out.clear();
  std::vector<int> cur(arity, 0);
  if (arity == 0) return;
  for (;;) {
    if (std::find(cur.begin(), cur.end(), m - 1) != cur.end()) out.push_back(cur);
    int pos = arity - 1;
    while (pos >= 0 && cur[pos] == m - 1) cur[pos--] = 0;
    if (pos < 0) break;
    ++cur[pos];
  }
}

struct Game {
  const FiniteStructure& a;
  const FiniteStructure& b;
  bool equality;
  std::unordered_map<std::vector<int>, bool, VecHash> memo;

  // The extension of a live position by (x, y) stays live iff the new pair is
  // consistent with every constraint that mentions it.
  bool extension_live(const std::vector<int>& sa, const std::vector<int>& sb, int x, int y) {
    int m = static_cast<int>(sa.size()) + 1;
    if (equality) {
      for (int i = 0; i + 1 < m; ++i) {
        if ((sa[i] == x) != (sb[i] == y)) return false;
      }
    }
    std::vector<int> ta, tb;
    std::vector<std::vector<int>> idx;
    for (const auto& [name, ar] : a.signature.symbols) {
      if (ar == 0) continue;  // 0-ary facts are checked once at the root
      newest_index_tuples(m, ar, idx);
      for (const auto& p : idx) {
        ta.clear();
        tb.clear();
        for (int i : p) {
          ta.push_back(i == m - 1 ? x : sa[i]);
          tb.push_back(i == m - 1 ? y : sb[i]);
        }
        if (a.holds(name, ta) != b.holds(name, tb)) return false;
      }
    }
    return true;
  }

  bool win(std::vector<int>& sa, std::vector<int>& sb, int remaining) {
    if (remaining == 0) return true;
    std::vector<int> key;
    key.reserve(sa.size() * 2 + 1);
    key.push_back(remaining);
    key.insert(key.end(), sa.begin(), sa.end());
    key.insert(key.end(), sb.begin(), sb.end());
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool result = true;
    for (int side = 0; side < 2 && result; ++side) {
      const FiniteStructure& sp = side == 0 ? a : b;
      const FiniteStructure& du = side == 0 ? b : a;
      for (int x = 0; x < sp.domain_size && result; ++x) {
        bool answered = false;
        for (int y = 0; y < du.domain_size && !answered; ++y) {
          int xa = side == 0 ? x : y;
          int yb = side == 0 ? y : x;
          if (!extension_live(sa, sb, xa, yb)) continue;
          sa.push_back(xa);
          sb.push_back(yb);
          answered = win(sa, sb, remaining - 1);
          sa.pop_back();
          sb.pop_back();
        }
        if (!answered) result = false;
      }
    }
    memo.emplace(std::move(key), result);
    return result;
  }
};

}  // namespace

bool ef_equivalent(const FiniteStructure& a, const FiniteStructure& b, int rounds) {
  if (a.signature.symbols != b.signature.symbols ||
      a.signature.equality_enabled != b.signature.equality_enabled) {
    throw Error(ErrorCode::SignatureMismatch, "the game needs one shared signature");
  }
  if (rounds < 0) {
    throw Error(ErrorCode::InvalidConfig, "round count must be non-negative");
  }
  for (const auto& [name, ar] : a.signature.symbols) {
    if (ar == 0 && a.holds(name, {}) != b.holds(name, {})) return false;
  }
  Game game{a, b, a.signature.equality_enabled, {}};
  std::vector<int> sa, sb;
  return game.win(sa, sb, rounds);
}

namespace {

std::string pebble_var(int i) { return "x" + std::to_string(i); }

struct HintikkaBuilder {
  const FiniteStructure& a;
  bool equality;
  std::unordered_map<std::vector<int>, Formula, VecHash> memo;

  Formula conjoin(std::vector<Formula> parts) {
    if (parts.empty()) return Formula::verum();
    Formula out = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
      out = Formula::conjunction(*it, std::move(out));
    }
    return out;
  }

  Formula disjoin(std::vector<Formula> parts) {
    if (parts.empty()) return Formula::falsum();
    Formula out = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
      out = Formula::disjunction(*it, std::move(out));
    }
    return out;
  }

  // The rank-r type of the pebbled tuple: every atomic fact about it, then
  // for r > 0 what extensions exist and that nothing else does.
  Formula build(std::vector<int>& pebbles, int r) {
    std::vector<int> key;
    key.push_back(r);
    key.insert(key.end(), pebbles.begin(), pebbles.end());
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int m = static_cast<int>(pebbles.size());
    std::vector<Formula> parts;
    if (r == 0) {
      for (const auto& [name, ar] : a.signature.symbols) {
        std::vector<int> p(ar, 0);
        for (;;) {
          bool in_range = std::all_of(p.begin(), p.end(), [&](int i) { return i < m; });
          if (in_range || ar == 0) {
            std::vector<std::string> args;
            std::vector<int> tuple;
            for (int i : p) {
              args.push_back(pebble_var(i));
              tuple.push_back(pebbles[i]);
            }
            Formula lit = Formula::atom(name, args);
            if (!a.holds(name, tuple)) lit = Formula::negation(std::move(lit));
            parts.push_back(std::move(lit));
          }
          if (ar == 0) break;
          int pos = ar - 1;
          while (pos >= 0 && p[pos] == m - 1) p[pos--] = 0;
          if (pos < 0 || m == 0) break;
          ++p[pos];
        }
      }
      if (equality) {
        for (int i = 0; i < m; ++i) {
          for (int j = i + 1; j < m; ++j) {
            Formula lit = Formula::equals(pebble_var(i), pebble_var(j));
            if (pebbles[i] != pebbles[j]) lit = Formula::negation(std::move(lit));
            parts.push_back(std::move(lit));
          }
        }
      }
    } else {
      std::vector<Formula> child_types;
      for (int c = 0; c < a.domain_size; ++c) {
        pebbles.push_back(c);
        Formula t = build(pebbles, r - 1);
        pebbles.pop_back();
        if (std::find(child_types.begin(), child_types.end(), t) == child_types.end()) {
          child_types.push_back(std::move(t));
        }
      }
      for (const auto& t : child_types) {
        parts.push_back(Formula::exists(pebble_var(m), t));
      }
      parts.push_back(Formula::forall(pebble_var(m), disjoin(child_types)));
    }
    Formula out = conjoin(std::move(parts));
    memo.emplace(std::move(key), out);
    return out;
  }
};

// Positions of And nodes as root-to-node child-index paths, outermost first.
void and_positions(const Formula& f, std::vector<int>& path,
                   std::vector<std::vector<int>>& out) {
  if (f.kind() == Formula::Kind::And) out.push_back(path);
  for (std::size_t i = 0; i < f.child_count(); ++i) {
    path.push_back(static_cast<int>(i));
    and_positions(f.child(i), path, out);
    path.pop_back();
  }
}

Formula replace_at(const Formula& f, const std::vector<int>& path, std::size_t depth,
                   const Formula& replacement) {
  if (depth == path.size()) return replacement;
  int idx = path[depth];
  Formula changed = replace_at(f.child(idx), path, depth + 1, replacement);
  switch (f.kind()) {
    case Formula::Kind::Not:
      return Formula::negation(std::move(changed));
    case Formula::Kind::And:
      return idx == 0 ? Formula::conjunction(std::move(changed), f.child(1))
                      : Formula::conjunction(f.child(0), std::move(changed));
    case Formula::Kind::Or:
      return idx == 0 ? Formula::disjunction(std::move(changed), f.child(1))
                      : Formula::disjunction(f.child(0), std::move(changed));
    case Formula::Kind::Implies:
      return idx == 0 ? Formula::implication(std::move(changed), f.child(1))
                      : Formula::implication(f.child(0), std::move(changed));
    case Formula::Kind::Iff:
      return idx == 0 ? Formula::iff(std::move(changed), f.child(1))
                      : Formula::iff(f.child(0), std::move(changed));
    case Formula::Kind::ForAll:
      return Formula::forall(f.bound_var(), std::move(changed));
    case Formula::Kind::Exists:
      return Formula::exists(f.bound_var(), std::move(changed));
    default:
      throw std::logic_error("replace_at below a leaf");
  }
}

}  // namespace

std::optional<Formula> distinguishing_sentence(const FiniteStructure& a,
                                               const FiniteStructure& b, int rounds) {
  if (ef_equivalent(a, b, rounds)) return std::nullopt;
  HintikkaBuilder builder{a, a.signature.equality_enabled, {}};
  std::vector<int> pebbles;
  Formula sentence = builder.build(pebbles, rounds);
  auto separates = [&](const Formula& f) { return eval(a, f) && !eval(b, f); };
  if (!separates(sentence)) {
    throw std::logic_error("rank type fails to separate the structures");
  }
  // Greedy pruning: keep replacing a conjunction by one side while the
  // sentence still separates. Best effort, not minimal.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<int>> positions;
    std::vector<int> path;
    and_positions(sentence, path, positions);
    for (const auto& pos : positions) {
      const Formula* node = &sentence;
      for (int i : pos) node = &node->child(i);
      for (int side = 0; side < 2; ++side) {
        Formula candidate = replace_at(sentence, pos, 0, node->child(side));
        if (separates(candidate)) {
          sentence = std::move(candidate);
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
  }
  if (quantifier_rank(sentence) > rounds || !separates(sentence)) {
    throw std::logic_error("pruned sentence lost its guarantees");
  }
  return sentence;
}

}  // namespace fmw
