#include "fmw/structure.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace fmw {

namespace {

const std::set<std::vector<int>> kEmptyTable;

// All tuples over [0,size)^arity in lexicographic order.
std::vector<std::vector<int>> all_tuples(int size, int arity) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(arity, 0);
  if (arity == 0) {
    out.push_back({});
    return out;
  }
  for (;;) {
    out.push_back(cur);
    int pos = arity - 1;
    while (pos >= 0 && cur[pos] == size - 1) cur[pos--] = 0;
    if (pos < 0) break;
    ++cur[pos];
  }
  return out;
}

}  // namespace

const std::set<std::vector<int>>& FiniteStructure::tuples(const std::string& name) const {
  auto it = relations.find(name);
  return it == relations.end() ? kEmptyTable : it->second;
}

bool FiniteStructure::holds(const std::string& name, const std::vector<int>& tuple) const {
  auto it = relations.find(name);
  return it != relations.end() && it->second.count(tuple) != 0;
}

void FiniteStructure::validate(bool check_functional) const {
  if (domain_size < 1) {
    throw Error(ErrorCode::DomainMismatch, "domain size must be at least 1");
  }
  for (const auto& [name, table] : relations) {
    if (!signature.has(name)) {
      throw Error(ErrorCode::SignatureNotContained,
                  "relation " + name + " is not in the signature");
    }
    int ar = signature.arity(name);
    for (const auto& t : table) {
      if (static_cast<int>(t.size()) != ar) {
        throw Error(ErrorCode::ArityMismatch,
                    "tuple of length " + std::to_string(t.size()) + " in relation " + name +
                        " of arity " + std::to_string(ar));
      }
      for (int v : t) {
        if (v < 0 || v >= domain_size) {
          throw Error(ErrorCode::TupleOutOfRange,
                      "element " + std::to_string(v) + " outside domain in relation " + name);
        }
      }
    }
  }
  for (const auto& [name, ar] : signature.symbols) {
    (void)ar;
    if (relations.find(name) == relations.end()) {
      throw Error(ErrorCode::SignatureNotContained,
                  "signature symbol " + name + " has no table");
    }
  }
  if (check_functional) {
    for (const auto& [name, coord] : signature.functional_hints) {
      if (!signature.has(name)) continue;
      int ar = signature.arity(name);
      // Count tuples per assignment of the non-output coordinates.
      std::map<std::vector<int>, int> seen;
      for (const auto& t : tuples(name)) {
        std::vector<int> key;
        for (int i = 0; i < ar; ++i)
          if (i != coord) key.push_back(t[i]);
        ++seen[key];
      }
      std::uint64_t cells = 1;
      for (int i = 0; i < ar - 1; ++i) cells *= static_cast<std::uint64_t>(domain_size);
      if (seen.size() != cells ||
          std::any_of(seen.begin(), seen.end(), [](const auto& kv) { return kv.second != 1; })) {
        throw Error(ErrorCode::InvalidConfig,
                    "relation " + name + " is not functional at coordinate " +
                        std::to_string(coord));
      }
    }
  }
}

FiniteStructure empty_structure(Signature sig, int domain_size) {
  FiniteStructure s;
  s.signature = std::move(sig);
  s.domain_size = domain_size;
  for (const auto& [name, ar] : s.signature.symbols) {
    (void)ar;
    s.relations[name] = {};
  }
  return s;
}

bool canonical_less(const FiniteStructure& a, const FiniteStructure& b) {
  if (a.domain_size != b.domain_size) return a.domain_size < b.domain_size;
  auto ia = a.relations.begin();
  auto ib = b.relations.begin();
  while (ia != a.relations.end() || ib != b.relations.end()) {
    if (ia == a.relations.end()) return false;
    if (ib == b.relations.end()) return true;
    if (ia->first != ib->first) return ia->first < ib->first;
    const auto& ta = ia->second;
    const auto& tb = ib->second;
    auto xa = ta.begin();
    auto xb = tb.begin();
    while (xa != ta.end() || xb != tb.end()) {
      if (xa == ta.end()) return false;  // b holds an extra tuple first: b smaller
      if (xb == tb.end()) return true;
      if (*xa != *xb) return *xa < *xb;  // the side containing the smaller tuple wins
      ++xa;
      ++xb;
    }
    ++ia;
    ++ib;
  }
  return false;
}

FiniteStructure reduct(const FiniteStructure& a, const Signature& sig) {
  if (!sig.contained_in(a.signature)) {
    throw Error(ErrorCode::SignatureNotContained,
                "reduct signature is not contained in the structure's signature");
  }
  FiniteStructure out;
  out.signature = sig;
  out.domain_size = a.domain_size;
  for (const auto& [name, ar] : sig.symbols) {
    (void)ar;
    out.relations[name] = a.tuples(name);
  }
  return out;
}

ExpansionRange::ExpansionRange(FiniteStructure base, Signature target)
    : base_(std::move(base)), target_(std::move(target)) {
  if (!base_.signature.contained_in(target_)) {
    throw Error(ErrorCode::SignatureNotContained,
                "expansion target must extend the structure's signature");
  }
  count_ = 1;
  for (const auto& [name, ar] : target_.symbols) {
    if (base_.signature.has(name)) continue;
    NewSymbol sym{name, ar, std::nullopt, 0};
    for (const auto& [hname, coord] : target_.functional_hints) {
      if (hname == name) sym.functional_coord = coord;
    }
    long double estimate;
    std::uint64_t n = static_cast<std::uint64_t>(base_.domain_size);
    if (sym.functional_coord) {
      std::uint64_t cells = 1;
      for (int i = 0; i < ar - 1; ++i) cells *= n;
      estimate = cells * std::log2l(static_cast<long double>(n));
      if (estimate >= 62) {
        throw Error(ErrorCode::ResourceBudgetExceeded, "expansion space too large to index");
      }
      sym.options = 1;
      for (std::uint64_t c = 0; c < cells; ++c) sym.options *= n;
    } else {
      std::uint64_t bits = 1;
      for (int i = 0; i < ar; ++i) bits *= n;
      if (bits >= 62) {
        throw Error(ErrorCode::ResourceBudgetExceeded, "expansion space too large to index");
      }
      sym.options = 1ULL << bits;
    }
    if (count_ > 0 && sym.options > 0 && count_ > UINT64_MAX / sym.options) {
      throw Error(ErrorCode::ResourceBudgetExceeded, "expansion space too large to index");
    }
    count_ *= sym.options;
    new_symbols_.push_back(std::move(sym));
  }
}

FiniteStructure ExpansionRange::at(std::uint64_t index) const {
  FiniteStructure out = base_;
  out.signature = target_;
  int n = base_.domain_size;
  for (const auto& sym : new_symbols_) {
    std::uint64_t code = index % sym.options;
    index /= sym.options;
    std::set<std::vector<int>> table;
    if (sym.functional_coord) {
      int coord = *sym.functional_coord;
      for (auto& cell : all_tuples(n, sym.arity - 1)) {
        int value = static_cast<int>(code % n);
        code /= n;
        std::vector<int> t = cell;
        t.insert(t.begin() + coord, value);
        table.insert(std::move(t));
      }
    } else {
      std::uint64_t bit = 0;
      for (auto& t : all_tuples(n, sym.arity)) {
        if (code & (1ULL << bit)) table.insert(t);
        ++bit;
      }
    }
    out.relations[sym.name] = std::move(table);
  }
  return out;
}

ExpansionRange expansions(const FiniteStructure& a, const Signature& sig) {
  return ExpansionRange(a, sig);
}

namespace {

// Per-element occurrence counts, one slot per (relation, coordinate).
std::vector<std::vector<int>> degree_profiles(const FiniteStructure& s) {
  std::vector<std::vector<int>> prof(s.domain_size);
  for (auto& p : prof) p.clear();
  for (const auto& [name, table] : s.relations) {
    int ar = s.signature.arity(name);
    for (int e = 0; e < s.domain_size; ++e) prof[e].resize(prof[e].size() + ar, 0);
    std::size_t base = prof.empty() ? 0 : prof[0].size() - ar;
    for (const auto& t : table) {
      for (int pos = 0; pos < ar; ++pos) ++prof[t[pos]][base + pos];
    }
  }
  return prof;
}

struct IsoSearch {
  const FiniteStructure& a;
  const FiniteStructure& b;
  std::vector<int> map;      // a-elem -> b-elem or -1
  std::vector<int> inverse;  // b-elem -> a-elem or -1
  // tuples touching each element, per relation
  std::map<std::string, std::vector<std::vector<const std::vector<int>*>>> a_touch, b_touch;

  bool consistent(int i) {
    int j = map[i];
    for (const auto& [name, touch] : a_touch) {
      for (const auto* t : touch[i]) {
        std::vector<int> image(t->size());
        bool complete = true;
        for (std::size_t p = 0; p < t->size(); ++p) {
          if (map[(*t)[p]] < 0) { complete = false; break; }
          image[p] = map[(*t)[p]];
        }
        if (complete && !b.holds(name, image)) return false;
      }
    }
    for (const auto& [name, touch] : b_touch) {
      for (const auto* t : touch[j]) {
        std::vector<int> pre(t->size());
        bool complete = true;
        for (std::size_t p = 0; p < t->size(); ++p) {
          if (inverse[(*t)[p]] < 0) { complete = false; break; }
          pre[p] = inverse[(*t)[p]];
        }
        if (complete && !a.holds(name, pre)) return false;
      }
    }
    return true;
  }

  bool extend(int i, const std::vector<std::vector<int>>& pa,
              const std::vector<std::vector<int>>& pb) {
    if (i == a.domain_size) return true;
    for (int j = 0; j < b.domain_size; ++j) {
      if (inverse[j] >= 0 || pa[i] != pb[j]) continue;
      map[i] = j;
      inverse[j] = i;
      if (consistent(i) && extend(i + 1, pa, pb)) return true;
      map[i] = -1;
      inverse[j] = -1;
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<int>> find_isomorphism(const FiniteStructure& a,
                                                 const FiniteStructure& b) {
  if (a.signature.symbols != b.signature.symbols) {
    throw Error(ErrorCode::SignatureMismatch,
                "isomorphism requires identical signatures");
  }
  if (a.domain_size != b.domain_size) return std::nullopt;
  auto pa = degree_profiles(a);
  auto pb = degree_profiles(b);
  {
    auto sa = pa;
    auto sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  IsoSearch search{a, b, std::vector<int>(a.domain_size, -1),
                   std::vector<int>(b.domain_size, -1), {}, {}};
  for (const auto& [name, table] : a.relations) {
    auto& touch = search.a_touch[name];
    touch.assign(a.domain_size, {});
    for (const auto& t : table)
      for (int e : std::set<int>(t.begin(), t.end())) touch[e].push_back(&t);
  }
  for (const auto& [name, table] : b.relations) {
    auto& touch = search.b_touch[name];
    touch.assign(b.domain_size, {});
    for (const auto& t : table)
      for (int e : std::set<int>(t.begin(), t.end())) touch[e].push_back(&t);
  }
  if (!search.extend(0, pa, pb)) return std::nullopt;
  // Full verification: mapped tuple sets must match in both directions.
  for (const auto& [name, table] : a.relations) {
    std::set<std::vector<int>> image;
    for (const auto& t : table) {
      std::vector<int> m(t.size());
      for (std::size_t p = 0; p < t.size(); ++p) m[p] = search.map[t[p]];
      image.insert(std::move(m));
    }
    if (image != b.tuples(name)) return std::nullopt;
  }
  return search.map;
}

bool elementarily_equivalent_finite(const FiniteStructure& a, const FiniteStructure& b) {
  if (!a.signature.equality_enabled || !b.signature.equality_enabled) {
    throw Error(ErrorCode::EqualityFreeUnsupported,
                "finite elementary equivalence is only decided with equality; "
                "use the EF-game module for equality-free approximations");
  }
  return find_isomorphism(a, b).has_value();
}

const char* to_string(BaseRelation r) {
  switch (r) {
    case BaseRelation::R1: return "r1";
    case BaseRelation::R2: return "r2";
    case BaseRelation::R3: return "r3";
    case BaseRelation::R4: return "r4";
  }
  return "?";
}

const char* to_string(ExpansionRelation s) {
  switch (s) {
    case ExpansionRelation::S1: return "s1";
    case ExpansionRelation::S2: return "s2";
    case ExpansionRelation::S3: return "s3";
  }
  return "?";
}

std::optional<BaseRelation> base_relation_from_string(const std::string& s) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "r1") return BaseRelation::R1;
  if (t == "r2") return BaseRelation::R2;
  if (t == "r3") return BaseRelation::R3;
  if (t == "r4") return BaseRelation::R4;
  return std::nullopt;
}

std::optional<ExpansionRelation> expansion_relation_from_string(const std::string& s) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "s1") return ExpansionRelation::S1;
  if (t == "s2") return ExpansionRelation::S2;
  if (t == "s3") return ExpansionRelation::S3;
  return std::nullopt;
}

bool check_S(ExpansionRelation s, const FiniteStructure& a_prime,
             const FiniteStructure& a_dprime) {
  if (!a_prime.signature.contained_in(a_dprime.signature)) {
    throw Error(ErrorCode::SignatureNotContained,
                "expansion step requires the old signature inside the new one");
  }
  if (a_prime.domain_size > a_dprime.domain_size) {
    throw Error(ErrorCode::DomainMismatch,
                "canonical prefix requires |A'| <= |A''|");
  }
  int prefix = a_prime.domain_size;
  switch (s) {
    case ExpansionRelation::S1:
      if (a_prime.domain_size != a_dprime.domain_size) return false;
      for (const auto& [name, table] : a_prime.relations) {
        if (a_dprime.tuples(name) != table) return false;
      }
      return true;
    case ExpansionRelation::S2:
      for (const auto& [name, table] : a_prime.relations) {
        if (a_dprime.tuples(name) != table) return false;
      }
      return true;
    case ExpansionRelation::S3:
      for (const auto& [name, table] : a_prime.relations) {
        std::set<std::vector<int>> restricted;
        for (const auto& t : a_dprime.tuples(name)) {
          if (std::all_of(t.begin(), t.end(), [&](int v) { return v < prefix; }))
            restricted.insert(t);
        }
        if (restricted != table) return false;
      }
      return true;
  }
  return false;
}

FiniteStructure inflate(const FiniteStructure& a, int target_size, int elem) {
  if (a.signature.equality_enabled) {
    throw Error(ErrorCode::EqualityPresent,
                "inflation preserves only equality-free satisfaction");
  }
  if (target_size < a.domain_size) {
    throw Error(ErrorCode::TargetTooSmall, "inflation target below current size");
  }
  if (elem < 0 || elem >= a.domain_size) {
    throw Error(ErrorCode::TupleOutOfRange, "clone source outside the domain");
  }
  auto h = [&](int v) { return v < a.domain_size ? v : elem; };
  FiniteStructure out;
  out.signature = a.signature;
  out.domain_size = target_size;
  for (const auto& [name, table] : a.relations) {
    int ar = a.signature.arity(name);
    std::set<std::vector<int>> grown;
    for (auto& t : all_tuples(target_size, ar)) {
      std::vector<int> mapped(t.size());
      for (std::size_t p = 0; p < t.size(); ++p) mapped[p] = h(t[p]);
      if (table.count(mapped)) grown.insert(t);
    }
    out.relations[name] = std::move(grown);
  }
  return out;
}

}  // namespace fmw
