#include "fmw/propositional.hpp"

#include <algorithm>
#include <vector>

namespace fmw {

namespace {

void require_propositional(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      if (!f.terms().empty()) {
        throw Error(ErrorCode::NotPropositional,
                    "atom " + f.relation_name() + " takes arguments");
      }
      return;
    case Formula::Kind::Equals:
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists:
      throw Error(ErrorCode::NotPropositional,
                  "quantifiers and equality are not propositional");
    default:
      for (std::size_t i = 0; i < f.child_count(); ++i) require_propositional(f.child(i));
  }
}

std::vector<std::string> prop_vars(const Formula& f) {
  Signature voc = vocabulary(f);
  std::vector<std::string> out;
  for (const auto& [name, ar] : voc.symbols) {
    (void)ar;
    out.push_back(name);
  }
  return out;  // map order: already sorted
}

bool eval_mask(const Formula& f, const std::vector<std::string>& vars, std::uint32_t mask) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Atom: {
      auto it = std::lower_bound(vars.begin(), vars.end(), f.relation_name());
      return (mask >> (it - vars.begin())) & 1u;
    }
    case Formula::Kind::Not:
      return !eval_mask(f.child(0), vars, mask);
    case Formula::Kind::And:
      return eval_mask(f.child(0), vars, mask) && eval_mask(f.child(1), vars, mask);
    case Formula::Kind::Or:
      return eval_mask(f.child(0), vars, mask) || eval_mask(f.child(1), vars, mask);
    case Formula::Kind::Implies:
      return !eval_mask(f.child(0), vars, mask) || eval_mask(f.child(1), vars, mask);
    case Formula::Kind::Iff:
      return eval_mask(f.child(0), vars, mask) == eval_mask(f.child(1), vars, mask);
    default:
      throw std::logic_error("non-propositional node slipped through");
  }
}

struct PropInstance {
  std::vector<std::string> gamma_vars;  // sorted
  std::vector<std::string> all_vars;    // sorted, gamma_vars plus phi's extras
  const Theory* gamma;
  const Formula* phi;
};

PropInstance analyze(const Theory& gamma, const Formula& phi, int var_cap = 20) {
  for (const auto& s : gamma.sentences) require_propositional(s);
  require_propositional(phi);
  PropInstance inst{{}, {}, &gamma, &phi};
  std::set<std::string> gv;
  for (const auto& s : gamma.sentences) {
    auto vs = prop_vars(s);
    gv.insert(vs.begin(), vs.end());
  }
  inst.gamma_vars.assign(gv.begin(), gv.end());
  std::set<std::string> av = gv;
  auto pv = prop_vars(phi);
  av.insert(pv.begin(), pv.end());
  inst.all_vars.assign(av.begin(), av.end());
  if (static_cast<int>(inst.all_vars.size()) > var_cap) {
    throw Error(ErrorCode::TooManyVariables,
                "propositional procedures cap out at " + std::to_string(var_cap) +
                    " variables");
  }
  return inst;
}

bool gamma_true(const PropInstance& inst, const std::vector<std::string>& vars,
                std::uint32_t mask) {
  return std::all_of(inst.gamma->sentences.begin(), inst.gamma->sentences.end(),
                     [&](const Formula& s) { return eval_mask(s, vars, mask); });
}

// Spread the bits of a valuation over `sub` onto the positions of `sub`'s
// entries within `full`.
std::uint32_t lift(const std::vector<std::string>& sub, const std::vector<std::string>& full,
                   std::uint32_t mask) {
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    if ((mask >> i) & 1u) {
      auto it = std::lower_bound(full.begin(), full.end(), sub[i]);
      out |= 1u << (it - full.begin());
    }
  }
  return out;
}

}  // namespace

bool prop_friendly(const Theory& gamma, const Formula& phi) {
  PropInstance inst = analyze(gamma, phi);
  std::size_t ng = inst.gamma_vars.size();
  std::size_t extra = inst.all_vars.size() - ng;
  for (std::uint32_t outer = 0; outer < (1u << ng); ++outer) {
    if (!gamma_true(inst, inst.gamma_vars, outer)) continue;
    std::uint32_t base = lift(inst.gamma_vars, inst.all_vars, outer);
    bool extended = false;
    // Enumerate the phi-only variables on top of the fixed outer valuation.
    std::vector<std::size_t> extra_pos;
    for (std::size_t i = 0; i < inst.all_vars.size(); ++i) {
      if (!std::binary_search(inst.gamma_vars.begin(), inst.gamma_vars.end(),
                              inst.all_vars[i]))
        extra_pos.push_back(i);
    }
    for (std::uint32_t inner = 0; inner < (1u << extra) && !extended; ++inner) {
      std::uint32_t mask = base;
      for (std::size_t i = 0; i < extra_pos.size(); ++i) {
        if ((inner >> i) & 1u) mask |= 1u << extra_pos[i];
      }
      if (eval_mask(phi, inst.all_vars, mask)) extended = true;
    }
    if (!extended) return false;
  }
  return true;
}

bool prop_friendly_via_refinement(const Theory& gamma, const Formula& phi) {
  PropInstance inst = analyze(gamma, phi);
  std::vector<std::string> phi_vars = prop_vars(phi);
  std::vector<std::string> shared;
  std::set_intersection(inst.gamma_vars.begin(), inst.gamma_vars.end(), phi_vars.begin(),
                        phi_vars.end(), std::back_inserter(shared));
  if (shared.size() > 4) {
    throw Error(ErrorCode::TooManySharedVariables,
                "refinement enumeration caps out at 4 shared variables");
  }
  std::size_t rows = 1u << shared.size();
  auto shared_row = [&](const std::vector<std::string>& vars, std::uint32_t mask) {
    std::uint32_t row = 0;
    for (std::size_t i = 0; i < shared.size(); ++i) {
      auto it = std::lower_bound(vars.begin(), vars.end(), shared[i]);
      if ((mask >> (it - vars.begin())) & 1u) row |= 1u << i;
    }
    return row;
  };
  // Every boolean function over the shared variables is one candidate
  // refinement; phi's consequences among them must all be gamma's.
  for (std::uint64_t table = 0; table < (1ULL << rows); ++table) {
    bool phi_entails = true;
    for (std::uint32_t w = 0; w < (1u << phi_vars.size()) && phi_entails; ++w) {
      if (eval_mask(phi, phi_vars, w) && !((table >> shared_row(phi_vars, w)) & 1ULL))
        phi_entails = false;
    }
    if (!phi_entails) continue;
    for (std::uint32_t u = 0; u < (1u << inst.gamma_vars.size()); ++u) {
      if (gamma_true(inst, inst.gamma_vars, u) &&
          !((table >> shared_row(inst.gamma_vars, u)) & 1ULL)) {
        return false;  // a consequence of phi that gamma does not force
      }
    }
  }
  return true;
}

bool prop_consistency_characterization(const Theory& gamma, const Formula& phi) {
  PropInstance inst = analyze(gamma, phi);
  std::size_t ng = inst.gamma_vars.size();
  std::size_t na = inst.all_vars.size();
  for (std::uint32_t outer = 0; outer < (1u << ng); ++outer) {
    if (!gamma_true(inst, inst.gamma_vars, outer)) continue;
    // The complete description of this valuation, as a literal per variable.
    std::vector<std::pair<std::string, bool>> description;
    for (std::size_t i = 0; i < ng; ++i) {
      description.emplace_back(inst.gamma_vars[i], (outer >> i) & 1u);
    }
    bool consistent = false;
    for (std::uint32_t w = 0; w < (1u << na) && !consistent; ++w) {
      bool agrees = true;
      for (const auto& [name, val] : description) {
        auto it = std::lower_bound(inst.all_vars.begin(), inst.all_vars.end(), name);
        if (static_cast<bool>((w >> (it - inst.all_vars.begin())) & 1u) != val) {
          agrees = false;
          break;
        }
      }
      if (agrees && eval_mask(phi, inst.all_vars, w)) consistent = true;
    }
    if (!consistent) return false;
  }
  return true;
}

}  // namespace fmw
