// Concrete syntax: formulas, theory files, structure files.
//
// Formula grammar, loosest to tightest binding:
//   <->   (right associative)
//   ->    (right associative)
//   |     (left associative)
//   &     (left associative)
//   ~, quantifiers (prefix; a quantifier's scope runs to the end of the
//                   enclosing group, so `forall x. P(x) -> Q` means
//                   forall x. (P(x) -> Q); parenthesize to stop earlier)
// `forall x, y. body` abbreviates nested single-variable quantifiers.
// Relation symbols start uppercase, variables lowercase; a bare uppercase
// identifier is a 0-ary atom. `true` and `false` are constants. `x = y` is
// the equality atom.
//
// Theory files: one sentence per line; `#` starts a comment; directive lines
// `#functional <Name> <coord>` and `#no-equality` configure the theory.
//
// Structure files: JSON {"domain_size": n, "relations": {name: {"arity": k,
// "tuples": [[...], ...]}}}. Serialization is canonical: sorted keys, sorted
// tuples.
#pragma once

#include <string>

#include "fmw/logic.hpp"
#include "fmw/structure.hpp"

namespace fmw {

enum class EqualityMode { With, Without };

// Throws ErrorCode::SyntaxError (with a source span) on malformed input and
// ErrorCode::EqualityForbidden when `=` occurs under EqualityMode::Without.
Formula parse_formula(const std::string& text, EqualityMode mode = EqualityMode::With);

Theory parse_theory(const std::string& text);

// Inverse of parse_formula up to insignificant parentheses:
// parse_formula(pretty_print(f)) == f structurally. With unicode set, logical
// symbols are rendered as their usual glyphs (output only; not parseable).
std::string pretty_print(const Formula& f, bool unicode = false);

FiniteStructure parse_structure(const std::string& json_text);

std::string structure_to_json(const FiniteStructure& s);

}  // namespace fmw
