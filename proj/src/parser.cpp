#include "fmw/parser.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace fmw {

namespace {

enum class Tok {
  End, LParen, RParen, Dot, Comma, Tilde, Amp, Pipe, Arrow, DArrow, Eq,
  Lower, Upper, KwForall, KwExists, KwTrue, KwFalse,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

SourceSpan span_at(const std::string& src, std::size_t begin, std::size_t end) {
  SourceSpan s;
  s.begin = begin;
  s.end = end;
  s.line = 1;
  s.column = 1;
  for (std::size_t i = 0; i < begin && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++s.line;
      s.column = 1;
    } else {
      ++s.column;
    }
  }
  return s;
}

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::size_t start = pos_;
    auto make = [&](Tok k, std::size_t len) {
      cur_ = Token{k, src_.substr(start, len), span_at(src_, start, start + len)};
      pos_ = start + len;
    };
    if (pos_ >= src_.size()) {
      cur_ = Token{Tok::End, "", span_at(src_, pos_, pos_)};
      return;
    }
    char c = src_[pos_];
    switch (c) {
      case '(': return make(Tok::LParen, 1);
      case ')': return make(Tok::RParen, 1);
      case '.': return make(Tok::Dot, 1);
      case ',': return make(Tok::Comma, 1);
      case '~': return make(Tok::Tilde, 1);
      case '&': return make(Tok::Amp, 1);
      case '|': return make(Tok::Pipe, 1);
      case '=': return make(Tok::Eq, 1);
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') return make(Tok::Arrow, 2);
        throw Error(ErrorCode::SyntaxError, "stray '-'", span_at(src_, pos_, pos_ + 1));
      case '<':
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == '-' && src_[pos_ + 2] == '>')
          return make(Tok::DArrow, 3);
        throw Error(ErrorCode::SyntaxError, "stray '<'", span_at(src_, pos_, pos_ + 1));
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      std::string word = src_.substr(pos_, end - pos_);
      Tok kind;
      if (word == "forall") kind = Tok::KwForall;
      else if (word == "exists") kind = Tok::KwExists;
      else if (word == "true") kind = Tok::KwTrue;
      else if (word == "false") kind = Tok::KwFalse;
      else if (std::isupper(static_cast<unsigned char>(c))) kind = Tok::Upper;
      else kind = Tok::Lower;
      cur_ = Token{kind, std::move(word), span_at(src_, pos_, end)};
      pos_ = end;
      return;
    }
    throw Error(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'",
                span_at(src_, pos_, pos_ + 1));
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  Token cur_;
};

class FormulaParser {
 public:
  FormulaParser(const std::string& src, EqualityMode mode) : lex_(src), mode_(mode) {}

  Formula parse() {
    Formula f = parse_iff();
    if (lex_.peek().kind != Tok::End) {
      throw Error(ErrorCode::SyntaxError, "trailing input after formula", lex_.peek().span);
    }
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::SyntaxError, what, lex_.peek().span);
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    if (lex_.peek().kind == Tok::DArrow) {
      lex_.take();
      return Formula::iff(std::move(lhs), parse_iff());
    }
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return Formula::implication(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.take();
      f = Formula::disjunction(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      f = Formula::conjunction(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    switch (lex_.peek().kind) {
      case Tok::Tilde:
        lex_.take();
        return Formula::negation(parse_unary());
      case Tok::KwForall:
      case Tok::KwExists: {
        bool universal = lex_.take().kind == Tok::KwForall;
        std::vector<std::string> vars;
        for (;;) {
          if (lex_.peek().kind != Tok::Lower) fail("expected a variable after quantifier");
          vars.push_back(lex_.take().text);
          if (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            continue;
          }
          break;
        }
        if (lex_.peek().kind != Tok::Dot) fail("expected '.' after quantified variables");
        lex_.take();
        // Scope runs to the end of the enclosing group.
        Formula body = parse_iff();
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
          body = universal ? Formula::forall(*it, std::move(body))
                           : Formula::exists(*it, std::move(body));
        }
        return body;
      }
      default:
        return parse_atom();
    }
  }

  Formula parse_atom() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::LParen: {
        lex_.take();
        Formula f = parse_iff();
        if (lex_.peek().kind != Tok::RParen) fail("expected ')'");
        lex_.take();
        return f;
      }
      case Tok::KwTrue:
        lex_.take();
        return Formula::verum();
      case Tok::KwFalse:
        lex_.take();
        return Formula::falsum();
      case Tok::Upper: {
        Token rel = lex_.take();
        std::vector<std::string> args;
        if (lex_.peek().kind == Tok::LParen) {
          lex_.take();
          if (lex_.peek().kind == Tok::RParen) {
            lex_.take();
          } else {
            for (;;) {
              if (lex_.peek().kind != Tok::Lower) fail("expected a variable argument");
              args.push_back(lex_.take().text);
              if (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                continue;
              }
              break;
            }
            if (lex_.peek().kind != Tok::RParen) fail("expected ')' after arguments");
            lex_.take();
          }
        }
        return Formula::atom(rel.text, std::move(args));
      }
      case Tok::Lower: {
        Token lhs = lex_.take();
        if (lex_.peek().kind != Tok::Eq) fail("expected '=' after variable");
        Token eq = lex_.take();
        if (mode_ == EqualityMode::Without) {
          throw Error(ErrorCode::EqualityForbidden,
                      "equality is not available in this language", eq.span);
        }
        if (lex_.peek().kind != Tok::Lower) fail("expected a variable after '='");
        Token rhs = lex_.take();
        return Formula::equals(lhs.text, rhs.text);
      }
      default:
        fail("expected a formula");
    }
  }

  Lexer lex_;
  EqualityMode mode_;
};

}  // namespace

Formula parse_formula(const std::string& text, EqualityMode mode) {
  return FormulaParser(text, mode).parse();
}

Theory parse_theory(const std::string& text) {
  // Directives apply to the whole file, so scan them first.
  std::vector<std::pair<int, std::string>> sentence_lines;
  Theory theory;
  EqualityMode mode = EqualityMode::With;
  {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::size_t first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      if (line[first] == '#') {
        std::istringstream dir(line.substr(first));
        std::string head;
        dir >> head;
        if (head == "#functional") {
          std::string name;
          int coord;
          if (!(dir >> name >> coord) || name.empty() ||
              !std::isupper(static_cast<unsigned char>(name[0]))) {
            throw Error(ErrorCode::SyntaxError,
                        "expected '#functional <Relation> <coordinate>' on line " +
                            std::to_string(lineno));
          }
          theory.functional_hints.emplace(name, coord);
        } else if (head == "#no-equality") {
          mode = EqualityMode::Without;
        }
        // Any other '#' line is a comment.
        continue;
      }
      std::size_t hash = line.find('#');
      std::string body = hash == std::string::npos ? line : line.substr(0, hash);
      if (body.find_first_not_of(" \t") == std::string::npos) continue;
      sentence_lines.emplace_back(lineno, body);
    }
  }
  for (const auto& [lineno, body] : sentence_lines) {
    Formula f = [&] {
      try {
        return parse_formula(body, mode);
      } catch (const Error& e) {
        if (e.span()) {
          SourceSpan s = *e.span();
          s.line = lineno;
          throw Error(e.code(), std::string(e.what()) + " (line " + std::to_string(lineno) + ")",
                      s);
        }
        throw;
      }
    }();
    auto frees = free_vars(f);
    if (!frees.empty()) {
      throw Error(ErrorCode::FreeVariableInSentence,
                  "free variable " + *frees.begin() + " on line " + std::to_string(lineno));
    }
    theory.sentences.push_back(std::move(f));
  }
  theory.vocabulary();  // validates hints against the sentences
  return theory;
}

namespace {

struct Symbols {
  const char* tilde;
  const char* amp;
  const char* pipe;
  const char* arrow;
  const char* darrow;
  const char* forall;
  const char* exists;
};

constexpr Symbols kAscii{"~", "&", "|", "->", "<->", "forall", "exists"};
constexpr Symbols kUnicode{"¬", "∧", "∨", "→", "↔", "∀", "∃"};

// Precedence levels: iff 1, implies 2, or 3, and 4, unary 5, atoms 6.
// `tail` is true when nothing follows this subformula in the current group,
// so an open-ended quantifier scope cannot capture trailing operands.
void print(std::ostream& os, const Formula& f, int min_level, bool tail, const Symbols& sym) {
  auto parens = [&](auto&& inner) {
    os << '(';
    inner();
    os << ')';
  };
  switch (f.kind()) {
    case Formula::Kind::True:
      os << "true";
      return;
    case Formula::Kind::False:
      os << "false";
      return;
    case Formula::Kind::Atom:
      os << f.relation_name();
      if (!f.terms().empty()) {
        os << '(';
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          if (i) os << ',';
          os << f.terms()[i];
        }
        os << ')';
      }
      return;
    case Formula::Kind::Equals:
      os << f.terms()[0] << " = " << f.terms()[1];
      return;
    case Formula::Kind::Not: {
      const Formula& c = f.child(0);
      os << sym.tilde;
      if (c.kind() == Formula::Kind::Equals) {
        parens([&] { print(os, c, 1, true, sym); });
      } else {
        print(os, c, 5, tail, sym);
      }
      return;
    }
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists: {
      auto emit = [&](bool inner_tail) {
        Formula::Kind k = f.kind();
        os << (k == Formula::Kind::ForAll ? sym.forall : sym.exists) << ' ';
        os << f.bound_var();
        const Formula* body = &f.child(0);
        while (body->kind() == k) {  // collapse same-kind runs into the list form
          os << ", " << body->bound_var();
          body = &body->child(0);
        }
        os << ". ";
        print(os, *body, 1, inner_tail, sym);
      };
      if (tail) emit(true);
      else parens([&] { emit(true); });
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      int level;
      const char* op;
      bool right_assoc;
      switch (f.kind()) {
        case Formula::Kind::Iff: level = 1; op = sym.darrow; right_assoc = true; break;
        case Formula::Kind::Implies: level = 2; op = sym.arrow; right_assoc = true; break;
        case Formula::Kind::Or: level = 3; op = sym.pipe; right_assoc = false; break;
        default: level = 4; op = sym.amp; right_assoc = false; break;
      }
      bool need = min_level > level;
      auto emit = [&](bool inner_tail) {
        print(os, f.child(0), right_assoc ? level + 1 : level, false, sym);
        os << ' ' << op << ' ';
        print(os, f.child(1), right_assoc ? level : level + 1, inner_tail, sym);
      };
      if (need) parens([&] { emit(true); });
      else emit(tail);
      return;
    }
  }
}

}  // namespace

std::string pretty_print(const Formula& f, bool unicode) {
  std::ostringstream os;
  print(os, f, 1, true, unicode ? kUnicode : kAscii);
  return os.str();
}

FiniteStructure parse_structure(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SyntaxError, std::string("structure file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("domain_size") || !doc.contains("relations")) {
    throw Error(ErrorCode::SyntaxError,
                "structure file must be an object with domain_size and relations");
  }
  if (!doc["domain_size"].is_number_integer() || doc["domain_size"].get<int>() < 1) {
    throw Error(ErrorCode::SyntaxError, "domain_size must be a positive integer");
  }
  FiniteStructure s;
  s.domain_size = doc["domain_size"].get<int>();
  s.signature.equality_enabled = true;
  if (!doc["relations"].is_object()) {
    throw Error(ErrorCode::SyntaxError, "relations must be an object");
  }
  for (const auto& [name, rel] : doc["relations"].items()) {
    if (name.empty() || !std::isupper(static_cast<unsigned char>(name[0]))) {
      throw Error(ErrorCode::SyntaxError, "relation names start uppercase: " + name);
    }
    if (!rel.is_object() || !rel.contains("arity") || !rel.contains("tuples") ||
        !rel["arity"].is_number_integer() || rel["arity"].get<int>() < 0 ||
        !rel["tuples"].is_array()) {
      throw Error(ErrorCode::SyntaxError, "relation " + name + " needs arity and tuples");
    }
    int ar = rel["arity"].get<int>();
    s.signature.symbols[name] = ar;
    auto& table = s.relations[name];
    for (const auto& jt : rel["tuples"]) {
      if (!jt.is_array() || static_cast<int>(jt.size()) != ar) {
        throw Error(ErrorCode::ArityMismatch,
                    "tuple of wrong length in relation " + name);
      }
      std::vector<int> t;
      for (const auto& v : jt) {
        if (!v.is_number_integer()) {
          throw Error(ErrorCode::SyntaxError, "tuple entries must be integers in " + name);
        }
        int x = v.get<int>();
        if (x < 0 || x >= s.domain_size) {
          throw Error(ErrorCode::TupleOutOfRange,
                      "element " + std::to_string(x) + " outside domain in relation " + name);
        }
        t.push_back(x);
      }
      table.insert(std::move(t));
    }
  }
  s.validate();
  return s;
}

std::string structure_to_json(const FiniteStructure& s) {
  nlohmann::json doc;
  doc["domain_size"] = s.domain_size;
  doc["relations"] = nlohmann::json::object();
  for (const auto& [name, table] : s.relations) {
    nlohmann::json rel;
    rel["arity"] = s.signature.arity(name);
    rel["tuples"] = nlohmann::json::array();
    for (const auto& t : table) rel["tuples"].push_back(t);
    doc["relations"][name] = std::move(rel);
  }
  return doc.dump();
}

}  // namespace fmw
