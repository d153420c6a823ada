// Command-line front end.
//
// Subcommands map one-to-one onto the library entry points; every command
// prints a single report (human-readable by default, canonical JSON with
// --json) and encodes its outcome in the exit status:
//
//   0  the command ran and produced a verdict (whatever the verdict is)
//   1  usage or input error (bad flags, unparsable formula, missing file)
//   2  the node budget was exhausted before an answer was reached
//   3  a reproduction entry failed its checks
#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fmw/corpus.hpp"
#include "fmw/errors.hpp"
#include "fmw/friendliness.hpp"
#include "fmw/games.hpp"
#include "fmw/logic.hpp"
#include "fmw/parser.hpp"
#include "fmw/propositional.hpp"
#include "fmw/report.hpp"
#include "fmw/semantics.hpp"
#include "fmw/structure.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw fmw::Error(fmw::ErrorCode::UsageError, "cannot open file: " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Formula and theory arguments accept either a file path or inline text.
// A path wins when the file exists; anything else is treated as source text.
std::string load_text(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    return read_file(arg);
  }
  return arg;
}

fmw::Formula load_formula(const std::string& arg, bool no_equality) {
  const auto mode =
      no_equality ? fmw::EqualityMode::Without : fmw::EqualityMode::With;
  return fmw::parse_formula(load_text(arg), mode);
}

// Inline theories separate sentences with ';' so they fit on one shell line.
fmw::Theory load_theory(const std::string& arg, bool no_equality) {
  std::string text = load_text(arg);
  std::replace(text.begin(), text.end(), ';', '\n');
  if (no_equality) {
    text = "#no-equality\n" + text;
  }
  return fmw::parse_theory(text);
}

fmw::FiniteStructure load_structure(const std::string& path) {
  return fmw::parse_structure(read_file(path));
}

// "at-least:k" appends the size-k fragment of the Dedekind schema.
void apply_schema(fmw::Theory& gamma, const std::string& schema) {
  const std::string prefix = "at-least:";
  if (schema.rfind(prefix, 0) != 0) {
    throw fmw::Error(fmw::ErrorCode::UsageError,
                     "unknown schema (expected at-least:<k>): " + schema);
  }
  int k = 0;
  try {
    std::size_t used = 0;
    k = std::stoi(schema.substr(prefix.size()), &used);
    if (used != schema.size() - prefix.size()) {
      throw std::invalid_argument("trailing characters");
    }
  } catch (const std::exception&) {
    throw fmw::Error(fmw::ErrorCode::UsageError,
                     "schema parameter must be a positive integer: " + schema);
  }
  if (k < 1) {
    throw fmw::Error(fmw::ErrorCode::UsageError,
                     "schema parameter must be a positive integer: " + schema);
  }
  const fmw::Theory fragment = fmw::at_least_fragment(k);
  for (const auto& f : fragment.sentences) {
    gamma.sentences.push_back(f);
  }
}

// The thread-count override is validated and echoed even though every
// computation is deterministic and single-result; the setting may only ever
// change speed, never answers.
std::optional<int> thread_override() {
  const char* raw = std::getenv("FMW_THREADS");
  if (raw == nullptr || *raw == '\0') {
    return std::nullopt;
  }
  const std::string text(raw);
  try {
    std::size_t used = 0;
    const int n = std::stoi(text, &used);
    if (used != text.size() || n < 1) {
      throw std::invalid_argument("not a positive integer");
    }
    return n;
  } catch (const std::exception&) {
    throw fmw::Error(fmw::ErrorCode::UsageError,
                     "FMW_THREADS must be a positive integer, got: " + text);
  }
}

json symbols_json(const fmw::Signature& sig) {
  json out = json::object();
  for (const auto& [name, arity] : sig.symbols) {
    out[name] = arity;
  }
  return out;
}

json witness_json(const fmw::Witness& w) {
  json out = json::object();
  out["base"] = fmw::structure_to_json_value(w.base);
  out["relabeled"] = fmw::structure_to_json_value(w.a_prime);
  out["expanded"] = fmw::structure_to_json_value(w.a_dprime);
  return out;
}

void emit(const fmw::Report& report, bool as_json) {
  if (as_json) {
    std::cout << report.json_text() << "\n";
  } else {
    std::cout << report.human_text();
  }
}

struct CommonFlags {
  bool json = false;
  bool no_equality = false;
  long long node_budget = 0;  // 0 keeps the library default
  std::string schema;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_schema = false) {
  cmd->add_flag("--json", flags.json, "emit the report as canonical JSON");
  cmd->add_flag("--no-equality", flags.no_equality,
                "treat the vocabulary as equality-free");
  cmd->add_option("--node-budget", flags.node_budget,
                  "abort with exit code 2 after this many search nodes");
  if (with_schema) {
    cmd->add_option("--schema", flags.schema,
                    "append a sentence schema fragment (at-least:<k>)");
  }
}

fmw::SearchLimits make_limits(const CommonFlags& flags, long long* spent) {
  fmw::SearchLimits limits;
  if (flags.node_budget > 0) {
    limits.node_budget = flags.node_budget;
  }
  limits.spent = spent;
  return limits;
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += argv[i];
  }
  return out;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  long long ms() const {
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::milliseconds>(now - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

int run(int argc, char** argv) {
  CLI::App app{"finite-model workbench for the friendliness relation"};
  app.require_subcommand(1);
  const std::string command_echo = join_args(argc, argv);
  const std::optional<int> threads = thread_override();

  auto stamp = [&](fmw::Report& report) {
    if (threads.has_value()) {
      report.body["threads"] = *threads;
    }
  };

  int exit_code = 0;

  // ---- parse ------------------------------------------------------------
  struct {
    CommonFlags common;
    std::string formula;
    bool as_theory = false;
  } parse_opts;
  {
    auto* cmd = app.add_subcommand(
        "parse", "parse a formula (or theory) and echo its normal form");
    add_common(cmd, parse_opts.common);
    cmd->add_option("--formula", parse_opts.formula,
                    "formula text or path to a formula file")
        ->required();
    cmd->add_flag("--theory", parse_opts.as_theory,
                  "treat the input as a theory (';' or newline separated)");
    cmd->callback([&] {
      fmw::Report report = fmw::make_report(command_echo);
      if (parse_opts.as_theory) {
        const fmw::Theory theory =
            load_theory(parse_opts.formula, parse_opts.common.no_equality);
        json sentences = json::array();
        for (const auto& f : theory.sentences) {
          sentences.push_back(fmw::pretty_print(f));
        }
        report.body["sentences"] = sentences;
        const fmw::Signature sig = theory.vocabulary();
        report.body["symbols"] = symbols_json(sig);
        report.body["equality"] = sig.equality_enabled;
        json hints = json::array();
        for (const auto& [name, coord] : theory.functional_hints) {
          json one = json::object();
          one["relation"] = name;
          one["output_coordinate"] = coord;
          hints.push_back(one);
        }
        report.body["functional_hints"] = hints;
      } else {
        const fmw::Formula f =
            load_formula(parse_opts.formula, parse_opts.common.no_equality);
        report.body["pretty"] = fmw::pretty_print(f);
        report.body["quantifier_rank"] = fmw::quantifier_rank(f);
        report.body["symbols"] = symbols_json(fmw::vocabulary(f));
        report.body["equality"] = fmw::uses_equality(f);
        json free_vars = json::array();
        for (const auto& v : fmw::free_vars(f)) {
          free_vars.push_back(v);
        }
        report.body["free_variables"] = free_vars;
      }
      stamp(report);
      emit(report, parse_opts.common.json);
    });
  }

  // ---- eval -------------------------------------------------------------
  struct {
    CommonFlags common;
    std::string structure;
    std::string formula;
  } eval_opts;
  {
    auto* cmd = app.add_subcommand(
        "eval", "evaluate a sentence in a finite structure");
    add_common(cmd, eval_opts.common);
    cmd->add_option("--structure", eval_opts.structure,
                    "path to a structure file")
        ->required();
    cmd->add_option("--formula", eval_opts.formula,
                    "sentence text or path to a formula file")
        ->required();
    cmd->callback([&] {
      const fmw::FiniteStructure a = load_structure(eval_opts.structure);
      const fmw::Formula f =
          load_formula(eval_opts.formula, eval_opts.common.no_equality);
      fmw::Report report = fmw::make_report(command_echo);
      const bool value = fmw::eval(a, f, {});
      report.body["value"] = value;
      fmw::set_verdict(report, value ? "satisfied" : "not-satisfied", true);
      stamp(report);
      emit(report, eval_opts.common.json);
    });
  }

  // ---- models -----------------------------------------------------------
  struct {
    CommonFlags common;
    std::string gamma;
    int size = 1;
    int max_shown = 10;
  } models_opts;
  {
    auto* cmd = app.add_subcommand(
        "models", "enumerate models of a theory at a fixed domain size, one "
                  "representative per isomorphism class");
    add_common(cmd, models_opts.common, /*with_schema=*/true);
    cmd->add_option("--gamma", models_opts.gamma,
                    "theory: path to a file, or inline sentences joined by ';'")
        ->required();
    cmd->add_option("--size", models_opts.size, "domain size")->required();
    cmd->add_option("--max", models_opts.max_shown,
                    "cap on the number of models included in the report");
    cmd->callback([&] {
      fmw::Theory gamma =
          load_theory(models_opts.gamma, models_opts.common.no_equality);
      if (!models_opts.common.schema.empty()) {
        apply_schema(gamma, models_opts.common.schema);
      }
      long long spent = 0;
      const fmw::SearchLimits limits = make_limits(models_opts.common, &spent);
      Timer timer;
      const auto reps =
          fmw::enumerate_models(gamma, models_opts.size, limits);
      fmw::Report report = fmw::make_report(command_echo);
      report.body["count"] = reps.size();
      json shown = json::array();
      for (const auto& m : reps) {
        if (static_cast<int>(shown.size()) >= models_opts.max_shown) {
          break;
        }
        shown.push_back(fmw::structure_to_json_value(m));
      }
      report.body["models"] = shown;
      report.body["nodes"] = spent;
      report.body["ms"] = timer.ms();
      fmw::set_verdict(report,
                       reps.empty() ? "no-models-at-size" : "has-models",
                       true);
      stamp(report);
      emit(report, models_opts.common.json);
    });
  }

  // ---- spectrum ---------------------------------------------------------
  struct {
    CommonFlags common;
    std::string formula;
    int max_size = 4;
  } spectrum_opts;
  {
    auto* cmd = app.add_subcommand(
        "spectrum", "list the domain sizes up to a cap at which a sentence "
                    "has a model");
    add_common(cmd, spectrum_opts.common);
    cmd->add_option("--formula", spectrum_opts.formula,
                    "sentence text or path to a formula file")
        ->required();
    cmd->add_option("--max-size", spectrum_opts.max_size,
                    "largest domain size to examine");
    cmd->callback([&] {
      const fmw::Formula f =
          load_formula(spectrum_opts.formula, spectrum_opts.common.no_equality);
      long long spent = 0;
      const fmw::SearchLimits limits =
          make_limits(spectrum_opts.common, &spent);
      Timer timer;
      const auto sizes = fmw::spectrum(f, spectrum_opts.max_size, limits);
      fmw::Report report = fmw::make_report(command_echo);
      json arr = json::array();
      for (int n : sizes) {
        arr.push_back(n);
      }
      report.body["spectrum"] = arr;
      report.body["max_size"] = spectrum_opts.max_size;
      report.body["nodes"] = spent;
      report.body["ms"] = timer.ms();
      fmw::set_verdict(report, sizes.empty() ? "empty-up-to-max" : "nonempty",
                       true);
      stamp(report);
      emit(report, spectrum_opts.common.json);
    });
  }

  // ---- entails ----------------------------------------------------------
  struct {
    CommonFlags common;
    std::string gamma;
    std::string phi;
    int max_size = 3;
  } entails_opts;
  {
    auto* cmd = app.add_subcommand(
        "entails", "search for a countermodel to a classical entailment "
                   "among structures up to a size bound");
    add_common(cmd, entails_opts.common, /*with_schema=*/true);
    cmd->add_option("--gamma", entails_opts.gamma,
                    "premiss theory: file path or inline ';'-joined sentences")
        ->required();
    cmd->add_option("--phi", entails_opts.phi,
                    "conclusion sentence: text or file path")
        ->required();
    cmd->add_option("--max-size", entails_opts.max_size,
                    "largest countermodel size to try");
    cmd->callback([&] {
      fmw::Theory gamma =
          load_theory(entails_opts.gamma, entails_opts.common.no_equality);
      if (!entails_opts.common.schema.empty()) {
        apply_schema(gamma, entails_opts.common.schema);
      }
      const fmw::Formula phi =
          load_formula(entails_opts.phi, entails_opts.common.no_equality);
      long long spent = 0;
      const fmw::SearchLimits limits = make_limits(entails_opts.common, &spent);
      Timer timer;
      const fmw::BoundedEntailment result =
          fmw::entails_bounded(gamma, phi, entails_opts.max_size, limits);
      fmw::Report report = fmw::make_report(command_echo);
      report.body["max_size"] = entails_opts.max_size;
      report.body["nodes"] = spent;
      report.body["ms"] = timer.ms();
      if (const auto* refuted = std::get_if<fmw::Refuted>(&result)) {
        report.body["countermodel"] =
            fmw::structure_to_json_value(refuted->countermodel);
        fmw::set_verdict(report, fmw::kVerdictRefuted, true);
      } else {
        fmw::set_verdict(report, fmw::kVerdictEntailed, false);
      }
      stamp(report);
      emit(report, entails_opts.common.json);
    });
  }

  // ---- friendly-prop ----------------------------------------------------
  struct {
    CommonFlags common;
    std::string gamma;
    std::string phi;
  } fp_opts;
  {
    auto* cmd = app.add_subcommand(
        "friendly-prop", "decide friendliness exactly for propositional "
                         "(quantifier-free, variable-free) inputs");
    add_common(cmd, fp_opts.common);
    cmd->add_option("--gamma", fp_opts.gamma,
                    "premiss theory: file path or inline ';'-joined sentences")
        ->required();
    cmd->add_option("--phi", fp_opts.phi,
                    "conclusion sentence: text or file path")
        ->required();
    cmd->callback([&] {
      const fmw::Theory gamma =
          load_theory(fp_opts.gamma, fp_opts.common.no_equality);
      const fmw::Formula phi =
          load_formula(fp_opts.phi, fp_opts.common.no_equality);
      Timer timer;
      const bool friendly = fmw::prop_friendly(gamma, phi);
      fmw::Report report = fmw::make_report(command_echo);
      report.body["ms"] = timer.ms();
      fmw::set_verdict(report, friendly ? "friendly" : "not-friendly", true);
      stamp(report);
      emit(report, fp_opts.common.json);
    });
  }

  // ---- friendly ---------------------------------------------------------
  struct {
    CommonFlags common;
    std::string gamma;
    std::string phi;
    std::string relation = "r3";
    std::string expansion = "s1";
    int base_bound = 3;
    int ext_bound = 0;
    int max_witnesses = 5;
  } fr_opts;
  {
    auto* cmd = app.add_subcommand(
        "friendly", "bounded witness search for the friendliness relation "
                    "over finite structures");
    add_common(cmd, fr_opts.common, /*with_schema=*/true);
    cmd->add_option("--gamma", fr_opts.gamma,
                    "premiss theory: file path or inline ';'-joined sentences");
    cmd->add_option("--phi", fr_opts.phi,
                    "conclusion sentence: text or file path")
        ->required();
    cmd->add_option("--relation", fr_opts.relation,
                    "base-structure relation: r1, r2, r3, or r4");
    cmd->add_option("--expansion", fr_opts.expansion,
                    "expansion relation: s1, s2, or s3");
    cmd->add_option("--base-bound", fr_opts.base_bound,
                    "largest base-structure domain size to examine");
    cmd->add_option("--ext-bound", fr_opts.ext_bound,
                    "largest domain growth allowed under s2/s3 (ignored "
                    "under s1)");
    cmd->add_option("--max-witnesses", fr_opts.max_witnesses,
                    "cap on the number of witnesses included in the report");
    cmd->callback([&] {
      if (fr_opts.gamma.empty() && fr_opts.common.schema.empty()) {
        throw fmw::Error(fmw::ErrorCode::UsageError,
                         "friendly needs --gamma, --schema, or both");
      }
      fmw::Theory gamma;
      if (!fr_opts.gamma.empty()) {
        gamma = load_theory(fr_opts.gamma, fr_opts.common.no_equality);
      }
      if (!fr_opts.common.schema.empty()) {
        apply_schema(gamma, fr_opts.common.schema);
      }
      const fmw::Formula phi =
          load_formula(fr_opts.phi, fr_opts.common.no_equality);
      const auto base = fmw::base_relation_from_string(fr_opts.relation);
      if (!base.has_value()) {
        throw fmw::Error(fmw::ErrorCode::UsageError,
                         "unknown base relation (expected r1..r4): " +
                             fr_opts.relation);
      }
      const auto expansion =
          fmw::expansion_relation_from_string(fr_opts.expansion);
      if (!expansion.has_value()) {
        throw fmw::Error(fmw::ErrorCode::UsageError,
                         "unknown expansion relation (expected s1..s3): " +
                             fr_opts.expansion);
      }
      fmw::FriendlinessConfig cfg;
      cfg.base = *base;
      cfg.expansion = *expansion;
      cfg.base_bound = fr_opts.base_bound;
      cfg.ext_bound = fr_opts.ext_bound;
      cfg.equality = !fr_opts.common.no_equality;
      long long spent = 0;
      const fmw::SearchLimits limits = make_limits(fr_opts.common, &spent);
      Timer timer;
      const fmw::FriendlinessOutcome outcome =
          fmw::bounded_friendly(gamma, phi, cfg, limits);
      fmw::Report report = fmw::make_report(command_echo);
      report.body["relation"] = fmw::to_string(cfg.base);
      report.body["expansion"] = fmw::to_string(cfg.expansion);
      report.body["base_bound"] = cfg.base_bound;
      report.body["ext_bound"] = cfg.ext_bound;
      report.body["equality"] = cfg.equality;
      report.body["nodes"] = spent;
      report.body["ms"] = timer.ms();
      if (outcome.friendly) {
        report.body["witness_count"] = outcome.witnesses.size();
        json shown = json::array();
        for (const auto& w : outcome.witnesses) {
          if (static_cast<int>(shown.size()) >= fr_opts.max_witnesses) {
            break;
          }
          shown.push_back(witness_json(w));
        }
        report.body["witnesses"] = shown;
        fmw::set_verdict(report, fmw::kVerdictFriendly, outcome.conclusive);
      } else {
        if (outcome.refuting_base.has_value()) {
          report.body["refuting_base"] =
              fmw::structure_to_json_value(*outcome.refuting_base);
        }
        fmw::set_verdict(report, fmw::kVerdictNotFriendly,
                         outcome.conclusive);
      }
      stamp(report);
      emit(report, fr_opts.common.json);
    });
  }

  // ---- ef ---------------------------------------------------------------
  struct {
    CommonFlags common;
    std::string left;
    std::string right;
    int rounds = 2;
  } ef_opts;
  {
    auto* cmd = app.add_subcommand(
        "ef", "decide round-bounded back-and-forth equivalence of two finite "
              "structures");
    add_common(cmd, ef_opts.common);
    cmd->add_option("--left", ef_opts.left, "path to the first structure file")
        ->required();
    cmd->add_option("--right", ef_opts.right,
                    "path to the second structure file")
        ->required();
    cmd->add_option("--rounds", ef_opts.rounds, "number of rounds");
    cmd->callback([&] {
      fmw::FiniteStructure left = load_structure(ef_opts.left);
      fmw::FiniteStructure right = load_structure(ef_opts.right);
      if (ef_opts.common.no_equality) {
        left.signature.equality_enabled = false;
        right.signature.equality_enabled = false;
      }
      Timer timer;
      const bool same = fmw::ef_equivalent(left, right, ef_opts.rounds);
      fmw::Report report = fmw::make_report(command_echo);
      report.body["rounds"] = ef_opts.rounds;
      if (!same) {
        const auto sentence =
            fmw::distinguishing_sentence(left, right, ef_opts.rounds);
        if (sentence.has_value()) {
          report.body["distinguishing_sentence"] =
              fmw::pretty_print(*sentence);
          report.body["holds_in_left"] = fmw::eval(left, *sentence, {});
          report.body["holds_in_right"] = fmw::eval(right, *sentence, {});
        }
      }
      report.body["ms"] = timer.ms();
      fmw::set_verdict(
          report, same ? "equivalent-at-rank" : "distinguishable-at-rank",
          true);
      stamp(report);
      emit(report, ef_opts.common.json);
    });
  }

  // ---- beth -------------------------------------------------------------
  struct {
    CommonFlags common;
    std::string gamma;
    std::string predicate;
    int arity = 1;
    int bound = 3;
    int depth = 2;
    int entail_bound = 4;
  } beth_opts;
  {
    auto* cmd = app.add_subcommand(
        "beth", "test bounded implicit definability of a predicate and hunt "
                "for an explicit definition");
    add_common(cmd, beth_opts.common);
    cmd->add_option("--gamma", beth_opts.gamma,
                    "theory: file path or inline ';'-joined sentences")
        ->required();
    cmd->add_option("--predicate", beth_opts.predicate,
                    "relation symbol whose definability is tested")
        ->required();
    cmd->add_option("--arity", beth_opts.arity, "arity of the predicate");
    cmd->add_option("--bound", beth_opts.bound,
                    "largest domain size examined for the implicit test");
    cmd->add_option("--depth", beth_opts.depth,
                    "connective depth cap for candidate definitions");
    cmd->add_option("--entail-bound", beth_opts.entail_bound,
                    "countermodel size bound when certifying a candidate");
    cmd->callback([&] {
      const fmw::Theory gamma =
          load_theory(beth_opts.gamma, beth_opts.common.no_equality);
      long long spent = 0;
      const fmw::SearchLimits limits = make_limits(beth_opts.common, &spent);
      Timer timer;
      const fmw::ImplicitCheck implicit = fmw::implicitly_defines(
          gamma, beth_opts.predicate, beth_opts.arity, beth_opts.bound,
          limits);
      fmw::Report report = fmw::make_report(command_echo);
      report.body["predicate"] = beth_opts.predicate;
      report.body["arity"] = beth_opts.arity;
      report.body["bound"] = beth_opts.bound;
      if (implicit.defined_up_to_bound) {
        const auto definition = fmw::find_explicit_definition(
            gamma, beth_opts.predicate, beth_opts.arity, beth_opts.depth,
            beth_opts.entail_bound, limits);
        if (definition.has_value()) {
          report.body["definition"] = fmw::pretty_print(*definition);
          report.body["definition_certified_to"] = beth_opts.entail_bound;
        } else {
          report.body["definition"] = nullptr;
        }
        fmw::set_verdict(report, "implicitly-defined-up-to-bound", false);
      } else {
        if (implicit.counterexample.has_value()) {
          report.body["counterexample_left"] =
              fmw::structure_to_json_value(implicit.counterexample->first);
          report.body["counterexample_right"] =
              fmw::structure_to_json_value(implicit.counterexample->second);
        }
        fmw::set_verdict(report, "not-implicitly-defined", true);
      }
      report.body["nodes"] = spent;
      report.body["ms"] = timer.ms();
      stamp(report);
      emit(report, beth_opts.common.json);
    });
  }

  // ---- repro ------------------------------------------------------------
  struct {
    CommonFlags common;
    std::string name;
    bool all = false;
    bool list = false;
  } repro_opts;
  {
    auto* cmd = app.add_subcommand(
        "repro", "run a self-contained reproduction of a headline result");
    add_common(cmd, repro_opts.common);
    cmd->add_option("name", repro_opts.name, "reproduction entry to run");
    cmd->add_flag("--all", repro_opts.all, "run every reproduction entry");
    cmd->add_flag("--list", repro_opts.list, "list the available entries");
    cmd->callback([&] {
      long long spent = 0;
      const fmw::SearchLimits limits = make_limits(repro_opts.common, &spent);
      if (repro_opts.list) {
        fmw::Report report = fmw::make_report(command_echo);
        json entries = json::array();
        for (const auto& entry : fmw::repro_registry()) {
          json one = json::object();
          one["name"] = entry.name;
          one["claim"] = entry.claim;
          entries.push_back(one);
        }
        report.body["entries"] = entries;
        stamp(report);
        emit(report, repro_opts.common.json);
        return;
      }
      if (repro_opts.all) {
        json entries = json::array();
        bool all_passed = true;
        std::ostringstream human;
        for (const auto& entry : fmw::repro_registry()) {
          Timer timer;
          fmw::Report one = fmw::run_repro(entry.name, limits);
          one.body["ms"] = timer.ms();
          const bool ok = one.passed();
          all_passed = all_passed && ok;
          entries.push_back(one.body);
          human << (ok ? "PASS" : "FAIL") << "  " << entry.name << "  ("
                << timer.ms() << " ms)\n";
        }
        if (repro_opts.common.json) {
          json wrapper = json::object();
          wrapper["schema"] = 1;
          wrapper["command"] = command_echo;
          wrapper["entries"] = entries;
          wrapper["verdict"] =
              all_passed ? fmw::kVerdictPass : fmw::kVerdictFail;
          if (threads.has_value()) {
            wrapper["threads"] = *threads;
          }
          std::cout << wrapper.dump() << "\n";
        } else {
          std::cout << human.str();
          std::cout << (all_passed ? "all reproductions passed"
                                   : "some reproductions FAILED")
                    << "\n";
        }
        if (!all_passed) {
          exit_code = 3;
        }
        return;
      }
      if (repro_opts.name.empty()) {
        std::string names;
        for (const auto& entry : fmw::repro_registry()) {
          if (!names.empty()) {
            names += ", ";
          }
          names += entry.name;
        }
        throw fmw::Error(fmw::ErrorCode::UsageError,
                         "repro needs an entry name or --all; entries: " +
                             names);
      }
      Timer timer;
      fmw::Report report = fmw::run_repro(repro_opts.name, limits);
      report.body["ms"] = timer.ms();
      stamp(report);
      emit(report, repro_opts.common.json);
      if (!report.passed()) {
        exit_code = 3;
      }
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every flag/subcommand mistake is a plain
    // usage error regardless of which internal code the parser assigned it
    return app.exit(e) == 0 ? 0 : 1;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fmw::Error& e) {
    std::cerr << "error: " << e.what();
    if (e.span().has_value()) {
      std::cerr << " (line " << e.span()->line << ", column "
                << e.span()->column << ")";
    }
    std::cerr << "\n";
    return e.code() == fmw::ErrorCode::ResourceBudgetExceeded ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
