#include "freqsynth/cli.hpp"

#include "freqsynth/calculus.hpp"
#include "freqsynth/dgrma.hpp"
#include "freqsynth/lasso.hpp"
#include "freqsynth/parser.hpp"
#include "freqsynth/synthesis.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace freqsynth {

namespace {

struct Config {
  std::string formula_text;
  std::string formula_file;
  std::string model_file;
  std::string threshold = "0";
  bool strict = false;
  std::string stem;
  std::string loop;
  std::uint64_t seed = 1;
  std::uint64_t steps = 100000;
  std::uint64_t episodes = 1;
  unsigned jobs = 1;
  std::size_t max_states = kDefaultMaxStates;
  std::uint64_t epoch_cap = EpochSchedule{}.cap;
  std::string dot;
  bool export_slaves = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

Formula load_formula(const Config& c) {
  std::string text;
  if (!c.formula_file.empty()) {
    if (!c.formula_text.empty()) throw UsageError("--formula and --formula-file are exclusive");
    text = read_file(c.formula_file);
  } else {
    text = c.formula_text;
  }
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw UsageError("no formula given");
  Formula f = parse_formula(text);
  if (!in_fragment(f)) throw UsageError("formula " + to_string(f) + " is outside the supported fragment");
  return f;
}

ParsedModel load_model(const Config& c) {
  if (c.model_file.empty()) throw UsageError("--model is required");
  return load_mdp(c.model_file);
}

SynthesisOptions synthesis_options(const Config& c) {
  SynthesisOptions o;
  try {
    o.threshold = parse_rational(c.threshold);
  } catch (const std::exception&) {
    throw UsageError("malformed threshold '" + c.threshold + "'");
  }
  if (o.threshold < 0 || o.threshold > 1) throw UsageError("threshold " + c.threshold + " is outside [0,1]");
  o.strict = c.strict;
  o.max_states = c.max_states;
  o.analysis.jobs = c.jobs == 0 ? 1 : c.jobs;
  o.analysis.schedule.cap = c.epoch_cap;
  return o;
}

int cmd_synth(const Config& c, std::ostream& out) {
  auto model = load_model(c);
  Formula f = load_formula(c);
  auto res = synthesize(model.mdp, model.valuation, f, synthesis_options(c));
  out << format_report(res);
  if (!c.dot.empty()) write_file(c.dot, product_to_dot(res));
  return res.report.threshold_met ? 0 : 1;
}

int cmd_automaton(const Config& c, std::ostream& out) {
  Formula f = load_formula(c);
  DgrmaOptions o;
  o.max_states = c.max_states;
  Dgrma a = build_dgrma(f, formula_alphabet(f), o);
  out << "formula: " << f << '\n';
  out << "master_states: " << a.master.size() << '\n';
  out << "automaton_states: " << a.lts.size() << '\n';
  out << "recurrence_formulas: " << a.rec.size() << '\n';
  out << "pairs: " << a.pairs.size() << '\n';
  out << acceptance_dump(a);
  std::string master = master_to_dot(a.master);
  std::string product = dgrma_to_dot(a);
  if (c.dot.empty()) {
    out << master << product;
  } else {
    write_file(c.dot, product);
    write_file(c.dot + ".master.dot", master);
  }
  if (c.export_slaves) {
    for (std::size_t i = 0; i < a.slaves.size(); ++i) {
      const auto& s = a.slaves[i];
      std::string text = slave_to_dot(s.slave);
      text += s.kind == RecKind::Frequency ? count_lts_to_dot(s.slave, s.counts) : token_lts_to_dot(s.slave, s.tokens);
      if (c.dot.empty()) {
        out << "// slave " << i << ": " << s.member << '\n' << text;
      } else {
        write_file(c.dot + ".slave" + std::to_string(i) + ".dot", text);
      }
    }
  }
  return 0;
}

int cmd_check_word(const Config& c, std::ostream& out) {
  Formula f = load_formula(c);
  if (c.loop.empty()) throw UsageError("--loop is required");
  Alphabet sigma = formula_alphabet(f);
  Lasso w = parse_lasso(c.stem, c.loop, sigma.atoms());
  DgrmaOptions o;
  o.max_states = c.max_states;
  Dgrma a = build_dgrma(f, sigma, o);
  bool oracle = models(w, f);
  bool automaton = accepts_lasso(a, w);
  out << "word: " << w.to_string() << '\n';
  out << "oracle: " << (oracle ? "true" : "false") << '\n';
  out << "automaton: " << (automaton ? "true" : "false") << '\n';
  out << (oracle == automaton ? "MATCH" : "MISMATCH") << '\n';
  return oracle == automaton ? 0 : 1;
}

void print_states(std::ostream& out, const Mdp& m, const std::vector<int>& states) {
  out << '{';
  for (std::size_t i = 0; i < states.size(); ++i) out << (i ? " " : "") << m.state_names[static_cast<std::size_t>(states[i])];
  out << '}';
}

int cmd_mec(const Config& c, std::ostream& out) {
  auto model = load_model(c);
  if (c.formula_text.empty() && c.formula_file.empty()) {
    auto mecs = mec_decomposition(model.mdp);
    out << "mecs: " << mecs.size() << '\n';
    for (std::size_t i = 0; i < mecs.size(); ++i) {
      out << "mec[" << i << "]: states=";
      print_states(out, model.mdp, mecs[i].states);
      out << " actions=" << mecs[i].actions.size() << '\n';
    }
    return 0;
  }
  Formula f = load_formula(c);
  auto res = synthesize(model.mdp, model.valuation, f, synthesis_options(c));
  const auto& w = res.report.winning;
  const Mdp& p = res.product.mdp;
  out << "product_states: " << p.num_states() << '\n';
  out << "pairs: " << res.product_pairs.size() << '\n';
  out << "mecs_examined: " << w.mecs_examined << '\n';
  out << "winning_mecs: " << w.mecs.size() << '\n';
  for (std::size_t i = 0; i < w.mecs.size(); ++i) {
    const auto& mec = w.mecs[i];
    out << "mec[" << i << "]: pair=" << mec.pair << " states=";
    print_states(out, p, mec.ec.states);
    out << '\n';
    out << "  margin: " << format_rational(mec.solution.margin) << '\n';
    for (std::size_t k = 0; k < mec.solution.x.size(); ++k) {
      out << "  flow[" << k << "]:";
      for (std::size_t a = 0; a < mec.solution.x[k].size(); ++a) {
        if (mec.solution.x[k][a] == 0) continue;
        const auto& act = mec.sub.mdp.actions[a];
        out << ' ' << mec.sub.mdp.state_names[static_cast<std::size_t>(act.state)] << '.' << act.name << '='
            << to_string(mec.solution.x[k][a]);
      }
      out << '\n';
    }
  }
  if (!c.dot.empty()) write_file(c.dot, product_to_dot(res));
  return 0;
}

int cmd_simulate(const Config& c, std::ostream& out) {
  if (c.steps == 0) throw UsageError("--steps must be positive");
  if (c.episodes == 0) throw UsageError("--episodes must be positive");
  auto model = load_model(c);
  Formula f = load_formula(c);
  auto res = synthesize(model.mdp, model.valuation, f, synthesis_options(c));
  if (!res.report.strategy) throw UsageError("no strategy: the formula holds with probability 0");
  auto trace = simulate_global(res.product.mdp, res.report, c.steps, c.seed, c.episodes);
  out << "seed: " << c.seed << '\n';
  out << "steps: " << c.steps << '\n';
  out << "max_probability: " << format_rational(res.report.max_probability) << '\n';
  out << format_global_trace(trace);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Controller synthesis for frequency LTL on Markov decision processes", "freqsynth"};
  app.require_subcommand(1);
  Config c;

  auto add_formula = [&](CLI::App* sub) {
    sub->add_option("--formula", c.formula_text, "Formula text");
    sub->add_option("--formula-file", c.formula_file, "File holding the formula");
  };
  auto add_caps = [&](CLI::App* sub) {
    sub->add_option("--max-states", c.max_states, "State limit for automata and products")->check(CLI::PositiveNumber);
  };
  auto add_analysis = [&](CLI::App* sub) {
    sub->add_option("--model", c.model_file, "MDP model file");
    sub->add_option("--threshold", c.threshold, "Probability threshold in [0,1]");
    sub->add_flag("--strict", c.strict, "Require probability strictly above the threshold");
    sub->add_option("--jobs", c.jobs, "Worker threads for the per-pair analysis");
    sub->add_option("--epoch-cap", c.epoch_cap, "Upper bound on epoch lengths")->check(CLI::PositiveNumber);
  };

  auto* synth = app.add_subcommand("synth", "Maximal satisfaction probability and threshold check");
  add_formula(synth);
  add_caps(synth);
  add_analysis(synth);
  synth->add_option("--dot", c.dot, "Write the annotated product as DOT");

  auto* automaton = app.add_subcommand("automaton", "Translate a formula and print the automaton");
  add_formula(automaton);
  add_caps(automaton);
  automaton->add_option("--dot", c.dot, "Write DOT output to this path");
  automaton->add_flag("--export-slaves", c.export_slaves, "Also print every slave");

  auto* check = app.add_subcommand("check-word", "Compare the automaton with direct evaluation on a lasso");
  add_formula(check);
  add_caps(check);
  check->add_option("--stem", c.stem, "Stem letters, e.g. \"{a};{}\"");
  check->add_option("--loop", c.loop, "Loop letters, e.g. \"{a b}\"");

  auto* mec = app.add_subcommand("mec", "Maximal end components, or winning ones of the product");
  add_formula(mec);
  add_caps(mec);
  add_analysis(mec);
  mec->add_option("--dot", c.dot, "Write the annotated product as DOT");

  auto* simulate = app.add_subcommand("simulate", "Run the synthesized strategy");
  add_formula(simulate);
  add_caps(simulate);
  add_analysis(simulate);
  simulate->add_option("--seed", c.seed, "Random seed");
  simulate->add_option("--steps", c.steps, "Steps per episode");
  simulate->add_option("--episodes", c.episodes, "Number of episodes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (synth->parsed()) return cmd_synth(c, out);
    if (automaton->parsed()) return cmd_automaton(c, out);
    if (check->parsed()) return cmd_check_word(c, out);
    if (mec->parsed()) return cmd_mec(c, out);
    return cmd_simulate(c, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace freqsynth
