#include "freqsynth/mdp.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace freqsynth {

int Mdp::add_state(std::string name) {
  state_names.push_back(std::move(name));
  enabled.emplace_back();
  return static_cast<int>(state_names.size()) - 1;
}

int Mdp::add_action(int state, std::string name, std::vector<Transition> successors) {
  actions.push_back(Action{std::move(name), state, std::move(successors)});
  int id = static_cast<int>(actions.size()) - 1;
  enabled[static_cast<std::size_t>(state)].push_back(id);
  return id;
}

void Mdp::validate() const {
  if (state_names.empty()) throw ModelError("model has no states");
  if (initial < 0 || static_cast<std::size_t>(initial) >= num_states())
    throw ModelError("initial state out of range");
  for (std::size_t s = 0; s < num_states(); ++s)
    if (enabled[s].empty()) throw ModelError("state '" + state_names[s] + "' has no actions");
  for (const auto& a : actions) {
    Rational sum = 0;
    for (const auto& t : a.successors) {
      if (t.target < 0 || static_cast<std::size_t>(t.target) >= num_states())
        throw ModelError("action '" + a.name + "' has a successor out of range");
      if (t.probability <= 0) throw ModelError("action '" + a.name + "' has a non-positive probability");
      sum += t.probability;
    }
    if (sum != 1) throw ModelError("distribution of action '" + a.name + "' sums to " + to_string(sum));
  }
}

namespace {

std::vector<std::string> words(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

ParsedModel parse_mdp(std::string_view text) {
  ParsedModel pm;
  Mdp& m = pm.mdp;
  std::map<std::string, int> state_index;
  std::map<std::pair<int, std::string>, int> action_index;
  bool header = false;
  bool have_init = false;
  std::string init_name;
  std::size_t init_line = 0;
  std::vector<std::tuple<std::size_t, std::string, std::vector<std::string>>> labels;
  struct PendingAction {
    std::size_t line;
    std::string state;
    std::string name;
    std::string body;
  };
  std::vector<PendingAction> pending;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  auto fail = [&](std::size_t line, const std::string& msg) -> ModelError {
    return ModelError("line " + std::to_string(line) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (!header) {
      if (line != "mdp") throw fail(lineno, "expected header 'mdp'");
      header = true;
      continue;
    }
    auto w = words(line);
    const std::string& kw = w[0];
    if (kw == "states") {
      if (w.size() < 2) throw fail(lineno, "'states' needs at least one name");
      for (std::size_t i = 1; i < w.size(); ++i) {
        if (state_index.count(w[i])) throw fail(lineno, "state '" + w[i] + "' declared twice");
        state_index[w[i]] = m.add_state(w[i]);
      }
    } else if (kw == "init") {
      if (w.size() != 2) throw fail(lineno, "'init' takes exactly one state");
      if (have_init) throw fail(lineno, "initial state declared twice");
      have_init = true;
      init_name = w[1];
      init_line = lineno;
    } else if (kw == "label") {
      if (w.size() < 2) throw fail(lineno, "'label' needs a state");
      labels.emplace_back(lineno, w[1], std::vector<std::string>(w.begin() + 2, w.end()));
    } else if (kw == "action") {
      auto colon = line.find(':');
      if (colon == std::string::npos) throw fail(lineno, "expected ':' in action");
      auto head = words(std::string_view(line).substr(0, colon));
      if (head.size() != 3) throw fail(lineno, "expected 'action <state> <name> : ...'");
      pending.push_back({lineno, head[1], head[2], line.substr(colon + 1)});
    } else {
      throw fail(lineno, "unknown directive '" + kw + "'");
    }
  }
  if (!header) throw ModelError("empty model");
  if (m.num_states() == 0) throw ModelError("model declares no states");
  if (!have_init) throw ModelError("missing 'init' line");
  auto lookup = [&](std::size_t line, const std::string& name) {
    auto it = state_index.find(name);
    if (it == state_index.end()) throw fail(line, "unknown state '" + name + "'");
    return it->second;
  };
  m.initial = lookup(init_line, init_name);

  pm.valuation.assign(m.num_states(), {});
  for (auto& [line, state, atoms] : labels) {
    int s = lookup(line, state);
    for (const auto& a : atoms) {
      if (a.empty() || !(std::isalpha(static_cast<unsigned char>(a[0])) || a[0] == '_'))
        throw fail(line, "invalid atom '" + a + "'");
      pm.valuation[static_cast<std::size_t>(s)].push_back(a);
    }
  }
  for (auto& v : pm.valuation) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  for (const auto& p : pending) {
    int s = lookup(p.line, p.state);
    if (!action_index.emplace(std::make_pair(s, p.name), 0).second)
      throw fail(p.line, "action '" + p.name + "' redeclared in state '" + p.state + "'");
    std::map<int, Rational> dist;
    std::string body = p.body;
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t comma = body.find(',', start);
      std::string part = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      auto w = words(part);
      if (w.size() != 2) throw fail(p.line, "expected '<state> <probability>' in distribution");
      int t = lookup(p.line, w[0]);
      Rational prob;
      try {
        prob = parse_rational(w[1]);
      } catch (const std::invalid_argument& e) {
        throw fail(p.line, e.what());
      }
      if (prob <= 0 || prob > 1) throw fail(p.line, "probability " + w[1] + " outside (0,1]");
      dist[t] += prob;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    Rational sum = 0;
    std::vector<Transition> succ;
    for (const auto& [t, pr] : dist) {
      sum += pr;
      succ.push_back({t, pr});
    }
    if (sum != 1) throw fail(p.line, "distribution sums to " + to_string(sum) + ", not 1");
    m.add_action(s, p.name, std::move(succ));
  }
  for (std::size_t s = 0; s < m.num_states(); ++s)
    if (m.enabled[s].empty()) throw ModelError("state '" + m.state_names[s] + "' has no actions");
  m.validate();
  return pm;
}

ParsedModel load_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mdp(ss.str());
}

std::vector<int> scc_components(const Mdp& m, const std::vector<bool>& states,
                                const std::vector<bool>& actions, int* count) {
  const std::size_t n = m.num_states();
  std::vector<std::vector<int>> adj(n);
  for (std::size_t a = 0; a < m.num_actions(); ++a) {
    if (!actions[a]) continue;
    const auto& act = m.actions[a];
    if (!states[static_cast<std::size_t>(act.state)]) continue;
    for (const auto& t : act.successors)
      if (states[static_cast<std::size_t>(t.target)])
        adj[static_cast<std::size_t>(act.state)].push_back(t.target);
  }
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int counter = 0;
  int comps = 0;
  std::vector<std::pair<int, std::size_t>> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (!states[root] || index[root] >= 0) continue;
    call.push_back({static_cast<int>(root), 0});
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<int>(root));
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      const auto& out = adj[static_cast<std::size_t>(v)];
      if (next < out.size()) {
        int w = out[next++];
        auto wi = static_cast<std::size_t>(w);
        if (index[wi] < 0) {
          index[wi] = low[wi] = counter++;
          stack.push_back(w);
          on_stack[wi] = 1;
          call.push_back({w, 0});
        } else if (on_stack[wi]) {
          low[static_cast<std::size_t>(v)] = std::min(low[static_cast<std::size_t>(v)], index[wi]);
        }
        continue;
      }
      int done = v;
      call.pop_back();
      auto di = static_cast<std::size_t>(done);
      if (!call.empty()) {
        auto pi = static_cast<std::size_t>(call.back().first);
        low[pi] = std::min(low[pi], low[di]);
      }
      if (low[di] == index[di]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = comps;
          if (w == done) break;
        }
        ++comps;
      }
    }
  }
  if (count) *count = comps;
  return comp;
}

namespace {

// Drops actions leaving the alive states and states without actions until stable.
void prune(const Mdp& m, std::vector<bool>& alive_s, std::vector<bool>& alive_a) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < m.num_actions(); ++a) {
      if (!alive_a[a]) continue;
      const auto& act = m.actions[a];
      bool ok = alive_s[static_cast<std::size_t>(act.state)];
      for (const auto& t : act.successors) ok = ok && alive_s[static_cast<std::size_t>(t.target)];
      if (!ok) {
        alive_a[a] = false;
        changed = true;
      }
    }
    for (std::size_t s = 0; s < m.num_states(); ++s) {
      if (!alive_s[s]) continue;
      bool any = false;
      for (int a : m.enabled[s]) any = any || alive_a[static_cast<std::size_t>(a)];
      if (!any) {
        alive_s[s] = false;
        changed = true;
      }
    }
  }
}

SubMdp extract(const Mdp& m, const std::vector<bool>& alive_s, const std::vector<bool>& alive_a) {
  SubMdp sub;
  std::vector<int> new_index(m.num_states(), -1);
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    if (!alive_s[s]) continue;
    new_index[s] = sub.mdp.add_state(m.state_names[s]);
    sub.state_origin.push_back(static_cast<int>(s));
  }
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    if (!alive_s[s]) continue;
    for (int a : m.enabled[s]) {
      if (!alive_a[static_cast<std::size_t>(a)]) continue;
      const auto& act = m.actions[static_cast<std::size_t>(a)];
      std::vector<Transition> succ;
      for (const auto& t : act.successors)
        succ.push_back({new_index[static_cast<std::size_t>(t.target)], t.probability});
      sub.mdp.add_action(new_index[s], act.name, std::move(succ));
      sub.action_origin.push_back(a);
    }
  }
  int init = m.initial >= 0 ? new_index[static_cast<std::size_t>(m.initial)] : -1;
  sub.mdp.initial = init >= 0 ? init : 0;
  return sub;
}

}  // namespace

std::vector<EndComponent> mec_decomposition(const Mdp& m, const std::vector<bool>& allowed) {
  std::vector<bool> alive_s = allowed.empty() ? std::vector<bool>(m.num_states(), true) : allowed;
  std::vector<bool> alive_a(m.num_actions(), true);
  std::vector<int> comp;
  while (true) {
    prune(m, alive_s, alive_a);
    int count = 0;
    comp = scc_components(m, alive_s, alive_a, &count);
    bool changed = false;
    for (std::size_t a = 0; a < m.num_actions(); ++a) {
      if (!alive_a[a]) continue;
      const auto& act = m.actions[a];
      int c = comp[static_cast<std::size_t>(act.state)];
      for (const auto& t : act.successors) {
        if (comp[static_cast<std::size_t>(t.target)] != c) {
          alive_a[a] = false;
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }
  std::map<int, EndComponent> by_comp;
  for (std::size_t s = 0; s < m.num_states(); ++s)
    if (alive_s[s]) by_comp[comp[s]].states.push_back(static_cast<int>(s));
  for (std::size_t a = 0; a < m.num_actions(); ++a)
    if (alive_a[a]) by_comp[comp[static_cast<std::size_t>(m.actions[a].state)]].actions.push_back(static_cast<int>(a));
  std::vector<EndComponent> out;
  for (auto& [c, ec] : by_comp) out.push_back(std::move(ec));
  std::sort(out.begin(), out.end(),
            [](const EndComponent& x, const EndComponent& y) { return x.states < y.states; });
  return out;
}

SubMdp restrict(const Mdp& m, const std::vector<bool>& removed) {
  std::vector<bool> alive_s(m.num_states());
  for (std::size_t s = 0; s < m.num_states(); ++s) alive_s[s] = !removed[s];
  std::vector<bool> alive_a(m.num_actions(), true);
  prune(m, alive_s, alive_a);
  return extract(m, alive_s, alive_a);
}

SubMdp sub_mdp(const Mdp& m, const EndComponent& ec) {
  std::vector<bool> alive_s(m.num_states(), false), alive_a(m.num_actions(), false);
  for (int s : ec.states) alive_s[static_cast<std::size_t>(s)] = true;
  for (int a : ec.actions) alive_a[static_cast<std::size_t>(a)] = true;
  return extract(m, alive_s, alive_a);
}

bool is_strongly_connected(const Mdp& m) {
  int count = 0;
  scc_components(m, std::vector<bool>(m.num_states(), true), std::vector<bool>(m.num_actions(), true),
                 &count);
  return count == 1;
}

ProductMdp product_mdp(const Mdp& m, const Valuation& valuation, const Alphabet& alphabet,
                       int automaton_initial, const std::function<int(int, Letter)>& delta,
                       const std::function<std::string(int)>& automaton_label,
                       std::size_t max_states) {
  std::vector<Letter> letter(m.num_states(), 0);
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    if (s >= valuation.size()) break;
    for (const auto& name : valuation[s]) {
      int i = alphabet.index_of(name);
      if (i >= 0) letter[s] |= Letter{1} << i;
    }
  }
  ProductMdp p;
  std::map<std::pair<int, int>, int> index;
  auto move = [&](int q, int s) {
    int t = delta(q, letter[static_cast<std::size_t>(s)]);
    if (t < 0) throw ModelError("automaton has no transition for the label of state '" +
                                m.state_names[static_cast<std::size_t>(s)] + "'");
    return t;
  };
  auto add = [&](int s, int q) {
    auto [it, fresh] = index.emplace(std::make_pair(s, q), static_cast<int>(p.state_map.size()));
    if (fresh) {
      if (p.state_map.size() >= max_states)
        throw ResourceError("product exceeds the state limit of " + std::to_string(max_states));
      p.state_map.emplace_back(s, q);
      p.mdp.add_state("(" + m.state_names[static_cast<std::size_t>(s)] + "," + automaton_label(q) + ")");
    }
    return it->second;
  };
  p.mdp.initial = add(m.initial, move(automaton_initial, m.initial));
  for (std::size_t i = 0; i < p.state_map.size(); ++i) {
    auto [s, q] = p.state_map[i];
    for (int a : m.enabled[static_cast<std::size_t>(s)]) {
      const auto& act = m.actions[static_cast<std::size_t>(a)];
      std::vector<Transition> succ;
      for (const auto& t : act.successors) succ.push_back({add(t.target, move(q, t.target)), t.probability});
      p.mdp.add_action(static_cast<int>(i), act.name, std::move(succ));
      p.action_origin.push_back(a);
    }
  }
  return p;
}

std::string mdp_to_dot(const Mdp& m, const std::function<std::string(int)>& style) {
  std::ostringstream os;
  os << "digraph mdp {\n  rankdir=LR;\n  init [shape=point];\n  init -> s" << m.initial << ";\n";
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    os << "  s" << s << " [label=\"" << m.state_names[s] << "\"";
    if (style) {
      auto extra = style(static_cast<int>(s));
      if (!extra.empty()) os << ", " << extra;
    }
    os << "];\n";
  }
  for (std::size_t a = 0; a < m.num_actions(); ++a) {
    const auto& act = m.actions[a];
    for (const auto& t : act.successors)
      os << "  s" << act.state << " -> s" << t.target << " [label=\"" << act.name << ": "
         << to_string(t.probability) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string mdp_to_text(const Mdp& m, const Valuation& valuation) {
  std::ostringstream os;
  os << "mdp\nstates";
  for (const auto& n : m.state_names) os << ' ' << n;
  os << "\ninit " << m.state_names[static_cast<std::size_t>(m.initial)] << '\n';
  for (std::size_t s = 0; s < m.num_states() && s < valuation.size(); ++s) {
    if (valuation[s].empty()) continue;
    os << "label " << m.state_names[s];
    for (const auto& a : valuation[s]) os << ' ' << a;
    os << '\n';
  }
  for (const auto& act : m.actions) {
    os << "action " << m.state_names[static_cast<std::size_t>(act.state)] << ' ' << act.name << " :";
    for (std::size_t i = 0; i < act.successors.size(); ++i)
      os << (i ? " ," : "") << ' ' << m.state_names[static_cast<std::size_t>(act.successors[i].target)]
         << ' ' << to_string(act.successors[i].probability);
    os << '\n';
  }
  return os.str();
}

}  // namespace freqsynth
