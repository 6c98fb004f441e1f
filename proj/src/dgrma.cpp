#include "freqsynth/dgrma.hpp"

#include "freqsynth/calculus.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>

namespace freqsynth {

namespace {

void collect_rec(Formula f, std::unordered_set<std::uint32_t>& seen, std::vector<Formula>& out) {
  bool rec = f.op() == Op::Eventually || f.op() == Op::Always || f.op() == Op::FreqAlways;
  if (rec && seen.insert(f.id()).second) out.push_back(f);
  for (Formula k : f.children()) collect_rec(k, seen, out);
}

std::string set_text(const std::vector<bool>& s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i]) continue;
    if (!first) out += ", ";
    first = false;
    out += std::to_string(i);
  }
  return out + "}";
}

// Decides, for one assumption set, which product states violate the master
// condition: R together with the substituted tokens of the G-slaves in R
// must prove the master state.
class MasterCheck {
 public:
  MasterCheck(const Dgrma& a, std::uint64_t mask) : a_(a) {
    std::vector<Formula> in, out;
    for (std::size_t i = 0; i < a.rec.size(); ++i) {
      if ((mask >> i) & 1U) {
        in.push_back(a.rec[i]);
        if (a.slaves[i].kind == RecKind::Always) always_.push_back(i);
      } else {
        out.push_back(a.rec[i]);
      }
    }
    in_ids_ = id_set(in);
    out_ids_ = id_set(out);
  }

  bool violates(const ProductState& st) {
    std::vector<int> key{st[0]};
    for (std::size_t i : always_) key.push_back(st[i + 1]);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    BoolFn goal = a_.master.states[static_cast<std::size_t>(st[0])].assume_true(in_ids_);
    bool proved = goal.is_true();
    if (!proved) {
      BoolFn all = BoolFn::top();
      for (std::size_t i : always_) {
        const auto& slave = a_.slaves[i];
        for (int psi : slave.tokens.states[static_cast<std::size_t>(st[i + 1])]) {
          all = all & token(i, psi);
          if (all.is_false()) break;
        }
        if (all.is_false()) break;
      }
      proved = all.entails(goal);
    }
    memo_.emplace(std::move(key), !proved);
    return !proved;
  }

 private:
  const BoolFn& token(std::size_t slave, int psi) {
    auto key = std::make_pair(slave, psi);
    if (auto it = tokens_.find(key); it != tokens_.end()) return it->second;
    const BoolFn& raw = a_.slaves[slave].slave.lts.states[static_cast<std::size_t>(psi)];
    return tokens_.emplace(key, raw.assume_false(out_ids_).assume_true(in_ids_)).first->second;
  }

  const Dgrma& a_;
  std::vector<std::size_t> always_;
  std::vector<BoolFn::Var> in_ids_;
  std::vector<BoolFn::Var> out_ids_;
  std::unordered_map<std::vector<int>, bool, VectorHash> memo_;
  std::map<std::pair<std::size_t, int>, BoolFn> tokens_;
};

bool satisfiable(const GrmpPair& pair) {
  const std::size_t n = pair.fin.size();
  bool any_free = false;
  for (std::size_t q = 0; q < n; ++q) any_free = any_free || !pair.fin[q];
  if (!any_free) return false;
  for (const auto& inf : pair.infs) {
    bool hit = false;
    for (std::size_t q = 0; q < n && !hit; ++q) hit = inf[q] && !pair.fin[q];
    if (!hit) return false;
  }
  for (const auto& mp : pair.mps) {
    bool reachable_value = false;
    for (std::size_t q = 0; q < n && !reachable_value; ++q)
      reachable_value = !pair.fin[q] && compare(mp.reward[q], mp.cmp, mp.p);
    if (!reachable_value) return false;
  }
  return true;
}

}  // namespace

std::vector<Formula> rec_set(Formula f) {
  std::unordered_set<std::uint32_t> seen;
  std::vector<Formula> out;
  collect_rec(f, seen, out);
  return out;
}

Dgrma build_dgrma(Formula f, const Alphabet& alphabet, const DgrmaOptions& options) {
  Dgrma a;
  a.formula = f;
  a.master = build_master(f, alphabet, options.max_states);
  a.rec = rec_set(f);
  if (a.rec.size() > options.max_rec)
    throw ResourceError("formula has " + std::to_string(a.rec.size()) +
                        " recurrence subformulas; the limit is " +
                        std::to_string(options.max_rec));
  for (Formula m : a.rec) {
    RecKind kind = m.op() == Op::Eventually ? RecKind::Eventually
                   : m.op() == Op::Always   ? RecKind::Always
                                            : RecKind::Frequency;
    SlaveAutomaton s{m, kind, build_slave_lts(m.child(), alphabet, options.max_states), {}, {}};
    if (kind == RecKind::Frequency)
      s.counts = build_count_lts(s.slave, options.max_states);
    else
      s.tokens = build_token_lts(s.slave, options.max_states);
    a.slaves.push_back(std::move(s));
  }

  ProductState init{a.master.initial};
  for (const auto& s : a.slaves)
    init.push_back(s.kind == RecKind::Frequency ? s.counts.initial : s.tokens.initial);
  auto next = [&](const ProductState& st, Letter l) -> std::optional<ProductState> {
    ProductState out(st.size());
    out[0] = a.master.successor(st[0], l);
    for (std::size_t i = 0; i < a.slaves.size(); ++i) {
      const auto& s = a.slaves[i];
      out[i + 1] = s.kind == RecKind::Frequency ? s.counts.successor(st[i + 1], l)
                                                : s.tokens.successor(st[i + 1], l);
    }
    return out;
  };
  a.lts = explore<ProductState, VectorHash>(alphabet, std::move(init), next, options.max_states,
                                            "automaton product");

  const std::size_t n = a.lts.size();
  const std::uint64_t subsets = std::uint64_t{1} << a.rec.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    GrmpPair pair;
    pair.assumptions = mask;
    std::vector<Formula> assumed;
    for (std::size_t i = 0; i < a.rec.size(); ++i)
      if ((mask >> i) & 1U) assumed.push_back(a.rec[i]);

    MasterCheck check(a, mask);
    std::vector<bool> master_fin(n);
    for (std::size_t q = 0; q < n; ++q) master_fin[q] = check.violates(a.lts.states[q]);
    pair.fin_parts.push_back(std::move(master_fin));

    for (std::size_t i = 0; i < a.rec.size(); ++i) {
      if (!((mask >> i) & 1U)) continue;
      const auto& s = a.slaves[i];
      switch (s.kind) {
        case RecKind::Always: {
          auto bad = cobuchi_rejecting_sets(s.slave, s.tokens, assumed);
          std::vector<bool> part(n);
          for (std::size_t q = 0; q < n; ++q)
            part[q] = bad[static_cast<std::size_t>(a.lts.states[q][i + 1])];
          pair.fin_parts.push_back(std::move(part));
          break;
        }
        case RecKind::Eventually: {
          auto good = buchi_accepting_sets(s.slave, s.tokens, assumed);
          std::vector<bool> inf(n);
          for (std::size_t q = 0; q < n; ++q)
            inf[q] = good[static_cast<std::size_t>(a.lts.states[q][i + 1])];
          pair.infs.push_back(std::move(inf));
          break;
        }
        case RecKind::Frequency: {
          auto r = mp_reward(s.slave, s.counts, assumed);
          MpAtom atom{s.member.bound().ext, s.member.bound().cmp, s.member.bound().p, {}};
          atom.reward.reserve(n);
          for (std::size_t q = 0; q < n; ++q)
            atom.reward.push_back(r[static_cast<std::size_t>(a.lts.states[q][i + 1])]);
          pair.mps.push_back(std::move(atom));
          break;
        }
      }
    }
    pair.fin.assign(n, false);
    for (const auto& part : pair.fin_parts)
      for (std::size_t q = 0; q < n; ++q)
        if (part[q]) pair.fin[q] = true;
    if (options.prune && !satisfiable(pair)) continue;
    a.pairs.push_back(std::move(pair));
  }
  return a;
}

std::vector<Formula> pair_assumptions(const Dgrma& a, const GrmpPair& pair) {
  std::vector<Formula> out;
  for (std::size_t i = 0; i < a.rec.size(); ++i)
    if ((pair.assumptions >> i) & 1U) out.push_back(a.rec[i]);
  return out;
}

namespace {

bool cycle_meets(const GrmpPair& pair, const std::vector<int>& cycle,
                 const std::vector<std::vector<bool>>& fins) {
  if (cycle.empty()) return false;
  for (const auto& fin : fins)
    for (int q : cycle)
      if (fin[static_cast<std::size_t>(q)]) return false;
  for (const auto& inf : pair.infs) {
    bool hit = false;
    for (int q : cycle) hit = hit || inf[static_cast<std::size_t>(q)];
    if (!hit) return false;
  }
  for (const auto& mp : pair.mps) {
    Rational sum = 0;
    for (int q : cycle) sum += mp.reward[static_cast<std::size_t>(q)];
    Rational avg = sum / static_cast<long>(cycle.size());
    if (!compare(avg, mp.cmp, mp.p)) return false;
  }
  return true;
}

}  // namespace

bool pair_accepts_cycle(const GrmpPair& pair, const std::vector<int>& cycle) {
  return cycle_meets(pair, cycle, {pair.fin});
}

bool accepts_lasso(const Dgrma& a, const Lasso& w) {
  auto cycle = run_lasso(a.lts, w).cycle();
  return std::any_of(a.pairs.begin(), a.pairs.end(),
                     [&](const GrmpPair& p) { return pair_accepts_cycle(p, cycle); });
}

bool accepts_lasso_by_parts(const Dgrma& a, const Lasso& w) {
  auto cycle = run_lasso(a.lts, w).cycle();
  return std::any_of(a.pairs.begin(), a.pairs.end(),
                     [&](const GrmpPair& p) { return cycle_meets(p, cycle, p.fin_parts); });
}

std::string acceptance_dump(const Dgrma& a) {
  std::ostringstream os;
  for (std::size_t k = 0; k < a.pairs.size(); ++k) {
    const auto& pair = a.pairs[k];
    os << "pair " << k << " R={";
    auto assumed = pair_assumptions(a, pair);
    for (std::size_t i = 0; i < assumed.size(); ++i) os << (i ? ", " : "") << assumed[i];
    os << "}: FIN=" << set_text(pair.fin) << ", INF=";
    if (pair.infs.empty()) os << "none";
    for (std::size_t i = 0; i < pair.infs.size(); ++i) os << (i ? " " : "") << set_text(pair.infs[i]);
    os << ", MP=";
    if (pair.mps.empty()) os << "none";
    for (std::size_t i = 0; i < pair.mps.size(); ++i) {
      const auto& mp = pair.mps[i];
      os << (i ? "; " : "") << to_string(mp.ext) << ' ' << to_string(mp.cmp) << ' '
         << to_string(mp.p) << " [";
      for (std::size_t q = 0; q < mp.reward.size(); ++q)
        os << (q ? " " : "") << to_string(mp.reward[q]);
      os << ']';
    }
    os << '\n';
  }
  return os.str();
}

std::string state_label(const Dgrma& a, int q) {
  const auto& st = a.lts.states[static_cast<std::size_t>(q)];
  std::string s = a.master.states[static_cast<std::size_t>(st[0])].to_string();
  for (std::size_t i = 0; i < a.slaves.size(); ++i) {
    s += " | ";
    const auto& sl = a.slaves[i];
    if (sl.kind == RecKind::Frequency) {
      const auto& c = sl.counts.states[static_cast<std::size_t>(st[i + 1])];
      s += "{";
      bool first = true;
      for (std::size_t psi = 0; psi < c.size(); ++psi) {
        if (!c[psi]) continue;
        if (!first) s += ", ";
        first = false;
        s += sl.slave.lts.states[psi].to_string() + ":" + std::to_string(c[psi]);
      }
      s += "}";
    } else {
      const auto& t = sl.tokens.states[static_cast<std::size_t>(st[i + 1])];
      s += "{";
      for (std::size_t j = 0; j < t.size(); ++j) {
        if (j) s += ", ";
        s += sl.slave.lts.states[static_cast<std::size_t>(t[j])].to_string();
      }
      s += "}";
    }
  }
  return s;
}

std::string dgrma_to_dot(const Dgrma& a) {
  std::string dot = lts_to_dot(
      a.lts, [&](int q) { return std::to_string(q) + ": " + state_label(a, q); }, "automaton");
  std::ostringstream note;
  note << "  acceptance [shape=note, label=\"";
  for (char c : acceptance_dump(a)) {
    if (c == '\n') note << "\\l";
    else if (c == '"') note << "\\\"";
    else note << c;
  }
  note << "\"];\n}\n";
  dot.erase(dot.size() - 2);
  return dot + note.str();
}

}  // namespace freqsynth
