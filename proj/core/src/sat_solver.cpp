#include "pansampler/sat_solver.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace pansampler {

namespace {

using Lit = std::uint32_t;  // 2 * var + negated
constexpr std::uint32_t kNoClause = std::numeric_limits<std::uint32_t>::max();

inline Lit make_lit(std::uint32_t v, bool negated) { return 2 * v + (negated ? 1 : 0); }
inline std::uint32_t var_of(Lit l) { return l >> 1; }
inline bool is_neg(Lit l) { return l & 1U; }
inline Lit negate(Lit l) { return l ^ 1U; }

Lit from_dimacs(int l) {
  return make_lit(static_cast<std::uint32_t>(std::abs(l)) - 1, l < 0);
}

double luby(double y, std::uint64_t x) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

/// Binary max-heap of variables ordered by activity.
class VarOrder {
 public:
  explicit VarOrder(const std::vector<double>& activity)
      : activity_(activity), pos_(activity.size(), -1) {}

  bool empty() const { return heap_.empty(); }
  bool contains(std::uint32_t v) const { return pos_[v] >= 0; }

  void insert(std::uint32_t v) {
    if (contains(v)) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    sift_up(pos_[v]);
  }

  void bumped(std::uint32_t v) {
    if (contains(v)) sift_up(pos_[v]);
  }

  std::uint32_t pop() {
    std::uint32_t top = heap_[0];
    heap_[0] = heap_.back();
    pos_[heap_[0]] = 0;
    heap_.pop_back();
    pos_[top] = -1;
    if (!heap_.empty()) sift_down(0);
    return top;
  }

 private:
  bool before(std::uint32_t a, std::uint32_t b) const {
    if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
    return a < b;
  }

  void sift_up(int i) {
    std::uint32_t v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  void sift_down(int i) {
    std::uint32_t v = heap_[i];
    int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  const std::vector<double>& activity_;
  std::vector<std::uint32_t> heap_;
  std::vector<int> pos_;
};

class Cdcl {
 public:
  Cdcl(const Cnf& cnf, const BitDistribution& dist, const SolverConfig& cfg)
      : cfg_(cfg),
        num_vars_(cnf.num_vars),
        rng_(cfg.seed),
        assigns_(num_vars_, -1),
        level_(num_vars_, 0),
        reason_(num_vars_, kNoClause),
        saved_phase_(num_vars_, 0),
        activity_(num_vars_, 0.0),
        seen_(num_vars_, 0),
        tracked_(num_vars_, 0),
        counts_(num_vars_),
        watches_(2 * static_cast<std::size_t>(num_vars_)),
        order_(activity_) {
    for (const auto& [v, c] : dist) {
      if (v < 1 || static_cast<std::uint32_t>(v) > num_vars_) continue;
      tracked_[v - 1] = 1;
      counts_[v - 1] = c;
    }
    // A tiny seeded perturbation varies the initial decision order per seed.
    std::uniform_real_distribution<double> jitter(0.0, 1e-6);
    for (std::uint32_t v = 0; v < num_vars_; ++v) activity_[v] = jitter(rng_);
    for (std::uint32_t v = 0; v < num_vars_; ++v) order_.insert(v);
    if (cfg_.bias_mode == BiasMode::InitialPhase)
      for (std::uint32_t v = 0; v < num_vars_; ++v)
        saved_phase_[v] = draw_phase(v) ? 1 : 0;
    load(cnf);
  }

  SatResult run() {
    SatResult result;
    if (!ok_) return finish(result, SatStatus::Unsat);
    if (propagate() != kNoClause) return finish(result, SatStatus::Unsat);

    std::uint64_t restarts = 0;
    max_learnts_ = std::max<double>(clauses_.size() / 3.0, 100.0);
    for (;;) {
      auto budget = static_cast<std::uint64_t>(
          luby(2.0, restarts++) * cfg_.restart_unit);
      Search s = search(budget);
      if (s == Search::Sat) {
        result.model.resize(num_vars_);
        for (std::uint32_t v = 0; v < num_vars_; ++v)
          result.model[v] = assigns_[v] == 1;
        return finish(result, SatStatus::Sat);
      }
      if (s == Search::Unsat) return finish(result, SatStatus::Unsat);
      if (s == Search::Aborted) return finish(result, SatStatus::Aborted);
      backtrack(0);
    }
  }

 private:
  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0;
  };
  struct Watcher {
    std::uint32_t cref;
    Lit blocker;
  };

  // 1 = true, 0 = false, -1 = unassigned
  int value(Lit l) const {
    int a = assigns_[var_of(l)];
    return a < 0 ? -1 : (a ^ static_cast<int>(is_neg(l)));
  }

  std::uint32_t decision_level() const {
    return static_cast<std::uint32_t>(trail_lim_.size());
  }

  SatResult& finish(SatResult& r, SatStatus s) {
    r.status = s;
    r.conflicts = conflicts_;
    r.decisions = decisions_;
    return r;
  }

  void load(const Cnf& cnf) {
    for (const auto& c : cnf.clauses) {
      std::vector<Lit> lits;
      lits.reserve(c.size());
      for (int l : c) {
        if (l == 0 || static_cast<std::uint32_t>(std::abs(l)) > num_vars_)
          throw std::invalid_argument("literal out of range in CNF");
        lits.push_back(from_dimacs(l));
      }
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      bool taut = false;
      for (std::size_t i = 1; i < lits.size(); ++i)
        if (lits[i] == negate(lits[i - 1])) taut = true;
      if (taut) continue;
      if (lits.empty()) {
        ok_ = false;
        return;
      }
      if (lits.size() == 1) {
        int v = value(lits[0]);
        if (v == 0) {
          ok_ = false;
          return;
        }
        if (v < 0) enqueue(lits[0], kNoClause);
        continue;
      }
      attach(std::move(lits), false);
    }
  }

  std::uint32_t attach(std::vector<Lit> lits, bool learnt) {
    auto cref = static_cast<std::uint32_t>(clauses_.size());
    watches_[lits[0]].push_back({cref, lits[1]});
    watches_[lits[1]].push_back({cref, lits[0]});
    clauses_.push_back({std::move(lits), learnt, false, 0});
    if (learnt) learnts_.push_back(cref);
    return cref;
  }

  void enqueue(Lit l, std::uint32_t reason) {
    std::uint32_t v = var_of(l);
    assigns_[v] = is_neg(l) ? 0 : 1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  // Returns a conflicting clause or kNoClause.
  std::uint32_t propagate() {
    std::uint32_t conflict = kNoClause;
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      Lit false_lit = negate(p);
      auto& ws = watches_[false_lit];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        Watcher w = ws[i++];
        if (value(w.blocker) == 1) {
          ws[j++] = w;
          continue;
        }
        Clause& c = clauses_[w.cref];
        if (c.deleted) continue;
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        Lit first = c.lits[0];
        if (first != w.blocker && value(first) == 1) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (value(c.lits[k]) != 0) {
            std::swap(c.lits[1], c.lits[k]);
            watches_[c.lits[1]].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == 0) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoClause) break;
    }
    return conflict;
  }

  void bump_var(std::uint32_t v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    order_.bumped(v);
  }

  void bump_clause(Clause& c) {
    c.activity += cla_inc_;
    if (c.activity > 1e20) {
      for (std::uint32_t cr : learnts_) clauses_[cr].activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  void analyze(std::uint32_t confl, std::vector<Lit>& out,
               std::uint32_t& out_level) {
    out.clear();
    out.push_back(0);  // asserting literal placeholder
    int path = 0;
    bool have_p = false;
    Lit p = 0;
    std::size_t idx = trail_.size();
    do {
      Clause& c = clauses_[confl];
      if (c.learnt) bump_clause(c);
      for (std::size_t j = have_p ? 1 : 0; j < c.lits.size(); ++j) {
        Lit q = c.lits[j];
        std::uint32_t v = var_of(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump_var(v);
        if (level_[v] >= decision_level()) ++path;
        else out.push_back(q);
      }
      while (!seen_[var_of(trail_[--idx])]) {
      }
      p = trail_[idx];
      have_p = true;
      confl = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --path;
    } while (path > 0);
    out[0] = negate(p);

    // Local minimization: drop literals implied by other learnt literals.
    std::vector<Lit> kept{out[0]};
    for (std::size_t i = 1; i < out.size(); ++i) {
      std::uint32_t r = reason_[var_of(out[i])];
      bool redundant = r != kNoClause;
      if (redundant) {
        const Clause& rc = clauses_[r];
        for (std::size_t k = 1; k < rc.lits.size(); ++k) {
          std::uint32_t v = var_of(rc.lits[k]);
          if (!seen_[v] && level_[v] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) kept.push_back(out[i]);
    }
    for (std::size_t i = 1; i < out.size(); ++i) seen_[var_of(out[i])] = 0;
    out.swap(kept);

    out_level = 0;
    if (out.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < out.size(); ++i)
        if (level_[var_of(out[i])] > level_[var_of(out[max_i])]) max_i = i;
      std::swap(out[1], out[max_i]);
      out_level = level_[var_of(out[1])];
    }
  }

  void backtrack(std::uint32_t level) {
    if (decision_level() <= level) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
      std::uint32_t v = var_of(trail_[i]);
      saved_phase_[v] = assigns_[v] == 1 ? 1 : 0;
      assigns_[v] = -1;
      reason_[v] = kNoClause;
      order_.insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  bool draw_phase(std::uint32_t v) {
    if (tracked_[v]) {
      const PhaseCounts& c = counts_[v];
      if (c.count0 != c.count1) {
        bool minority = c.count0 > c.count1;
        return coin_(rng_) < cfg_.bias_p ? minority : !minority;
      }
    }
    return (rng_() & 1U) != 0;
  }

  void reduce_db() {
    std::vector<std::uint32_t> live;
    for (std::uint32_t cr : learnts_)
      if (!clauses_[cr].deleted) live.push_back(cr);
    std::sort(live.begin(), live.end(), [this](std::uint32_t a, std::uint32_t b) {
      if (clauses_[a].activity != clauses_[b].activity)
        return clauses_[a].activity < clauses_[b].activity;
      return a < b;
    });
    std::size_t target = live.size() / 2;
    std::size_t removed = 0;
    for (std::uint32_t cr : live) {
      if (removed >= target) break;
      Clause& c = clauses_[cr];
      if (c.lits.size() <= 2) continue;
      std::uint32_t v0 = var_of(c.lits[0]);
      bool locked = reason_[v0] == cr && value(c.lits[0]) == 1;
      if (locked) continue;
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
      ++removed;
    }
    std::vector<std::uint32_t> keep;
    for (std::uint32_t cr : live)
      if (!clauses_[cr].deleted) keep.push_back(cr);
    learnts_.swap(keep);
  }

  enum class Search { Sat, Unsat, Aborted, Restart };

  Search search(std::uint64_t conflict_limit) {
    std::uint64_t local_conflicts = 0;
    std::vector<Lit> learnt;
    for (;;) {
      std::uint32_t confl = propagate();
      if (confl != kNoClause) {
        ++conflicts_;
        ++local_conflicts;
        if (decision_level() == 0) return Search::Unsat;
        if (conflicts_ > cfg_.conflict_budget) return Search::Aborted;
        if (cfg_.deadline && (conflicts_ & 127U) == 0 &&
            std::chrono::steady_clock::now() > *cfg_.deadline)
          return Search::Aborted;
        std::uint32_t bt = 0;
        analyze(confl, learnt, bt);
        backtrack(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoClause);
        } else {
          std::uint32_t cr = attach(learnt, true);
          bump_clause(clauses_[cr]);
          enqueue(learnt[0], cr);
        }
        var_inc_ /= cfg_.var_decay;
        cla_inc_ /= cfg_.clause_decay;
        continue;
      }
      if (local_conflicts >= conflict_limit) return Search::Restart;
      if (static_cast<double>(learnts_.size()) - trail_.size() >= max_learnts_) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      std::uint32_t next = kNoClause;
      while (!order_.empty()) {
        std::uint32_t v = order_.pop();
        if (assigns_[v] < 0) {
          next = v;
          break;
        }
      }
      if (next == kNoClause) return Search::Sat;
      ++decisions_;
      bool phase = cfg_.bias_mode == BiasMode::EveryDecision
                       ? draw_phase(next)
                       : saved_phase_[next] != 0;
      trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
      enqueue(make_lit(next, !phase), kNoClause);
    }
  }

  const SolverConfig& cfg_;
  std::uint32_t num_vars_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> coin_{0.0, 1.0};
  bool ok_ = true;

  std::vector<int> assigns_;
  std::vector<std::uint32_t> level_;
  std::vector<std::uint32_t> reason_;
  std::vector<char> saved_phase_;
  std::vector<double> activity_;
  std::vector<char> seen_;
  std::vector<char> tracked_;
  std::vector<PhaseCounts> counts_;

  std::vector<Clause> clauses_;
  std::vector<std::uint32_t> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  VarOrder order_;

  std::vector<Lit> trail_;
  std::vector<std::uint32_t> trail_lim_;
  std::size_t qhead_ = 0;

  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 100;
  std::uint64_t conflicts_ = 0;
  std::uint64_t decisions_ = 0;
};

}  // namespace

SatResult solve(const Cnf& cnf, const BitDistribution& dist,
                const SolverConfig& cfg) {
  if (!(cfg.bias_p >= 0.5 && cfg.bias_p <= 1.0))
    throw std::invalid_argument("bias probability must lie in [0.5, 1]");
  Cdcl solver(cnf, dist, cfg);
  SatResult r = solver.run();
  if (r.status == SatStatus::Sat && !satisfies(cnf, r.model))
    throw std::logic_error("SAT model violates a clause");
  return r;
}

}  // namespace pansampler
