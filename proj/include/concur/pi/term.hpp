// Pi-calculus terms: names, processes, agent definitions, substitution.
//
// Terms are immutable; every operation returns a fresh term. Process is a
// cheap value handle over a shared immutable node, so terms can be copied,
// stored in containers and shared across threads freely.

#pragma once

#include <cassert>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace concur::pi {

/// A channel/datum identifier. `prime` is the freshness index: `x` with
/// prime 2 renders as `x''` and is distinct from every other (id, prime)
/// combination.
struct Name {
  std::string id;
  unsigned prime = 0;

  auto operator<=>(const Name&) const = default;

  std::string str() const {
    std::string s = id;
    s.append(prime, '\'');
    return s;
  }
};

/// Smallest prime-variant of `base` that avoids every name in `avoid`.
/// Deterministic, so fresh-name choices are reproducible across runs.
inline Name fresh_name(const Name& base, const std::set<Name>& avoid) {
  Name candidate{base.id, base.prime + 1};
  while (avoid.count(candidate) != 0) ++candidate.prime;
  return candidate;
}

using AgentId = std::string;

class Process;

struct NilP {};
struct SumP;
struct OutputP;
struct InputP;
struct TauP;
struct ParP;
struct RestrictP;
struct MatchP;
struct CallP;

using ProcNode =
    std::variant<NilP, SumP, OutputP, InputP, TauP, ParP, RestrictP, MatchP, CallP>;

/// Immutable process term (Fig.-2 constructors). Restrict and Input are the
/// only binders. Channels are monadic with a zero-arity synchronization form
/// (payload/bind absent).
class Process {
 public:
  Process() : node_(nil().node_) {}

  static Process nil();
  static Process sum(Process left, Process right);
  static Process output(Name chan, std::optional<Name> payload, Process cont);
  static Process input(Name chan, std::optional<Name> bind, Process cont);
  static Process tau(Process cont);
  static Process par(Process left, Process right);
  static Process restrict(Name bind, Process body);
  static Process match(Name lhs, Name rhs, Process body);
  static Process call(AgentId agent, std::vector<Name> args);

  const ProcNode& node() const { return *node_; }

  bool operator==(const Process& other) const { return compare(other) == 0; }
  bool operator<(const Process& other) const { return compare(other) < 0; }

  /// Structural (syntactic) comparison; alpha-variants compare unequal.
  int compare(const Process& other) const;

 private:
  explicit Process(std::shared_ptr<const ProcNode> node) : node_(std::move(node)) {}
  static Process make(ProcNode&& node) {
    return Process(std::make_shared<const ProcNode>(std::move(node)));
  }
  std::shared_ptr<const ProcNode> node_;
};

struct SumP {
  Process left, right;
};
struct OutputP {
  Name chan;
  std::optional<Name> payload;
  Process cont;
};
struct InputP {
  Name chan;
  std::optional<Name> bind;
  Process cont;
};
struct TauP {
  Process cont;
};
struct ParP {
  Process left, right;
};
struct RestrictP {
  Name bind;
  Process body;
};
struct MatchP {
  Name lhs, rhs;
  Process body;
};
struct CallP {
  AgentId agent;
  std::vector<Name> args;
};

inline Process Process::nil() { return make(NilP{}); }
inline Process Process::sum(Process l, Process r) { return make(SumP{std::move(l), std::move(r)}); }
inline Process Process::output(Name c, std::optional<Name> p, Process k) {
  return make(OutputP{std::move(c), std::move(p), std::move(k)});
}
inline Process Process::input(Name c, std::optional<Name> b, Process k) {
  return make(InputP{std::move(c), std::move(b), std::move(k)});
}
inline Process Process::tau(Process k) { return make(TauP{std::move(k)}); }
inline Process Process::par(Process l, Process r) { return make(ParP{std::move(l), std::move(r)}); }
inline Process Process::restrict(Name n, Process b) {
  return make(RestrictP{std::move(n), std::move(b)});
}
inline Process Process::match(Name l, Name r, Process b) {
  return make(MatchP{std::move(l), std::move(r), std::move(b)});
}
inline Process Process::call(AgentId a, std::vector<Name> args) {
  return make(CallP{std::move(a), std::move(args)});
}

namespace detail {

inline int cmp_names(const Name& a, const Name& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

inline int cmp_opt_names(const std::optional<Name>& a, const std::optional<Name>& b) {
  if (a.has_value() != b.has_value()) return a.has_value() ? 1 : -1;
  if (!a) return 0;
  return cmp_names(*a, *b);
}

}  // namespace detail

inline int Process::compare(const Process& other) const {
  if (node_ == other.node_) return 0;
  const ProcNode& a = *node_;
  const ProcNode& b = *other.node_;
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  using detail::cmp_names;
  using detail::cmp_opt_names;
  switch (a.index()) {
    case 0:
      return 0;
    case 1: {
      const auto& x = std::get<SumP>(a);
      const auto& y = std::get<SumP>(b);
      if (int c = x.left.compare(y.left)) return c;
      return x.right.compare(y.right);
    }
    case 2: {
      const auto& x = std::get<OutputP>(a);
      const auto& y = std::get<OutputP>(b);
      if (int c = cmp_names(x.chan, y.chan)) return c;
      if (int c = cmp_opt_names(x.payload, y.payload)) return c;
      return x.cont.compare(y.cont);
    }
    case 3: {
      const auto& x = std::get<InputP>(a);
      const auto& y = std::get<InputP>(b);
      if (int c = cmp_names(x.chan, y.chan)) return c;
      if (int c = cmp_opt_names(x.bind, y.bind)) return c;
      return x.cont.compare(y.cont);
    }
    case 4:
      return std::get<TauP>(a).cont.compare(std::get<TauP>(b).cont);
    case 5: {
      const auto& x = std::get<ParP>(a);
      const auto& y = std::get<ParP>(b);
      if (int c = x.left.compare(y.left)) return c;
      return x.right.compare(y.right);
    }
    case 6: {
      const auto& x = std::get<RestrictP>(a);
      const auto& y = std::get<RestrictP>(b);
      if (int c = cmp_names(x.bind, y.bind)) return c;
      return x.body.compare(y.body);
    }
    case 7: {
      const auto& x = std::get<MatchP>(a);
      const auto& y = std::get<MatchP>(b);
      if (int c = cmp_names(x.lhs, y.lhs)) return c;
      if (int c = cmp_names(x.rhs, y.rhs)) return c;
      return x.body.compare(y.body);
    }
    case 8: {
      const auto& x = std::get<CallP>(a);
      const auto& y = std::get<CallP>(b);
      if (int c = x.agent.compare(y.agent)) return c;
      if (x.args.size() != y.args.size()) return x.args.size() < y.args.size() ? -1 : 1;
      for (size_t i = 0; i < x.args.size(); ++i)
        if (int c = cmp_names(x.args[i], y.args[i])) return c;
      return 0;
    }
  }
  return 0;
}

/// An agent defining equation A(y1,...,yn) = body. Bodies must be closed up
/// to the reserved constants T and F.
struct AgentDef {
  AgentId id;
  std::vector<Name> params;
  Process body;
};

/// Finite simultaneous renaming of names, e.g. {m/z}.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(std::map<Name, Name> mapping) : map_(std::move(mapping)) {
    // Identity entries carry no information; drop them so domain() is exact.
    for (auto it = map_.begin(); it != map_.end();) {
      it = (it->first == it->second) ? map_.erase(it) : std::next(it);
    }
  }

  static Substitution single(Name from, Name to) {
    return Substitution({{std::move(from), std::move(to)}});
  }

  Name apply(const Name& n) const {
    auto it = map_.find(n);
    return it == map_.end() ? n : it->second;
  }

  bool empty() const { return map_.empty(); }

  std::set<Name> domain() const {
    std::set<Name> d;
    for (const auto& [k, _] : map_) d.insert(k);
    return d;
  }

  std::set<Name> image() const {
    std::set<Name> r;
    for (const auto& [_, v] : map_) r.insert(v);
    return r;
  }

  Substitution without(const Name& n) const {
    auto m = map_;
    m.erase(n);
    return Substitution(std::move(m));
  }

  const std::map<Name, Name>& mapping() const { return map_; }

 private:
  std::map<Name, Name> map_;
};

inline void collect_free_names(const Process& p, const std::set<Name>& bound,
                               std::set<Name>& out) {
  struct Visitor {
    const std::set<Name>& bound;
    std::set<Name>& out;
    void add(const Name& n) const {
      if (bound.count(n) == 0) out.insert(n);
    }
    void operator()(const NilP&) const {}
    void operator()(const SumP& n) const {
      collect_free_names(n.left, bound, out);
      collect_free_names(n.right, bound, out);
    }
    void operator()(const OutputP& n) const {
      add(n.chan);
      if (n.payload) add(*n.payload);
      collect_free_names(n.cont, bound, out);
    }
    void operator()(const InputP& n) const {
      add(n.chan);
      if (n.bind) {
        auto inner = bound;
        inner.insert(*n.bind);
        collect_free_names(n.cont, inner, out);
      } else {
        collect_free_names(n.cont, bound, out);
      }
    }
    void operator()(const TauP& n) const { collect_free_names(n.cont, bound, out); }
    void operator()(const ParP& n) const {
      collect_free_names(n.left, bound, out);
      collect_free_names(n.right, bound, out);
    }
    void operator()(const RestrictP& n) const {
      auto inner = bound;
      inner.insert(n.bind);
      collect_free_names(n.body, inner, out);
    }
    void operator()(const MatchP& n) const {
      add(n.lhs);
      add(n.rhs);
      collect_free_names(n.body, bound, out);
    }
    void operator()(const CallP& n) const {
      for (const auto& a : n.args) add(a);
    }
  };
  std::visit(Visitor{bound, out}, p.node());
}

/// Names with a free occurrence in p.
inline std::set<Name> free_names(const Process& p) {
  std::set<Name> out;
  collect_free_names(p, {}, out);
  return out;
}

inline std::set<Name> free_names(const Process& a, const Process& b) {
  std::set<Name> out = free_names(a);
  collect_free_names(b, {}, out);
  return out;
}

/// All names occurring in p, bound or free (used for fresh-name avoidance).
inline void collect_all_names(const Process& p, std::set<Name>& out) {
  struct Visitor {
    std::set<Name>& out;
    void operator()(const NilP&) const {}
    void operator()(const SumP& n) const {
      collect_all_names(n.left, out);
      collect_all_names(n.right, out);
    }
    void operator()(const OutputP& n) const {
      out.insert(n.chan);
      if (n.payload) out.insert(*n.payload);
      collect_all_names(n.cont, out);
    }
    void operator()(const InputP& n) const {
      out.insert(n.chan);
      if (n.bind) out.insert(*n.bind);
      collect_all_names(n.cont, out);
    }
    void operator()(const TauP& n) const { collect_all_names(n.cont, out); }
    void operator()(const ParP& n) const {
      collect_all_names(n.left, out);
      collect_all_names(n.right, out);
    }
    void operator()(const RestrictP& n) const {
      out.insert(n.bind);
      collect_all_names(n.body, out);
    }
    void operator()(const MatchP& n) const {
      out.insert(n.lhs);
      out.insert(n.rhs);
      collect_all_names(n.body, out);
    }
    void operator()(const CallP& n) const {
      for (const auto& a : n.args) out.insert(a);
    }
  };
  std::visit(Visitor{out}, p.node());
}

inline std::set<Name> all_names(const Process& p) {
  std::set<Name> out;
  collect_all_names(p, out);
  return out;
}

/// Capture-avoiding simultaneous substitution. Binders are renamed to
/// canonical fresh names whenever they would capture an incoming name.
inline Process substitute(const Process& p, const Substitution& s) {
  if (s.empty()) return p;

  struct Visitor {
    const Substitution& s;

    // Rebinds `bind` before descending when the binder collides with a name
    // the substitution may introduce below it.
    std::pair<Name, Process> rebind(const Name& bind, const Process& body) const {
      Substitution inner = s.without(bind);
      if (inner.empty()) return {bind, body};
      std::set<Name> body_free = free_names(body);
      body_free.erase(bind);
      bool capture = false;
      for (const auto& [from, to] : inner.mapping()) {
        if (to == bind && body_free.count(from) != 0) {
          capture = true;
          break;
        }
      }
      if (!capture) return {bind, substitute(body, inner)};
      std::set<Name> avoid = all_names(body);
      for (const auto& [from, to] : inner.mapping()) {
        avoid.insert(from);
        avoid.insert(to);
      }
      Name fresh = fresh_name(bind, avoid);
      Process renamed = substitute(body, Substitution::single(bind, fresh));
      return {fresh, substitute(renamed, inner)};
    }

    Process operator()(const NilP&) const { return Process::nil(); }
    Process operator()(const SumP& n) const {
      return Process::sum(substitute(n.left, s), substitute(n.right, s));
    }
    Process operator()(const OutputP& n) const {
      std::optional<Name> payload;
      if (n.payload) payload = s.apply(*n.payload);
      return Process::output(s.apply(n.chan), payload, substitute(n.cont, s));
    }
    Process operator()(const InputP& n) const {
      Name chan = s.apply(n.chan);
      if (!n.bind) return Process::input(chan, std::nullopt, substitute(n.cont, s));
      auto [bind, cont] = rebind(*n.bind, n.cont);
      return Process::input(chan, bind, cont);
    }
    Process operator()(const TauP& n) const { return Process::tau(substitute(n.cont, s)); }
    Process operator()(const ParP& n) const {
      return Process::par(substitute(n.left, s), substitute(n.right, s));
    }
    Process operator()(const RestrictP& n) const {
      auto [bind, body] = rebind(n.bind, n.body);
      return Process::restrict(bind, body);
    }
    Process operator()(const MatchP& n) const {
      return Process::match(s.apply(n.lhs), s.apply(n.rhs), substitute(n.body, s));
    }
    Process operator()(const CallP& n) const {
      std::vector<Name> args;
      args.reserve(n.args.size());
      for (const auto& a : n.args) args.push_back(s.apply(a));
      return Process::call(n.agent, std::move(args));
    }
  };
  return std::visit(Visitor{s}, p.node());
}

namespace detail {

// De Bruijn style environments: bound names map to their binder index.
struct AlphaEnv {
  std::map<Name, int> levels;
  int next = 0;
};

inline bool alpha_eq_rec(const Process& p, const Process& q, AlphaEnv& ep, AlphaEnv& eq);

inline bool alpha_name_eq(const Name& a, const Name& b, const AlphaEnv& ep,
                          const AlphaEnv& eq) {
  auto ia = ep.levels.find(a);
  auto ib = eq.levels.find(b);
  if ((ia != ep.levels.end()) != (ib != eq.levels.end())) return false;
  if (ia != ep.levels.end()) return ia->second == ib->second;
  return a == b;
}

inline bool alpha_opt_eq(const std::optional<Name>& a, const std::optional<Name>& b,
                         const AlphaEnv& ep, const AlphaEnv& eq) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return alpha_name_eq(*a, *b, ep, eq);
}

// Enter/leave a binder scope by saving and restoring the shadowed entry.
template <typename Fn>
bool with_binder(AlphaEnv& env, const Name& n, Fn&& fn) {
  auto it = env.levels.find(n);
  std::optional<int> saved;
  if (it != env.levels.end()) saved = it->second;
  env.levels[n] = env.next++;
  bool result = fn();
  --env.next;
  if (saved)
    env.levels[n] = *saved;
  else
    env.levels.erase(n);
  return result;
}

inline bool alpha_eq_rec(const Process& p, const Process& q, AlphaEnv& ep, AlphaEnv& eq) {
  const ProcNode& a = p.node();
  const ProcNode& b = q.node();
  if (a.index() != b.index()) return false;
  switch (a.index()) {
    case 0:
      return true;
    case 1: {
      const auto& x = std::get<SumP>(a);
      const auto& y = std::get<SumP>(b);
      return alpha_eq_rec(x.left, y.left, ep, eq) && alpha_eq_rec(x.right, y.right, ep, eq);
    }
    case 2: {
      const auto& x = std::get<OutputP>(a);
      const auto& y = std::get<OutputP>(b);
      return alpha_name_eq(x.chan, y.chan, ep, eq) &&
             alpha_opt_eq(x.payload, y.payload, ep, eq) &&
             alpha_eq_rec(x.cont, y.cont, ep, eq);
    }
    case 3: {
      const auto& x = std::get<InputP>(a);
      const auto& y = std::get<InputP>(b);
      if (!alpha_name_eq(x.chan, y.chan, ep, eq)) return false;
      if (x.bind.has_value() != y.bind.has_value()) return false;
      if (!x.bind) return alpha_eq_rec(x.cont, y.cont, ep, eq);
      return with_binder(ep, *x.bind, [&] {
        return with_binder(eq, *y.bind, [&] { return alpha_eq_rec(x.cont, y.cont, ep, eq); });
      });
    }
    case 4:
      return alpha_eq_rec(std::get<TauP>(a).cont, std::get<TauP>(b).cont, ep, eq);
    case 5: {
      const auto& x = std::get<ParP>(a);
      const auto& y = std::get<ParP>(b);
      return alpha_eq_rec(x.left, y.left, ep, eq) && alpha_eq_rec(x.right, y.right, ep, eq);
    }
    case 6: {
      const auto& x = std::get<RestrictP>(a);
      const auto& y = std::get<RestrictP>(b);
      return with_binder(ep, x.bind, [&] {
        return with_binder(eq, y.bind, [&] { return alpha_eq_rec(x.body, y.body, ep, eq); });
      });
    }
    case 7: {
      const auto& x = std::get<MatchP>(a);
      const auto& y = std::get<MatchP>(b);
      return alpha_name_eq(x.lhs, y.lhs, ep, eq) && alpha_name_eq(x.rhs, y.rhs, ep, eq) &&
             alpha_eq_rec(x.body, y.body, ep, eq);
    }
    case 8: {
      const auto& x = std::get<CallP>(a);
      const auto& y = std::get<CallP>(b);
      if (x.agent != y.agent || x.args.size() != y.args.size()) return false;
      for (size_t i = 0; i < x.args.size(); ++i)
        if (!alpha_name_eq(x.args[i], y.args[i], ep, eq)) return false;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// True iff p and q differ only in the choice of bound names.
inline bool alpha_eq(const Process& p, const Process& q) {
  detail::AlphaEnv ep, eq;
  return detail::alpha_eq_rec(p, q, ep, eq);
}

namespace detail {

// Binders are renumbered to the reserved family "_", "_'", "_''", ... in
// preorder. The parser never produces "_" identifiers, but terms that have
// already been canonicalized may carry them free, so occupied indices are
// skipped (alpha-variants have identical free names and skip identically).
struct Canonicalizer {
  std::set<Name> taken;
  unsigned next = 0;

  Name fresh_binder() {
    Name n{"_", next};
    while (taken.count(n) != 0) n.prime = ++next;
    ++next;
    return n;
  }

  Process run(const Process& p, const std::map<Name, Name>& env) {
    struct Visitor {
      Canonicalizer& c;
      const std::map<Name, Name>& env;

      Name look(const Name& n) const {
        auto it = env.find(n);
        return it == env.end() ? n : it->second;
      }
      std::optional<Name> look(const std::optional<Name>& n) const {
        if (!n) return std::nullopt;
        return look(*n);
      }

      Process operator()(const NilP&) const { return Process::nil(); }
      Process operator()(const SumP& n) const {
        return Process::sum(c.run(n.left, env), c.run(n.right, env));
      }
      Process operator()(const OutputP& n) const {
        return Process::output(look(n.chan), look(n.payload), c.run(n.cont, env));
      }
      Process operator()(const InputP& n) const {
        if (!n.bind) return Process::input(look(n.chan), std::nullopt, c.run(n.cont, env));
        Name chan = look(n.chan);
        Name binder = c.fresh_binder();
        auto inner = env;
        inner[*n.bind] = binder;
        return Process::input(chan, binder, c.run(n.cont, inner));
      }
      Process operator()(const TauP& n) const { return Process::tau(c.run(n.cont, env)); }
      Process operator()(const ParP& n) const {
        return Process::par(c.run(n.left, env), c.run(n.right, env));
      }
      Process operator()(const RestrictP& n) const {
        Name binder = c.fresh_binder();
        auto inner = env;
        inner[n.bind] = binder;
        return Process::restrict(binder, c.run(n.body, inner));
      }
      Process operator()(const MatchP& n) const {
        return Process::match(look(n.lhs), look(n.rhs), c.run(n.body, env));
      }
      Process operator()(const CallP& n) const {
        std::vector<Name> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args) args.push_back(look(a));
        return Process::call(n.agent, std::move(args));
      }
    };
    return std::visit(Visitor{*this, env}, p.node());
  }
};

}  // namespace detail

/// Canonical alpha-representative: binders renumbered in traversal order so
/// alpha-variants produce syntactically identical terms.
inline Process canonicalize(const Process& p) {
  detail::Canonicalizer c;
  for (const Name& n : free_names(p))
    if (n.id == "_") c.taken.insert(n);
  return c.run(p, {});
}

}  // namespace concur::pi
