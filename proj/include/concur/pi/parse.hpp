// Parser for pi-calculus process files.
//
// Grammar (see README for the full description):
//   program  := (agentdef)* "main" process
//   agentdef := "agent" IDENT "(" params? ")" "=" process
//   process  := sum
//   sum      := par ("+" par)*
//   par      := prefix ("|" prefix)*
//   prefix   := "0" | "tau" "." prefix
//             | IDENT "<" IDENT? ">" "." prefix
//             | IDENT "(" IDENT? ")" "." prefix
//             | "(new" IDENT ")" prefix
//             | "[" IDENT "=" IDENT "]" prefix
//             | IDENT "(" args? ")"
//             | "(" process ")"
// "#" starts a line comment. Identifiers are letters/digits/underscores
// starting with a letter, optionally followed by primes; trailing primes
// encode the freshness index of the name.

#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "concur/pi/stdlib.hpp"
#include "concur/pi/term.hpp"

namespace concur::pi {

class ParseError : public std::runtime_error {
 public:
  ParseError(size_t line, size_t col, const std::string& message)
      : std::runtime_error(format(line, col, message)), line_(line), col_(col) {}

  size_t line() const { return line_; }
  size_t col() const { return col_; }

 private:
  static std::string format(size_t line, size_t col, const std::string& m) {
    std::ostringstream os;
    os << "parse error at " << line << ":" << col << ": " << m;
    return os.str();
  }
  size_t line_, col_;
};

/// A parsed program: user agent definitions plus the entry process. The
/// standard agents (Exec, Copy, And) are pre-loaded in environment();
/// user definitions of the same name replace them.
struct PiProgram {
  std::vector<AgentDef> defs;
  Process main;

  std::map<AgentId, AgentDef> environment() const {
    std::map<AgentId, AgentDef> env;
    for (const AgentDef& d : stdlib()) env[d.id] = d;
    for (const AgentDef& d : defs) env[d.id] = d;
    return env;
  }
};

namespace detail {

class PiLexer {
 public:
  explicit PiLexer(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool try_consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(line_, col_, std::string("expected '") + c + "' " + what);
    advance();
  }

  bool peek_ident() {
    skip_ws();
    return pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]));
  }

  // Does not consume; true when the next identifier equals `kw`.
  bool peek_keyword(std::string_view kw) {
    skip_ws();
    if (text_.compare(pos_, kw.size(), kw) != 0) return false;
    size_t after = pos_ + kw.size();
    if (after < text_.size()) {
      char c = text_[after];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') return false;
    }
    return true;
  }

  bool try_keyword(std::string_view kw) {
    if (!peek_keyword(kw)) return false;
    for (size_t i = 0; i < kw.size(); ++i) advance();
    return true;
  }

  std::string ident_base() {
    skip_ws();
    if (!peek_ident()) throw ParseError(line_, col_, "expected identifier");
    std::string s;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        s += c;
        advance();
      } else {
        break;
      }
    }
    return s;
  }

  Name name() {
    std::string base = ident_base();
    unsigned primes = 0;
    while (pos_ < text_.size() && text_[pos_] == '\'') {
      ++primes;
      advance();
    }
    return Name{std::move(base), primes};
  }

  size_t line() const { return line_; }
  size_t col() const { return col_; }

  struct Mark {
    size_t pos, line, col;
  };
  Mark mark() const { return {pos_, line_, col_}; }
  void rewind(Mark m) {
    pos_ = m.pos;
    line_ = m.line;
    col_ = m.col;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  size_t pos_ = 0;
  size_t line_ = 1;
  size_t col_ = 1;
};

class PiParser {
 public:
  explicit PiParser(std::string_view text) : lex_(text) {}

  PiProgram program() {
    PiProgram prog;
    while (lex_.try_keyword("agent")) prog.defs.push_back(agent_def());
    if (!lex_.try_keyword("main"))
      throw ParseError(lex_.line(), lex_.col(), "expected 'agent' definition or 'main'");
    prog.main = process();
    if (!lex_.eof()) throw ParseError(lex_.line(), lex_.col(), "trailing input after main process");
    return prog;
  }

  Process process() {
    Process left = par();
    while (lex_.try_consume('+')) left = Process::sum(left, par());
    return left;
  }

 private:
  AgentDef agent_def() {
    AgentDef def;
    def.id = lex_.ident_base();
    lex_.expect('(', "after agent name");
    if (!lex_.try_consume(')')) {
      def.params.push_back(lex_.name());
      while (lex_.try_consume(',')) def.params.push_back(lex_.name());
      lex_.expect(')', "after agent parameters");
    }
    lex_.expect('=', "after agent header");
    def.body = process();
    return def;
  }

  Process par() {
    Process left = prefix();
    while (lex_.try_consume('|')) left = Process::par(left, prefix());
    return left;
  }

  Process prefix() {
    size_t line = lex_.line(), col = lex_.col();
    if (lex_.try_consume('0')) return Process::nil();
    if (lex_.try_keyword("tau")) {
      lex_.expect('.', "after tau");
      return Process::tau(prefix());
    }
    if (lex_.try_consume('(')) {
      if (lex_.try_keyword("new")) {
        Name bind = lex_.name();
        lex_.expect(')', "after restricted name");
        return Process::restrict(bind, prefix());
      }
      Process inner = process();
      lex_.expect(')', "to close process group");
      return inner;
    }
    if (lex_.try_consume('[')) {
      Name lhs = lex_.name();
      lex_.expect('=', "in match");
      Name rhs = lex_.name();
      lex_.expect(']', "to close match");
      return Process::match(lhs, rhs, prefix());
    }
    if (lex_.peek_ident()) {
      Name head = lex_.name();
      if (lex_.try_consume('<')) {
        std::optional<Name> payload;
        if (!lex_.try_consume('>')) {
          payload = lex_.name();
          lex_.expect('>', "after output payload");
        }
        lex_.expect('.', "after output prefix");
        return Process::output(head, payload, prefix());
      }
      if (lex_.try_consume('(')) {
        // Input prefix and agent call share this shape; a '.' after the
        // closing paren decides.
        std::vector<Name> names;
        if (!lex_.try_consume(')')) {
          names.push_back(lex_.name());
          while (lex_.try_consume(',')) names.push_back(lex_.name());
          lex_.expect(')', "after name list");
        }
        if (lex_.try_consume('.')) {
          if (names.size() > 1)
            throw ParseError(line, col, "input prefix takes at most one bound name");
          std::optional<Name> bind;
          if (!names.empty()) bind = names[0];
          return Process::input(head, bind, prefix());
        }
        return Process::call(head.str(), std::move(names));
      }
      throw ParseError(lex_.line(), lex_.col(),
                       "expected '<', or '(' after identifier '" + head.str() + "'");
    }
    throw ParseError(line, col, "expected process");
  }

  PiLexer lex_;
};

// Load-time validation ----------------------------------------------------

// Channel-arity discipline: within one scope unit each name, resolved to its
// binding occurrence, is used as a channel at a single arity.
class ArityChecker {
 public:
  void check(const Process& p, const char* where) {
    where_ = where;
    scopes_.clear();
    free_arity_.clear();
    walk(p);
  }

 private:
  enum class Arity { Zero, One };

  void use(const Name& n, Arity a) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (it->count(n)) {
        set_arity((*it)[n], n, a);
        return;
      }
    }
    set_arity(free_arity_[n], n, a);
  }

  void set_arity(std::optional<Arity>& slot, const Name& n, Arity a) {
    if (slot && *slot != a)
      throw std::runtime_error(std::string("channel arity mismatch for '") + n.str() + "' in " +
                               where_);
    slot = a;
  }

  void walk(const Process& p) {
    struct Visitor {
      ArityChecker& c;
      void operator()(const NilP&) const {}
      void operator()(const SumP& n) const {
        c.walk(n.left);
        c.walk(n.right);
      }
      void operator()(const OutputP& n) const {
        c.use(n.chan, n.payload ? Arity::One : Arity::Zero);
        c.walk(n.cont);
      }
      void operator()(const InputP& n) const {
        c.use(n.chan, n.bind ? Arity::One : Arity::Zero);
        if (n.bind) {
          c.scopes_.push_back({{*n.bind, std::nullopt}});
          c.walk(n.cont);
          c.scopes_.pop_back();
        } else {
          c.walk(n.cont);
        }
      }
      void operator()(const TauP& n) const { c.walk(n.cont); }
      void operator()(const ParP& n) const {
        c.walk(n.left);
        c.walk(n.right);
      }
      void operator()(const RestrictP& n) const {
        c.scopes_.push_back({{n.bind, std::nullopt}});
        c.walk(n.body);
        c.scopes_.pop_back();
      }
      void operator()(const MatchP& n) const { c.walk(n.body); }
      void operator()(const CallP&) const {}
    };
    std::visit(Visitor{*this}, p.node());
  }

  const char* where_ = "";
  std::vector<std::map<Name, std::optional<Arity>>> scopes_;
  std::map<Name, std::optional<Arity>> free_arity_;
};

// Calls reachable without passing a prefix; a cycle among these would let an
// unfolding loop forever without consuming an action.
inline void collect_unguarded_calls(const Process& p, std::vector<AgentId>& out) {
  struct Visitor {
    std::vector<AgentId>& out;
    void operator()(const NilP&) const {}
    void operator()(const SumP& n) const {
      collect_unguarded_calls(n.left, out);
      collect_unguarded_calls(n.right, out);
    }
    void operator()(const OutputP&) const {}
    void operator()(const InputP&) const {}
    void operator()(const TauP&) const {}
    void operator()(const ParP& n) const {
      collect_unguarded_calls(n.left, out);
      collect_unguarded_calls(n.right, out);
    }
    void operator()(const RestrictP& n) const { collect_unguarded_calls(n.body, out); }
    void operator()(const MatchP& n) const { collect_unguarded_calls(n.body, out); }
    void operator()(const CallP& n) const { out.push_back(n.agent); }
  };
  std::visit(Visitor{out}, p.node());
}

inline void collect_calls(const Process& p, std::vector<const CallP*>& out) {
  struct Visitor {
    std::vector<const CallP*>& out;
    void operator()(const NilP&) const {}
    void operator()(const SumP& n) const {
      collect_calls(n.left, out);
      collect_calls(n.right, out);
    }
    void operator()(const OutputP& n) const { collect_calls(n.cont, out); }
    void operator()(const InputP& n) const { collect_calls(n.cont, out); }
    void operator()(const TauP& n) const { collect_calls(n.cont, out); }
    void operator()(const ParP& n) const {
      collect_calls(n.left, out);
      collect_calls(n.right, out);
    }
    void operator()(const RestrictP& n) const { collect_calls(n.body, out); }
    void operator()(const MatchP& n) const { collect_calls(n.body, out); }
    void operator()(const CallP& n) const { out.push_back(&n); }
  };
  std::visit(Visitor{out}, p.node());
}

inline void validate_program(const PiProgram& prog) {
  auto env = prog.environment();

  // Call targets exist with matching arity.
  auto check_calls = [&](const Process& p, const std::string& where) {
    std::vector<const CallP*> calls;
    collect_calls(p, calls);
    for (const CallP* call : calls) {
      auto it = env.find(call->agent);
      if (it == env.end())
        throw std::runtime_error("unbound agent '" + call->agent + "' in " + where);
      if (it->second.params.size() != call->args.size()) {
        std::ostringstream os;
        os << "arity mismatch calling '" << call->agent << "' in " << where << ": expected "
           << it->second.params.size() << " argument(s), got " << call->args.size();
        throw std::runtime_error(os.str());
      }
    }
  };
  check_calls(prog.main, "main");

  for (const auto& [id, def] : env) {
    check_calls(def.body, "agent " + id);

    std::set<Name> params(def.params.begin(), def.params.end());
    if (params.size() != def.params.size())
      throw std::runtime_error("duplicate parameter in agent " + id);
    // T and F are reserved constants and may occur free in any body.
    params.insert(truth_name(true));
    params.insert(truth_name(false));
    for (const Name& n : free_names(def.body)) {
      if (params.count(n) == 0)
        throw std::runtime_error("agent " + id + " is not closed: free name '" + n.str() + "'");
    }
  }

  // Guardedness: no cycle in the unguarded-call graph.
  std::map<AgentId, std::vector<AgentId>> unguarded;
  for (const auto& [id, def] : env) collect_unguarded_calls(def.body, unguarded[id]);
  std::map<AgentId, int> state;  // 0 unvisited, 1 on stack, 2 done
  auto dfs = [&](auto&& self, const AgentId& a) -> void {
    state[a] = 1;
    for (const AgentId& b : unguarded[a]) {
      if (state[b] == 1)
        throw std::runtime_error("unguarded recursion through agent '" + b + "'");
      if (state[b] == 0) self(self, b);
    }
    state[a] = 2;
  };
  for (const auto& [id, _] : env)
    if (state[id] == 0) dfs(dfs, id);

  ArityChecker arity;
  arity.check(prog.main, "main");
  for (const auto& [id, def] : env) arity.check(def.body, ("agent " + id).c_str());
}

}  // namespace detail

/// Parse and validate a program file.
inline PiProgram parse_program(std::string_view text) {
  detail::PiParser parser(text);
  PiProgram prog = parser.program();
  detail::validate_program(prog);
  return prog;
}

/// Parse a bare process expression (no agent definitions, no 'main').
inline Process parse_process(std::string_view text) {
  detail::PiParser parser(text);
  Process p = parser.process();
  return p;
}

}  // namespace concur::pi
