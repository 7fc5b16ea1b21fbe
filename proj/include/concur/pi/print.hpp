// Canonical text rendering of pi-calculus terms.
//
// parse_program(print_process(p)) is alpha_eq to p; printing is a pure
// function of the term, so output is stable across runs.

#pragma once

#include <string>

#include "concur/pi/term.hpp"

namespace concur::pi {

namespace detail {

// Precedence levels, loosest to tightest: sum, par, prefix.
enum class PrintLevel { Sum, Par, Prefix };

inline void print_rec(const Process& p, PrintLevel level, std::string& out) {
  struct Visitor {
    PrintLevel level;
    std::string& out;

    void wrap(const Process& p, PrintLevel inner, bool needs_paren) const {
      if (needs_paren) {
        out += '(';
        print_rec(p, PrintLevel::Sum, out);
        out += ')';
      } else {
        print_rec(p, inner, out);
      }
    }

    void operator()(const NilP&) const { out += '0'; }
    void operator()(const SumP& n) const {
      bool paren = level != PrintLevel::Sum;
      if (paren) out += '(';
      print_rec(n.left, PrintLevel::Par, out);
      // Right-nested sums print flat: a + b + c.
      out += " + ";
      print_rec(n.right, PrintLevel::Sum, out);
      if (paren) out += ')';
    }
    void operator()(const OutputP& n) const {
      out += n.chan.str();
      out += '<';
      if (n.payload) out += n.payload->str();
      out += ">.";
      wrap(n.cont, PrintLevel::Prefix,
           !std::holds_alternative<NilP>(n.cont.node()) && cont_needs_paren(n.cont));
    }
    void operator()(const InputP& n) const {
      out += n.chan.str();
      out += '(';
      if (n.bind) out += n.bind->str();
      out += ").";
      wrap(n.cont, PrintLevel::Prefix,
           !std::holds_alternative<NilP>(n.cont.node()) && cont_needs_paren(n.cont));
    }
    void operator()(const TauP& n) const {
      out += "tau.";
      wrap(n.cont, PrintLevel::Prefix,
           !std::holds_alternative<NilP>(n.cont.node()) && cont_needs_paren(n.cont));
    }
    void operator()(const ParP& n) const {
      bool paren = level == PrintLevel::Prefix;
      if (paren) out += '(';
      print_rec(n.left, PrintLevel::Prefix, out);
      out += " | ";
      // Right-nested pars print flat: a | b | c.
      PrintLevel right = std::holds_alternative<ParP>(n.right.node()) ? PrintLevel::Par
                                                                      : PrintLevel::Prefix;
      print_rec(n.right, right, out);
      if (paren) out += ')';
    }
    void operator()(const RestrictP& n) const {
      out += "(new ";
      out += n.bind.str();
      out += ") ";
      wrap(n.body, PrintLevel::Prefix, cont_needs_paren(n.body));
    }
    void operator()(const MatchP& n) const {
      out += '[';
      out += n.lhs.str();
      out += '=';
      out += n.rhs.str();
      out += ']';
      wrap(n.body, PrintLevel::Prefix, cont_needs_paren(n.body));
    }
    void operator()(const CallP& n) const {
      out += n.agent;
      out += '(';
      for (size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ',';
        out += n.args[i].str();
      }
      out += ')';
    }

    static bool cont_needs_paren(const Process& p) {
      return std::holds_alternative<SumP>(p.node()) || std::holds_alternative<ParP>(p.node());
    }
  };
  std::visit(Visitor{level, out}, p.node());
}

}  // namespace detail

inline std::string print_process(const Process& p) {
  std::string out;
  detail::print_rec(p, detail::PrintLevel::Sum, out);
  return out;
}

}  // namespace concur::pi
