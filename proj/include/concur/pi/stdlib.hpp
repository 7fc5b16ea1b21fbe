// Built-in agents: the executor, the boolean copyer and the And gate,
// together with the boolean constants T and F (reserved free names).

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "concur/pi/term.hpp"

namespace concur::pi {

inline Name truth_name(bool b) { return Name{b ? "T" : "F", 0}; }

/// Exec(x) = x(y).y<>.0
/// Copy(y,z) = [y=T]z<T>.0 + [y=F]z<F>.0
/// And(x,y,out) = [x=T]Copy(y,out) + [x=F]out<F>.0
///
/// The And gate's false branch writes on `out`; the displayed form names a
/// channel that is not among its parameters, which would leave the
/// definition unclosed.
inline const std::vector<AgentDef>& stdlib() {
  static const std::vector<AgentDef> defs = [] {
    Name x{"x", 0}, y{"y", 0}, z{"z", 0}, out{"out", 0};
    Name t = truth_name(true), f = truth_name(false);

    AgentDef exec{"Exec",
                  {x},
                  Process::input(x, y, Process::output(y, std::nullopt, Process::nil()))};

    AgentDef copy{"Copy",
                  {y, z},
                  Process::sum(Process::match(y, t, Process::output(z, t, Process::nil())),
                               Process::match(y, f, Process::output(z, f, Process::nil())))};

    AgentDef gate{
        "And",
        {x, y, out},
        Process::sum(Process::match(x, t, Process::call("Copy", {y, out})),
                     Process::match(x, f, Process::output(out, f, Process::nil())))};

    return std::vector<AgentDef>{exec, copy, gate};
  }();
  return defs;
}

}  // namespace concur::pi
