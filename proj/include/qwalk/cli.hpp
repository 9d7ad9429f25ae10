#pragma once

#include <ostream>
#include <span>
#include <string>

#include "qwalk/coin.hpp"

namespace qwalk {

/// Entry point of the `qwalk` tool. args[0] is the program name.
/// Returns 0 on success, 1 on a usage error (help goes to err), 2 when the
/// dynamics fail numerically (no convergence, singular fixed-point system).
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// "hadamard", "rot:<angle>" or eight comma-separated reals
/// "are,aim,bre,bim,cre,cim,dre,dim". Throws InvalidArgument on bad syntax,
/// NotUnitary / TrivialCoin on a bad matrix.
Coin parse_coin(const std::string& text);

}  // namespace qwalk
