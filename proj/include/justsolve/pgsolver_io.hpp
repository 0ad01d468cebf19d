#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "justsolve/game.hpp"

namespace pg {

struct ParseError : std::runtime_error {
    ParseError(int line, int column, const std::string& what);
    int line;
    int column;
};

/**
 * PGSolver game text:
 *
 *   parity <max-id>;
 *   <id> <priority> <owner> <succ>(,<succ>)* ("<name>")?;
 *
 * The header is optional. Ids may be sparse; nodes get dense indices in
 * order of appearance and keep their file id for round-tripping. Leaf
 * nodes, duplicate edges and other structural problems are parse errors.
 */
ParityGame parse_game(std::string_view text);

std::string emit_game(const ParityGame& g);

/**
 * Solution text, keyed by the game's original ids:
 *
 *   paritysol <count>;
 *   <id> <winner>( <strategy-successor>)?;
 *
 * A strategy move is present exactly on non-parameter nodes owned by their
 * winner.
 */
std::string emit_solution(const ParityGame& g, const ParameterMap& p, const Solution& s);

Solution parse_solution(std::string_view text, const ParityGame& g);

}  // namespace pg
