#pragma once

#include <map>
#include <string>

#include "regretlab/game.hpp"

namespace regretlab {

// Typed parameters of the built-in games (N, T, d, grid, ...).
using BuiltinParams = std::map<std::string, double>;

// Builds a built-in game by name: quadratic, experts-simple, experts-general,
// disjoint-interval. (The ball game has no Game materialization; its checks
// use exact vector arithmetic.) Throws std::invalid_argument on unknown names
// or bad parameters.
Game make_builtin_game(const std::string& name, const BuiltinParams& params);

// Loads a game specification file (JSON): either the explicit fields
// `outcomes`, `actions`, `loss`, `embedding_norm`, or `builtin` plus `params`.
Game load_game_spec(const std::string& path);

}  // namespace regretlab
