#pragma once

#include <optional>
#include <string>

#include "model.hpp"

namespace stcl::config {

// Parse a setup from the structured-text config format or from canonical
// JSON (detected by a leading '{'). See README for the grammar.
model::Setup parse(const std::string& text, Tolerances tol = Tolerances::load());
model::Setup parse_file(const std::string& path, Tolerances tol = Tolerances::load());

// Canonical JSON export: fixed field order, entries sorted, shortest
// round-trip number formatting. serialize(parse(s)) is byte-identical to
// serialize(parse(serialize(parse(s)))).
std::string serialize(const model::Setup& setup);

// When the config used the [resonant_level] shortcut, its parameters are
// recoverable for parameter sweeps.
struct ResonantLevelConfig {
    double eps0 = 0.0;
    double gamma0 = 1.0;
    double mu = 0.0;
    double cutoff = 1e6;
    double temperature = 1.0;
};

std::optional<ResonantLevelConfig> parse_resonant_level(const std::string& text);

} // namespace stcl::config
