#pragma once

#include <string>

#include "json.hpp"
#include "stlreach/reach.hpp"
#include "stlreach/time_signal.hpp"

namespace stlreach {

// [{"t_start", "t_end", "value", "markers"}, ...]
nlohmann::json signal_to_json(const IntervalSignal& s);
// Throws ConfigError on malformed input or invalid tiling.
IntervalSignal signal_from_json(const nlohmann::json& j);

nlohmann::json box_to_json(const IntervalBox& b);
// [[lo, hi], ...]; throws ConfigError.
IntervalBox box_from_json(const nlohmann::json& j, const std::string& what);

nlohmann::json tube_to_json(const Tube& tube);
// index,t_start,t_end,dim,lo,hi with one row per segment and dimension (enclosure bounds).
std::string tube_to_csv(const Tube& tube);

std::string format_double(double v);

}  // namespace stlreach
