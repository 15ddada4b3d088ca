#include "stlreach/bool_interval.hpp"

#include <ostream>

namespace stlreach {

std::string_view to_string(BoolInterval v) noexcept {
    switch (v) {
        case BoolInterval::Empty:
            return "empty";
        case BoolInterval::False:
            return "false";
        case BoolInterval::True:
            return "true";
        case BoolInterval::Unknown:
            return "unknown";
    }
    return "empty";
}

std::optional<BoolInterval> parse_bool_interval(std::string_view text) noexcept {
    if (text == "true") {
        return BoolInterval::True;
    }
    if (text == "false") {
        return BoolInterval::False;
    }
    if (text == "unknown") {
        return BoolInterval::Unknown;
    }
    if (text == "empty") {
        return BoolInterval::Empty;
    }
    return std::nullopt;
}

std::ostream& operator<<(std::ostream& os, BoolInterval v) { return os << to_string(v); }

}  // namespace stlreach
