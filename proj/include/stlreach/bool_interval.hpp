#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>

namespace stlreach {

// Element of the Boolean interval lattice {∅, [0,0], [1,1], [0,1]}. The underlying value
// is a member bitset: bit 0 set when 0 (false) is a member, bit 1 when 1 (true) is.
enum class BoolInterval : std::uint8_t {
    Empty = 0b00,
    False = 0b01,
    True = 0b10,
    Unknown = 0b11,
};

constexpr bool may_be_false(BoolInterval a) noexcept { return (static_cast<unsigned>(a) & 0b01u) != 0; }
constexpr bool may_be_true(BoolInterval a) noexcept { return (static_cast<unsigned>(a) & 0b10u) != 0; }

constexpr BoolInterval make_bool_interval(bool has_false, bool has_true) noexcept {
    return static_cast<BoolInterval>((has_false ? 0b01u : 0u) | (has_true ? 0b10u : 0u));
}

constexpr BoolInterval bool_not(BoolInterval a) noexcept { return make_bool_interval(may_be_true(a), may_be_false(a)); }

constexpr BoolInterval bool_and(BoolInterval a, BoolInterval b) noexcept {
    if (a == BoolInterval::Empty || b == BoolInterval::Empty) {
        return BoolInterval::Empty;
    }
    return make_bool_interval(may_be_false(a) || may_be_false(b), may_be_true(a) && may_be_true(b));
}

constexpr BoolInterval bool_or(BoolInterval a, BoolInterval b) noexcept {
    if (a == BoolInterval::Empty || b == BoolInterval::Empty) {
        return BoolInterval::Empty;
    }
    return make_bool_interval(may_be_false(a) && may_be_false(b), may_be_true(a) || may_be_true(b));
}

constexpr BoolInterval from_bool(bool v) noexcept { return v ? BoolInterval::True : BoolInterval::False; }

std::string_view to_string(BoolInterval v) noexcept;
// Accepts "true", "false", "unknown", "empty".
std::optional<BoolInterval> parse_bool_interval(std::string_view text) noexcept;
std::ostream& operator<<(std::ostream& os, BoolInterval v);

}  // namespace stlreach
