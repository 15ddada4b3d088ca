#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stlreach/expression.hpp"
#include "stlreach/interval.hpp"

namespace stlreach {

// ẏ = f(y, w) with w(t) ∈ disturbance_box. A zero-dimensional disturbance box means no disturbance.
struct SystemModel {
    std::string name;
    std::vector<std::string> state_names;
    std::vector<std::string> disturbance_names;
    std::map<std::string, double> params;
    VectorField field;
    IntervalBox disturbance_box;

    std::size_t dim() const noexcept { return field.dim(); }
    bool has_disturbance() const noexcept { return disturbance_box.size() != 0; }
    // True when every disturbance component is a single point.
    bool disturbance_is_point() const noexcept;
};

// Default symbols are y1..yn and w1..wp.
SystemModel make_system(std::string name, const std::vector<std::string>& rhs, std::map<std::string, double> params = {},
                        IntervalBox disturbance_box = {}, std::vector<std::string> state_names = {},
                        std::vector<std::string> disturbance_names = {});

// "vanderpol": y1' = y2, y2' = mu*(1 - y1^2)*y2 - y1 with mu defaulting to 1.
// Throws UsageError for an unknown name.
SystemModel builtin_system(std::string_view name, const std::map<std::string, double>& params = {});
std::vector<std::string> builtin_system_names();

}  // namespace stlreach
