#include "stlreach/system.hpp"

#include <algorithm>

namespace stlreach {

bool SystemModel::disturbance_is_point() const noexcept {
    return std::all_of(disturbance_box.begin(), disturbance_box.end(), [](const Interval& x) { return x.is_point(); });
}

SystemModel make_system(std::string name, const std::vector<std::string>& rhs, std::map<std::string, double> params,
                        IntervalBox disturbance_box, std::vector<std::string> state_names,
                        std::vector<std::string> disturbance_names) {
    if (state_names.empty()) {
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            state_names.push_back("y" + std::to_string(i + 1));
        }
    }
    if (disturbance_names.empty()) {
        for (std::size_t i = 0; i < disturbance_box.size(); ++i) {
            disturbance_names.push_back("w" + std::to_string(i + 1));
        }
    }
    if (disturbance_names.size() != disturbance_box.size()) {
        throw UsageError("disturbance symbol count does not match the disturbance box dimension");
    }
    if (disturbance_box.is_empty() && disturbance_box.size() != 0) {
        throw UsageError("disturbance box is empty");
    }
    SystemModel m;
    m.name = std::move(name);
    m.field = VectorField(rhs, state_names, disturbance_names, params);
    m.state_names = std::move(state_names);
    m.disturbance_names = std::move(disturbance_names);
    m.params = std::move(params);
    m.disturbance_box = std::move(disturbance_box);
    return m;
}

SystemModel builtin_system(std::string_view name, const std::map<std::string, double>& params) {
    if (name == "vanderpol") {
        std::map<std::string, double> p{{"mu", 1.0}};
        for (const auto& [k, v] : params) {
            if (k != "mu") {
                throw UsageError("vanderpol accepts only the parameter 'mu', got '" + k + "'");
            }
            p[k] = v;
        }
        return make_system("vanderpol", {"y2", "mu*(1 - y1^2)*y2 - y1"}, std::move(p));
    }
    throw UsageError("unknown builtin system '" + std::string(name) + "'");
}

std::vector<std::string> builtin_system_names() { return {"vanderpol"}; }

}  // namespace stlreach
