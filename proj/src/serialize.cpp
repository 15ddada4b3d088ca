#include "stlreach/serialize.hpp"

#include <charconv>
#include <sstream>

#include "stlreach/error.hpp"

namespace stlreach {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json signal_to_json(const IntervalSignal& s) {
    json out = json::array();
    for (const SignalPiece& p : s.pieces()) {
        out.push_back({{"t_start", p.span.start},
                       {"t_end", p.span.end},
                       {"value", std::string(to_string(p.value))},
                       {"markers", p.markers.ids()}});
    }
    return out;
}

IntervalSignal signal_from_json(const json& j) {
    if (!j.is_array()) {
        throw ConfigError("signal must be a JSON array of pieces");
    }
    std::vector<SignalPiece> pieces;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const json& p = j[k];
        auto where = [&] { return "signal piece " + std::to_string(k); };
        if (!p.is_object()) {
            throw ConfigError(where() + " is not an object");
        }
        for (const auto& [key, value] : p.items()) {
            if (key != "t_start" && key != "t_end" && key != "value" && key != "markers") {
                throw ConfigError(where() + ": unknown key '" + key + "'");
            }
        }
        if (!p.contains("t_start") || !p["t_start"].is_number() || !p.contains("t_end") || !p["t_end"].is_number()) {
            throw ConfigError(where() + ": t_start and t_end must be numbers");
        }
        if (!p.contains("value") || !p["value"].is_string()) {
            throw ConfigError(where() + ": value must be one of true/false/unknown");
        }
        const auto value = parse_bool_interval(p["value"].get<std::string>());
        if (!value || *value == BoolInterval::Empty) {
            throw ConfigError(where() + ": value must be one of true/false/unknown");
        }
        SignalPiece piece;
        piece.span = {p["t_start"].get<double>(), p["t_end"].get<double>()};
        piece.value = *value;
        if (p.contains("markers")) {
            if (!p["markers"].is_array()) {
                throw ConfigError(where() + ": markers must be an array of integers");
            }
            for (const json& m : p["markers"]) {
                if (!m.is_number_integer()) {
                    throw ConfigError(where() + ": markers must be an array of integers");
                }
                piece.markers.insert(m.get<int>());
            }
        }
        pieces.push_back(std::move(piece));
    }
    try {
        return IntervalSignal(std::move(pieces));
    } catch (const UsageError& e) {
        throw ConfigError(std::string("invalid signal: ") + e.what());
    }
}

json box_to_json(const IntervalBox& b) {
    json out = json::array();
    for (const Interval& x : b) {
        out.push_back({x.lo(), x.hi()});
    }
    return out;
}

IntervalBox box_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) {
        throw ConfigError(what + " must be an array of [lo, hi] pairs");
    }
    std::vector<Interval> dims;
    for (const json& x : j) {
        if (!x.is_array() || x.size() != 2 || !x[0].is_number() || !x[1].is_number()) {
            throw ConfigError(what + " must be an array of [lo, hi] pairs");
        }
        const double lo = x[0].get<double>();
        const double hi = x[1].get<double>();
        if (!(lo <= hi)) {
            throw ConfigError(what + " has a component with lo > hi");
        }
        dims.emplace_back(lo, hi);
    }
    return IntervalBox(std::move(dims));
}

json tube_to_json(const Tube& tube) {
    json segs = json::array();
    for (const TubeSegment& s : tube.segments) {
        segs.push_back({{"index", s.index},
                        {"t_start", s.span.start},
                        {"t_end", s.span.end},
                        {"enclosure", box_to_json(s.enclosure)},
                        {"endpoint", box_to_json(s.endpoint)}});
    }
    return {{"initial_box", box_to_json(tube.initial_box)}, {"final_time", tube.final_time}, {"segments", segs}};
}

std::string tube_to_csv(const Tube& tube) {
    std::ostringstream out;
    out << "index,t_start,t_end,dim,lo,hi\n";
    for (const TubeSegment& s : tube.segments) {
        for (std::size_t d = 0; d < s.enclosure.size(); ++d) {
            out << s.index << ',' << format_double(s.span.start) << ',' << format_double(s.span.end) << ',' << d << ','
                << format_double(s.enclosure[d].lo()) << ',' << format_double(s.enclosure[d].hi()) << '\n';
        }
    }
    return out.str();
}

}  // namespace stlreach
