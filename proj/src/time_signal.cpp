#include "stlreach/time_signal.hpp"

#include <algorithm>
#include <iterator>
#include <ostream>
#include <sstream>

#include "stlreach/error.hpp"

namespace stlreach {

TimeInterval intersect(const TimeInterval& a, const TimeInterval& b) noexcept {
    return {std::max(a.start, b.start), std::min(a.end, b.end)};
}

std::optional<TimeInterval> back_shift(const TimeInterval& i, double a, double b) {
    if (!(0.0 <= a && a <= b)) {
        std::ostringstream msg;
        msg << "back_shift requires 0 <= a <= b, got [" << a << ", " << b << "]";
        throw UsageError(msg.str());
    }
    if (i.is_empty()) {
        return std::nullopt;
    }
    TimeInterval r{std::max(i.start - b, 0.0), i.end - a};
    if (r.is_empty()) {
        return std::nullopt;
    }
    return r;
}

std::ostream& operator<<(std::ostream& os, const TimeInterval& i) {
    return os << '[' << i.start << ", " << i.end << ')';
}

MarkerSet::MarkerSet(std::initializer_list<int> ids) : ids_(ids) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

void MarkerSet::insert(int id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) {
        ids_.insert(it, id);
    }
}

void MarkerSet::merge(const MarkerSet& other) {
    if (other.empty()) {
        return;
    }
    std::vector<int> out;
    out.reserve(ids_.size() + other.ids_.size());
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out));
    ids_ = std::move(out);
}

bool MarkerSet::contains(int id) const noexcept { return std::binary_search(ids_.begin(), ids_.end(), id); }

MarkerSet MarkerSet::non_negative() const {
    MarkerSet r;
    for (int id : ids_) {
        if (id >= 0) {
            r.ids_.push_back(id);
        }
    }
    return r;
}

MarkerSet set_union(const MarkerSet& a, const MarkerSet& b) {
    MarkerSet r = a;
    r.merge(b);
    return r;
}

std::ostream& operator<<(std::ostream& os, const MarkerSet& m) {
    os << '{';
    bool first = true;
    for (int id : m) {
        os << (first ? "" : ",") << id;
        first = false;
    }
    return os << '}';
}

namespace {

void append_canonical(std::vector<SignalPiece>& out, SignalPiece p) {
    if (p.span.is_empty()) {
        return;
    }
    if (!out.empty() && out.back().value == p.value && out.back().markers == p.markers) {
        out.back().span.end = p.span.end;
        return;
    }
    out.push_back(std::move(p));
}

}  // namespace

IntervalSignal::IntervalSignal(std::vector<SignalPiece> pieces) {
    double cursor = 0.0;
    for (const auto& p : pieces) {
        if (p.span.start != cursor) {
            std::ostringstream msg;
            msg << "signal pieces must tile [0, end) contiguously; piece " << p.span << " starts at " << p.span.start
                << " but previous coverage ends at " << cursor;
            throw UsageError(msg.str());
        }
        if (!(p.span.start < p.span.end)) {
            std::ostringstream msg;
            msg << "signal piece " << p.span << " is empty";
            throw UsageError(msg.str());
        }
        if (p.value == BoolInterval::Empty) {
            throw UsageError("signal pieces cannot carry the empty Boolean interval");
        }
        if (p.value == BoolInterval::Unknown && p.markers.empty()) {
            std::ostringstream msg;
            msg << "unknown piece " << p.span << " has no markers";
            throw UsageError(msg.str());
        }
        if (p.value != BoolInterval::Unknown && !p.markers.empty()) {
            std::ostringstream msg;
            msg << "crisp piece " << p.span << " carries markers";
            throw UsageError(msg.str());
        }
        cursor = p.span.end;
    }
    pieces_.reserve(pieces.size());
    for (auto& p : pieces) {
        append_canonical(pieces_, std::move(p));
    }
}

IntervalSignal IntervalSignal::constant(double end, BoolInterval value, MarkerSet markers) {
    if (!(end > 0.0)) {
        return IntervalSignal{};
    }
    return IntervalSignal({SignalPiece{{0.0, end}, value, std::move(markers)}});
}

const SignalPiece& IntervalSignal::piece_at(double t) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double v, const SignalPiece& p) { return v < p.span.end; });
    if (t < 0.0 || it == pieces_.end()) {
        std::ostringstream msg;
        msg << "time " << t << " outside signal domain [0, " << domain_end() << ")";
        throw UsageError(msg.str());
    }
    return *it;
}

double IntervalSignal::duration(BoolInterval value, double from, double to) const {
    double total = 0.0;
    const TimeInterval window{from, to};
    for (const auto& p : pieces_) {
        if (p.value == value) {
            total += intersect(p.span, window).length();
        }
    }
    return total;
}

std::ostream& operator<<(std::ostream& os, const IntervalSignal& s) {
    for (const auto& p : s.pieces()) {
        os << p.span << ':' << p.value;
        if (!p.markers.empty()) {
            os << p.markers;
        }
        os << ' ';
    }
    return os;
}

Decomposition decompose(const IntervalSignal& s) {
    Decomposition d;
    const auto& ps = s.pieces();
    auto scan = [&](auto in_run, UnitaryKind kind, std::vector<UnitarySignal>& out) {
        std::size_t i = 0;
        while (i < ps.size()) {
            if (!in_run(ps[i].value)) {
                ++i;
                continue;
            }
            UnitarySignal u{ps[i].span, kind, {}};
            while (i < ps.size() && in_run(ps[i].value)) {
                u.span.end = ps[i].span.end;
                u.markers.merge(ps[i].markers);
                ++i;
            }
            out.push_back(std::move(u));
        }
    };
    scan([](BoolInterval v) { return v == BoolInterval::True; }, UnitaryKind::Certain, d.certain);
    scan([](BoolInterval v) { return v == BoolInterval::Unknown; }, UnitaryKind::Uncertain, d.uncertain);
    scan([](BoolInterval v) { return v == BoolInterval::True || v == BoolInterval::Unknown; }, UnitaryKind::Relaxed,
         d.relaxed);
    return d;
}

IntervalSignal to_signal(const UnitarySignal& u, double domain_end) {
    const TimeInterval span = intersect(u.span, {0.0, domain_end});
    const BoolInterval inside = u.kind == UnitaryKind::Certain ? BoolInterval::True : BoolInterval::Unknown;
    std::vector<SignalPiece> pieces;
    if (span.is_empty()) {
        return IntervalSignal::constant(domain_end, BoolInterval::False);
    }
    if (span.start > 0.0) {
        pieces.push_back({{0.0, span.start}, BoolInterval::False, {}});
    }
    pieces.push_back({span, inside, inside == BoolInterval::Unknown ? u.markers : MarkerSet{}});
    if (span.end < domain_end) {
        pieces.push_back({{span.end, domain_end}, BoolInterval::False, {}});
    }
    return IntervalSignal(std::move(pieces));
}

namespace {

void require_same_domain(const IntervalSignal& a, const IntervalSignal& b, const char* op) {
    if (a.domain_end() != b.domain_end()) {
        std::ostringstream msg;
        msg << op << ": signal domains differ ([0, " << a.domain_end() << ") vs [0, " << b.domain_end() << "))";
        throw UsageError(msg.str());
    }
}

}  // namespace

IntervalSignal signal_or(const IntervalSignal& a, const IntervalSignal& b) {
    require_same_domain(a, b, "signal_or");
    const auto& pa = a.pieces();
    const auto& pb = b.pieces();
    std::vector<SignalPiece> out;
    out.reserve(pa.size() + pb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double cursor = 0.0;
    while (i < pa.size() && j < pb.size()) {
        const double end = std::min(pa[i].span.end, pb[j].span.end);
        const BoolInterval v = bool_or(pa[i].value, pb[j].value);
        MarkerSet m;
        if (v == BoolInterval::Unknown) {
            if (pa[i].value == BoolInterval::False) {
                m = pb[j].markers;
            } else if (pb[j].value == BoolInterval::False) {
                m = pa[i].markers;
            } else {
                m = set_union(pa[i].markers, pb[j].markers);
            }
        }
        append_canonical(out, {{cursor, end}, v, std::move(m)});
        cursor = end;
        if (pa[i].span.end == end) {
            ++i;
        }
        if (pb[j].span.end == end) {
            ++j;
        }
    }
    return IntervalSignal(std::move(out));
}

IntervalSignal signal_not(const IntervalSignal& a) {
    std::vector<SignalPiece> out;
    out.reserve(a.pieces().size());
    for (const auto& p : a.pieces()) {
        out.push_back({p.span, bool_not(p.value), p.markers});
    }
    return IntervalSignal(std::move(out));
}

IntervalSignal signal_and(const IntervalSignal& a, const IntervalSignal& b) {
    return signal_not(signal_or(signal_not(a), signal_not(b)));
}

IntervalSignal pad_to(const IntervalSignal& s, double new_end) {
    if (new_end < s.domain_end()) {
        std::ostringstream msg;
        msg << "pad_to: new end " << new_end << " precedes domain end " << s.domain_end();
        throw UsageError(msg.str());
    }
    if (new_end == s.domain_end()) {
        return s;
    }
    std::vector<SignalPiece> pieces = s.pieces();
    pieces.push_back({{s.domain_end(), new_end}, BoolInterval::Unknown, MarkerSet::horizon()});
    return IntervalSignal(std::move(pieces));
}

IntervalSignal truncate(const IntervalSignal& s, double new_end) {
    if (new_end > s.domain_end()) {
        std::ostringstream msg;
        msg << "truncate: new end " << new_end << " exceeds domain end " << s.domain_end();
        throw UsageError(msg.str());
    }
    std::vector<SignalPiece> pieces;
    for (const auto& p : s.pieces()) {
        if (p.span.start >= new_end) {
            break;
        }
        pieces.push_back({{p.span.start, std::min(p.span.end, new_end)}, p.value, p.markers});
    }
    return IntervalSignal(std::move(pieces));
}

}  // namespace stlreach
