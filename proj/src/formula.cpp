#include "stlreach/formula.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "stlreach/error.hpp"

namespace stlreach {

namespace {

Formula make(Formula::Kind kind, std::vector<Formula> args) {
    Formula f;
    f.kind = kind;
    f.args = std::move(args);
    return f;
}

Formula make_temporal(Formula::Kind kind, double lo, double hi, std::vector<Formula> args) {
    if (!(0.0 <= lo && lo <= hi)) {
        std::ostringstream msg;
        msg << "temporal bound [" << lo << ", " << hi << "] must satisfy 0 <= a <= b";
        throw UsageError(msg.str());
    }
    Formula f = make(kind, std::move(args));
    f.lo = lo;
    f.hi = hi;
    return f;
}

}  // namespace

Formula Formula::tautology() { return make(Kind::Tautology, {}); }

Formula Formula::pred(std::string name) {
    Formula f = make(Kind::Pred, {});
    f.name = std::move(name);
    return f;
}

Formula Formula::negation(Formula f) { return make(Kind::Not, {std::move(f)}); }
Formula Formula::disjunction(Formula a, Formula b) { return make(Kind::Or, {std::move(a), std::move(b)}); }
Formula Formula::conjunction(Formula a, Formula b) { return make(Kind::And, {std::move(a), std::move(b)}); }
Formula Formula::implication(Formula a, Formula b) { return make(Kind::Implies, {std::move(a), std::move(b)}); }

Formula Formula::until(double lo, double hi, Formula a, Formula b) {
    return make_temporal(Kind::Until, lo, hi, {std::move(a), std::move(b)});
}

Formula Formula::finally(double lo, double hi, Formula f) {
    return make_temporal(Kind::Finally, lo, hi, {std::move(f)});
}

Formula Formula::globally(double lo, double hi, Formula f) {
    return make_temporal(Kind::Globally, lo, hi, {std::move(f)});
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) {
        return false;
    }
    if (a.is_temporal() && (a.lo != b.lo || a.hi != b.hi)) {
        return false;
    }
    return std::equal(a.args.begin(), a.args.end(), b.args.begin());
}

namespace {

enum Prec { kImplies = 1, kOr = 2, kAnd = 3, kUntil = 4, kUnary = 5 };

std::string number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string bound(const Formula& f) { return "[" + number(f.lo) + "," + number(f.hi) + "]"; }

void print(const Formula& f, int ctx, std::string& out) {
    using K = Formula::Kind;
    auto wrap = [&](int own, auto body) {
        const bool paren = own < ctx;
        if (paren) {
            out += '(';
        }
        body();
        if (paren) {
            out += ')';
        }
    };
    switch (f.kind) {
        case K::Tautology:
            out += 'T';
            return;
        case K::Pred:
            out += f.name;
            return;
        case K::Not:
            out += '!';
            print(f.args[0], kUnary, out);
            return;
        case K::Finally:
        case K::Globally:
            out += f.kind == K::Finally ? "F" : "G";
            out += bound(f);
            out += ' ';
            print(f.args[0], kUnary, out);
            return;
        case K::Until:
            wrap(kUntil, [&] {
                print(f.args[0], kUnary, out);
                out += " U" + bound(f) + " ";
                print(f.args[1], kUnary, out);
            });
            return;
        case K::And:
            wrap(kAnd, [&] {
                print(f.args[0], kAnd, out);
                out += " & ";
                print(f.args[1], kAnd + 1, out);
            });
            return;
        case K::Or:
            wrap(kOr, [&] {
                print(f.args[0], kOr, out);
                out += " | ";
                print(f.args[1], kOr + 1, out);
            });
            return;
        case K::Implies:
            wrap(kImplies, [&] {
                print(f.args[0], kOr, out);
                out += " -> ";
                print(f.args[1], kImplies, out);
            });
            return;
    }
}

}  // namespace

std::string to_string(const Formula& f) {
    std::string out;
    print(f, kImplies, out);
    return out;
}

Formula rewrite_derived(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind) {
        case K::Tautology:
        case K::Pred:
            return f;
        case K::Not:
            return Formula::negation(rewrite_derived(f.args[0]));
        case K::Or:
            return Formula::disjunction(rewrite_derived(f.args[0]), rewrite_derived(f.args[1]));
        case K::And:
            return Formula::negation(Formula::disjunction(Formula::negation(rewrite_derived(f.args[0])),
                                                          Formula::negation(rewrite_derived(f.args[1]))));
        case K::Implies:
            return Formula::disjunction(Formula::negation(rewrite_derived(f.args[0])), rewrite_derived(f.args[1]));
        case K::Until:
            return Formula::until(f.lo, f.hi, rewrite_derived(f.args[0]), rewrite_derived(f.args[1]));
        case K::Finally:
            return Formula::until(f.lo, f.hi, Formula::tautology(), rewrite_derived(f.args[0]));
        case K::Globally:
            return Formula::negation(
                Formula::until(f.lo, f.hi, Formula::tautology(), Formula::negation(rewrite_derived(f.args[0]))));
    }
    return f;
}

bool is_core(const Formula& f) {
    using K = Formula::Kind;
    if (f.kind == K::And || f.kind == K::Implies || f.kind == K::Finally || f.kind == K::Globally) {
        return false;
    }
    return std::all_of(f.args.begin(), f.args.end(), [](const Formula& g) { return is_core(g); });
}

Formula simplify_double_negation(const Formula& f) {
    if (f.kind == Formula::Kind::Not && f.args[0].kind == Formula::Kind::Not) {
        return simplify_double_negation(f.args[0].args[0]);
    }
    Formula r = f;
    for (auto& a : r.args) {
        a = simplify_double_negation(a);
    }
    return r;
}

double minimal_horizon(const Formula& f) {
    double h = 0.0;
    for (const auto& a : f.args) {
        h = std::max(h, minimal_horizon(a));
    }
    return f.is_temporal() ? f.hi + h : h;
}

int depth(const Formula& f) {
    int d = 0;
    for (const auto& a : f.args) {
        d = std::max(d, depth(a));
    }
    return f.args.empty() ? 0 : d + 1;
}

std::vector<std::string> predicate_names(const Formula& f) {
    std::set<std::string> names;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g.kind == Formula::Kind::Pred) {
            names.insert(g.name);
        }
        for (const auto& a : g.args) {
            walk(a);
        }
    };
    walk(f);
    return {names.begin(), names.end()};
}

void bind_predicates(const Formula& f, const PredicateTable& predicates) {
    if (f.kind == Formula::Kind::Pred && predicates.find(f.name) == predicates.end()) {
        std::ostringstream msg;
        msg << "unknown predicate '" << f.name << "' at " << f.pos.line << ":" << f.pos.column;
        throw BindingError(msg.str());
    }
    for (const auto& a : f.args) {
        bind_predicates(a, predicates);
    }
}

}  // namespace stlreach
