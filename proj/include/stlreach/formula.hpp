#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stlreach/interval.hpp"

namespace stlreach {

enum class Polarity {
    Inclusion,  // y(t) ∈ region
    Exclusion,  // y(t) ∉ region
};

struct Predicate {
    std::string name;
    IntervalBox region;
    Polarity polarity = Polarity::Inclusion;
};

using PredicateTable = std::map<std::string, Predicate, std::less<>>;

struct SourcePos {
    int line = 1;
    int column = 1;
};

// STL abstract syntax. Temporal nodes carry exact bounds [lo, hi] with 0 <= lo <= hi.
struct Formula {
    enum class Kind { Tautology, Pred, Not, Or, And, Implies, Until, Finally, Globally };

    Kind kind = Kind::Tautology;
    std::string name;  // Pred only
    double lo = 0.0;   // temporal nodes only
    double hi = 0.0;
    std::vector<Formula> args;
    SourcePos pos;

    static Formula tautology();
    static Formula pred(std::string name);
    static Formula negation(Formula f);
    static Formula disjunction(Formula a, Formula b);
    static Formula conjunction(Formula a, Formula b);
    static Formula implication(Formula a, Formula b);
    // Throws UsageError unless 0 <= lo <= hi.
    static Formula until(double lo, double hi, Formula a, Formula b);
    static Formula finally(double lo, double hi, Formula f);
    static Formula globally(double lo, double hi, Formula f);

    bool is_temporal() const noexcept { return kind == Kind::Until || kind == Kind::Finally || kind == Kind::Globally; }

    // Structural equality; source positions are ignored.
    friend bool operator==(const Formula& a, const Formula& b);
};

// Parses the concrete grammar
//   formula := implies
//   implies := or ( "->" implies )?
//   or      := and ( "|" and )*
//   and     := until ( "&" until )*
//   until   := unary ( "U" bound unary )?
//   unary   := "!" unary | "G" bound unary | "F" bound unary | atom
//   atom    := "T" | ident | "(" formula ")"
//   bound   := "[" number "," number "]"
// Throws ParseError carrying line and column.
Formula parse_formula(std::string_view text);

// Minimal-parenthesis rendering that parses back to the same tree.
std::string to_string(const Formula& f);

// Rewrites ∧, →, F and G into {T, pred, ¬, ∨, U}.
Formula rewrite_derived(const Formula& f);
bool is_core(const Formula& f);

// Removes ¬¬ pairs. Off the default evaluation path.
Formula simplify_double_negation(const Formula& f);

// Length of signal needed beyond an evaluation instant: U/F/G add their upper bound.
double minimal_horizon(const Formula& f);

int depth(const Formula& f);
std::vector<std::string> predicate_names(const Formula& f);

// Throws BindingError naming the first undeclared predicate.
void bind_predicates(const Formula& f, const PredicateTable& predicates);

}  // namespace stlreach
