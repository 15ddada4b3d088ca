#pragma once

#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stlreach/error.hpp"
#include "stlreach/series.hpp"

namespace stlreach {

// Vector field f(y, w) compiled from infix component expressions to a shared evaluation tape.
//
// Expression grammar: + - * / ^ (also **), unary minus, sin(), cos(), exp(), log(), numbers,
// state symbols, disturbance symbols and named parameters (folded to constants). Exponents must
// be constant; integer exponents use repeated multiplication, others exp(r*log(x)).
class VectorField {
public:
    VectorField() = default;
    // Throws ParseError on malformed input or unknown identifiers (column is 1-based within the
    // offending component; line is the component number).
    VectorField(const std::vector<std::string>& components, const std::vector<std::string>& state_names,
                const std::vector<std::string>& disturbance_names, const std::map<std::string, double>& params);

    std::size_t dim() const noexcept { return outputs_.size(); }
    std::size_t disturbance_dim() const noexcept { return disturbance_dim_; }
    const std::vector<std::string>& components() const noexcept { return sources_; }

    template <class T>
    std::vector<T> eval(const std::vector<T>& y, const std::vector<T>& w) const;

private:
    struct Instr {
        enum class Op { Const, State, Dist, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp, Log, PowInt, PowReal };
        Op op = Op::Const;
        int a = -1;
        int b = -1;
        double value = 0.0;  // Const literal / PowReal exponent
        int n = 0;           // State/Dist index, PowInt exponent
    };

    friend class ExpressionCompiler;

    std::vector<Instr> tape_;
    std::vector<int> outputs_;
    std::vector<std::string> sources_;
    std::size_t disturbance_dim_ = 0;
};

template <class T>
std::vector<T> VectorField::eval(const std::vector<T>& y, const std::vector<T>& w) const {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using Op = Instr::Op;
    if (y.size() != dim() || w.size() != disturbance_dim_) {
        throw UsageError("vector field evaluated with mismatched state or disturbance dimension");
    }
    std::vector<T> v;
    v.reserve(tape_.size());
    for (const Instr& in : tape_) {
        switch (in.op) {
            case Op::Const:
                v.push_back(T(in.value));
                break;
            case Op::State:
                v.push_back(y[static_cast<std::size_t>(in.n)]);
                break;
            case Op::Dist:
                v.push_back(w[static_cast<std::size_t>(in.n)]);
                break;
            case Op::Add:
                v.push_back(v[in.a] + v[in.b]);
                break;
            case Op::Sub:
                v.push_back(v[in.a] - v[in.b]);
                break;
            case Op::Mul:
                v.push_back(v[in.a] * v[in.b]);
                break;
            case Op::Div:
                v.push_back(v[in.a] / v[in.b]);
                break;
            case Op::Neg:
                v.push_back(-v[in.a]);
                break;
            case Op::Sin:
                v.push_back(sin(v[in.a]));
                break;
            case Op::Cos:
                v.push_back(cos(v[in.a]));
                break;
            case Op::Exp:
                v.push_back(exp(v[in.a]));
                break;
            case Op::Log:
                v.push_back(log(v[in.a]));
                break;
            case Op::PowInt:
                v.push_back(pown(v[in.a], in.n));
                break;
            case Op::PowReal:
                v.push_back(exp(T(in.value) * log(v[in.a])));
                break;
        }
    }
    std::vector<T> out;
    out.reserve(outputs_.size());
    for (int o : outputs_) {
        out.push_back(v[static_cast<std::size_t>(o)]);
    }
    return out;
}

}  // namespace stlreach
