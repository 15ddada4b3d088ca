#include "stlreach/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

namespace stlreach {

class ExpressionCompiler {
public:
    using Instr = VectorField::Instr;
    using Op = Instr::Op;

    ExpressionCompiler(VectorField& out, const std::vector<std::string>& states, const std::vector<std::string>& dists,
                       const std::map<std::string, double>& params)
        : out_(out), states_(states), dists_(dists), params_(params) {}

    int compile(std::string_view src, int line) {
        src_ = src;
        line_ = line;
        i_ = 0;
        const int root = expr();
        skip();
        if (i_ < src_.size()) {
            fail("unexpected '" + std::string(1, src_[i_]) + "'");
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, static_cast<int>(i_) + 1);
    }

    void skip() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) {
            ++i_;
        }
    }

    bool accept(std::string_view tok) {
        skip();
        if (src_.substr(i_, tok.size()) == tok) {
            i_ += tok.size();
            return true;
        }
        return false;
    }

    int emit(Instr in) {
        out_.tape_.push_back(in);
        return static_cast<int>(out_.tape_.size()) - 1;
    }

    int binary(Op op, int a, int b) {
        Instr in;
        in.op = op;
        in.a = a;
        in.b = b;
        return emit(in);
    }

    // Value of a subtree built only from constants, if it is one.
    std::optional<double> constant_value(int node) const {
        const Instr& in = out_.tape_[static_cast<std::size_t>(node)];
        auto sub = [&](int k) { return constant_value(k); };
        switch (in.op) {
            case Op::Const:
                return in.value;
            case Op::Neg:
                if (auto a = sub(in.a)) {
                    return -*a;
                }
                return std::nullopt;
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Div: {
                auto a = sub(in.a);
                auto b = sub(in.b);
                if (!a || !b) {
                    return std::nullopt;
                }
                switch (in.op) {
                    case Op::Add:
                        return *a + *b;
                    case Op::Sub:
                        return *a - *b;
                    case Op::Mul:
                        return *a * *b;
                    default:
                        return *a / *b;
                }
            }
            default:
                return std::nullopt;
        }
    }

    int expr() {
        int lhs = term();
        for (;;) {
            if (accept("+")) {
                lhs = binary(Op::Add, lhs, term());
            } else if (accept("-")) {
                lhs = binary(Op::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    int term() {
        int lhs = unary();
        for (;;) {
            skip();
            if (src_.substr(i_, 2) == "**") {
                return lhs;
            }
            if (accept("*")) {
                lhs = binary(Op::Mul, lhs, unary());
            } else if (accept("/")) {
                lhs = binary(Op::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    int unary() {
        if (accept("-")) {
            return binary(Op::Neg, unary(), -1);
        }
        if (accept("+")) {
            return unary();
        }
        return power();
    }

    int power() {
        const int base = primary();
        if (accept("^") || accept("**")) {
            const std::size_t at = i_;
            const int e = unary();
            const auto value = constant_value(e);
            if (!value) {
                i_ = at;
                fail("exponent must be a constant expression");
            }
            Instr in;
            in.a = base;
            const double r = *value;
            if (r == std::trunc(r) && std::abs(r) <= 64.0) {
                in.op = Op::PowInt;
                in.n = static_cast<int>(r);
            } else {
                in.op = Op::PowReal;
                in.value = r;
            }
            return emit(in);
        }
        return base;
    }

    int primary() {
        skip();
        if (i_ >= src_.size()) {
            fail("unexpected end of expression");
        }
        const char c = src_[i_];
        if (c == '(') {
            ++i_;
            const int e = expr();
            if (!accept(")")) {
                fail("expected ')'");
            }
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            Instr in;
            in.op = Op::Const;
            auto res = std::from_chars(src_.data() + i_, src_.data() + src_.size(), in.value);
            if (res.ec != std::errc{}) {
                fail("malformed number");
            }
            i_ = static_cast<std::size_t>(res.ptr - src_.data());
            return emit(in);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = i_;
            while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
                ++i_;
            }
            const std::string name(src_.substr(start, i_ - start));
            skip();
            if (i_ < src_.size() && src_[i_] == '(') {
                Op op;
                if (name == "sin") {
                    op = Op::Sin;
                } else if (name == "cos") {
                    op = Op::Cos;
                } else if (name == "exp") {
                    op = Op::Exp;
                } else if (name == "log") {
                    op = Op::Log;
                } else {
                    i_ = start;
                    fail("unknown function '" + name + "'");
                }
                ++i_;
                const int arg = expr();
                if (!accept(")")) {
                    fail("expected ')'");
                }
                return binary(op, arg, -1);
            }
            if (auto it = std::find(states_.begin(), states_.end(), name); it != states_.end()) {
                Instr in;
                in.op = Op::State;
                in.n = static_cast<int>(it - states_.begin());
                return emit(in);
            }
            if (auto it = std::find(dists_.begin(), dists_.end(), name); it != dists_.end()) {
                Instr in;
                in.op = Op::Dist;
                in.n = static_cast<int>(it - dists_.begin());
                return emit(in);
            }
            if (auto it = params_.find(name); it != params_.end()) {
                Instr in;
                in.op = Op::Const;
                in.value = it->second;
                return emit(in);
            }
            i_ = start;
            fail("unknown symbol '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    VectorField& out_;
    const std::vector<std::string>& states_;
    const std::vector<std::string>& dists_;
    const std::map<std::string, double>& params_;
    std::string_view src_;
    std::size_t i_ = 0;
    int line_ = 1;
};

VectorField::VectorField(const std::vector<std::string>& components, const std::vector<std::string>& state_names,
                         const std::vector<std::string>& disturbance_names,
                         const std::map<std::string, double>& params)
    : sources_(components), disturbance_dim_(disturbance_names.size()) {
    if (components.size() != state_names.size()) {
        throw UsageError("vector field needs one component per state symbol");
    }
    ExpressionCompiler compiler(*this, state_names, disturbance_names, params);
    for (std::size_t k = 0; k < components.size(); ++k) {
        outputs_.push_back(compiler.compile(components[k], static_cast<int>(k) + 1));
    }
}

}  // namespace stlreach
