#include "rsph/arith.hpp"

#include <cctype>
#include <set>

namespace rsph::arith {

namespace {

struct Lexer {
    const std::string& s;
    size_t i = 0;

    explicit Lexer(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    bool accept(const char* tok) {
        skip_ws();
        size_t n = std::char_traits<char>::length(tok);
        if (s.compare(i, n, tok) == 0) {
            i += n;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", i);
    }
    bool ident_start() {
        skip_ws();
        return i < s.size() &&
               (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_');
    }
    std::string ident() {
        skip_ws();
        size_t b = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        if (b == i) throw ParseError("expected identifier", i);
        return s.substr(b, i - b);
    }
    long long number() {
        skip_ws();
        size_t b = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (b == i) throw ParseError("expected number", i);
        return std::stoll(s.substr(b, i - b));
    }
};

}  // namespace

struct Formula::Node {
    enum class Op { Const, Var, Add, Sub, Mul, Neg, FloorDiv, Min, Max } op;
    long long value = 0;
    std::string name;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using FNode = Formula::Node;
using FPtr = std::shared_ptr<const FNode>;

FPtr mk(FNode::Op op, FPtr l = nullptr, FPtr r = nullptr) {
    auto n = std::make_shared<FNode>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

FPtr parse_sum(Lexer& lx);

FPtr parse_atom(Lexer& lx) {
    if (lx.accept('(')) {
        auto e = parse_sum(lx);
        lx.expect(')');
        return e;
    }
    if (lx.accept('-')) return mk(FNode::Op::Neg, parse_atom(lx));
    if (lx.ident_start()) {
        std::string id = lx.ident();
        if (id == "min" || id == "max") {
            lx.expect('(');
            auto a = parse_sum(lx);
            lx.expect(',');
            auto b = parse_sum(lx);
            lx.expect(')');
            return mk(id == "min" ? FNode::Op::Min : FNode::Op::Max, a, b);
        }
        auto n = std::make_shared<FNode>();
        n->op = FNode::Op::Var;
        n->name = id;
        return n;
    }
    auto n = std::make_shared<FNode>();
    n->op = FNode::Op::Const;
    n->value = lx.number();
    return n;
}

FPtr parse_prod(Lexer& lx) {
    auto e = parse_atom(lx);
    for (;;) {
        if (lx.accept('*'))
            e = mk(FNode::Op::Mul, e, parse_atom(lx));
        else if (lx.peek() == '/' ) {
            lx.accept('/');
            e = mk(FNode::Op::FloorDiv, e, parse_atom(lx));
        } else
            return e;
    }
}

FPtr parse_sum(Lexer& lx) {
    auto e = parse_prod(lx);
    for (;;) {
        if (lx.accept('+'))
            e = mk(FNode::Op::Add, e, parse_prod(lx));
        else if (lx.accept('-'))
            e = mk(FNode::Op::Sub, e, parse_prod(lx));
        else
            return e;
    }
}

std::optional<long long> eval_node(const FNode* n, const Binding& b) {
    switch (n->op) {
        case FNode::Op::Const: return n->value;
        case FNode::Op::Var: {
            auto it = b.find(n->name);
            if (it == b.end()) return std::nullopt;
            return it->second;
        }
        default: break;
    }
    std::optional<long long> l = n->lhs ? eval_node(n->lhs.get(), b) : std::nullopt;
    if (n->op == FNode::Op::Neg) {
        if (!l) return std::nullopt;
        return -*l;
    }
    auto r = eval_node(n->rhs.get(), b);
    if (!l || !r) return std::nullopt;
    switch (n->op) {
        case FNode::Op::Add: return *l + *r;
        case FNode::Op::Sub: return *l - *r;
        case FNode::Op::Mul: return *l * *r;
        case FNode::Op::FloorDiv: {
            if (*r == 0) throw std::runtime_error("division by zero in formula");
            long long q = *l / *r, rem = *l % *r;
            if (rem != 0 && ((rem < 0) != (*r < 0))) --q;  // floor toward -inf
            return q;
        }
        case FNode::Op::Min: return std::min(*l, *r);
        case FNode::Op::Max: return std::max(*l, *r);
        default: throw std::logic_error("bad formula node");
    }
}

void collect_vars(const FNode* n, std::set<std::string>& out) {
    if (!n) return;
    if (n->op == FNode::Op::Var) out.insert(n->name);
    collect_vars(n->lhs.get(), out);
    collect_vars(n->rhs.get(), out);
}

std::optional<Formula::Affine> affine_node(const FNode* n) {
    using Aff = Formula::Affine;
    auto combine = [](Aff a, const Aff& b, long long sign) {
        a.c0 += sign * b.c0;
        for (auto& [v, c] : b.coeff) {
            a.coeff[v] += sign * c;
            if (a.coeff[v] == 0) a.coeff.erase(v);
        }
        return a;
    };
    switch (n->op) {
        case FNode::Op::Const: return Aff{n->value, {}};
        case FNode::Op::Var: return Aff{0, {{n->name, 1}}};
        case FNode::Op::Neg: {
            auto l = affine_node(n->lhs.get());
            if (!l) return std::nullopt;
            return combine(Aff{}, *l, -1);
        }
        case FNode::Op::Add:
        case FNode::Op::Sub: {
            auto l = affine_node(n->lhs.get());
            auto r = affine_node(n->rhs.get());
            if (!l || !r) return std::nullopt;
            return combine(*l, *r, n->op == FNode::Op::Add ? 1 : -1);
        }
        case FNode::Op::Mul: {
            auto l = affine_node(n->lhs.get());
            auto r = affine_node(n->rhs.get());
            if (!l || !r) return std::nullopt;
            const Aff *scalar = nullptr, *lin = nullptr;
            if (l->coeff.empty()) scalar = &*l, lin = &*r;
            else if (r->coeff.empty()) scalar = &*r, lin = &*l;
            else return std::nullopt;
            Aff out;
            out.c0 = scalar->c0 * lin->c0;
            for (auto& [v, c] : lin->coeff)
                if (scalar->c0 * c != 0) out.coeff[v] = scalar->c0 * c;
            return out;
        }
        default: return std::nullopt;
    }
}

}  // namespace

Formula Formula::parse(const std::string& text) {
    Lexer lx(text);
    Formula f;
    f.src_ = text;
    f.node_ = parse_sum(lx);
    if (!lx.eof()) throw ParseError("trailing input in formula '" + text + "'", lx.i);
    return f;
}

long long Formula::eval(const Binding& b) const {
    if (!node_) throw std::logic_error("empty formula");
    auto v = eval_node(node_.get(), b);
    if (!v) {
        std::set<std::string> vars;
        collect_vars(node_.get(), vars);
        for (auto& name : vars)
            if (!b.count(name)) throw UnboundVariable(name);
        throw std::logic_error("formula evaluation failed");
    }
    return *v;
}

std::optional<long long> Formula::try_eval(const Binding& b) const {
    if (!node_) return std::nullopt;
    return eval_node(node_.get(), b);
}

std::optional<Formula::Affine> Formula::affine() const {
    if (!node_) return std::nullopt;
    return affine_node(node_.get());
}

std::vector<std::string> Formula::variables() const {
    std::set<std::string> vars;
    collect_vars(node_.get(), vars);
    return {vars.begin(), vars.end()};
}

struct Condition::Node {
    enum class Op { And, Or, Not, Cmp, Mod, True } op = Op::True;
    enum class Rel { Eq, Ne, Le, Lt, Ge, Gt } rel = Rel::Eq;
    FPtr l_node, r_node;        // Cmp / Mod lhs
    long long mod = 0, rem = 0; // Mod
    std::shared_ptr<const Node> a, b;
};

namespace {

using CNode = Condition::Node;
using CPtr = std::shared_ptr<const CNode>;

CPtr parse_or(Lexer& lx);

CPtr parse_cmp(Lexer& lx) {
    if (lx.accept('!')) {
        auto n = std::make_shared<CNode>();
        n->op = CNode::Op::Not;
        lx.expect('(');
        n->a = parse_or(lx);
        lx.expect(')');
        return n;
    }
    {
        size_t save = lx.i;
        if (lx.accept("true")) {
            auto n = std::make_shared<CNode>();
            n->op = CNode::Op::True;
            return n;
        }
        lx.i = save;
    }
    if (lx.peek() == '(') {
        // Try boolean parenthesis first, fall back to arithmetic.
        size_t save = lx.i;
        try {
            lx.expect('(');
            auto inner = parse_or(lx);
            lx.expect(')');
            return inner;
        } catch (const ParseError&) {
            lx.i = save;
        }
    }
    auto l = parse_sum(lx);
    if (lx.accept('%')) {
        auto n = std::make_shared<CNode>();
        n->op = CNode::Op::Mod;
        n->l_node = l;
        n->mod = lx.number();
        if (!lx.accept("==")) throw ParseError("expected '==' after modulus", lx.i);
        n->rem = lx.number();
        return n;
    }
    auto n = std::make_shared<CNode>();
    n->op = CNode::Op::Cmp;
    if (lx.accept("==")) n->rel = CNode::Rel::Eq;
    else if (lx.accept("!=")) n->rel = CNode::Rel::Ne;
    else if (lx.accept("<=")) n->rel = CNode::Rel::Le;
    else if (lx.accept(">=")) n->rel = CNode::Rel::Ge;
    else if (lx.accept('<')) n->rel = CNode::Rel::Lt;
    else if (lx.accept('>')) n->rel = CNode::Rel::Gt;
    else throw ParseError("expected comparison operator", lx.i);
    n->l_node = l;
    n->r_node = parse_sum(lx);
    return n;
}

CPtr parse_and(Lexer& lx) {
    auto e = parse_cmp(lx);
    while (lx.accept("&&")) {
        auto n = std::make_shared<CNode>();
        n->op = CNode::Op::And;
        n->a = e;
        n->b = parse_cmp(lx);
        e = n;
    }
    return e;
}

CPtr parse_or(Lexer& lx) {
    auto e = parse_and(lx);
    while (lx.accept("||")) {
        auto n = std::make_shared<CNode>();
        n->op = CNode::Op::Or;
        n->a = e;
        n->b = parse_and(lx);
        e = n;
    }
    return e;
}

std::optional<bool> eval_cond(const CNode* n, const Binding& b) {
    switch (n->op) {
        case CNode::Op::True: return true;
        case CNode::Op::Not: {
            auto v = eval_cond(n->a.get(), b);
            if (!v) return std::nullopt;
            return !*v;
        }
        case CNode::Op::And: {
            auto l = eval_cond(n->a.get(), b);
            auto r = eval_cond(n->b.get(), b);
            if (l && !*l) return false;
            if (r && !*r) return false;
            if (l && r) return true;
            return std::nullopt;
        }
        case CNode::Op::Or: {
            auto l = eval_cond(n->a.get(), b);
            auto r = eval_cond(n->b.get(), b);
            if (l && *l) return true;
            if (r && *r) return true;
            if (l && r) return false;
            return std::nullopt;
        }
        case CNode::Op::Mod: {
            auto l = eval_node(n->l_node.get(), b);
            if (!l) return std::nullopt;
            long long v = *l % n->mod;
            if (v < 0) v += n->mod < 0 ? -n->mod : n->mod;
            return v == n->rem;
        }
        case CNode::Op::Cmp: {
            auto l = eval_node(n->l_node.get(), b);
            auto r = eval_node(n->r_node.get(), b);
            if (!l || !r) return std::nullopt;
            switch (n->rel) {
                case CNode::Rel::Eq: return *l == *r;
                case CNode::Rel::Ne: return *l != *r;
                case CNode::Rel::Le: return *l <= *r;
                case CNode::Rel::Lt: return *l < *r;
                case CNode::Rel::Ge: return *l >= *r;
                case CNode::Rel::Gt: return *l > *r;
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

void collect_cond_vars(const CNode* n, std::set<std::string>& out) {
    if (!n) return;
    collect_vars(n->l_node.get(), out);
    collect_vars(n->r_node.get(), out);
    if (n->a) collect_cond_vars(n->a.get(), out);
    if (n->b) collect_cond_vars(n->b.get(), out);
}

}  // namespace

Condition Condition::parse(const std::string& text) {
    Condition c;
    c.src_ = text;
    bool blank = true;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
    if (blank) return c;
    Lexer lx(text);
    c.node_ = parse_or(lx);
    if (!lx.eof()) throw ParseError("trailing input in condition '" + text + "'", lx.i);
    return c;
}

bool Condition::eval(const Binding& b) const {
    if (!node_) return true;
    auto v = eval_cond(node_.get(), b);
    if (!v) {
        std::set<std::string> vars;
        collect_cond_vars(node_.get(), vars);
        for (auto& name : vars)
            if (!b.count(name)) throw UnboundVariable(name);
        throw std::logic_error("condition evaluation failed");
    }
    return *v;
}

std::optional<bool> Condition::try_eval(const Binding& b) const {
    if (!node_) return true;
    return eval_cond(node_.get(), b);
}

std::vector<std::string> Condition::variables() const {
    std::set<std::string> vars;
    collect_cond_vars(node_.get(), vars);
    return {vars.begin(), vars.end()};
}

}  // namespace rsph::arith
