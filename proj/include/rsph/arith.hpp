#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Integer formula and condition language used by the data files.
// Formulas are integer polynomials in named variables, e.g. "(p+q)*(p+q)-1",
// with floor division "n/2" (exact unless marked floor) and min/max.
// Conditions are boolean combinations of comparisons, e.g. "p<q && n%2==0".

namespace rsph::arith {

using Binding = std::map<std::string, long long>;

struct ParseError : std::runtime_error {
    size_t pos;
    ParseError(const std::string& msg, size_t at)
        : std::runtime_error(msg + " at position " + std::to_string(at)), pos(at) {}
};

struct UnboundVariable : std::runtime_error {
    explicit UnboundVariable(const std::string& name)
        : std::runtime_error("unbound variable '" + name + "'") {}
};

class Formula {
public:
    Formula() = default;
    static Formula parse(const std::string& text);

    long long eval(const Binding& b) const;
    std::optional<long long> try_eval(const Binding& b) const;

    // Affine view "c0 + sum c_i * v_i", when the formula is affine.
    struct Affine {
        long long c0 = 0;
        std::map<std::string, long long> coeff;
    };
    std::optional<Affine> affine() const;

    std::vector<std::string> variables() const;
    const std::string& text() const { return src_; }
    bool empty() const { return node_ == nullptr; }

    struct Node;

private:
    std::shared_ptr<const Node> node_;
    std::string src_;
};

class Condition {
public:
    Condition() = default;
    static Condition parse(const std::string& text);  // "" parses as "true"

    bool eval(const Binding& b) const;
    std::optional<bool> try_eval(const Binding& b) const;
    std::vector<std::string> variables() const;
    const std::string& text() const { return src_; }
    bool always_true() const { return node_ == nullptr; }

    struct Node;

private:
    std::shared_ptr<const Node> node_;
    std::string src_;
};

}  // namespace rsph::arith
