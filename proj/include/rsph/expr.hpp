#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsph/forms.hpp"

namespace rsph {

struct ExprSyntaxError : std::runtime_error {
    size_t pos;
    ExprSyntaxError(const std::string& msg, size_t at)
        : std::runtime_error(msg + " (at " + std::to_string(at) + ")"), pos(at) {}
};
struct NotConcrete : std::runtime_error {
    explicit NotConcrete(const std::string& what) : std::runtime_error(what) {}
};

// One irreducible summand of a reductive expression. Composite labels
// (u(p,q), gl(n,K)) and f-markers are kept as written; flatten() expands them.
struct Atom {
    enum class T : std::uint8_t {
        Simple,  // catalog label, simple or pseudo-simple
        R,       // split line (gl(1,R), so(1,1))
        U1,      // u(1) = iR (so(2))
        GlC1,    // gl(1,C) (so(2,C))
        U,       // u(a,b); u(n) stored as (0,n); a+b >= 2
        Gl,      // gl(a,K), K in {R,C,H}, a >= 2 (or a == 1 for H)
        F,       // f-marker: subalgebra of a fixed elementary algebra
    };
    enum class FBound : std::uint8_t { U1, Sp1, GlR, GlC };

    T t = T::Simple;
    SimpleRealForm form{};
    int a = 0, b = 0;
    char fld = 0;  // Gl field
    FBound fbound = FBound::U1;
    int fdim = -1;  // resolved f dimension, -1 when unresolved

    friend auto operator<=>(const Atom&, const Atom&) = default;

    static Atom simple(SimpleRealForm f) { return Atom{T::Simple, f, 0, 0, 0, FBound::U1, -1}; }
};

std::string to_string(const Atom& a);

// Flattened multiset view with composites and pseudo-simple labels expanded.
struct FlatExpr {
    std::map<SimpleRealForm, int> simples;
    long long nR = 0, nIR = 0, nC = 0;
    int unresolved_f = 0;

    friend auto operator<=>(const FlatExpr&, const FlatExpr&) = default;
    long long dim() const;
    bool empty() const { return simples.empty() && nR == 0 && nIR == 0 && nC == 0 && unresolved_f == 0; }
};

class ReductiveExpr {
public:
    ReductiveExpr() = default;
    explicit ReductiveExpr(std::vector<Atom> atoms);

    static ReductiveExpr parse(const std::string& text);
    std::string render() const;

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    long long dim() const;
    bool concrete() const;  // no unresolved f-markers

    // Expands composites/pseudo-simples; canonical=true additionally maps every
    // simple factor through the low-rank isomorphism table.
    FlatExpr flatten(bool canonical = false) const;

    // h = h_n + h_el: non-elementary part and largest elementary ideal.
    std::pair<ReductiveExpr, ReductiveExpr> split_elementary() const;

    bool equivalent(const ReductiveExpr& o) const;  // isomorphism-class equality
    ReductiveExpr plus(const ReductiveExpr& o) const;

private:
    std::vector<Atom> atoms_;  // kept sorted
};

enum class EmbedKind : std::uint8_t { Standard, Spin, Triality, Diagonal, FTwist };
std::string to_string(EmbedKind k);
std::optional<EmbedKind> embed_kind_from(const std::string& s);

struct HFactor {
    Atom alg;
    std::vector<int> targets;  // sorted, 0-based indices into g
    EmbedKind kind = EmbedKind::Standard;

    friend auto operator<=>(const HFactor&, const HFactor&) = default;
};

struct PairError : std::runtime_error {
    explicit PairError(const std::string& what) : std::runtime_error(what) {}
};

// Three-layer diagram: g-factors, h-factors with target sets and embedding kinds.
struct PairDiagram {
    std::vector<SimpleRealForm> g;
    std::vector<HFactor> h;

    static PairDiagram from_json_text(const std::string& text);
    std::string to_json_text() const;  // deterministic, round-trip stable

    // "g1+g2/h-expr" inline shorthand; h-atoms are assigned to the unique
    // g-factor they fit in, so diagonal factors are not expressible here.
    static PairDiagram parse_inline(const std::string& text);

    void validate() const;      // throws PairError
    void normalize();           // orients g labels, sorts h-factors, merges kinds
    PairDiagram normalized() const;

    ReductiveExpr h_expr() const;
    ReductiveExpr projection_h(int gi) const;  // h_i = p_i(h)
    long long dim_g() const;
    long long dim_h() const;

    bool same_as(const PairDiagram& o) const;        // syntactic, after normalize
    bool equivalent_to(const PairDiagram& o) const;  // up to factor permutation + canonicalize
};

// Diagram surgery per the projection operation.
PairDiagram project(const PairDiagram& pair, const std::vector<int>& indices);

bool is_decomposable(const PairDiagram& pair);
bool is_strictly_indecomposable(const PairDiagram& pair);

// Connected components of the bipartite graph (g-factors vs the given h-factor
// subset); returns g-index groups, each sorted.
std::vector<std::vector<int>> diagram_components(const PairDiagram& pair, bool only_h_n);

}  // namespace rsph
