#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsph/arith.hpp"

namespace rsph {

// Families of real simple (or complex-viewed-as-real) Lie algebras.
// su/so/sp signature families cover their compact forms via p = 0.
enum class Fam : std::uint8_t {
    SlR,     // sl(n,R)
    SlC,     // sl(n,C) viewed as real
    SlH,     // sl(n,H)
    Su,      // su(p,q), su(n) = su(0,n)
    So,      // so(p,q), so(n) = so(0,n)
    SoC,     // so(n,C) viewed as real
    SoStar,  // so*(2n), parameter stored as n
    SpR,     // sp(n,R)
    SpC,     // sp(n,C) viewed as real
    SpQ,     // sp(p,q), sp(n) = sp(0,n)
    Spin,    // spin(p,q): alias of so(p,q) carrying the spin conjugacy class
    SpinC,   // spin(n,C)
    E6, E7, E8, F4, G2,  // variant in .a: 0 compact, 1.. Berger index, kComplexVariant
};

inline constexpr int kComplexVariant = 9;  // X^C viewed as real, for exceptional families

struct SimpleRealForm {
    Fam fam{};
    int a = 0, b = 0;  // (p,q) for signature families, n for single-parameter ones,
                       // Berger variant for exceptional ones (in a)

    friend auto operator<=>(const SimpleRealForm&, const SimpleRealForm&) = default;
};

std::string to_string(const SimpleRealForm& f);

enum class RootType : std::uint8_t { A, B, C, D, BC, E6, E7, E8, F4, G2, None };

// Length classes for restricted root multiplicities. "Mid" is the e_i +- e_j
// class of BC systems; B uses Long/Short, C uses Short (= e_i +- e_j) / Long.
enum class LenClass : std::uint8_t { All, Short, Mid, Long };

std::string to_string(RootType t);
std::string to_string(LenClass c);

struct RootDatum {
    RootType type = RootType::None;
    int rank = 0;
    std::map<LenClass, int> mult;

    // Number of positive roots in a class, and the weighted total dimension
    // of the nilradical n = sum over positive roots of the multiplicity.
    static long long positive_count(RootType t, int rank, LenClass c);
    static long long positive_count(RootType t, int rank);
    long long nilpotent_dim() const;
};

class ReductiveExpr;  // defined in expr.hpp

struct FormRecord {
    SimpleRealForm form;
    long long real_dim = 0;
    int real_rank = 0;
    RootDatum restricted;
    bool compact = false;
    bool split = false;
    bool quasi_split = false;
    std::string k_pattern;  // max compact subalgebra, as an expression pattern in the params
    std::string m_pattern;  // centralizer m of a in k (Langlands M), same encoding
    long long dim_k = 0;    // evaluated dimension of k
};

struct UnknownFamily : std::runtime_error {
    explicit UnknownFamily(const std::string& what) : std::runtime_error(what) {}
};
struct ParamOutOfRange : std::runtime_error {
    explicit ParamOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

// The catalog: per-family integer data validated by the Iwasawa identity
// dim g = dim k + rank + dim n.
class Catalog {
public:
    static const Catalog& instance();  // loads data/catalog.json once

    explicit Catalog(const std::string& json_path);

    // Degenerate status of a labelled form before lookup.
    enum class LabelKind {
        Simple,       // genuine simple (or complex-simple viewed as real)
        PseudoSimple, // valid label, semisimple but not simple (so(4), so(2,2), so(4,C), so*(4))
        AbelianR,     // so(1,1), gl(1,R)
        AbelianIR,    // so(2), u(1)
        AbelianC,     // so(2,C)
        Zero,         // so(1), su(1), sp(0), sl(1,R), ...
        Invalid,
    };
    LabelKind classify(const SimpleRealForm& f) const;

    // Orientation normalization only (p <= q for signature families).
    SimpleRealForm orient(const SimpleRealForm& f) const;

    // Canonical representative under the low-rank isomorphism table.
    SimpleRealForm canonicalize(const SimpleRealForm& f) const;

    FormRecord lookup(const SimpleRealForm& f) const;  // orients first
    long long dim(const SimpleRealForm& f) const;
    bool is_compact(const SimpleRealForm& f) const;
    long long min_parabolic_dim(const SimpleRealForm& f) const;

    // Complexification label; complex-viewed-as-real forms double up, which is
    // reported through `copies` = 2.
    struct Complexification {
        SimpleRealForm label;  // a complex form (SlC/SoC/SpC/SpinC or exceptional ^C)
        int copies = 1;
    };
    Complexification complexify(const SimpleRealForm& f) const;

    // Expansion of pseudo-simple labels into simple pieces; empty when not pseudo.
    std::vector<SimpleRealForm> expand_pseudo(const SimpleRealForm& f) const;

    // Low-level family rule access for the expression pattern engine.
    struct FamilyRule {
        std::string name;
        Fam fam{};
        int variant = -1;          // exceptional variant, -1 for classical
        int arity = 0;             // number of integer parameters
        arith::Condition valid;
        arith::Condition is_compact;
        arith::Condition is_split;
        arith::Condition is_quasi_split;
        arith::Formula dim;
        arith::Formula rank;
        std::string k_pattern;
        std::string m_pattern;
        std::string complexify;
        struct RestrictedCase {
            arith::Condition when;
            RootType type = RootType::None;
            arith::Formula rank;
            std::map<LenClass, arith::Formula> mult;
        };
        std::vector<RestrictedCase> restricted;
        std::vector<std::pair<arith::Condition, std::string>> degenerate;
        arith::Condition pseudo;
        bool has_pseudo = false;
        bool orient = false;
    };
    const FamilyRule& rule(const SimpleRealForm& f) const;
    const std::vector<FamilyRule>& rules() const { return rules_; }
    arith::Binding binding_for(const SimpleRealForm& f) const;

    const std::string& version() const { return version_; }

private:
    std::vector<FamilyRule> rules_;
    std::map<std::string, size_t> by_name_;
    std::string version_;

    const FamilyRule* find_rule(const SimpleRealForm& f) const;
};

// Family helpers shared with the parser.
std::string family_key(const SimpleRealForm& f);
bool is_signature_family(Fam f);
bool is_exceptional(Fam f);

// Parses a concrete label like "su(2,3)", "so*(10)", "sp(4,C)", "E7^3".
// Does not accept degenerate spellings handled at the expression level
// ("R", "u(1)", "gl(1,C)").
std::optional<SimpleRealForm> parse_form_label(const std::string& text);

}  // namespace rsph
