#include "rsph/expr.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rsph {

using nlohmann::json;

std::string to_string(const Atom& a) {
    switch (a.t) {
        case Atom::T::Simple: return to_string(a.form);
        case Atom::T::R: return "R";
        case Atom::T::U1: return "u(1)";
        case Atom::T::GlC1: return "gl(1,C)";
        case Atom::T::U:
            if (a.a == 0) return "u(" + std::to_string(a.b) + ")";
            return "u(" + std::to_string(a.a) + "," + std::to_string(a.b) + ")";
        case Atom::T::Gl:
            return "gl(" + std::to_string(a.a) + "," + std::string(1, a.fld) + ")";
        case Atom::T::F: {
            std::string bound;
            switch (a.fbound) {
                case Atom::FBound::U1: bound = "u(1)"; break;
                case Atom::FBound::Sp1: bound = "sp(1)"; break;
                case Atom::FBound::GlR: bound = "gl(1,R)"; break;
                case Atom::FBound::GlC: bound = "gl(1,C)"; break;
            }
            return "f<=" + bound;
        }
    }
    return "?";
}

long long FlatExpr::dim() const {
    if (unresolved_f) throw NotConcrete("expression contains an unresolved f-summand");
    long long d = nR + nIR + 2 * nC;
    const Catalog& cat = Catalog::instance();
    for (auto& [f, n] : simples) d += n * cat.dim(f);
    return d;
}

namespace {

// Maps a possibly-degenerate simple label to proper atoms; empty result for zero.
std::vector<Atom> atoms_of_form(const SimpleRealForm& f0) {
    const Catalog& cat = Catalog::instance();
    SimpleRealForm f = cat.orient(f0);
    switch (cat.classify(f)) {
        case Catalog::LabelKind::Zero: return {};
        case Catalog::LabelKind::AbelianR: return {Atom{Atom::T::R}};
        case Catalog::LabelKind::AbelianIR: return {Atom{Atom::T::U1}};
        case Catalog::LabelKind::AbelianC: return {Atom{Atom::T::GlC1}};
        case Catalog::LabelKind::Invalid:
            throw ParamOutOfRange("invalid label " + to_string(f0));
        default: return {Atom::simple(f)};
    }
}

int atom_rank_for_sort(const Atom& a) {
    switch (a.t) {
        case Atom::T::Simple: return 0;
        case Atom::T::U: return 1;
        case Atom::T::Gl: return 2;
        case Atom::T::R: return 3;
        case Atom::T::U1: return 4;
        case Atom::T::GlC1: return 5;
        case Atom::T::F: return 6;
    }
    return 7;
}

bool atom_less(const Atom& x, const Atom& y) {
    int rx = atom_rank_for_sort(x), ry = atom_rank_for_sort(y);
    if (rx != ry) return rx < ry;
    if (x.t == Atom::T::Simple && y.t == Atom::T::Simple) {
        // order by descending dimension, then label, so big factors print first
        const Catalog& cat = Catalog::instance();
        long long dx = cat.dim(x.form), dy = cat.dim(y.form);
        if (dx != dy) return dx > dy;
        return to_string(x.form) < to_string(y.form);
    }
    return x < y;
}

}  // namespace

ReductiveExpr::ReductiveExpr(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end(), atom_less);
}

long long ReductiveExpr::dim() const { return flatten(false).dim(); }

bool ReductiveExpr::concrete() const {
    for (auto& a : atoms_)
        if (a.t == Atom::T::F && a.fdim < 0) return false;
    return true;
}

FlatExpr ReductiveExpr::flatten(bool canonical) const {
    const Catalog& cat = Catalog::instance();
    FlatExpr out;
    auto add_simple = [&](SimpleRealForm f, int count) {
        if (count == 0) return;
        f = canonical ? cat.canonicalize(f) : cat.orient(f);
        if (cat.classify(f) == Catalog::LabelKind::PseudoSimple) {
            for (auto& part : cat.expand_pseudo(f))
                out.simples[canonical ? cat.canonicalize(part) : part] += count;
        } else {
            out.simples[f] += count;
        }
    };
    for (auto& a : atoms_) {
        switch (a.t) {
            case Atom::T::Simple: add_simple(a.form, 1); break;
            case Atom::T::R: out.nR++; break;
            case Atom::T::U1: out.nIR++; break;
            case Atom::T::GlC1: out.nC++; break;
            case Atom::T::U: {
                for (auto& p : atoms_of_form({Fam::Su, a.a, a.b}))
                    if (p.t == Atom::T::Simple) add_simple(p.form, 1);
                    else if (p.t == Atom::T::R) out.nR++;
                    else if (p.t == Atom::T::U1) out.nIR++;
                out.nIR++;  // the u(1) center
                break;
            }
            case Atom::T::Gl: {
                SimpleRealForm sl{a.fld == 'R'   ? Fam::SlR
                                  : a.fld == 'C' ? Fam::SlC
                                                 : Fam::SlH,
                                  a.a, 0};
                for (auto& p : atoms_of_form(sl))
                    if (p.t == Atom::T::Simple) add_simple(p.form, 1);
                if (a.fld == 'R' || a.fld == 'H') out.nR++;
                else out.nC++;
                break;
            }
            case Atom::T::F: {
                if (a.fdim < 0) { out.unresolved_f++; break; }
                if (a.fdim == 1) out.nIR++;  // a line; u(1)-flavored by convention
                else if (a.fdim == 2) out.nC++;
                else if (a.fdim == 3) add_simple({Fam::Su, 0, 2}, 1);
                break;
            }
        }
    }
    return out;
}

std::pair<ReductiveExpr, ReductiveExpr> ReductiveExpr::split_elementary() const {
    const Catalog& cat = Catalog::instance();
    std::vector<Atom> nonel, el;
    for (auto& a : atoms_) {
        switch (a.t) {
            case Atom::T::Simple: {
                // pseudo-simple labels may mix (so*(4)); split their parts
                if (cat.classify(cat.orient(a.form)) == Catalog::LabelKind::PseudoSimple) {
                    for (auto& part : cat.expand_pseudo(a.form))
                        (cat.is_compact(part) ? el : nonel).push_back(Atom::simple(part));
                } else {
                    (cat.is_compact(a.form) ? el : nonel).push_back(a);
                }
                break;
            }
            case Atom::T::U: {
                SimpleRealForm su{Fam::Su, a.a, a.b};
                for (auto& p : atoms_of_form(su))
                    if (p.t == Atom::T::Simple)
                        (cat.is_compact(p.form) ? el : nonel).push_back(p);
                    else
                        el.push_back(p);
                el.push_back(Atom{Atom::T::U1});
                break;
            }
            case Atom::T::Gl: {
                SimpleRealForm sl{a.fld == 'R'   ? Fam::SlR
                                  : a.fld == 'C' ? Fam::SlC
                                                 : Fam::SlH,
                                  a.a, 0};
                for (auto& p : atoms_of_form(sl))
                    if (p.t == Atom::T::Simple)
                        (cat.is_compact(p.form) ? el : nonel).push_back(p);
                    else
                        el.push_back(p);
                el.push_back(a.fld == 'C' ? Atom{Atom::T::GlC1} : Atom{Atom::T::R});
                break;
            }
            default: el.push_back(a); break;  // abelian and f-summands
        }
    }
    return {ReductiveExpr(std::move(nonel)), ReductiveExpr(std::move(el))};
}

bool ReductiveExpr::equivalent(const ReductiveExpr& o) const {
    return flatten(true) == o.flatten(true);
}

ReductiveExpr ReductiveExpr::plus(const ReductiveExpr& o) const {
    std::vector<Atom> all = atoms_;
    all.insert(all.end(), o.atoms_.begin(), o.atoms_.end());
    return ReductiveExpr(std::move(all));
}

// ---------------------------------------------------------------------------
// text grammar:
//   expr   ::= "0" | atom ("+" atom)*
//   atom   ::= "R" | "C" | "iR" | "u(" ints ")" | "gl(" int "," field ")"
//            | "f<=" bound | form-label
// ---------------------------------------------------------------------------

namespace {

std::optional<Atom> parse_atom_text(const std::string& tok) {
    if (tok == "R" || tok == "gl(1,R)") return Atom{Atom::T::R};
    if (tok == "iR" || tok == "u(1)" || tok == "so(2)") return Atom{Atom::T::U1};
    if (tok == "C" || tok == "gl(1,C)" || tok == "so(2,C)") return Atom{Atom::T::GlC1};
    if (tok == "so(1,1)") return Atom{Atom::T::R};
    if (tok.rfind("f<=", 0) == 0) {
        std::string bound = tok.substr(3);
        Atom a{Atom::T::F};
        if (bound == "u(1)") a.fbound = Atom::FBound::U1;
        else if (bound == "sp(1)" || bound == "sl(1,H)") a.fbound = Atom::FBound::Sp1;
        else if (bound == "gl(1,R)") a.fbound = Atom::FBound::GlR;
        else if (bound == "gl(1,C)") a.fbound = Atom::FBound::GlC;
        else return std::nullopt;
        return a;
    }
    if (tok.rfind("u(", 0) == 0 && tok.back() == ')') {
        std::string inner = tok.substr(2, tok.size() - 3);
        size_t comma = inner.find(',');
        try {
            Atom a{Atom::T::U};
            if (comma == std::string::npos) {
                a.a = 0;
                a.b = std::stoi(inner);
            } else {
                a.a = std::stoi(inner.substr(0, comma));
                a.b = std::stoi(inner.substr(comma + 1));
            }
            if (a.a < 0 || a.b < 0) return std::nullopt;
            if (a.a > a.b) std::swap(a.a, a.b);
            if (a.a + a.b == 0) return std::nullopt;
            if (a.a + a.b == 1) return Atom{Atom::T::U1};
            return a;
        } catch (...) {
            return std::nullopt;
        }
    }
    if (tok.rfind("gl(", 0) == 0 && tok.back() == ')') {
        std::string inner = tok.substr(3, tok.size() - 4);
        size_t comma = inner.find(',');
        if (comma == std::string::npos) return std::nullopt;
        std::string fld = inner.substr(comma + 1);
        if (fld != "R" && fld != "C" && fld != "H") return std::nullopt;
        try {
            Atom a{Atom::T::Gl};
            a.a = std::stoi(inner.substr(0, comma));
            a.fld = fld[0];
            if (a.a < 1) return std::nullopt;
            return a;  // gl(1,R)/gl(1,C) already handled above
        } catch (...) {
            return std::nullopt;
        }
    }
    auto f = parse_form_label(tok);
    if (!f) return std::nullopt;
    auto atoms = atoms_of_form(*f);  // may map degenerate labels
    if (atoms.empty()) return std::nullopt;  // zero algebra is not an atom
    return atoms[0];
}

std::vector<std::string> split_plus(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(') depth++;
        if (c == ')') depth--;
        if (c == '+' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    for (auto& p : parts) {
        size_t b = p.find_first_not_of(" \t");
        size_t e = p.find_last_not_of(" \t");
        p = b == std::string::npos ? "" : p.substr(b, e - b + 1);
    }
    return parts;
}

}  // namespace

ReductiveExpr ReductiveExpr::parse(const std::string& text) {
    std::vector<Atom> atoms;
    size_t offset = 0;
    auto parts = split_plus(text);
    if (parts.size() == 1 && (parts[0] == "0" || parts[0].empty()))
        return ReductiveExpr{};
    for (auto& tok : parts) {
        if (tok == "0") continue;
        auto a = parse_atom_text(tok);
        if (!a) throw ExprSyntaxError("cannot parse algebra '" + tok + "'", offset);
        atoms.push_back(*a);
        offset += tok.size() + 1;
    }
    return ReductiveExpr(std::move(atoms));
}

std::string ReductiveExpr::render() const {
    if (atoms_.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < atoms_.size(); ++i) {
        if (i) out += "+";
        out += to_string(atoms_[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// PairDiagram
// ---------------------------------------------------------------------------

std::string to_string(EmbedKind k) {
    switch (k) {
        case EmbedKind::Standard: return "standard";
        case EmbedKind::Spin: return "spin";
        case EmbedKind::Triality: return "triality∘standard";
        case EmbedKind::Diagonal: return "diagonal";
        case EmbedKind::FTwist: return "f-twist";
    }
    return "?";
}

std::optional<EmbedKind> embed_kind_from(const std::string& s) {
    if (s == "standard") return EmbedKind::Standard;
    if (s == "spin") return EmbedKind::Spin;
    if (s == "triality" || s == "triality∘standard") return EmbedKind::Triality;
    if (s == "diagonal") return EmbedKind::Diagonal;
    if (s == "f-twist") return EmbedKind::FTwist;
    return std::nullopt;
}

PairDiagram PairDiagram::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw ExprSyntaxError(std::string("bad pair JSON: ") + e.what(), 0);
    }
    PairDiagram p;
    for (auto& gj : doc.at("g")) {
        auto f = parse_form_label(gj.get<std::string>());
        if (!f) throw ExprSyntaxError("bad g-factor label " + gj.dump(), 0);
        p.g.push_back(Catalog::instance().orient(*f));
    }
    for (auto& hj : doc.at("h")) {
        HFactor hf;
        std::string alg = hj.at("alg").get<std::string>();
        auto a = parse_atom_text(alg);
        if (!a) throw ExprSyntaxError("bad h-factor algebra " + alg, 0);
        hf.alg = *a;
        for (auto& t : hj.at("into")) hf.targets.push_back(t.get<int>());
        std::sort(hf.targets.begin(), hf.targets.end());
        hf.targets.erase(std::unique(hf.targets.begin(), hf.targets.end()), hf.targets.end());
        std::string kind = hj.value("kind", "standard");
        auto k = embed_kind_from(kind);
        if (!k) throw ExprSyntaxError("bad embedding kind " + kind, 0);
        hf.kind = *k;
        p.h.push_back(std::move(hf));
    }
    p.normalize();
    p.validate();
    return p;
}

std::string PairDiagram::to_json_text() const {
    json doc;
    doc["g"] = json::array();
    for (auto& f : g) doc["g"].push_back(to_string(f));
    doc["h"] = json::array();
    for (auto& hf : h) {
        json hj;
        hj["alg"] = to_string(hf.alg);
        hj["into"] = hf.targets;
        hj["kind"] = to_string(hf.kind);
        doc["h"].push_back(hj);
    }
    return doc.dump();
}

PairDiagram PairDiagram::parse_inline(const std::string& text) {
    size_t slash = text.find('/');
    if (slash == std::string::npos)
        throw ExprSyntaxError("inline pair must be 'g1+g2+.../h-expr'", 0);
    std::string gpart = text.substr(0, slash);
    std::string hpart = text.substr(slash + 1);

    PairDiagram p;
    for (auto& tok : split_plus(gpart)) {
        auto f = parse_form_label(tok);
        if (!f) throw ExprSyntaxError("bad g-factor '" + tok + "'", 0);
        p.g.push_back(Catalog::instance().orient(*f));
    }
    ReductiveExpr hx = ReductiveExpr::parse(hpart);
    const Catalog& cat = Catalog::instance();
    std::vector<long long> gdim;
    for (auto& f : p.g) gdim.push_back(cat.dim(f));
    for (auto& a : hx.atoms()) {
        long long ad = ReductiveExpr({a}).concrete() ? ReductiveExpr({a}).dim() : 0;
        std::vector<int> fits;
        for (size_t i = 0; i < p.g.size(); ++i)
            if (ad <= gdim[i]) fits.push_back(static_cast<int>(i));
        if (p.g.size() == 1) fits = {0};
        if (fits.size() != 1)
            throw PairError(
                "inline shorthand cannot place '" + to_string(a) +
                "' unambiguously; use the JSON pair format for diagonal or ambiguous factors");
        p.h.push_back(HFactor{a, {fits[0]}, EmbedKind::Standard});
    }
    p.normalize();
    p.validate();
    return p;
}

void PairDiagram::validate() const {
    const Catalog& cat = Catalog::instance();
    for (auto& f : g) {
        auto kind = cat.classify(f);
        if (kind != Catalog::LabelKind::Simple && kind != Catalog::LabelKind::PseudoSimple)
            throw PairError("g-factor " + to_string(f) + " is not a simple label");
    }
    for (auto& hf : h) {
        if (hf.targets.empty()) throw PairError("h-factor with empty target set");
        for (int t : hf.targets)
            if (t < 0 || t >= static_cast<int>(g.size()))
                throw PairError("h-factor target index out of range");
        if (hf.kind == EmbedKind::Diagonal && hf.targets.size() < 2)
            throw PairError("diagonal h-factor needs at least two targets");
        ReductiveExpr ax({hf.alg});
        if (ax.concrete()) {
            long long ad = ax.dim();
            for (int t : hf.targets)
                if (ad > cat.dim(g[t]))
                    throw PairError("h-factor " + to_string(hf.alg) +
                                    " does not fit dimension-wise into " + to_string(g[t]));
        }
    }
}

void PairDiagram::normalize() {
    const Catalog& cat = Catalog::instance();
    for (auto& f : g) f = cat.orient(f);
    for (auto& hf : h) {
        if (hf.targets.size() >= 2 && hf.kind == EmbedKind::Standard)
            hf.kind = EmbedKind::Diagonal;
        if (hf.targets.size() == 1 && hf.kind == EmbedKind::Diagonal)
            hf.kind = EmbedKind::Standard;
    }
    std::stable_sort(h.begin(), h.end(), [](const HFactor& x, const HFactor& y) {
        if (x.targets != y.targets) return x.targets < y.targets;
        return atom_less(x.alg, y.alg);
    });
}

PairDiagram PairDiagram::normalized() const {
    PairDiagram p = *this;
    p.normalize();
    return p;
}

ReductiveExpr PairDiagram::h_expr() const {
    std::vector<Atom> atoms;
    for (auto& hf : h) atoms.push_back(hf.alg);
    return ReductiveExpr(std::move(atoms));
}

ReductiveExpr PairDiagram::projection_h(int gi) const {
    std::vector<Atom> atoms;
    for (auto& hf : h)
        if (std::find(hf.targets.begin(), hf.targets.end(), gi) != hf.targets.end())
            atoms.push_back(hf.alg);
    return ReductiveExpr(std::move(atoms));
}

long long PairDiagram::dim_g() const {
    const Catalog& cat = Catalog::instance();
    long long d = 0;
    for (auto& f : g) d += cat.dim(f);
    return d;
}

long long PairDiagram::dim_h() const { return h_expr().dim(); }

bool PairDiagram::same_as(const PairDiagram& o) const {
    PairDiagram a = normalized(), b = o.normalized();
    return a.g == b.g && a.h == b.h;
}

namespace {

Atom canonical_atom(const Atom& a) {
    if (a.t != Atom::T::Simple) return a;
    Atom out = a;
    out.form = Catalog::instance().canonicalize(a.form);
    return out;
}

struct PairKey {
    std::vector<std::string> parts;
    bool operator==(const PairKey& o) const { return parts == o.parts; }
};

PairKey pair_key(const PairDiagram& p, const std::vector<int>& perm) {
    // perm maps new position -> old index
    std::vector<int> inv(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    PairKey key;
    for (int oldi : perm)
        key.parts.push_back(to_string(Catalog::instance().canonicalize(p.g[oldi])));
    std::vector<std::string> hparts;
    for (auto& hf : p.h) {
        std::vector<int> t;
        for (int x : hf.targets) t.push_back(inv[x]);
        std::sort(t.begin(), t.end());
        std::string s = to_string(canonical_atom(hf.alg)) + "@";
        for (int x : t) s += std::to_string(x) + ",";
        s += ";" + to_string(hf.kind);
        hparts.push_back(s);
    }
    std::sort(hparts.begin(), hparts.end());
    key.parts.insert(key.parts.end(), hparts.begin(), hparts.end());
    return key;
}

}  // namespace

bool PairDiagram::equivalent_to(const PairDiagram& o) const {
    if (g.size() != o.g.size() || h.size() != o.h.size()) return false;
    std::vector<int> perm(g.size());
    std::iota(perm.begin(), perm.end(), 0);
    PairKey mine = pair_key(*this, perm);
    std::sort(perm.begin(), perm.end());
    do {
        if (pair_key(o, perm) == mine) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

PairDiagram project(const PairDiagram& pair, const std::vector<int>& indices) {
    if (indices.empty()) throw PairError("EmptyIndexSet: projection needs at least one index");
    std::set<int> keep(indices.begin(), indices.end());
    for (int i : keep)
        if (i < 0 || i >= static_cast<int>(pair.g.size()))
            throw PairError("projection index out of range");
    std::map<int, int> remap;
    PairDiagram out;
    for (int i : keep) {
        remap[i] = static_cast<int>(out.g.size());
        out.g.push_back(pair.g[i]);
    }
    for (auto& hf : pair.h) {
        HFactor nf;
        nf.alg = hf.alg;
        nf.kind = hf.kind;
        for (int t : hf.targets)
            if (remap.count(t)) nf.targets.push_back(remap[t]);
        if (nf.targets.empty()) continue;
        if (nf.targets.size() == 1 && nf.kind == EmbedKind::Diagonal)
            nf.kind = EmbedKind::Standard;
        out.h.push_back(std::move(nf));
    }
    out.normalize();
    return out;
}

std::vector<std::vector<int>> diagram_components(const PairDiagram& pair, bool only_h_n) {
    const Catalog& cat = Catalog::instance();
    size_t n = pair.g.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    for (auto& hf : pair.h) {
        if (only_h_n) {
            // keep only non-elementary (non-compact simple) factors
            ReductiveExpr ex({hf.alg});
            auto [hn, hel] = ex.split_elementary();
            if (hn.empty()) continue;
        }
        for (size_t i = 1; i < hf.targets.size(); ++i)
            unite(hf.targets[0], hf.targets[i]);
    }
    std::map<int, std::vector<int>> comps;
    for (size_t i = 0; i < n; ++i) comps[find(static_cast<int>(i))].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : comps) out.push_back(members);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_decomposable(const PairDiagram& pair) {
    if (pair.g.size() <= 1) return false;
    return diagram_components(pair, false).size() > 1;
}

bool is_strictly_indecomposable(const PairDiagram& pair) {
    if (is_decomposable(pair)) return false;
    return diagram_components(pair, true).size() == 1;
}

}  // namespace rsph
