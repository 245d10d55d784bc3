#include "rsph/forms.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "rsph/data.hpp"

namespace rsph {

using nlohmann::json;

bool is_signature_family(Fam f) {
    return f == Fam::Su || f == Fam::So || f == Fam::SpQ || f == Fam::Spin;
}

bool is_exceptional(Fam f) {
    switch (f) {
        case Fam::E6: case Fam::E7: case Fam::E8: case Fam::F4: case Fam::G2: return true;
        default: return false;
    }
}

std::string family_key(const SimpleRealForm& f) {
    switch (f.fam) {
        case Fam::SlR: return "sl_R";
        case Fam::SlC: return "sl_C";
        case Fam::SlH: return "sl_H";
        case Fam::Su: return "su";
        case Fam::So: return "so";
        case Fam::SoC: return "so_C";
        case Fam::SoStar: return "so_star";
        case Fam::SpR: return "sp_R";
        case Fam::SpC: return "sp_C";
        case Fam::SpQ: return "sp_pq";
        case Fam::Spin: return "spin";
        case Fam::SpinC: return "spin_C";
        case Fam::E6: case Fam::E7: case Fam::E8: case Fam::F4: case Fam::G2: {
            std::string base = f.fam == Fam::E6   ? "E6"
                               : f.fam == Fam::E7 ? "E7"
                               : f.fam == Fam::E8 ? "E8"
                               : f.fam == Fam::F4 ? "F4"
                                                  : "G2";
            if (f.a == kComplexVariant) return base + "_C";
            return base + "_" + std::to_string(f.a);
        }
    }
    throw std::logic_error("bad family");
}

std::string to_string(const SimpleRealForm& f) {
    auto two = [&](const char* n) {
        return std::string(n) + "(" + std::to_string(f.a) + "," + std::to_string(f.b) + ")";
    };
    switch (f.fam) {
        case Fam::SlR: return "sl(" + std::to_string(f.a) + ",R)";
        case Fam::SlC: return "sl(" + std::to_string(f.a) + ",C)";
        case Fam::SlH: return "sl(" + std::to_string(f.a) + ",H)";
        case Fam::Su:
            return f.a == 0 ? "su(" + std::to_string(f.b) + ")" : two("su");
        case Fam::So:
            return f.a == 0 ? "so(" + std::to_string(f.b) + ")" : two("so");
        case Fam::SoC: return "so(" + std::to_string(f.a) + ",C)";
        case Fam::SoStar: return "so*(" + std::to_string(2 * f.a) + ")";
        case Fam::SpR: return "sp(" + std::to_string(f.a) + ",R)";
        case Fam::SpC: return "sp(" + std::to_string(f.a) + ",C)";
        case Fam::SpQ:
            return f.a == 0 ? "sp(" + std::to_string(f.b) + ")" : two("sp");
        case Fam::Spin:
            return f.a == 0 ? "spin(" + std::to_string(f.b) + ")" : two("spin");
        case Fam::SpinC: return "spin(" + std::to_string(f.a) + ",C)";
        case Fam::E6: case Fam::E7: case Fam::E8: case Fam::F4: case Fam::G2: {
            std::string base = f.fam == Fam::E6   ? "E6"
                               : f.fam == Fam::E7 ? "E7"
                               : f.fam == Fam::E8 ? "E8"
                               : f.fam == Fam::F4 ? "F4"
                                                  : "G2";
            if (f.a == 0) return base;
            if (f.a == kComplexVariant) return base + "^C";
            return base + "^" + std::to_string(f.a);
        }
    }
    throw std::logic_error("bad family");
}

std::string to_string(RootType t) {
    switch (t) {
        case RootType::A: return "A";
        case RootType::B: return "B";
        case RootType::C: return "C";
        case RootType::D: return "D";
        case RootType::BC: return "BC";
        case RootType::E6: return "E6";
        case RootType::E7: return "E7";
        case RootType::E8: return "E8";
        case RootType::F4: return "F4";
        case RootType::G2: return "G2";
        case RootType::None: return "none";
    }
    return "?";
}

std::string to_string(LenClass c) {
    switch (c) {
        case LenClass::All: return "all";
        case LenClass::Short: return "short";
        case LenClass::Mid: return "mid";
        case LenClass::Long: return "long";
    }
    return "?";
}

long long RootDatum::positive_count(RootType t, int r, LenClass c) {
    auto total = [&]() -> long long { return positive_count(t, r); };
    switch (t) {
        case RootType::A:
        case RootType::D:
        case RootType::E6:
        case RootType::E7:
        case RootType::E8:
            return c == LenClass::All ? total() : 0;
        case RootType::B:
            if (c == LenClass::Long) return static_cast<long long>(r) * (r - 1);
            if (c == LenClass::Short) return r;
            return 0;
        case RootType::C:
            if (c == LenClass::Short) return static_cast<long long>(r) * (r - 1);
            if (c == LenClass::Long) return r;
            return 0;
        case RootType::BC:
            if (c == LenClass::Mid) return static_cast<long long>(r) * (r - 1);
            if (c == LenClass::Short || c == LenClass::Long) return r;
            return 0;
        case RootType::F4:
            return (c == LenClass::Long || c == LenClass::Short) ? 12 : 0;
        case RootType::G2:
            return (c == LenClass::Long || c == LenClass::Short) ? 3 : 0;
        case RootType::None: return 0;
    }
    return 0;
}

long long RootDatum::positive_count(RootType t, int r) {
    switch (t) {
        case RootType::A: return static_cast<long long>(r) * (r + 1) / 2;
        case RootType::B:
        case RootType::C: return static_cast<long long>(r) * r;
        case RootType::D: return static_cast<long long>(r) * (r - 1);
        case RootType::BC: return static_cast<long long>(r) * r + r;
        case RootType::E6: return 36;
        case RootType::E7: return 63;
        case RootType::E8: return 120;
        case RootType::F4: return 24;
        case RootType::G2: return 6;
        case RootType::None: return 0;
    }
    return 0;
}

long long RootDatum::nilpotent_dim() const {
    long long total = 0;
    for (auto& [cls, m] : mult) total += m * positive_count(type, rank, cls);
    return total;
}

namespace {

RootType root_type_from(const std::string& s) {
    if (s == "A") return RootType::A;
    if (s == "B") return RootType::B;
    if (s == "C") return RootType::C;
    if (s == "D") return RootType::D;
    if (s == "BC") return RootType::BC;
    if (s == "E6") return RootType::E6;
    if (s == "E7") return RootType::E7;
    if (s == "E8") return RootType::E8;
    if (s == "F4") return RootType::F4;
    if (s == "G2") return RootType::G2;
    if (s == "none") return RootType::None;
    throw std::runtime_error("unknown root type " + s);
}

LenClass len_class_from(const std::string& s) {
    if (s == "all") return LenClass::All;
    if (s == "short") return LenClass::Short;
    if (s == "mid") return LenClass::Mid;
    if (s == "long") return LenClass::Long;
    throw std::runtime_error("unknown length class " + s);
}

Fam fam_of_exceptional(const std::string& base) {
    if (base == "E6") return Fam::E6;
    if (base == "E7") return Fam::E7;
    if (base == "E8") return Fam::E8;
    if (base == "F4") return Fam::F4;
    if (base == "G2") return Fam::G2;
    throw std::runtime_error("unknown exceptional base " + base);
}

Fam fam_of_key(const std::string& key, int& variant) {
    variant = -1;
    if (key == "sl_R") return Fam::SlR;
    if (key == "sl_C") return Fam::SlC;
    if (key == "sl_H") return Fam::SlH;
    if (key == "su") return Fam::Su;
    if (key == "so") return Fam::So;
    if (key == "so_C") return Fam::SoC;
    if (key == "so_star") return Fam::SoStar;
    if (key == "sp_R") return Fam::SpR;
    if (key == "sp_C") return Fam::SpC;
    if (key == "sp_pq") return Fam::SpQ;
    if (key == "spin") return Fam::Spin;
    if (key == "spin_C") return Fam::SpinC;
    throw std::runtime_error("unknown family key " + key);
}

}  // namespace

const Catalog& Catalog::instance() {
    static Catalog cat(data_file("catalog.json"));
    return cat;
}

Catalog::Catalog(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw std::runtime_error("cannot open catalog file " + json_path);
    json doc = json::parse(in);
    version_ = doc.value("version", "0");

    for (auto& fj : doc.at("families")) {
        FamilyRule r;
        r.name = fj.at("name").get<std::string>();
        if (fj.contains("exceptional")) {
            r.fam = fam_of_exceptional(fj["exceptional"][0].get<std::string>());
            r.variant = fj["exceptional"][1].get<int>();
            r.arity = 0;
        } else {
            int variant;
            r.fam = fam_of_key(r.name, variant);
            r.variant = variant;
            r.arity = static_cast<int>(fj.at("params").size());
        }
        r.valid = arith::Condition::parse(fj.value("valid", ""));
        r.is_compact = arith::Condition::parse(fj.value("compact", "false"));
        r.is_split = arith::Condition::parse(fj.value("split", "false"));
        r.is_quasi_split = arith::Condition::parse(fj.value("quasi_split", "false"));
        r.dim = arith::Formula::parse(fj.at("dim").get<std::string>());
        r.rank = arith::Formula::parse(fj.at("rank").get<std::string>());
        r.k_pattern = fj.at("k").dump();
        r.m_pattern = fj.at("m").dump();
        r.complexify = fj.value("complexify", "");
        for (auto& rc : fj.at("restricted")) {
            FamilyRule::RestrictedCase c;
            c.when = arith::Condition::parse(rc.value("when", ""));
            c.type = root_type_from(rc.value("type", "none"));
            if (c.type != RootType::None) {
                c.rank = arith::Formula::parse(rc.at("rank").get<std::string>());
                for (auto& [k, v] : rc.at("mult").items())
                    c.mult[len_class_from(k)] = arith::Formula::parse(v.get<std::string>());
            }
            r.restricted.push_back(std::move(c));
        }
        if (fj.contains("degenerate"))
            for (auto& dg : fj["degenerate"])
                r.degenerate.push_back(
                    {arith::Condition::parse(dg.at("when").get<std::string>()),
                     dg.at("kind").get<std::string>()});
        if (fj.contains("pseudo")) {
            r.pseudo = arith::Condition::parse(fj["pseudo"].get<std::string>());
            r.has_pseudo = true;
        }
        r.orient = fj.value("orient", false);

        by_name_[r.name] = rules_.size();
        rules_.push_back(std::move(r));
    }
}

const Catalog::FamilyRule* Catalog::find_rule(const SimpleRealForm& f) const {
    auto it = by_name_.find(family_key(f));
    if (it == by_name_.end()) return nullptr;
    return &rules_[it->second];
}

const Catalog::FamilyRule& Catalog::rule(const SimpleRealForm& f) const {
    const FamilyRule* r = find_rule(f);
    if (!r) throw UnknownFamily("unknown family for " + to_string(f));
    return *r;
}

arith::Binding Catalog::binding_for(const SimpleRealForm& f) const {
    const FamilyRule& r = rule(f);
    arith::Binding b;
    if (r.arity == 1)
        b["n"] = f.a;
    else if (r.arity == 2) {
        b["p"] = f.a;
        b["q"] = f.b;
    }
    return b;
}

SimpleRealForm Catalog::orient(const SimpleRealForm& f) const {
    if (is_signature_family(f.fam) && f.a > f.b) return {f.fam, f.b, f.a};
    return f;
}

Catalog::LabelKind Catalog::classify(const SimpleRealForm& f0) const {
    const FamilyRule* r = find_rule(f0);
    if (!r) return LabelKind::Invalid;
    SimpleRealForm f = orient(f0);
    arith::Binding b = binding_for(f);
    if (is_signature_family(f.fam) && (f.a < 0 || f.b < 0)) return LabelKind::Invalid;
    for (auto& [when, kind] : r->degenerate) {
        if (when.eval(b)) {
            if (kind == "zero") return LabelKind::Zero;
            if (kind == "R") return LabelKind::AbelianR;
            if (kind == "iR") return LabelKind::AbelianIR;
            if (kind == "C") return LabelKind::AbelianC;
        }
    }
    if (r->has_pseudo && r->pseudo.eval(b)) return LabelKind::PseudoSimple;
    return r->valid.eval(b) ? LabelKind::Simple : LabelKind::Invalid;
}

SimpleRealForm Catalog::canonicalize(const SimpleRealForm& f0) const {
    SimpleRealForm f = orient(f0);
    // spin(p,q) is so(p,q) as an abstract algebra
    if (f.fam == Fam::Spin) f = {Fam::So, f.a, f.b};
    if (f.fam == Fam::SpinC) f = {Fam::SoC, f.a, 0};

    static const std::vector<std::pair<SimpleRealForm, SimpleRealForm>> table = {
        {{Fam::Su, 1, 1}, {Fam::SlR, 2, 0}},
        {{Fam::SpR, 1, 0}, {Fam::SlR, 2, 0}},
        {{Fam::So, 1, 2}, {Fam::SlR, 2, 0}},
        {{Fam::So, 1, 3}, {Fam::SlC, 2, 0}},
        {{Fam::SpC, 1, 0}, {Fam::SlC, 2, 0}},
        {{Fam::SoC, 3, 0}, {Fam::SlC, 2, 0}},
        {{Fam::SpQ, 1, 1}, {Fam::So, 1, 4}},
        {{Fam::So, 2, 3}, {Fam::SpR, 2, 0}},
        {{Fam::SlH, 2, 0}, {Fam::So, 1, 5}},
        {{Fam::So, 3, 3}, {Fam::SlR, 4, 0}},
        {{Fam::So, 2, 4}, {Fam::Su, 2, 2}},
        {{Fam::SoStar, 3, 0}, {Fam::Su, 1, 3}},
        {{Fam::SoStar, 4, 0}, {Fam::So, 2, 6}},
        {{Fam::SoC, 5, 0}, {Fam::SpC, 2, 0}},
        {{Fam::SoC, 6, 0}, {Fam::SlC, 4, 0}},
        {{Fam::So, 0, 3}, {Fam::Su, 0, 2}},
        {{Fam::SpQ, 0, 1}, {Fam::Su, 0, 2}},
        {{Fam::SlH, 1, 0}, {Fam::Su, 0, 2}},
        {{Fam::So, 0, 5}, {Fam::SpQ, 0, 2}},
        {{Fam::So, 0, 6}, {Fam::Su, 0, 4}},
    };
    for (auto& [from, to] : table)
        if (f == from) return to;
    return f;
}

FormRecord Catalog::lookup(const SimpleRealForm& f0) const {
    SimpleRealForm f = orient(f0);
    LabelKind kind = classify(f);
    if (kind == LabelKind::Invalid)
        throw ParamOutOfRange("parameters out of range: " + to_string(f0));
    if (kind != LabelKind::Simple && kind != LabelKind::PseudoSimple)
        throw ParamOutOfRange("degenerate label (abelian or zero): " + to_string(f0));

    const FamilyRule& r = rule(f);
    arith::Binding b = binding_for(f);

    FormRecord rec;
    rec.form = f;
    rec.real_dim = r.dim.eval(b);
    rec.real_rank = static_cast<int>(r.rank.eval(b));
    rec.compact = r.is_compact.eval(b);
    rec.split = r.is_split.eval(b);
    rec.quasi_split = rec.split || r.is_quasi_split.eval(b);
    bool found = false;
    for (auto& rc : r.restricted) {
        if (!rc.when.eval(b)) continue;
        found = true;
        rec.restricted.type = rc.type;
        if (rc.type != RootType::None) {
            rec.restricted.rank = static_cast<int>(rc.rank.eval(b));
            for (auto& [cls, mf] : rc.mult) {
                long long m = mf.eval(b);
                if (m > 0) rec.restricted.mult[cls] = static_cast<int>(m);
            }
        }
        break;
    }
    if (!found) rec.restricted.type = RootType::None;
    rec.k_pattern = r.k_pattern;
    rec.m_pattern = r.m_pattern;
    rec.dim_k = rec.real_dim - rec.real_rank - rec.restricted.nilpotent_dim();
    return rec;
}

long long Catalog::dim(const SimpleRealForm& f0) const {
    SimpleRealForm f = orient(f0);
    switch (classify(f)) {
        case LabelKind::Zero: return 0;
        case LabelKind::AbelianR:
        case LabelKind::AbelianIR: return 1;
        case LabelKind::AbelianC: return 2;
        case LabelKind::Invalid:
            throw ParamOutOfRange("parameters out of range: " + to_string(f0));
        default: break;
    }
    return rule(f).dim.eval(binding_for(f));
}

bool Catalog::is_compact(const SimpleRealForm& f0) const {
    SimpleRealForm f = orient(f0);
    switch (classify(f)) {
        case LabelKind::Zero:
        case LabelKind::AbelianIR: return true;
        case LabelKind::AbelianR:
        case LabelKind::AbelianC: return false;  // split / complex torus directions
        case LabelKind::Invalid:
            throw ParamOutOfRange("parameters out of range: " + to_string(f0));
        case LabelKind::PseudoSimple: {
            bool compact = true;
            for (auto& part : expand_pseudo(f)) compact = compact && is_compact(part);
            return compact;
        }
        case LabelKind::Simple: break;
    }
    return rule(f).is_compact.eval(binding_for(f));
}

long long Catalog::min_parabolic_dim(const SimpleRealForm& f0) const {
    SimpleRealForm f = orient(f0);
    if (classify(f) == LabelKind::PseudoSimple) {
        long long total = 0;
        for (auto& part : expand_pseudo(f)) total += min_parabolic_dim(part);
        return total;
    }
    FormRecord rec = lookup(f);
    if (rec.compact) return rec.real_dim;  // p = g for compact forms
    return rec.dim_k + rec.real_rank;
}

Catalog::Complexification Catalog::complexify(const SimpleRealForm& f0) const {
    SimpleRealForm f = orient(f0);
    const FamilyRule& r = rule(f);
    std::string tmpl = r.complexify;
    if (tmpl.empty()) throw std::logic_error("no complexification rule for " + to_string(f));
    // expand "{expr}"
    std::string label;
    for (size_t i = 0; i < tmpl.size();) {
        if (tmpl[i] == '{') {
            size_t j = tmpl.find('}', i);
            arith::Formula e = arith::Formula::parse(tmpl.substr(i + 1, j - i - 1));
            label += std::to_string(e.eval(binding_for(f)));
            i = j + 1;
        } else {
            label += tmpl[i++];
        }
    }
    auto parsed = parse_form_label(label);
    if (!parsed) throw std::logic_error("bad complexification label " + label);
    Complexification out;
    out.label = *parsed;
    bool already_complex = f.fam == Fam::SlC || f.fam == Fam::SoC || f.fam == Fam::SpC ||
                           f.fam == Fam::SpinC ||
                           (is_exceptional(f.fam) && f.a == kComplexVariant);
    out.copies = already_complex ? 2 : 1;
    return out;
}

std::optional<SimpleRealForm> parse_form_label(const std::string& text) {
    size_t i = 0, n = text.size();
    auto read_int = [&]() -> std::optional<int> {
        size_t b = i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (b == i) return std::nullopt;
        return std::stoi(text.substr(b, i - b));
    };

    // exceptional labels
    for (const char* base : {"E6", "E7", "E8", "F4", "G2"}) {
        std::string bs(base);
        if (text == bs) return SimpleRealForm{fam_of_exceptional(bs), 0, 0};
        if (text.size() > 3 && text.compare(0, 3, bs + "^") == 0) {
            std::string suffix = text.substr(3);
            if (suffix == "C") return SimpleRealForm{fam_of_exceptional(bs), kComplexVariant, 0};
            if (suffix.size() == 1 && std::isdigit(static_cast<unsigned char>(suffix[0])))
                return SimpleRealForm{fam_of_exceptional(bs), suffix[0] - '0', 0};
            return std::nullopt;
        }
    }

    std::string head;
    while (i < n && (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '*')) {
        head += text[i++];
    }
    if (i >= n || text[i] != '(') return std::nullopt;
    ++i;
    auto a = read_int();
    if (!a) return std::nullopt;
    std::optional<int> b;
    char field = 0;
    if (i < n && text[i] == ',') {
        ++i;
        if (i < n && (text[i] == 'R' || text[i] == 'C' || text[i] == 'H')) {
            field = text[i++];
        } else {
            b = read_int();
            if (!b) return std::nullopt;
        }
    }
    if (i >= n || text[i] != ')') return std::nullopt;
    ++i;
    if (i != n) return std::nullopt;

    if (head == "sl") {
        if (field == 'R') return SimpleRealForm{Fam::SlR, *a, 0};
        if (field == 'C') return SimpleRealForm{Fam::SlC, *a, 0};
        if (field == 'H') return SimpleRealForm{Fam::SlH, *a, 0};
        return std::nullopt;
    }
    if (head == "su") {
        if (field) return std::nullopt;
        if (b) return SimpleRealForm{Fam::Su, *a, *b};
        return SimpleRealForm{Fam::Su, 0, *a};
    }
    if (head == "so") {
        if (field == 'C') return SimpleRealForm{Fam::SoC, *a, 0};
        if (field) return std::nullopt;
        if (b) return SimpleRealForm{Fam::So, *a, *b};
        return SimpleRealForm{Fam::So, 0, *a};
    }
    if (head == "so*") {
        if (field || b) return std::nullopt;
        if (*a % 2 != 0) return std::nullopt;  // so*(2n)
        return SimpleRealForm{Fam::SoStar, *a / 2, 0};
    }
    if (head == "sp") {
        if (field == 'R') return SimpleRealForm{Fam::SpR, *a, 0};
        if (field == 'C') return SimpleRealForm{Fam::SpC, *a, 0};
        if (field) return std::nullopt;
        if (b) return SimpleRealForm{Fam::SpQ, *a, *b};
        return SimpleRealForm{Fam::SpQ, 0, *a};
    }
    if (head == "spin") {
        if (field == 'C') return SimpleRealForm{Fam::SpinC, *a, 0};
        if (field) return std::nullopt;
        if (b) return SimpleRealForm{Fam::Spin, *a, *b};
        return SimpleRealForm{Fam::Spin, 0, *a};
    }
    return std::nullopt;
}

std::vector<SimpleRealForm> Catalog::expand_pseudo(const SimpleRealForm& f0) const {
    SimpleRealForm f = orient(f0);
    if (classify(f) != LabelKind::PseudoSimple) return {};
    SimpleRealForm su2{Fam::Su, 0, 2}, sl2r{Fam::SlR, 2, 0}, sl2c{Fam::SlC, 2, 0};
    if (f.fam == Fam::So || f.fam == Fam::Spin) {
        if (f.a == 0) return {su2, su2};        // so(4)
        if (f.a == 2) return {sl2r, sl2r};      // so(2,2)
    }
    if (f.fam == Fam::SoC || f.fam == Fam::SpinC) return {sl2c, sl2c};  // so(4,C)
    if (f.fam == Fam::SoStar) return {sl2r, su2};                        // so*(4)
    throw std::logic_error("unhandled pseudo-simple " + to_string(f));
}

}  // namespace rsph
