#ifndef RAMIFLOW_IO_HPP
#define RAMIFLOW_IO_HPP

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ramiflow/conductor.hpp"

namespace ramiflow {

using json = nlohmann::ordered_json;

inline json rat_to_json(const Rat& r) {
    return json::array({to_long(rat_num(r)), to_long(rat_den(r))});
}

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat((long)j.get<long long>());
    if (j.is_array() && j.size() == 2)
        return Rat(Int((long)j[0].get<long long>()), Int((long)j[1].get<long long>()));
    throw err(Error::Code::ParseError, "expected rational [num, den]");
}

inline CoeffModel model_from_json(const json& j) {
    std::string kind = j.at("model").get<std::string>();
    long p = j.at("p").get<long>();
    if (kind == "equal-char") {
        long m = j.value("m", 1);
        return CoeffModel::equal_char(p, m);
    }
    if (kind == "mixed-char") return CoeffModel::mixed_char(p);
    throw err(Error::Code::ParseError, "unknown coefficient model: " + kind);
}

// {"monomials": [[unit, pi_num, pi_den, xi_exp], ...], "precision": N | "exact"}
inline ValuedSeries series_from_json(const CoeffModel& model, const json& j) {
    ValuedSeries f(model);
    for (const auto& mono : j.at("monomials")) {
        if (!mono.is_array() || mono.size() != 4)
            throw err(Error::Code::ParseError, "monomial must be [unit, pi_num, pi_den, xi_exp]");
        long unit = mono[0].get<long>();
        Rat e(Int(mono[1].get<long long>()), Int(mono[2].get<long long>()));
        long xi = mono[3].get<long>();
        Coeff c = Coeff::monomial(model, model.residue->from_int(unit), e);
        if (unit % model.p == 0 && model.kind == CoeffModel::Kind::EqualChar) continue;
        auto existing = f.terms().find(xi);
        if (existing != f.terms().end())
            f.set_term(xi, existing->second + c);
        else
            f.set_term(xi, c);
    }
    if (j.contains("precision") && !j.at("precision").is_string()) {
        Rat tail = j.contains("tail_valuation") ? rat_from_json(j.at("tail_valuation")) : Rat(0);
        f.truncate(j.at("precision").get<long>(), tail);
    }
    return f;
}

inline json series_to_json(const ValuedSeries& f) {
    json monos = json::array();
    for (const auto& [n, c] : f.terms()) {
        if (f.model().kind == CoeffModel::Kind::MixedChar) {
            Rat v = c.rational_value();
            monos.push_back(json::array(
                {to_long(rat_num(v)), 0, 1, n}));  // mixed: unit carries the full rational
            continue;
        }
        for (const auto& [e, u] : c.terms()) {
            long unit_int = 0, base = 1;
            for (size_t i = 0; i < u.size(); ++i) {
                unit_int += u[i] * base;
                base *= f.model().p;
            }
            monos.push_back(json::array(
                {unit_int, to_long(rat_num(e)), to_long(rat_den(e)), n}));
        }
    }
    json out;
    out["monomials"] = monos;
    out["precision"] = f.exact() ? json("exact") : json(*f.precision());
    if (!f.exact()) out["tail_valuation"] = rat_to_json(f.tail_val());
    return out;
}

struct RunInput {
    CoverSpec cover;
    Rat t_lo = 0, t_hi = 2, step = Rat(1, 8);
    std::string character = "index:1";
    long ell = 2;
};

inline RunInput cover_from_json(const json& j) {
    CoeffModel model = model_from_json(j.at("field"));
    const json& cj = j.at("cover");
    std::string type = cj.at("type").get<std::string>();
    RunInput in{CoverSpec::annulus_map(model, 1, ValuedSeries::zero(model), 0, 0)};
    if (type == "kummer") {
        in.cover = CoverSpec::kummer(model, cj.at("m").get<long>(),
                                     series_from_json(model, cj.at("u")));
    } else if (type == "artin-schreier") {
        in.cover = CoverSpec::artin_schreier(model, series_from_json(model, cj.at("g")));
    } else if (type == "composite") {
        in.cover = CoverSpec::composite(model, series_from_json(model, cj.at("g")),
                                        cj.at("m").get<long>(),
                                        series_from_json(model, cj.at("u")));
    } else if (type == "annulus") {
        json range = j.at("range");
        in.cover = CoverSpec::annulus_map(model, cj.at("d").get<long>(),
                                          series_from_json(model, cj.at("h")),
                                          rat_from_json(range[0]), rat_from_json(range[1]));
    } else {
        throw err(Error::Code::ParseError, "unknown cover type: " + type);
    }
    if (j.contains("range")) {
        in.t_lo = rat_from_json(j.at("range")[0]);
        in.t_hi = rat_from_json(j.at("range")[1]);
    }
    if (j.contains("grid_step")) in.step = rat_from_json(j.at("grid_step"));
    if (j.contains("character")) {
        const auto& c = j.at("character");
        in.character = c.is_string() ? c.get<std::string>()
                                     : "index:" + std::to_string(c.at("index").get<long>());
    }
    if (j.contains("ell")) in.ell = j.at("ell").get<long>();
    return in;
}

inline ClassFunction select_character(const CoverSpec& cover, const std::string& name) {
    auto G = cover.group();
    auto T = CharacterTable::build(G);
    if (name == "trivial") return T.irreducibles[0];
    if (name == "regular") {
        ClassFunction reg = T.irreducibles[0];
        for (size_t k = 1; k < T.irreducibles.size(); ++k)
            reg = cf_add(reg, cf_scale(T.irreducibles[k], T.irreducibles[k].dim()));
        return reg;
    }
    if (name.rfind("index:", 0) == 0) {
        size_t idx = std::stoul(name.substr(6));
        if (idx >= T.irreducibles.size())
            throw err(Error::Code::ParseError, "character index out of range");
        return T.irreducibles[idx];
    }
    throw err(Error::Code::ParseError, "unknown character spec: " + name);
}

inline json pl_to_json(const PLFunction& f) {
    json out;
    out["domain"] = json::array(
        {rat_to_json(f.t_lo()), f.t_hi() ? rat_to_json(*f.t_hi()) : json("inf")});
    out["anchor_t"] = rat_to_json(f.t_lo());
    out["anchor_value"] = rat_to_json(f.anchor_value());
    json b = json::array(), s = json::array();
    for (const auto& x : f.breaks()) b.push_back(rat_to_json(x));
    for (const auto& x : f.slopes()) s.push_back(rat_to_json(x));
    out["breakpoints"] = b;
    out["slopes"] = s;
    return out;
}

inline PLFunction pl_from_json(const json& j) {
    Rat lo = rat_from_json(j.at("domain")[0]);
    std::optional<Rat> hi;
    if (!j.at("domain")[1].is_string()) hi = rat_from_json(j.at("domain")[1]);
    std::vector<Rat> breaks, slopes;
    for (const auto& x : j.at("breakpoints")) breaks.push_back(rat_from_json(x));
    for (const auto& x : j.at("slopes")) slopes.push_back(rat_from_json(x));
    return PLFunction(lo, hi, rat_from_json(j.at("anchor_value")), breaks, slopes);
}

inline json report_to_json(const ConductorReport& rep) {
    json out;
    json samples = json::array();
    for (const auto& s : rep.samples) {
        json row;
        row["t"] = rat_to_json(s.t);
        row["sw_as"] = rat_to_json(s.sw_as);
        row["phi_s"] = rat_to_json(s.phi_s);
        row["del_alpha"] = rat_to_json(s.del_alpha_norm);
        row["del_alpha_naive"] = rat_to_json(s.del_alpha_naive);
        row["branch_count"] = s.branch_count;
        row["stabilizer_order"] = s.stab_order;
        samples.push_back(row);
    }
    out["samples"] = samples;
    json ivs = json::array();
    for (const auto& iv : rep.intervals) {
        json row;
        row["lo"] = rat_to_json(iv.lo);
        row["hi"] = rat_to_json(iv.hi);
        row["slope"] = rat_to_json(iv.slope);
        row["phi_s"] = rat_to_json(iv.phi_s);
        row["delta"] = iv.delta;
        row["sigma"] = iv.sigma;
        row["nu"] = iv.nu;
        ivs.push_back(row);
    }
    out["intervals"] = ivs;
    out["sw_as_function"] = pl_to_json(rep.sw_as_fn);
    out["certified"] = rep.certified;
    out["monotone_nonincreasing_observed"] = rep.monotone_nonincreasing;
    return out;
}

inline std::string report_to_csv(const ConductorReport& rep) {
    std::ostringstream os;
    os << "t,sw_as,phi_s,del_alpha\n";
    for (const auto& s : rep.samples)
        os << rat_str(s.t) << "," << rat_str(s.sw_as) << "," << rat_str(s.phi_s) << ","
           << rat_str(s.del_alpha_norm) << "\n";
    return os.str();
}

inline std::string pl_to_csv(const PLFunction& f, const Rat& lo, const Rat& hi, const Rat& step) {
    std::ostringstream os;
    os << "t,value,right_slope\n";
    for (Rat t = lo; t <= hi; t += step) {
        os << rat_str(t) << "," << rat_str(f.eval(t)) << ",";
        if (!f.t_hi() || t < *f.t_hi())
            os << rat_str(f.right_slope(t));
        os << "\n";
    }
    return os.str();
}

inline json checks_to_json(const std::vector<StructureCheck>& checks) {
    json out = json::array();
    for (const auto& c : checks) {
        json row;
        row["check"] = c.name;
        row["status"] = c.pass ? "pass" : "fail";
        row["witness"] = c.witness;
        out.push_back(row);
    }
    return out;
}

// FiltrationProfile serialization: {"group": ..., "j": [[elem, num, den]...], "epsilon_L": ...}
inline json group_to_json(const FiniteGroup& G) {
    json out;
    switch (G.family()) {
        case FiniteGroup::Family::Cyclic:
            out["family"] = "cyclic";
            out["n"] = G.size();
            break;
        case FiniteGroup::Family::ElementaryAbelian:
            out["family"] = "elementary-abelian";
            out["p"] = G.cyclic_factors()[0];
            out["k"] = (long)G.cyclic_factors().size();
            break;
        case FiniteGroup::Family::Metacyclic:
            out["family"] = "metacyclic";
            out["q"] = G.meta_q();
            out["m"] = G.meta_m();
            out["r"] = G.meta_r();
            break;
        default:
            throw err(Error::Code::ParseError, "group has no serializable family");
    }
    return out;
}

inline FiniteGroup group_from_json(const json& j) {
    std::string fam = j.at("family").get<std::string>();
    if (fam == "cyclic") return FiniteGroup::cyclic(j.at("n").get<long>());
    if (fam == "elementary-abelian")
        return FiniteGroup::elementary_abelian(j.at("p").get<long>(), j.at("k").get<long>());
    if (fam == "metacyclic")
        return FiniteGroup::metacyclic(j.at("q").get<long>(), j.at("m").get<long>(),
                                       j.at("r").get<long>());
    throw err(Error::Code::ParseError, "unknown group family: " + fam);
}

inline json profile_to_json(const FiltrationProfile& p) {
    json out;
    out["group"] = group_to_json(*p.G);
    json jj = json::array();
    for (int g = 1; g < p.G->size(); ++g)
        jj.push_back(json::array({g, to_long(rat_num(p.j[g])), to_long(rat_den(p.j[g]))}));
    out["j"] = jj;
    out["epsilon_L"] = rat_to_json(p.epsilon_L);
    return out;
}

inline FiltrationProfile profile_from_json(const json& j) {
    FiltrationProfile p;
    p.G = std::make_shared<FiniteGroup>(group_from_json(j.at("group")));
    p.j.assign(p.G->size(), Rat(0));
    for (const auto& row : j.at("j"))
        p.j[row[0].get<int>()] =
            Rat(Int(row[1].get<long long>()), Int(row[2].get<long long>()));
    p.epsilon_L = rat_from_json(j.at("epsilon_L"));
    p.validate();
    return p;
}

}  // namespace ramiflow

#endif
