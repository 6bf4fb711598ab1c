/*
 * config.hpp: JSON configuration ingestion.
 *
 *   {
 *     "scheme": {
 *       "variant": "double_lambda",
 *       "levels": {"a": {"value": 236, "unit": "nm"}, "c": ..., "d": ...},
 *       "transitions": {"ab": ..., "ac": ..., "cb": ...},      (alternative to levels)
 *       "dipoles": [q1, q2, q3, q4],
 *       "decay": {"a": q, "c": q, "d": q},
 *       "dephasing": {"cb": q, ...},          total coherence decay γ_xy
 *       "branching": {"a": {"b": 1.0}},       defaults to everything into b
 *       "repopulation": true
 *     },
 *     "fields": [{"detuning": q, "rabi": q, "phase": 0, "direction": 1}, ...],
 *     "medium": {"density": q, "doppler_width": q, "radiative_rate": q, "length": q}
 *   }
 *
 * Every q is {"value": x, "unit": "..."}; a bare number is read as SI.
 * A field takes either "frequency" or "detuning" from its transition; field 4
 * may be omitted and is then closed from fields 1–3.
 */

#pragma once

#include <json.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "medium.hpp"
#include "units.hpp"

namespace backscatter {

using json = nlohmann::json;

struct Config {
    LevelScheme scheme;
    FieldSet fields;
    MediumParams medium;
};

namespace detail {

inline double quantity(const json& q, Dimension dim, const std::string& where) {
    if (q.is_number()) return q.get<double>();
    if (!q.is_object() || !q.contains("value"))
        throw Error(ErrorKind::Config, where + " must be a number or a {value, unit} pair");
    if (!q["value"].is_number()) throw Error(ErrorKind::Config, where + ".value must be a number");
    std::string unit = q.value("unit", "");
    try {
        return to_si(q["value"].get<double>(), unit, dim);
    } catch (const Error& e) {
        throw Error(ErrorKind::Config, where + ": " + e.what());
    }
}

inline const json& member(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw Error(ErrorKind::Config, "missing " + where + (where.empty() ? "" : ".") + key);
    return obj.at(key);
}

inline Level parse_level(const std::string& s, const std::string& where) {
    if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'd') return static_cast<Level>(s[0] - 'a');
    throw Error(ErrorKind::Config, where + ": '" + s + "' is not a level (a, b, c or d)");
}

inline std::pair<Level, Level> parse_pair(const std::string& s, const std::string& where) {
    if (s.size() != 2) throw Error(ErrorKind::Config, where + ": '" + s + "' is not a level pair such as \"cb\"");
    return {parse_level(s.substr(0, 1), where), parse_level(s.substr(1, 1), where)};
}

/// Level energies from transition frequencies ω_xy = E_x − E_y, checking
/// that redundant transitions close.
inline std::array<double, 4> energies_from_transitions(const json& t) {
    struct Equation {
        Level x, y;
        double omega;
        std::string key;
    };
    std::vector<Equation> eqs;
    for (auto& [key, q] : t.items()) {
        auto [x, y] = parse_pair(key, "scheme.transitions");
        eqs.push_back({x, y, quantity(q, Dimension::AngularFrequency, "scheme.transitions." + key), key});
    }
    std::array<double, 4> e{};
    std::array<bool, 4> known{false, true, false, false};
    std::array<std::string, 4> expr{};
    auto join = [](const std::string& base, const std::string& term, bool plus) {
        if (base.empty()) return plus ? term : "−" + term;
        return base + (plus ? " + " : " − ") + term;
    };
    for (std::size_t pass = 0; pass < eqs.size(); ++pass)
        for (const auto& q : eqs) {
            int x = index(q.x), y = index(q.y);
            std::string name = "ω_" + q.key;
            if (known[y] && !known[x]) {
                e[x] = e[y] + q.omega;
                expr[x] = join(expr[y], name, true);
                known[x] = true;
            } else if (known[x] && !known[y]) {
                e[y] = e[x] - q.omega;
                expr[y] = join(expr[x], name, false);
                known[y] = true;
            }
        }
    for (Level l : all_levels)
        if (!known[index(l)])
            throw Error(ErrorKind::Config, std::string("scheme.transitions does not determine level ") + level_name(l));
    for (const auto& q : eqs) {
        double derived = e[index(q.x)] - e[index(q.y)];
        if (std::abs(derived - q.omega) > 1e-9 * std::max(std::abs(q.omega), std::abs(derived))) {
            std::string lhs = expr[index(q.x)], rhs = expr[index(q.y)];
            std::string identity = rhs.empty() ? lhs : "(" + lhs + ") − (" + rhs + ")";
            throw Error(ErrorKind::Inconsistency,
                        "transition closure violated: ω_" + q.key + " = " + identity + " does not hold (ω_" + q.key +
                            " = " + std::to_string(q.omega) + " rad/s, other transitions give " +
                            std::to_string(derived) + " rad/s)");
        }
    }
    return e;
}

inline LevelScheme parse_scheme(const json& j) {
    LevelScheme s = make_scheme(parse_variant(member(j, "variant", "scheme").get<std::string>()), 0.0, 0.0, 0.0);
    if (j.contains("levels") == j.contains("transitions"))
        throw Error(ErrorKind::Config, "scheme needs exactly one of \"levels\" or \"transitions\"");
    if (j.contains("levels")) {
        const json& lv = j["levels"];
        for (const char* name : {"a", "c", "d"})
            s.energy[index(parse_level(name, ""))] =
                quantity(member(lv, name, "scheme.levels"), Dimension::AngularFrequency, std::string("scheme.levels.") + name);
    } else {
        s.energy = energies_from_transitions(j["transitions"]);
    }

    const json& dip = member(j, "dipoles", "scheme");
    if (!dip.is_array() || dip.size() != 4) throw Error(ErrorKind::Config, "scheme.dipoles must list four dipole moments");
    for (int k = 0; k < 4; ++k)
        s.dipole[k] = quantity(dip[k], Dimension::Dipole, "scheme.dipoles[" + std::to_string(k) + "]");

    if (j.contains("decay"))
        for (auto& [key, q] : j["decay"].items())
            s.set_decay(parse_level(key, "scheme.decay"), quantity(q, Dimension::Rate, "scheme.decay." + key));
    if (j.contains("dephasing"))
        for (auto& [key, q] : j["dephasing"].items()) {
            auto [x, y] = parse_pair(key, "scheme.dephasing");
            s.set_coherence_decay(x, y, quantity(q, Dimension::Rate, "scheme.dephasing." + key));
        }
    if (j.contains("branching"))
        for (auto& [from, row] : j["branching"].items()) {
            auto& target = s.branching[index(parse_level(from, "scheme.branching"))];
            target.fill(0.0);
            for (auto& [to, w] : row.items()) target[index(parse_level(to, "scheme.branching." + from))] = w.get<double>();
        }
    s.repopulation = j.value("repopulation", true);
    s.validate();
    return s;
}

inline int parse_direction(const json& d) {
    if (d.is_number_integer()) return d.get<int>();
    if (d.is_string()) {
        auto s = d.get<std::string>();
        if (s == "forward" || s == "+") return 1;
        if (s == "backward" || s == "-") return -1;
    }
    throw Error(ErrorKind::Config, "field direction must be 1, -1, \"forward\" or \"backward\"");
}

inline FieldSet parse_fields(const json& j, const LevelScheme& s) {
    if (!j.is_array() || j.size() < 3 || j.size() > 4)
        throw Error(ErrorKind::Config, "fields must be an array of three or four entries");
    FieldSet f;
    bool closed = false;
    for (int k = 0; k < static_cast<int>(j.size()); ++k) {
        const json& e = j[k];
        std::string where = "fields[" + std::to_string(k) + "]";
        double resonance = s.field_transition_frequency(k);
        if (e.contains("frequency") && e.contains("detuning"))
            throw Error(ErrorKind::Config, where + " gives both frequency and detuning");
        if (e.contains("frequency"))
            f[k].frequency = quantity(e["frequency"], Dimension::AngularFrequency, where + ".frequency");
        else if (e.contains("detuning"))
            f[k].frequency = resonance + quantity(e["detuning"], Dimension::Rate, where + ".detuning");
        else if (k < 3)
            f[k].frequency = resonance;
        else
            f[k].frequency = 0.0;
        double amplitude = e.contains("rabi") ? quantity(e["rabi"], Dimension::Rate, where + ".rabi") : 0.0;
        if (k == field::stokes && !e.contains("rabi")) throw Error(ErrorKind::Config, "missing " + where + ".rabi");
        f[k].rabi = std::polar(amplitude, e.value("phase", 0.0));
        if (e.contains("direction")) f[k].direction = parse_direction(e["direction"]);
        if (k == field::signal) closed = f[k].frequency > 0.0;
    }
    if (!closed)
        f[field::signal].frequency =
            closure_frequency(s.variant, f.frequency(0), f.frequency(1), f.frequency(2));
    check_frequency_closure(s.variant, f);
    f.validate();
    return f;
}

inline MediumParams parse_medium(const json& j) {
    MediumParams m;
    m.density = quantity(member(j, "density", "medium"), Dimension::Density, "medium.density");
    m.doppler_width = j.contains("doppler_width") ? quantity(j["doppler_width"], Dimension::Rate, "medium.doppler_width") : 0.0;
    m.radiative_rate = quantity(member(j, "radiative_rate", "medium"), Dimension::Rate, "medium.radiative_rate");
    m.length = quantity(member(j, "length", "medium"), Dimension::Length, "medium.length");
    m.validate();
    return m;
}

}  // namespace detail

inline Config build_scheme(const json& cfg) {
    if (!cfg.is_object()) throw Error(ErrorKind::Config, "configuration must be a JSON object");
    Config c;
    c.scheme = detail::parse_scheme(detail::member(cfg, "scheme", ""));
    c.fields = detail::parse_fields(detail::member(cfg, "fields", ""), c.scheme);
    c.medium = detail::parse_medium(detail::member(cfg, "medium", ""));
    return c;
}

/// {value, unit} pair in SI units, as written back into configs.
inline json si_quantity(double value, const std::string& unit) { return {{"value", value}, {"unit", unit}}; }

/// Canonical config for an in-memory setup; build_scheme(to_config(c)) rebuilds c.
inline json to_config(const Config& c) {
    const auto& s = c.scheme;
    json levels = {{"a", si_quantity(s.energy_of(Level::a), "rad/s")},
                   {"c", si_quantity(s.energy_of(Level::c), "rad/s")},
                   {"d", si_quantity(s.energy_of(Level::d), "rad/s")}};
    json dipoles = json::array();
    for (double p : s.dipole) dipoles.push_back(si_quantity(p, "C*m"));
    json decay = json::object(), dephasing = json::object(), branching = json::object();
    for (Level x : all_levels) {
        std::string xn(1, level_name(x));
        decay[xn] = si_quantity(s.decay_of(x), "rad/s");
        json row = json::object();
        for (Level y : all_levels) {
            std::string yn(1, level_name(y));
            if (s.branching[index(x)][index(y)] != 0.0) row[yn] = s.branching[index(x)][index(y)];
            if (index(x) < index(y)) dephasing[xn + yn] = si_quantity(s.coherence_decay(x, y), "rad/s");
        }
        branching[xn] = row;
    }
    json fields = json::array();
    for (int k = 0; k < 4; ++k)
        fields.push_back({{"frequency", si_quantity(c.fields.frequency(k), "rad/s")},
                          {"rabi", si_quantity(std::abs(c.fields.rabi(k)), "rad/s")},
                          {"phase", std::arg(c.fields.rabi(k))},
                          {"direction", c.fields[k].direction}});
    return {{"scheme",
             {{"variant", std::string(variant_name(s.variant))},
              {"levels", levels},
              {"dipoles", dipoles},
              {"decay", decay},
              {"dephasing", dephasing},
              {"branching", branching},
              {"repopulation", s.repopulation}}},
            {"fields", fields},
            {"medium",
             {{"density", si_quantity(c.medium.density, "m^-3")},
              {"doppler_width", si_quantity(c.medium.doppler_width, "rad/s")},
              {"radiative_rate", si_quantity(c.medium.radiative_rate, "rad/s")},
              {"length", si_quantity(c.medium.length, "m")}}}};
}

}  // namespace backscatter
