// scenario.cpp — config parsing/printing and figure presets
#include "qbo/scenario.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace qbo::cli {

namespace {

constexpr double pi = std::numbers::pi;

template <class E, std::size_t N>
E lookup(const std::string& key, const std::string& v, const std::pair<const char*, E> (&table)[N]) {
    for (const auto& [name, e] : table)
        if (v == name) return e;
    std::string opts;
    for (const auto& [name, e] : table) opts += (opts.empty() ? "" : "|") + std::string(name);
    throw ConfigError(key, "expected one of " + opts + ", got '" + v + "'");
}

const std::pair<const char*, EnvKind> env_names[] = {
    {"ohmic", EnvKind::ohmic}, {"superohmic", EnvKind::superohmic},
    {"one_over_f", EnvKind::one_over_f}, {"custom", EnvKind::custom}};
const std::pair<const char*, Observable> obs_names[] = {
    {"uncertainty", Observable::uncertainty}, {"populations", Observable::populations},
    {"coherence", Observable::coherence}, {"pauli", Observable::pauli},
    {"leakage", Observable::leakage}, {"decay_factor", Observable::decay_factor}};
const std::pair<const char*, SweepAxis> sweep_names[] = {
    {"time", SweepAxis::time}, {"pulse-interval", SweepAxis::pulse_interval},
    {"field-strength", SweepAxis::field_strength}, {"none", SweepAxis::none}};
const std::pair<const char*, Model> model_names[] = {{"esbm", Model::esbm}, {"dephasing", Model::dephasing}};
const std::pair<const char*, InitialState> init_names[] = {
    {"ground", InitialState::ground}, {"excited", InitialState::excited},
    {"superposition", InitialState::superposition}};

template <class E, std::size_t N>
const char* name_of(E e, const std::pair<const char*, E> (&table)[N]) {
    for (const auto& [name, v] : table)
        if (v == e) return name;
    return "?";
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty() && std::isfinite(d)) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key, "expected a finite number, got '" + v + "'");
}

std::size_t to_count(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long n = std::stoll(v, &pos);
        if (trim(v.substr(pos)).empty() && n >= 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    throw ConfigError(key, "expected a nonnegative integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ConfigError(key, "expected true|false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void set_env(Curve& c, EnvKind e) {
    c.env = e;
    switch (e) {
    case EnvKind::ohmic: c.exponent = 1.0; break;
    case EnvKind::superohmic: c.exponent = 3.0; break;
    case EnvKind::one_over_f:
        c.exponent = -1.0;
        if (c.ir_cutoff <= 0.0) c.ir_cutoff = 1.0;
        break;
    case EnvKind::custom: break;
    }
}

const std::set<std::string> curve_fields = {
    "env", "exponent", "gamma", "uv_cutoff", "ir_cutoff", "temp_mk", "omega", "mass", "counterterms",
    "field", "pulses", "pulse_interval", "kick_angle", "tfinal", "steps", "nbath", "initial"};

void set_curve_field(Curve& c, const std::string& field, const std::string& key, const std::string& v) {
    if (field == "env") set_env(c, lookup(key, v, env_names));
    else if (field == "exponent") c.exponent = to_double(key, v);
    else if (field == "gamma") c.gamma = to_double(key, v);
    else if (field == "uv_cutoff") c.uv_cutoff = to_double(key, v);
    else if (field == "ir_cutoff") c.ir_cutoff = to_double(key, v);
    else if (field == "temp_mk") c.temp_mk = to_double(key, v);
    else if (field == "omega") c.omega = to_double(key, v);
    else if (field == "mass") c.mass = to_double(key, v);
    else if (field == "counterterms") c.counterterms = to_bool(key, v);
    else if (field == "field") c.field = to_double(key, v);
    else if (field == "pulses") c.pulses = to_bool(key, v);
    else if (field == "pulse_interval") c.pulse_interval = to_double(key, v);
    else if (field == "kick_angle") c.kick_angle = to_double(key, v);
    else if (field == "tfinal") c.tfinal = to_double(key, v);
    else if (field == "steps") c.steps = to_count(key, v);
    else if (field == "nbath") c.nbath = to_count(key, v);
    else if (field == "initial") c.initial = lookup(key, v, init_names);
    else throw ConfigError(key, "unknown key");
}

void flatten(const nlohmann::json& j, const std::string& prefix, Assignments& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    if (prefix.empty()) throw ConfigError("(root)", "JSON config must be an object");
    if (j.is_array()) {
        std::string joined;
        for (const auto& e : j) {
            if (!joined.empty()) joined += ",";
            joined += e.is_string() ? e.get<std::string>() : e.dump();
        }
        out.emplace_back(prefix, joined);
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else if (j.is_number_float()) {
        out.emplace_back(prefix, fmt(j.get<double>()));
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

Curve make(const std::string& name, EnvKind env, double gamma, double uv, double temp_mk, double omega,
           double tfinal, std::size_t steps) {
    Curve c;
    c.name = name;
    set_env(c, env);
    c.gamma = gamma;
    c.uv_cutoff = uv;
    c.temp_mk = temp_mk;
    c.omega = omega;
    c.tfinal = tfinal;
    c.steps = steps;
    return c;
}

Curve pulsed(Curve c, double eta) {
    c.pulses = true;
    c.pulse_interval = eta * pi / c.uv_cutoff;
    return c;
}

Curve unpulsed(Curve c, const std::string& name) {
    c.name = name;
    c.pulses = false;
    return c;
}

} // namespace

const char* to_string(EnvKind e) { return name_of(e, env_names); }
const char* to_string(Observable e) { return name_of(e, obs_names); }
const char* to_string(SweepAxis e) { return name_of(e, sweep_names); }
const char* to_string(Model e) { return name_of(e, model_names); }
const char* to_string(InitialState e) { return name_of(e, init_names); }

// The field rescales M everywhere it appears, including the reference mass of
// I(ω) = 2Mγω^ν…, so γ stays the damping rate seen by the oscillator.
env::SpectralDensity Curve::density() const {
    return {exponent, gamma, uv_cutoff, ir_cutoff, mass / (1.0 + field), temp_mk * ghz_per_mk};
}

prop::SystemParams Curve::system() const { return {omega, mass, counterterms, field}; }

pulses::PulseTrain Curve::train() const {
    pulses::PulseTrain p;
    p.enabled = pulses;
    p.interval = pulse_interval;
    p.kick_angle = kick_angle;
    return p;
}

Assignments read_text(const std::string& text) {
    Assignments out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

Assignments read_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("(json)", e.what());
    }
    Assignments out;
    flatten(j, "", out);
    return out;
}

Assignments read_config(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return read_json(text);
    return read_text(text);
}

Scenario apply(Scenario s, const Assignments& kv) {
    for (const auto& [k, v] : kv)
        if (k == "preset") {
            s = figure_preset(v);
        }
    for (const auto& [k, v] : kv)
        if (k == "curves") {
            const auto names = split_list(v);
            if (names.empty()) throw ConfigError(k, "needs at least one curve name");
            std::vector<Curve> next;
            for (const auto& n : names) {
                if (n.find('.') != std::string::npos) throw ConfigError(k, "curve names may not contain '.'");
                auto it = std::find_if(s.curves.begin(), s.curves.end(), [&](const Curve& c) { return c.name == n; });
                Curve c = it != s.curves.end() ? *it : Curve{};
                c.name = n;
                next.push_back(c);
            }
            s.curves = std::move(next);
        }

    auto curve_key = [&](const std::string& k, std::string& field) -> Curve* {
        const auto dot = k.find('.');
        if (dot == std::string::npos) return nullptr;
        const std::string name = k.substr(0, dot);
        field = k.substr(dot + 1);
        auto it = std::find_if(s.curves.begin(), s.curves.end(), [&](const Curve& c) { return c.name == name; });
        if (it == s.curves.end()) throw ConfigError(k, "unknown curve '" + name + "'");
        if (!curve_fields.count(field)) throw ConfigError(k, "unknown key");
        return &*it;
    };

    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& [k, v] : kv) {
            if (k == "preset" || k == "curves") continue;
            std::string field;
            Curve* c = curve_key(k, field);
            const bool is_env = c ? field == "env" : k == "env";
            if ((pass == 0) != is_env) continue;
            if (c) {
                set_curve_field(*c, field, k, v);
            } else if (curve_fields.count(k)) {
                for (auto& cc : s.curves) set_curve_field(cc, k, k, v);
            } else if (k == "model") s.model = lookup(k, v, model_names);
            else if (k == "observable") s.observable = lookup(k, v, obs_names);
            else if (k == "sweep") s.sweep = lookup(k, v, sweep_names);
            else if (k == "sweep_from") s.sweep_from = to_double(k, v);
            else if (k == "sweep_to") s.sweep_to = to_double(k, v);
            else if (k == "points") s.points = to_count(k, v);
            else if (k == "sweep_values") {
                s.sweep_values.clear();
                for (const auto& item : split_list(v)) s.sweep_values.push_back(to_double(k, item));
            } else if (k == "level_cap") s.level_cap = static_cast<int>(to_count(k, v));
            else if (k == "out") s.out = v;
            else throw ConfigError(k, "unknown key");
        }
    }
    return s;
}

Scenario parse(const std::string& text) { return cli::apply(Scenario{}, read_config(text)); }

std::string print(const Scenario& s) {
    std::ostringstream os;
    if (!s.preset.empty()) os << "preset = " << s.preset << "\n";
    os << "model = " << to_string(s.model) << "\n";
    os << "observable = " << to_string(s.observable) << "\n";
    os << "sweep = " << to_string(s.sweep) << "\n";
    os << "sweep_from = " << fmt(s.sweep_from) << "\n";
    os << "sweep_to = " << fmt(s.sweep_to) << "\n";
    os << "points = " << s.points << "\n";
    os << "sweep_values = ";
    for (std::size_t i = 0; i < s.sweep_values.size(); ++i) os << (i ? "," : "") << fmt(s.sweep_values[i]);
    os << "\n";
    os << "level_cap = " << s.level_cap << "\n";
    os << "out = " << s.out << "\n";
    os << "curves = ";
    for (std::size_t i = 0; i < s.curves.size(); ++i) os << (i ? "," : "") << s.curves[i].name;
    os << "\n";
    for (const auto& c : s.curves) {
        const std::string p = c.name + ".";
        os << "\n" << p << "env = " << to_string(c.env) << "\n";
        os << p << "exponent = " << fmt(c.exponent) << "\n";
        os << p << "gamma = " << fmt(c.gamma) << "\n";
        os << p << "uv_cutoff = " << fmt(c.uv_cutoff) << "\n";
        os << p << "ir_cutoff = " << fmt(c.ir_cutoff) << "\n";
        os << p << "temp_mk = " << fmt(c.temp_mk) << "\n";
        os << p << "omega = " << fmt(c.omega) << "\n";
        os << p << "mass = " << fmt(c.mass) << "\n";
        os << p << "counterterms = " << (c.counterterms ? "true" : "false") << "\n";
        os << p << "field = " << fmt(c.field) << "\n";
        os << p << "pulses = " << (c.pulses ? "true" : "false") << "\n";
        os << p << "pulse_interval = " << fmt(c.pulse_interval) << "\n";
        os << p << "kick_angle = " << fmt(c.kick_angle) << "\n";
        os << p << "tfinal = " << fmt(c.tfinal) << "\n";
        os << p << "steps = " << c.steps << "\n";
        os << p << "nbath = " << c.nbath << "\n";
        os << p << "initial = " << to_string(c.initial) << "\n";
    }
    return os.str();
}

void validate(const Scenario& s) {
    if (s.curves.empty()) throw ConfigError("curves", "needs at least one curve");
    std::set<std::string> names;
    for (const auto& c : s.curves) {
        if (c.name.empty() || c.name.find_first_of(".,= ") != std::string::npos)
            throw ConfigError("curves", "invalid curve name '" + c.name + "'");
        if (!names.insert(c.name).second) throw ConfigError("curves", "duplicate curve '" + c.name + "'");
        const std::string p = c.name + ".";
        try {
            env::validate(c.density());
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            const auto colon = msg.find(':');
            std::string field = msg.substr(0, colon);
            if (field == "coupling") field = "gamma";
            if (field == "temperature") field = "temp_mk";
            throw ConfigError(p + field, msg.substr(colon + 2));
        }
        if (!(c.omega > 0.0)) throw ConfigError(p + "omega", "must be positive");
        if (!(c.field >= 0.0)) throw ConfigError(p + "field", "must be nonnegative");
        if (!(c.tfinal > 0.0)) throw ConfigError(p + "tfinal", "must be positive");
        if (c.steps < 16) throw ConfigError(p + "steps", "must be at least 16");
        if (c.pulses || s.model == Model::dephasing) {
            if (!(c.pulse_interval > 0.0) && !(s.sweep == SweepAxis::pulse_interval))
                throw ConfigError(p + "pulse_interval", "must be positive when pulses are enabled");
            if (s.model == Model::esbm && !pulses::is_odd_pi(c.kick_angle))
                throw ConfigError(p + "kick_angle", "must be an odd multiple of pi");
        }
    }
    if (s.level_cap < 2) throw ConfigError("level_cap", "must be at least 2");
    if (s.points < 1) throw ConfigError("points", "must be at least 1");
    if (s.sweep_to != 0.0 && s.sweep_to < s.sweep_from) throw ConfigError("sweep_to", "must not be below sweep_from");
    if (!std::is_sorted(s.sweep_values.begin(), s.sweep_values.end()))
        throw ConfigError("sweep_values", "must be ascending");
    for (double v : sweep_points(s))
        if (v < 0.0) throw ConfigError("sweep_from", "sweep values must be nonnegative");
    if (s.sweep == SweepAxis::pulse_interval)
        for (double v : sweep_points(s))
            if (!(v > 0.0)) throw ConfigError("sweep_from", "pulse-interval sweeps need eta > 0");
    if (s.model == Model::dephasing) {
        if (s.observable != Observable::coherence)
            throw ConfigError("observable", "the dephasing model only provides coherence");
        if (s.sweep == SweepAxis::field_strength)
            throw ConfigError("sweep", "the dephasing model has no field-strength axis");
    }
}

std::vector<double> sweep_points(const Scenario& s) {
    if (!s.sweep_values.empty()) return s.sweep_values;
    double to = s.sweep_to;
    if (s.sweep == SweepAxis::none || (s.sweep == SweepAxis::time && to == 0.0)) {
        to = 0.0;
        for (const auto& c : s.curves) to = std::max(to, c.tfinal);
        if (s.sweep == SweepAxis::none) return {to};
    }
    if (s.points <= 1) return {to};
    std::vector<double> v(s.points);
    for (std::size_t k = 0; k < s.points; ++k)
        v[k] = s.sweep_from + (to - s.sweep_from) * static_cast<double>(k) / static_cast<double>(s.points - 1);
    return v;
}

std::vector<std::string> preset_names() { return {"fig1a", "fig1b", "fig2", "fig3a", "fig3b", "fig4"}; }

// Counterterms: on for the unpulsed figures (the bare super-Ohmic oscillator is
// unstable otherwise), off for pulsed comparisons, where the decoupling itself
// suppresses the renormalization and a surviving X² counterterm would detune
// the kicked oscillator from the qubit basis.
Scenario figure_preset(const std::string& name) {
    Scenario s;
    s.preset = name;
    s.level_cap = 6;
    if (name == "fig1a") {
        // Ω = 1, γ = 0.1, Λ_UV = 10, T = 14.5 mK; window [0, 1] ns
        s.observable = Observable::uncertainty;
        s.sweep = SweepAxis::time;
        s.sweep_to = 1.0;
        s.points = 101;
        s.curves = {make("ohmic", EnvKind::ohmic, 0.1, 10.0, 14.5, 1.0, 1.0, 4096),
                    make("superohmic", EnvKind::superohmic, 0.1, 10.0, 14.5, 1.0, 1.0, 4096)};
    } else if (name == "fig1b") {
        // uncertainty against η at t = 0.25 ns
        s.observable = Observable::uncertainty;
        s.sweep = SweepAxis::pulse_interval;
        s.sweep_from = 0.1;
        s.sweep_to = 3.0;
        s.points = 59;
        s.curves = {pulsed(make("ohmic", EnvKind::ohmic, 0.1, 100.0, 14.5, 1.0, 0.25, 4096), 1.0),
                    pulsed(make("superohmic", EnvKind::superohmic, 0.0002, 50.0, 14.5, 1.0, 0.25, 4096), 1.0),
                    pulsed(make("one_over_f", EnvKind::one_over_f, 0.1, 100.0, 0.0, 1.0, 0.25, 4096), 1.0)};
        for (auto& c : s.curves) c.counterterms = false;
    } else if (name == "fig2") {
        // Γ(t) with and without pulses; windows t = 2𝒩Δt with 𝒩 the pair count
        s.observable = Observable::decay_factor;
        s.sweep = SweepAxis::time;
        s.points = 61;
        const double ohm_t = 2.0 * 100 * 0.15 * pi / 100.0;
        const double f_t = 2.0 * 30 * 1.5 * pi / 100.0;
        const double sup_t = 2.0 * 100 * 0.05 * pi / 30.0;
        Curve ohm = pulsed(make("ohmic", EnvKind::ohmic, 0.1, 100.0, 0.0, 1.0, ohm_t, 4096), 0.15);
        Curve f = pulsed(make("one_over_f", EnvKind::one_over_f, 0.5, 100.0, 0.0, 1.0, f_t, 8192), 1.5);
        Curve sup = pulsed(make("superohmic", EnvKind::superohmic, 0.01, 30.0, 0.0, 1.0, sup_t, 4096), 0.05);
        for (Curve* c : {&ohm, &f, &sup}) {
            c->initial = InitialState::excited;
            c->counterterms = false;
        }
        s.curves = {ohm, unpulsed(ohm, "ohmic_free"), f, unpulsed(f, "one_over_f_free"),
                    sup, unpulsed(sup, "superohmic_free")};
    } else if (name == "fig3a") {
        // analytic dephasing model, t = 0.25 ns, Λ_UV = 100, Λ_IR = 1
        s.model = Model::dephasing;
        s.observable = Observable::coherence;
        s.sweep = SweepAxis::pulse_interval;
        s.sweep_from = 0.2;
        s.sweep_to = 3.0;
        s.points = 57;
        s.curves = {pulsed(make("one_over_f", EnvKind::one_over_f, 0.2, 100.0, 0.0, 1.0, 0.25, 4096), 1.0),
                    pulsed(make("ohmic", EnvKind::ohmic, 0.125, 100.0, 0.0, 1.0, 0.25, 4096), 1.0),
                    pulsed(make("superohmic", EnvKind::superohmic, 0.005, 100.0, 0.0, 1.0, 0.25, 4096), 1.0)};
        for (auto& c : s.curves) c.ir_cutoff = 1.0;
    } else if (name == "fig3b") {
        // first excited population against η at t = 0.15 ns
        s.observable = Observable::decay_factor;
        s.sweep = SweepAxis::pulse_interval;
        s.sweep_from = 0.2;
        s.sweep_to = 3.0;
        s.points = 57;
        Curve ohm = pulsed(make("ohmic", EnvKind::ohmic, 0.1, 100.0, 0.0, 10.0, 0.15, 4096), 1.0);
        Curve f = pulsed(make("one_over_f", EnvKind::one_over_f, 0.5, 100.0, 0.0, 15.0, 0.15, 4096), 1.0);
        Curve sup = pulsed(make("superohmic", EnvKind::superohmic, 0.01, 50.0, 0.0, 15.0, 0.15, 4096), 1.0);
        for (Curve* c : {&ohm, &f, &sup}) {
            c->initial = InitialState::excited;
            c->counterterms = false;
        }
        s.curves = {ohm, f, sup, unpulsed(ohm, "ohmic_free"), unpulsed(f, "one_over_f_free"),
                    unpulsed(sup, "superohmic_free")};
    } else if (name == "fig4") {
        // excited-state population against the constant field V at t = 0.15 ns
        s.observable = Observable::decay_factor;
        s.sweep = SweepAxis::field_strength;
        s.sweep_values = {0, 1, 2, 3, 5, 7, 10, 15, 20, 30, 50, 70, 100};
        s.curves = {make("ohmic", EnvKind::ohmic, 0.1, 100.0, 0.0, 1.0, 0.15, 8192),
                    make("one_over_f", EnvKind::one_over_f, 0.1, 100.0, 0.0, 1.0, 0.15, 8192),
                    make("superohmic", EnvKind::superohmic, 0.001, 100.0, 0.0, 1.0, 0.15, 16384)};
        for (auto& c : s.curves) c.initial = InitialState::excited;
    } else {
        std::string all;
        for (const auto& n : preset_names()) all += (all.empty() ? "" : "|") + n;
        throw ConfigError("preset", "unknown preset '" + name + "' (expected " + all + ")");
    }
    return s;
}

} // namespace qbo::cli
