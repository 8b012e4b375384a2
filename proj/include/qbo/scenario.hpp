// scenario.hpp — batch experiment description, config text/JSON, figure presets
#pragma once

#include "qbo/environment.hpp"
#include "qbo/propagator.hpp"
#include "qbo/pulses.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qbo::cli {

enum class EnvKind { ohmic, superohmic, one_over_f, custom };
enum class Observable { uncertainty, populations, coherence, pauli, leakage, decay_factor };
enum class SweepAxis { time, pulse_interval, field_strength, none };
enum class Model { esbm, dephasing };
enum class InitialState { ground, excited, superposition };

// k_B/ħ in GHz per mK (angular)
inline constexpr double ghz_per_mk = 1.380649e-23 / 1.054571817e-34 * 1e-12;

struct Curve {
    std::string name = "main";
    EnvKind env = EnvKind::ohmic;
    double exponent = 1.0;
    double gamma = 0.1;
    double uv_cutoff = 10.0;
    double ir_cutoff = 0.0;
    double temp_mk = 0.0;
    double omega = 1.0;
    double mass = 1.0;
    bool counterterms = true;
    double field = 0.0;
    bool pulses = false;
    double pulse_interval = 0.0;   // ns
    double kick_angle = 3.141592653589793;
    double tfinal = 1.0;
    std::size_t steps = 2048;
    std::size_t nbath = 0;          // 0: continuum kernels, else sampled modes
    InitialState initial = InitialState::ground;

    env::SpectralDensity density() const;
    prop::SystemParams system() const;
    pulses::PulseTrain train() const;

    bool operator==(const Curve&) const = default;
};

struct Scenario {
    std::string preset;             // informational: which preset seeded it
    Model model = Model::esbm;
    Observable observable = Observable::uncertainty;
    SweepAxis sweep = SweepAxis::time;
    double sweep_from = 0.0;
    double sweep_to = 0.0;          // 0: the longest curve window (time sweeps)
    std::size_t points = 21;
    std::vector<double> sweep_values;  // explicit values override from/to/points
    int level_cap = 6;
    std::string out;                // empty: stdout
    std::vector<Curve> curves{Curve{}};

    bool operator==(const Scenario&) const = default;
};

// Config errors carry the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& key, const std::string& why)
        : std::invalid_argument(key + ": " + why), key_(key) {}
    const std::string& key() const noexcept { return key_; }
private:
    std::string key_;
};

using Assignments = std::vector<std::pair<std::string, std::string>>;

Assignments read_text(const std::string& text);    // `key = value`, `#` comments
Assignments read_json(const std::string& text);    // nested objects → dotted keys
Assignments read_config(const std::string& text);  // detects JSON by a leading '{'

// Applies assignments on top of `base` (a `preset` key reseeds first; `env`
// keys go before the rest so explicit exponents win).
Scenario apply(Scenario base, const Assignments& kv);
Scenario parse(const std::string& text);
std::string print(const Scenario& s);

void validate(const Scenario& s);

Scenario figure_preset(const std::string& name);
std::vector<std::string> preset_names();

// Sweep positions (the first CSV column).
std::vector<double> sweep_points(const Scenario& s);

const char* to_string(EnvKind);
const char* to_string(Observable);
const char* to_string(SweepAxis);
const char* to_string(Model);
const char* to_string(InitialState);

struct RunReport {
    std::size_t rows = 0;
    std::size_t failed_points = 0;
    std::vector<std::string> messages;
};

// Writes the CSV; per-point numerical failures become `nan` cells and are
// counted in the report rather than aborting the sweep.
RunReport run_scenario(const Scenario& s, std::ostream& csv, unsigned workers = 0);

} // namespace qbo::cli
