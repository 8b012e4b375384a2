// runner.cpp — sweep dispatch and CSV output
#include "qbo/dephasing.hpp"
#include "qbo/scenario.hpp"
#include "qbo/state.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <system_error>
#include <thread>

namespace qbo::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// One CSV cell: empty when the point is outside a curve's window.
using Cell = std::optional<double>;

std::vector<std::string> observable_columns(const Scenario& s) {
    switch (s.observable) {
    case Observable::uncertainty: return {"A", "A2"};
    case Observable::populations: {
        std::vector<std::string> v;
        for (int k = 0; k < s.level_cap; ++k) v.push_back("P" + std::to_string(k));
        return v;
    }
    case Observable::coherence:
        if (s.model == Model::dephasing) return {"coh", "D", "Dfree", "divergent"};
        return {"coh"};
    case Observable::pauli: return {"sx", "sy", "sz"};
    case Observable::leakage: return {"leak"};
    case Observable::decay_factor: return {"P1", "Gamma"};
    }
    return {};
}

bool reports_eta(const Scenario& s, const Curve& c) {
    return s.sweep == SweepAxis::pulse_interval && (c.pulses || s.model == Model::dephasing);
}

env::Bath make_bath(const Curve& c) {
    const auto sd = c.density();
    if (c.nbath == 0) return env::Bath::continuum(sd);
    return env::Bath::discrete(env::sample_discrete_bath(sd, c.nbath), sd.temperature, c.mass);
}

state::PhaseSpaceState initial_state(const Curve& c) {
    const double kappa = c.mass * c.omega;
    switch (c.initial) {
    case InitialState::ground: return state::gaussian_state(Eigen::Vector2d::Zero(), state::vacuum_covariance(kappa), kappa);
    case InitialState::excited: return state::fock_superposition({0.0, 1.0}, kappa);
    case InitialState::superposition:
        return state::fock_superposition({std::sqrt(0.5), std::sqrt(0.5)}, kappa);
    }
    return {};
}

std::vector<double> observe(const Scenario& s, const Curve& c, const prop::PropagatorSolution& sol) {
    const auto st = state::evolve(initial_state(c), sol.C, sol.Sigma);
    switch (s.observable) {
    case Observable::uncertainty: {
        const double A = state::uncertainty(state::moments_of(st)).A;
        return {A, A * A};
    }
    case Observable::populations: {
        const auto rho = state::fock_density(st, s.level_cap);
        std::vector<double> v;
        for (int k = 0; k < s.level_cap; ++k) v.push_back(rho.rho(k, k).real());
        return v;
    }
    case Observable::coherence: return {std::abs(state::fock_element(st, 0, 1))};
    case Observable::pauli: {
        const auto p = state::pauli_expectations(state::fock_density(st, s.level_cap));
        return {p.sx, p.sy, p.sz};
    }
    case Observable::leakage: return {state::leakage(state::fock_density(st, s.level_cap))};
    case Observable::decay_factor: {
        const auto rho = state::fock_density(st, s.level_cap);
        return {rho.rho(1, 1).real(), state::decay_factor(rho)};
    }
    }
    return {};
}

struct Table {
    std::size_t rows = 0;
    // cells[curve][row] → per-column values (empty vector: blank cells)
    std::vector<std::vector<std::vector<Cell>>> cells;
    std::vector<std::vector<double>> eta;  // actual η per curve/row
    std::vector<std::string> messages;
    std::size_t failed = 0;
    std::mutex mu;

    void fail(std::size_t c, std::size_t r, std::size_t width, const std::string& why) {
        std::lock_guard lock(mu);
        cells[c][r].assign(width, Cell{nan});
        ++failed;
        messages.push_back(why);
    }
};

std::vector<Cell> as_cells(const std::vector<double>& v) { return {v.begin(), v.end()}; }

// Time sweep: one solver per curve; rows snap to the nearest grid node.
void run_time_series(const Scenario& s, std::size_t ci, const std::vector<double>& pts, Table& T,
                     std::size_t width) {
    const Curve& c = s.curves[ci];
    prop::TimeGrid g{c.tfinal, c.steps};
    if (c.pulses) {
        const double m = std::max(1.0, std::ceil(c.pulse_interval / g.dt() - 1e-9));
        const double dt = c.pulse_interval / m;
        g.steps = static_cast<std::size_t>(std::ceil(c.tfinal / dt - 1e-9));
        g.t_final = static_cast<double>(g.steps) * dt;
    }
    std::optional<prop::Solver> solver;
    try {
        solver.emplace(c.system(), make_bath(c), c.train(), g);
    } catch (const std::exception& e) {
        for (std::size_t r = 0; r < pts.size(); ++r)
            if (pts[r] <= c.tfinal * (1 + 1e-9)) T.fail(ci, r, width, c.name + ": " + e.what());
        return;
    }
    for (std::size_t r = 0; r < pts.size(); ++r) {
        if (pts[r] > c.tfinal * (1 + 1e-9)) continue;
        const auto n = static_cast<std::size_t>(std::llround(pts[r] / g.dt()));
        try {
            T.cells[ci][r] = as_cells(observe(s, c, solver->at_step(std::min(n, g.steps))));
        } catch (const std::exception& e) {
            T.fail(ci, r, width, c.name + " at t=" + std::to_string(pts[r]) + ": " + e.what());
        }
    }
}

std::vector<double> dephasing_row(const Curve& c, double interval, double t) {
    auto cfg = dephasing::at_time(c.density(), interval, t);
    if (c.nbath > 0) {
        cfg.mode = dephasing::Mode::discrete;
        cfg.mode_count = c.nbath;
    }
    const auto d = dephasing::dephasing_exponent(cfg);
    const double free = dephasing::free_exponent(cfg);
    const double coh = std::abs(dephasing::coherence(d, {0.5, 0.0}));
    return {coh, d.divergent ? std::numeric_limits<double>::infinity() : d.value, free, d.divergent ? 1.0 : 0.0};
}

class Pool {
public:
    explicit Pool(unsigned workers) : workers_(workers) {}
    void add(std::function<void()> job) { jobs_.push_back(std::move(job)); }
    void run() {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t j; (j = next++) < jobs_.size();) jobs_[j]();
        };
        const unsigned n = std::max(1u, std::min<unsigned>(workers_, static_cast<unsigned>(jobs_.size())));
        std::vector<std::thread> threads;
        for (unsigned i = 1; i < n; ++i) {
            try {
                threads.emplace_back(worker);
            } catch (const std::system_error&) {
                break;  // fewer threads is fine; the calling thread drains the queue
            }
        }
        worker();
        for (auto& t : threads) t.join();
    }
private:
    unsigned workers_;
    std::vector<std::function<void()>> jobs_;
};

void write_number(std::ostream& os, double v) {
    if (std::isnan(v)) { os << "nan"; return; }
    if (std::isinf(v)) { os << (v > 0 ? "inf" : "-inf"); return; }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v + 0.0);  // no "-0"
    os << buf;
}

} // namespace

RunReport run_scenario(const Scenario& s, std::ostream& csv, unsigned workers) {
    validate(s);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const auto pts = sweep_points(s);
    const auto cols = observable_columns(s);
    const std::size_t width = cols.size();
    const std::size_t nc = s.curves.size();

    Table T;
    T.rows = pts.size();
    T.cells.assign(nc, std::vector<std::vector<Cell>>(pts.size()));
    T.eta.assign(nc, std::vector<double>(pts.size(), nan));

    Pool pool(workers);
    // kernel tables shared by every point of a curve on a fixed grid
    std::vector<std::optional<env::KernelTable>> tables(nc);
    std::vector<std::string> table_errors(nc);

    for (std::size_t ci = 0; ci < nc; ++ci) {
        const Curve& c = s.curves[ci];
        if (s.model == Model::dephasing) {
            for (std::size_t r = 0; r < pts.size(); ++r) {
                pool.add([&, ci, r] {
                    const Curve& cc = s.curves[ci];
                    double interval = cc.pulse_interval, t = cc.tfinal;
                    if (s.sweep == SweepAxis::pulse_interval) interval = pts[r] * std::numbers::pi / cc.uv_cutoff;
                    else if (s.sweep == SweepAxis::time) t = pts[r];
                    try {
                        T.eta[ci][r] = pulses::eta_parameter(cc.uv_cutoff, interval);
                        T.cells[ci][r] = as_cells(dephasing_row(cc, interval, t));
                    } catch (const std::exception& e) {
                        T.fail(ci, r, width, cc.name + ": " + e.what());
                    }
                });
            }
            continue;
        }
        if (s.sweep == SweepAxis::time || s.sweep == SweepAxis::none) {
            if (s.sweep == SweepAxis::none) {
                // a single row at each curve's own final time
                pool.add([&, ci] { run_time_series(s, ci, {s.curves[ci].tfinal}, T, width); });
            } else {
                pool.add([&, ci] { run_time_series(s, ci, pts, T, width); });
            }
            continue;
        }
        // pulse-interval and field sweeps: fixed grid, one solve per point
        const bool constant = s.sweep == SweepAxis::pulse_interval && !c.pulses;
        const std::size_t nrows = constant ? 1 : pts.size();
        pool.add([&, ci, nrows, constant] {
            const Curve& base = s.curves[ci];
            const prop::TimeGrid g{base.tfinal, base.steps};
            try {
                const auto bath = make_bath(base);
                if (!bath.is_silent()) tables[ci] = bath.tabulate(0.5 * g.dt(), 2 * g.steps + 2);
            } catch (const std::exception& e) {
                table_errors[ci] = e.what();
            }
            for (std::size_t r = 0; r < nrows; ++r) {
                Curve c2 = base;
                if (s.sweep == SweepAxis::field_strength) c2.field = pts[r];
                if (s.sweep == SweepAxis::pulse_interval && c2.pulses) {
                    const double want = pts[r] * std::numbers::pi / c2.uv_cutoff;
                    const double m = std::max(1.0, std::round(want / g.dt()));
                    c2.pulse_interval = m * g.dt();
                    T.eta[ci][r] = pulses::eta_parameter(c2.uv_cutoff, c2.pulse_interval);
                }
                if (!table_errors[ci].empty()) {
                    T.fail(ci, r, width, base.name + ": " + table_errors[ci]);
                    continue;
                }
                try {
                    const auto bath = make_bath(c2);
                    std::optional<prop::Solver> solver;
                    if (tables[ci] && c2.field != base.field) {
                        // kernels are linear in the reference mass M/(1+V)
                        env::KernelTable tab = *tables[ci];
                        const double f = (1.0 + base.field) / (1.0 + c2.field);
                        for (auto& v : tab.mu) v *= f;
                        for (auto& v : tab.nu) v *= f;
                        solver.emplace(c2.system(), bath, c2.train(), g, tab);
                    } else if (tables[ci]) solver.emplace(c2.system(), bath, c2.train(), g, *tables[ci]);
                    else solver.emplace(c2.system(), bath, c2.train(), g);
                    T.cells[ci][r] = as_cells(observe(s, c2, solver->final(false)));
                } catch (const std::exception& e) {
                    T.fail(ci, r, width, base.name + " at " + std::to_string(pts[r]) + ": " + e.what());
                }
            }
            if (constant)
                for (std::size_t r = 1; r < pts.size(); ++r) T.cells[ci][r] = T.cells[ci][0];
        });
    }
    pool.run();

    // header
    const char* first = s.sweep == SweepAxis::pulse_interval ? "eta"
                        : s.sweep == SweepAxis::field_strength ? "V"
                                                               : "t";
    csv << first;
    for (const auto& c : s.curves) {
        if (reports_eta(s, c)) csv << ",eta_actual_" << c.name;
        for (const auto& col : cols) csv << "," << col << "_" << c.name;
    }
    csv << "\n";
    for (std::size_t r = 0; r < pts.size(); ++r) {
        write_number(csv, pts[r]);
        for (std::size_t ci = 0; ci < nc; ++ci) {
            if (reports_eta(s, s.curves[ci])) {
                csv << ",";
                write_number(csv, T.eta[ci][r]);
            }
            const auto& row = T.cells[ci][r];
            for (std::size_t k = 0; k < width; ++k) {
                csv << ",";
                if (k < row.size() && row[k]) write_number(csv, *row[k]);
            }
        }
        csv << "\n";
    }

    RunReport rep;
    rep.rows = pts.size();
    rep.failed_points = T.failed;
    rep.messages = std::move(T.messages);
    std::sort(rep.messages.begin(), rep.messages.end());
    return rep;
}

} // namespace qbo::cli
