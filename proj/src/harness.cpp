#include "anneal/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "anneal/bounds.hpp"
#include "anneal/dynamics.hpp"
#include "anneal/gfmc.hpp"
#include "anneal/markov.hpp"
#include "anneal/operators.hpp"
#include "anneal/rng.hpp"
#include "anneal/schedule.hpp"
#include "anneal/spin.hpp"

namespace anneal {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::string current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            current = trim(t.substr(1, t.size() - 2));
            if (current.empty())
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": empty section name");
            for (const auto& s : cfg.sections_)
                if (s.name == current)
                    throw std::invalid_argument("config: duplicate section [" + current + "]");
            cfg.sections_.push_back({current, {}});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        if (current.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside any [section]");
        if (cfg.find(current, key))
            throw std::invalid_argument("config: duplicate key " + current + "." + key);
        cfg.sections_.back().entries.emplace_back(key, value);
    }
    return cfg;
}

Config Config::load(const std::string& path) { return parse(read_file(path)); }

std::string Config::serialize() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& s : sections_) {
        if (!first) out << "\n";
        first = false;
        out << "[" << s.name << "]\n";
        for (const auto& [k, v] : s.entries) out << k << " = " << v << "\n";
    }
    return out.str();
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
    for (const auto& s : sections_)
        if (s.name == section)
            for (const auto& [k, v] : s.entries)
                if (k == key) return &v;
    return nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string Config::get(const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) throw std::invalid_argument("config: missing field " + section + "." + key);
    return *v;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    const std::string* v = find(section, key);
    return v ? *v : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: field " + section + "." + key +
                                    " is not a number: '" + v + "'");
    }
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_long(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        const long l = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return l;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: field " + section + "." + key +
                                    " is not an integer: '" + v + "'");
    }
}

long Config::get_long(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? get_long(section, key) : fallback;
}

std::vector<std::string> Config::get_list(const std::string& section,
                                          const std::string& key) const {
    return split_ws(get(section, key));
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key) const {
    std::vector<double> out;
    for (const auto& tok : get_list(section, key)) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("config: field " + section + "." + key +
                                        " has non-numeric entry '" + tok + "'");
        }
    }
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    for (auto& s : sections_)
        if (s.name == section) {
            for (auto& [k, v] : s.entries)
                if (k == key) {
                    v = value;
                    return;
                }
            s.entries.emplace_back(key, value);
            return;
        }
    sections_.push_back({section, {{key, value}}});
}

std::vector<std::string> Config::sections() const {
    std::vector<std::string> out;
    for (const auto& s : sections_) out.push_back(s.name);
    return out;
}

std::vector<std::string> Config::keys(const std::string& section) const {
    for (const auto& s : sections_)
        if (s.name == section) {
            std::vector<std::string> out;
            for (const auto& [k, v] : s.entries) out.push_back(k);
            return out;
        }
    return {};
}

bool Config::operator==(const Config& other) const {
    if (sections_.size() != other.sections_.size()) return false;
    for (std::size_t i = 0; i < sections_.size(); ++i)
        if (sections_[i].name != other.sections_[i].name ||
            sections_[i].entries != other.sections_[i].entries)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Slope fits

FitResult fit_slope(const std::vector<double>& x, const std::vector<double>& metric,
                    double window_lo, double window_hi) {
    if (x.size() != metric.size())
        throw std::invalid_argument("fit_slope: x and metric sizes differ");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (metric[i] >= window_lo && metric[i] <= window_hi && x[i] > 0 && metric[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(metric[i]));
        }
    const int n = static_cast<int>(lx.size());
    if (n < 4) {
        std::ostringstream msg;
        msg << "fit_slope: only " << n << " of " << x.size() << " points fall in window ["
            << window_lo << ", " << window_hi << "]; need at least 4";
        throw std::runtime_error(msg.str());
    }
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0) throw std::runtime_error("fit_slope: degenerate x values");
    FitResult r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ssr = 0;
    for (int i = 0; i < n; ++i) {
        const double resid = ly[i] - (r.intercept + r.slope * lx[i]);
        ssr += resid * resid;
    }
    r.stderr_slope = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
    r.points_used = n;
    return r;
}

FitResult fit_slope_csv(const std::string& csv_text, const std::string& x_column,
                        const std::string& metric_column, double window_lo, double window_hi) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("fit_slope_csv: empty input");
    const auto header = split_on(trim(line), ',');
    int xi = -1, yi = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == x_column) xi = static_cast<int>(i);
        if (trim(header[i]) == metric_column) yi = static_cast<int>(i);
    }
    if (xi < 0 || yi < 0)
        throw std::invalid_argument("fit_slope_csv: header lacks column '" +
                                    (xi < 0 ? x_column : metric_column) + "'");
    std::vector<double> xs, ys;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split_on(line, ',');
        if (static_cast<int>(cells.size()) <= std::max(xi, yi)) continue;
        try {
            xs.push_back(std::stod(cells[xi]));
            ys.push_back(std::stod(cells[yi]));
        } catch (const std::exception&) {
            // skip repeated headers / non-numeric rows
        }
    }
    return fit_slope(xs, ys, window_lo, window_hi);
}

// ---------------------------------------------------------------------------
// Worker pool

int worker_count() {
    if (const char* env = std::getenv("ANNEAL_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("ANNEAL_WORKERS must be a positive integer");
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Files

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string gnuplot_stub(const std::string& csv_name, const std::string& x_column,
                         const std::string& y_column, const std::string& title, bool log_log) {
    std::ostringstream out;
    out << "# gnuplot companion for " << csv_name << "\n"
        << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set title '" << title << "'\n"
        << "set xlabel '" << x_column << "'\n"
        << "set ylabel '" << y_column << "'\n";
    if (log_log) out << "set logscale xy\n";
    out << "plot '" << csv_name << "' using '" << x_column << "':'" << y_column
        << "' with linespoints\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Experiment helpers

namespace {

using nlohmann::json;

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0 && hi > lo && points >= 2))
        throw std::invalid_argument("log_grid: need 0 < lo < hi and points >= 2");
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i)
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    return out;
}

/// tau grid for one schedule: explicit "tau_<name>" list, else explicit
/// "tau", else a log grid from tau_min/tau_max/tau_points (with defaults).
std::vector<double> tau_grid_for(const Config& cfg, const std::string& section,
                                 const std::string& schedule, double def_lo, double def_hi,
                                 int def_points) {
    if (cfg.has(section, "tau_" + schedule)) return cfg.get_doubles(section, "tau_" + schedule);
    if (cfg.has(section, "tau")) return cfg.get_doubles(section, "tau");
    return log_grid(cfg.get_double(section, "tau_min", def_lo),
                    cfg.get_double(section, "tau_max", def_hi),
                    static_cast<int>(cfg.get_long(section, "tau_points", def_points)));
}

IsingProblem problem_from(const Config& cfg) {
    if (cfg.has("problem", "file")) return parse_problem(read_file(cfg.get("problem", "file")));
    SpinGlassSpec spec;
    spec.width = static_cast<int>(cfg.get_long("problem", "width", 3));
    spec.height = static_cast<int>(cfg.get_long("problem", "height", 3));
    spec.field = cfg.get_double("problem", "field", 0.1);
    spec.seed = static_cast<std::uint64_t>(cfg.get_long("problem", "seed", 4));
    return generate_spin_glass(spec);
}

int schedule_order(const std::string& name) {
    static const std::map<std::string, int> orders{{"f1", 1}, {"f2", 2}, {"f3", 3}, {"f4", 4},
                                                   {"sq1", 2}, {"sq2", 2}};
    const auto it = orders.find(name);
    return it == orders.end() ? 1 : it->second;
}

struct SummaryWriter {
    std::string experiment;
    long seed = 0;
    json rows = json::array();
    RunSummary summary;

    void metric(const std::string& name, double value, double error = 0.0) {
        rows.push_back({{"experiment", experiment},
                        {"metric", name},
                        {"value", value},
                        {"error", error},
                        {"seed", seed}});
    }

    void note(const std::string& line) { summary.lines.push_back(line); }

    void artifact(const std::string& dir, const std::string& name, const std::string& content) {
        const std::string path = dir + "/" + name;
        write_file(path, content);
        summary.artifacts.push_back(path);
    }

    RunSummary finish(const std::string& dir) {
        json doc;
        doc["schema_version"] = 1;
        doc["experiment"] = experiment;
        doc["rows"] = rows;
        doc["ok"] = summary.ok;
        artifact(dir, experiment + "_summary.json", doc.dump(2) + "\n");
        return summary;
    }
};

std::string fit_line(const std::string& label, const FitResult& f) {
    std::ostringstream out;
    out.precision(4);
    out << label << ": slope " << f.slope << " +/- " << f.stderr_slope << " ("
        << f.points_used << " points)";
    return out.str();
}

// --------------------------- lz_sweep --------------------------------------

/// Everything criterion-relevant about one LZ schedule in one pass: the
/// small-tau exponential regime, and the adiabatic power-law regime sampled
/// with enough tau jitter to reconstruct the oscillation envelope.
struct LzScheduleResult {
    std::string csv_body;
    FitResult fit;
    bool fit_failed = false;
    std::string fit_error;
    double max_small_tau_rel_err = 0.0;  ///< vs p_first where P_ex > 0.1
    double max_p_over_bound = 0.0;       ///< max P_ex / p_second inside the fit window
};

/// The power-law (adiabatic) regime of P_ex lies below the crossover with the
/// nonadiabatic exponential, which for h=2, alpha=0.2 sits at very small
/// probabilities for high-order schedules; the defaults below bracket it per
/// order.  Above ~1e-28 the double-precision integration still tracks the
/// envelope (checked against the closed-form bound).
struct LzDefaults {
    double tau_lo, tau_hi, win_lo, win_hi;
};

LzDefaults lz_defaults_for(int m) {
    switch (m) {
        case 1: return {300, 11000, 1e-10, 3e-7};
        case 2: return {800, 4500, 1e-15, 3e-12};
        case 3: return {1400, 11000, 1e-24, 2e-18};
        default: return {1600, 4400, 3e-27, 1e-23};
    }
}

LzScheduleResult lz_schedule_sweep(const Config& cfg, const std::string& name, double h,
                                   double alpha) {
    const SchedulePtr f = schedule_by_name(name);
    const int m = schedule_order(name);
    const LzDefaults def = lz_defaults_for(m);

    // Small-tau grid for the exponential regime, power-law grid for the fit.
    std::vector<double> small = log_grid(cfg.get_double("lz", "small_tau_min", 0.5),
                                         cfg.get_double("lz", "small_tau_max", 30.0), 10);
    std::vector<double> large = cfg.has("lz", "tau_" + name)
                                    ? cfg.get_doubles("lz", "tau_" + name)
                                    : log_grid(def.tau_lo, def.tau_hi, 8);
    const double win_lo = cfg.get_double("lz", "window_lo_" + name, def.win_lo);
    const double win_hi = cfg.get_double("lz", "window_hi_" + name, def.win_hi);

    const auto make_h = [&](double tau) {
        return AnnealHamiltonian::landau_zener(h, alpha, f, tau);
    };
    // A coarser step than the library default keeps the roundoff floor of the
    // deep P_ex tail (reached near tau^-8) below the fit windows.
    const double dt_control = cfg.get_double("lz", "dt_control", 0.05);
    SweepOptions small_opts;  // no jitter: the exponential regime is smooth
    small_opts.integrator.dt_control = dt_control;
    auto rows = residual_energy_sweep(make_h, name, small, small_opts);
    SweepOptions large_opts;
    large_opts.integrator.dt_control = dt_control;
    // The jitter span only needs to cover one or two phase-oscillation
    // periods (about 6 tau units here); keeping it narrow avoids biasing the
    // envelope against the closed form evaluated at the nominal tau.
    large_opts.envelope_jitter = cfg.get_double("lz", "envelope_jitter", 0.02);
    large_opts.envelope_samples = static_cast<int>(cfg.get_long("lz", "envelope_samples", 12));
    auto large_rows = residual_energy_sweep(make_h, name, large, large_opts);
    rows.insert(rows.end(), large_rows.begin(), large_rows.end());

    LzScheduleResult out;
    std::ostringstream csv;
    csv.precision(15);
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        const LzForms forms = lz_closed_forms(h, alpha, *f, r.tau, m);
        const double p = r.excitation_probs.empty() ? 0.0 : r.excitation_probs[0];
        csv << r.tau << "," << name << "," << p << "," << forms.p_nonadiabatic << ","
            << forms.p_adiabatic_bound << "\n";
        xs.push_back(r.tau);
        ys.push_back(p);
        if (p > 0.1)
            out.max_small_tau_rel_err =
                std::max(out.max_small_tau_rel_err,
                         std::abs(p - forms.p_nonadiabatic) / forms.p_nonadiabatic);
        if (p >= win_lo && p <= win_hi)
            out.max_p_over_bound = std::max(out.max_p_over_bound, p / forms.p_adiabatic_bound);
    }
    out.csv_body = csv.str();
    try {
        out.fit = fit_slope(xs, ys, win_lo, win_hi);
    } catch (const std::exception& e) {
        out.fit_failed = true;
        out.fit_error = e.what();
    }
    return out;
}

RunSummary run_lz_sweep(const Config& cfg, const std::string& out_dir) {
    SummaryWriter sw;
    sw.experiment = "lz_sweep";
    const double h = cfg.get_double("lz", "h", 2.0);
    const double alpha = cfg.get_double("lz", "alpha", 0.2);
    std::vector<std::string> schedules{"f1", "f2", "f3", "f4"};
    if (cfg.has("lz", "schedules")) schedules = cfg.get_list("lz", "schedules");

    std::vector<LzScheduleResult> results(schedules.size());
    parallel_for(schedules.size(), [&](std::size_t i) {
        results[i] = lz_schedule_sweep(cfg, schedules[i], h, alpha);
    });

    std::string all = "tau,schedule,P_ex,p_first,p_second\n";
    for (std::size_t i = 0; i < schedules.size(); ++i) {
        const auto& r = results[i];
        all += r.csv_body;
        if (r.fit_failed) {
            sw.note(schedules[i] + ": " + r.fit_error);
            sw.summary.ok = false;
        } else {
            std::ostringstream line;
            line.precision(4);
            line << fit_line(schedules[i], r.fit) << "; small-tau rel err "
                 << r.max_small_tau_rel_err << "; max P_ex/bound " << r.max_p_over_bound;
            sw.note(line.str());
            sw.metric("slope_" + schedules[i], r.fit.slope, r.fit.stderr_slope);
            sw.metric("small_tau_rel_err_" + schedules[i], r.max_small_tau_rel_err);
            sw.metric("max_p_over_bound_" + schedules[i], r.max_p_over_bound);
        }
    }
    sw.artifact(out_dir, "lz_sweep.csv", all);
    sw.artifact(out_dir, "lz_sweep.gp",
                gnuplot_stub("lz_sweep.csv", "tau", "P_ex", "Landau-Zener sweep", true));
    return sw.finish(out_dir);
}

// ------------------------ residual-energy sweeps ---------------------------

struct NamedSweep {
    std::string schedule;
    EvolveMode mode;
    std::vector<double> taus;
    std::function<AnnealHamiltonian(double)> make_h;
    /// Envelope sampling over [tau, tau(1+jitter)].  A span wider than one
    /// phase-oscillation period biases every row by the same constant factor,
    /// which cancels in log-log slope fits.
    double envelope_jitter = 0.0;
    int envelope_samples = 3;
    /// Per-job fit window; NaN falls back to the experiment-wide window.
    double win_lo = std::numeric_limits<double>::quiet_NaN();
    double win_hi = std::numeric_limits<double>::quiet_NaN();
};

RunSummary run_named_sweeps(const std::string& experiment, const std::vector<NamedSweep>& jobs,
                            double win_lo, double win_hi, double dt_control,
                            const std::string& out_dir,
                            const std::function<void(SummaryWriter&, const std::vector<std::vector<SweepRow>>&)>& extra = {}) {
    SummaryWriter sw;
    sw.experiment = experiment;
    std::vector<std::vector<SweepRow>> results(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        SweepOptions opts;
        opts.mode = jobs[i].mode;
        opts.integrator.dt_control = dt_control;
        opts.envelope_jitter = jobs[i].envelope_jitter;
        opts.envelope_samples = jobs[i].envelope_samples;
        results[i] = residual_energy_sweep(jobs[i].make_h, jobs[i].schedule, jobs[i].taus, opts);
    });

    std::string all;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const std::string csv = sweep_csv(results[i]);
        all += i == 0 ? csv : csv.substr(csv.find('\n') + 1);
        std::vector<double> xs, ys;
        for (const auto& r : results[i]) {
            xs.push_back(r.tau);
            ys.push_back(r.e_res);
        }
        const std::string label =
            jobs[i].schedule + (jobs[i].mode == EvolveMode::ImaginaryTime ? " (IT)" : " (RT)");
        try {
            const double lo = std::isnan(jobs[i].win_lo) ? win_lo : jobs[i].win_lo;
            const double hi = std::isnan(jobs[i].win_hi) ? win_hi : jobs[i].win_hi;
            const FitResult f = fit_slope(xs, ys, lo, hi);
            sw.note(fit_line(label, f));
            sw.metric("slope_" + label, f.slope, f.stderr_slope);
        } catch (const std::exception& e) {
            sw.note(label + ": " + e.what());
            sw.summary.ok = false;
        }
    }
    sw.artifact(out_dir, experiment + ".csv", all);
    sw.artifact(out_dir, experiment + ".gp",
                gnuplot_stub(experiment + ".csv", "tau", "E_res", experiment, true));
    if (extra) extra(sw, results);
    return sw.finish(out_dir);
}

RunSummary run_sg_res_energy(const Config& cfg, const std::string& out_dir) {
    const IsingProblem problem = problem_from(cfg);
    const double gamma = cfg.get_double("anneal", "gamma", 1.0);
    std::vector<std::string> schedules{"f1", "f2", "f3", "f4"};
    if (cfg.has("anneal", "schedules")) schedules = cfg.get_list("anneal", "schedules");
    const double dt_control = cfg.get_double("anneal", "dt_control", 0.05);
    // Default grids start past the nonadiabatic transient of the default
    // seed-4 instance, so every point inside the fit window already follows
    // the asymptotic power law; f3 gets extra points to average out the
    // phase-oscillation scatter of E_res.
    struct Grid {
        double lo, hi;
        int points;
    };
    const std::map<std::string, Grid> def{{"f1", {2500, 18000, 5}},
                                          {"f2", {2800, 7000, 5}},
                                          {"f3", {2400, 5400, 8}},
                                          {"f4", {900, 2100, 4}}};
    std::vector<NamedSweep> jobs;
    for (const auto& name : schedules) {
        const Grid d = def.count(name) ? def.at(name) : Grid{10.0, 200.0, 8};
        NamedSweep job;
        job.schedule = name;
        job.mode = EvolveMode::RealTime;
        job.taus = tau_grid_for(cfg, "anneal", name, d.lo, d.hi, d.points);
        const SchedulePtr f = schedule_by_name(name);
        job.make_h = [problem, gamma, f](double tau) {
            return AnnealHamiltonian::tfim(problem, gamma, f, tau);
        };
        jobs.push_back(std::move(job));
    }
    return run_named_sweeps("sg_res_energy", jobs, cfg.get_double("anneal", "window_lo", 1e-10),
                            cfg.get_double("anneal", "window_hi", 1e-2), dt_control, out_dir);
}

RunSummary run_grover_res_energy(const Config& cfg, const std::string& out_dir) {
    const int n = static_cast<int>(cfg.get_long("grover", "n", 64));
    const int marked = static_cast<int>(cfg.get_long("grover", "marked", 0));
    const int m_max = static_cast<int>(cfg.get_long("grover", "m_max", 3));
    // Grids start past the nonadiabatic transient of each order; the fit
    // windows track where the tau^-2m asymptote lives for N=64.  E_res
    // oscillates with tau, so rows sample the envelope over a span of at
    // least one oscillation period (about 35 tau units here).
    struct Grid {
        double lo, hi, win_lo, win_hi;
    };
    const std::map<int, Grid> def{{1, {200, 20000, 1e-10, 1e-2}},
                                  {2, {90, 1200, 1e-9, 1e-3}},
                                  {3, {300, 4000, 1e-18, 1e-7}}};
    std::vector<NamedSweep> jobs;
    for (int m = 1; m <= m_max; ++m) {
        const std::string name = "grover_opt_m:" + std::to_string(n) + ":" + std::to_string(m);
        const Grid d = def.count(m) ? def.at(m) : Grid{30.0, 300.0, 1e-10, 1e-2};
        NamedSweep job;
        job.schedule = name;
        job.mode = EvolveMode::RealTime;
        job.taus = tau_grid_for(cfg, "grover", "m" + std::to_string(m), d.lo, d.hi, 10);
        job.envelope_jitter = cfg.get_double("grover", "envelope_jitter", 0.12);
        job.envelope_samples =
            static_cast<int>(cfg.get_long("grover", "envelope_samples", 10));
        job.win_lo = cfg.get_double("grover", "window_lo_m" + std::to_string(m), d.win_lo);
        job.win_hi = cfg.get_double("grover", "window_hi_m" + std::to_string(m), d.win_hi);
        const SchedulePtr f = schedule_by_name(name);
        job.make_h = [n, marked, f](double tau) {
            return AnnealHamiltonian::database_search(n, marked, f, tau);
        };
        jobs.push_back(std::move(job));
    }
    return run_named_sweeps(
        "grover_res_energy", jobs, cfg.get_double("grover", "window_lo", 1e-10),
        cfg.get_double("grover", "window_hi", 1e-2),
        cfg.get_double("grover", "dt_control", 0.05), out_dir,
        [n, marked](SummaryWriter& sw, const std::vector<std::vector<SweepRow>>&) {
            // Constant-adiabaticity check of the bare optimal path: with
            // Delta_1(f)^2 = 1 - 4(1-1/N) f(1-f), the ratio f'/(N Delta^3)
            // is 1 at every s.
            const SchedulePtr f = grover_optimal(n);
            double worst = 0.0;
            for (int i = 0; i <= 200; ++i) {
                const double s = static_cast<double>(i) / 200.0;
                const double fv = f->value(s);
                const double d2 = 1.0 - 4.0 * (1.0 - 1.0 / n) * fv * (1.0 - fv);
                const double ratio = f->derivative(s, 1) / (n * std::pow(d2, 1.5));
                worst = std::max(worst, std::abs(ratio - 1.0));
            }
            sw.metric("ode_residual", worst);
            const AnnealHamiltonian h = AnnealHamiltonian::database_search(
                n, marked, grover_optimal(n), 1.0);
            const double gap_min = instantaneous_spectrum(h, 0.5).gap(1);
            sw.metric("gap_at_half", gap_min);
            std::ostringstream line;
            line.precision(6);
            line << "optimal-path ODE residual " << worst << ", gap at s=1/2 " << gap_min;
            sw.note(line.str());
        });
}

RunSummary run_it_vs_rt(const Config& cfg, const std::string& out_dir) {
    const IsingProblem problem = problem_from(cfg);
    const double gamma = cfg.get_double("anneal", "gamma", 1.0);
    // This comparison needs tau up to ~4e4 before the sq2 real-time error
    // settles onto its tau^-2 asymptote; a coarser step than the library
    // default keeps that reachable (E_res at these taus agrees with the
    // half-step answer to better than 1e-4 relative).
    const double dt_control = cfg.get_double("anneal", "dt_control", 0.1);
    std::vector<std::string> schedules{"sq1", "sq2"};
    if (cfg.has("anneal", "schedules")) schedules = cfg.get_list("anneal", "schedules");
    // Default grids sit past each branch's transient: sq2 in real time
    // crosses over from an early tau^-4 decay to the boundary-dominated
    // tau^-2 law only around tau ~ 1.5e4, while its imaginary-time tau^-4
    // asymptote (and both sq1 branches) are clean far earlier.  The largest
    // tau keeps E_res above the 1e-10 fit floor.
    const auto grid_default = [](const std::string& name, EvolveMode mode) -> std::vector<double> {
        if (name == "sq2" && mode == EvolveMode::RealTime)
            return {17000, 22500, 29500, 38000};
        if (name == "sq2") return {2500, 4000, 6300, 10000};
        if (name == "sq1") return {5000, 8500, 14000, 24000};
        return {15, 40, 110, 400};
    };
    std::vector<NamedSweep> jobs;
    for (const auto& name : schedules)
        for (const EvolveMode mode : {EvolveMode::RealTime, EvolveMode::ImaginaryTime}) {
            NamedSweep job;
            job.schedule = name;
            job.mode = mode;
            const std::string mode_key =
                name + (mode == EvolveMode::ImaginaryTime ? "_it" : "_rt");
            if (cfg.has("anneal", "tau_" + mode_key))
                job.taus = cfg.get_doubles("anneal", "tau_" + mode_key);
            else if (cfg.has("anneal", "tau_" + name) || cfg.has("anneal", "tau"))
                job.taus = tau_grid_for(cfg, "anneal", name, 15.0, 400.0, 8);
            else
                job.taus = grid_default(name, mode);
            const SchedulePtr f = schedule_by_name(name);
            job.make_h = [problem, gamma, f](double tau) {
                return AnnealHamiltonian::tfim(problem, gamma, f, tau);
            };
            jobs.push_back(std::move(job));
        }
    return run_named_sweeps(
        "it_vs_rt", jobs, cfg.get_double("anneal", "window_lo", 1e-10),
        cfg.get_double("anneal", "window_hi", 1e-2), dt_control, out_dir,
        [&](SummaryWriter& sw, const std::vector<std::vector<SweepRow>>& results) {
            // IT should never lose to RT at matched tau (reported, not
            // asserted).  The RT and IT grids of one schedule may differ, so
            // only rows sharing a tau are compared.
            double worst_ratio = 0.0;
            for (std::size_t i = 0; i + 1 < results.size(); i += 2)
                for (const SweepRow& rt : results[i])
                    for (const SweepRow& it : results[i + 1])
                        if (std::abs(it.tau - rt.tau) <= 1e-9 * rt.tau &&
                            rt.e_res > 1e-14)
                            worst_ratio = std::max(worst_ratio, it.e_res / rt.e_res);
            sw.metric("max_it_over_rt", worst_ratio);
            std::ostringstream line;
            line.precision(4);
            line << "max E_res(IT)/E_res(RT) over common tau: " << worst_ratio;
            sw.note(line.str());
        });
}

// ------------------------- pimc_convergence --------------------------------

IsingProblem two_site_ferromagnet() { return IsingProblem(2, {}, {{0, 1, 1.0}}); }

RunSummary run_pimc_convergence(const Config& cfg, const std::string& out_dir) {
    SummaryWriter sw;
    sw.experiment = "pimc_convergence";
    IsingProblem problem = cfg.has("problem", "file") || cfg.has("problem", "width")
                               ? problem_from(cfg)
                               : two_site_ferromagnet();
    const int m = static_cast<int>(cfg.get_long("pimc", "trotter_m", 2));
    const double beta = cfg.get_double("pimc", "beta", 4.0);
    const long horizon = cfg.get_long("pimc", "horizon", 1000000);
    const long snapshot_every = cfg.get_long("pimc", "snapshot_every", horizon / 100);

    // Ergodicity constants under single-composite-bit flips; the field
    // schedule follows the log law for T1 with R*L1 in the convention where
    // one flip changes the slice-coupling exponent F1 by up to 2 per
    // neighbouring slice pair.
    const GenerationRule rule = GenerationRule::single_spin_flip(problem.n_sites() * m);
    {
        PimcSystem probe(problem, m, beta, [](double) { return 1.0; });
        const ErgodicityConstants consts = ergodicity_constants(probe, rule);
        const double rl1 = cfg.get_double("pimc", "rl1", consts.r * 2.0 * consts.l1);
        const DecayLaw gamma_law =
            DecayLaw::pimc_corollary_gamma(m, beta, rl1);
        PimcSystem system(problem, m, beta, [gamma_law](double t) { return gamma_law.value(t); });

        std::ostringstream consts_line;
        consts_line << "constants: R=" << consts.r << " L0=" << consts.l0
                    << " L1=" << consts.l1 << " w=" << consts.w << " RL1(used)=" << rl1;
        sw.note(consts_line.str());

        const std::size_t dim = system.dimension();
        // Target: the thermal distribution over slice-aligned composite
        // states, the T1 -> 0 limit of the stationary weights.
        Eigen::VectorXd target = Eigen::VectorXd::Zero(dim);
        for (std::size_t x = 0; x < dim; ++x)
            if (system.f1(static_cast<std::uint32_t>(x)) == 0.0)
                target[x] = std::exp(-system.f0(static_cast<std::uint32_t>(x)) / system.t0());
        target /= target.sum();

        Eigen::VectorXd p0 = Eigen::VectorXd::Zero(dim), p1 = Eigen::VectorXd::Zero(dim);
        p0[0] = 1.0;
        p1[dim - 1] = 1.0;
        const ChainResult chain = run_inhomogeneous_chain(
            [&](double t) { return pimc_kernel(system, t); }, p0, p1, horizon, snapshot_every,
            target);

        std::ostringstream csv;
        csv << "t,tv_to_target,pair_distance\n";
        csv.precision(15);
        for (const auto& snap : chain.trajectory)
            csv << snap.t << "," << snap.dist_to_target << "," << snap.pair_distance << "\n";
        sw.artifact(out_dir, "pimc_convergence.csv", csv.str());
        sw.artifact(out_dir, "pimc_convergence.gp",
                    gnuplot_stub("pimc_convergence.csv", "t", "tv_to_target",
                                 "PIMC chain convergence", true));

        const ChainSnapshot last = chain.trajectory.back();
        sw.metric("final_tv_to_target", last.dist_to_target);
        sw.metric("final_pair_distance", last.pair_distance);
        std::ostringstream line;
        line.precision(4);
        line << "final TV to thermal target " << last.dist_to_target << ", pair distance "
             << last.pair_distance;
        sw.note(line.str());
    }
    return sw.finish(out_dir);
}

// ------------------------- gfmc_convergence --------------------------------

IsingProblem square_ferromagnet_2x2() {
    return IsingProblem(4, {}, {{0, 1, 1.0}, {2, 3, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}});
}

RunSummary run_gfmc_convergence(const Config& cfg, const std::string& out_dir) {
    SummaryWriter sw;
    sw.experiment = "gfmc_convergence";
    IsingProblem problem = cfg.has("problem", "file") || cfg.has("problem", "width")
                               ? problem_from(cfg)
                               : square_ferromagnet_2x2();
    // b = 2 keeps the walkers mixing fast enough that the weight variance of
    // the plain (branching-free) ensemble stays usable over the horizon.
    const double b = cfg.get_double("gfmc", "b", 2.0);
    const int n = problem.n_sites();
    const DecayLaw law = DecayLaw::gfmc_power(b, 1.0 / n);
    const GfmcModel model = GfmcModel::with_defaults(
        problem, [law](double t) { return law.value(t); });
    GfmcOptions opts;
    opts.steps = cfg.get_long("gfmc", "steps", 300);
    opts.walkers = static_cast<int>(cfg.get_long("gfmc", "walkers", 10000));
    opts.seed = static_cast<std::uint64_t>(cfg.get_long("gfmc", "seed", 1));
    opts.record_every = cfg.get_long("gfmc", "record_every", std::max<long>(1, opts.steps / 80));
    const GfmcResult res = run_gfmc(model, opts);
    sw.artifact(out_dir, "gfmc_convergence.csv", gfmc_csv(res));
    sw.artifact(out_dir, "gfmc_convergence.gp",
                gnuplot_stub("gfmc_convergence.csv", "t", "overlap_exact",
                             "GFMC ground-state overlap", false));
    sw.metric("final_overlap", res.final_overlap, res.final_overlap_sigma);
    sw.metric("dt", model.dt());
    std::ostringstream line;
    line.precision(6);
    line << "final overlap " << res.final_overlap << " +/- " << res.final_overlap_sigma
         << " (dt=" << model.dt() << ", steps=" << opts.steps << ", walkers=" << opts.walkers
         << ")";
    sw.note(line.str());
    return sw.finish(out_dir);
}

// --------------------------- bounds_suite ----------------------------------

IsingProblem random_problem(int n, Rng& rng, bool with_fields = true) {
    std::vector<FieldTerm> fields;
    std::vector<PairTerm> pairs;
    if (with_fields)
        for (int i = 0; i < n; ++i) fields.push_back({i, rng.uniform(-1.0, 1.0)});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j, rng.uniform(-1.0, 1.0)});
    return IsingProblem(n, std::move(fields), std::move(pairs));
}

RunSummary run_bounds_suite(const Config& cfg, const std::string& out_dir) {
    SummaryWriter sw;
    sw.experiment = "bounds_suite";
    const long seed = cfg.get_long("bounds", "seed", 5);
    const int instances = static_cast<int>(cfg.get_long("bounds", "instances", 20));
    const double gamma0 = cfg.get_double("bounds", "gamma0", 1.0);
    sw.seed = seed;
    Rng rng(static_cast<std::uint64_t>(seed), 0);
    std::ostringstream csv;
    csv << "instance,n,gamma,gap_tfim,bound_tfim,gap_mti,bound_mti\n";
    csv.precision(15);
    int violations = 0;
    double min_margin_tfim = 1e300, min_margin_mti = 1e300;
    for (int inst = 0; inst < instances; ++inst) {
        const int n = 2 + static_cast<int>(rng.integer(3));
        const IsingProblem problem = random_problem(n, rng);
        const double e_plus = default_e_plus(problem, gamma0);
        Vector diag = Eigen::Map<const Vector>(problem.energy_table().data(),
                                               std::int64_t{1} << n);
        for (int gi = 1; gi <= 8; ++gi) {
            const double gamma = gamma0 * gi / 8.0;
            const auto spectrum_with = [&](DriverOperator driver) {
                OperatorPart pot{diag, std::nullopt, 1.0};
                OperatorPart kin{Vector(), std::move(driver), 1.0};
                const AnnealHamiltonian h = AnnealHamiltonian::gamma_form(
                    std::move(pot), std::move(kin), [gamma](double) { return gamma; }, 1.0);
                return instantaneous_spectrum(h, 0.5);
            };
            const Spectrum sp_tfim = spectrum_with(DriverOperator::transverse_field(n));
            const Spectrum sp_mti = spectrum_with(DriverOperator::many_body_transverse(n));
            const double bound_tfim = tfim_gap_lower_bound(problem, gamma, e_plus, gamma0,
                                                           sp_tfim.eigenvalues[0]);
            const double bound_mti =
                mti_gap_lower_bound(problem, gamma, e_plus, sp_mti.eigenvalues[0]);
            const double gap_tfim = sp_tfim.gap(1);
            const double gap_mti = sp_mti.gap(1);
            csv << inst << "," << n << "," << gamma << "," << gap_tfim << "," << bound_tfim
                << "," << gap_mti << "," << bound_mti << "\n";
            if (gap_tfim < bound_tfim || gap_mti < bound_mti) ++violations;
            min_margin_tfim = std::min(min_margin_tfim, gap_tfim / bound_tfim);
            min_margin_mti = std::min(min_margin_mti, gap_mti / bound_mti);
        }
    }
    sw.artifact(out_dir, "bounds_suite.csv", csv.str());
    sw.metric("violations", violations);
    sw.metric("min_gap_over_bound_tfim", min_margin_tfim);
    sw.metric("min_gap_over_bound_mti", min_margin_mti);
    std::ostringstream line;
    line.precision(4);
    line << violations << " violations; min gap/bound: tfim " << min_margin_tfim << ", mti "
         << min_margin_mti;
    sw.note(line.str());
    sw.summary.ok = violations == 0;
    return sw.finish(out_dir);
}

}  // namespace

// ---------------------------------------------------------------------------
// Registry

std::vector<std::string> Experiments::names() {
    return {"lz_sweep",         "sg_res_energy",   "grover_res_energy", "it_vs_rt",
            "pimc_convergence", "gfmc_convergence", "bounds_suite"};
}

RunSummary Experiments::run(const Config& spec, const std::string& out_dir) {
    const std::string id = spec.get("experiment", "id");
    static const std::map<std::string, Runner> registry{
        {"lz_sweep", run_lz_sweep},
        {"sg_res_energy", run_sg_res_energy},
        {"grover_res_energy", run_grover_res_energy},
        {"it_vs_rt", run_it_vs_rt},
        {"pimc_convergence", run_pimc_convergence},
        {"gfmc_convergence", run_gfmc_convergence},
        {"bounds_suite", run_bounds_suite}};
    const auto it = registry.find(id);
    if (it == registry.end())
        throw std::invalid_argument("unknown experiment id '" + id + "' (field experiment.id)");
    // Schedules must resolve before any work starts.
    for (const auto& section : spec.sections())
        if (spec.has(section, "schedules"))
            for (const auto& name : spec.get_list(section, "schedules")) schedule_by_name(name);
    return it->second(spec, out_dir);
}

// ---------------------------------------------------------------------------
// Verify suites

namespace {

RunSummary verify_hopf(std::uint64_t seed) {
    RunSummary rs;
    Rng rng(seed, 0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int n = 2 + static_cast<int>(rng.integer(7));
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(0.1, 10.0);
        const PositiveMatrix pm(m);
        const HopfBound hb = hopf_bound(pm);
        Eigen::EigenSolver<Matrix> solver(m);
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(solver.eigenvalues()[i]);
            if (std::abs(mag - hb.lambda0) < 1e-8 * hb.lambda0) continue;  // dominant
            if (mag > hb.bound + 1e-10) {
                rs.ok = false;
                rs.lines.push_back("violation: |lambda|=" + std::to_string(mag) + " > bound " +
                                   std::to_string(hb.bound));
            }
            worst = std::max(worst, mag / hb.bound);
        }
    }
    // Tightness: [[kappa,1],[1,kappa]] has sub-dominant eigenvalue kappa-1 and
    // bound ((kappa-1)/(kappa+1)) (kappa+1) = kappa-1 exactly.
    const double kappa = 3.0;
    Matrix t(2, 2);
    t << kappa, 1.0, 1.0, kappa;
    const HopfBound hb = hopf_bound(PositiveMatrix(t));
    const double tight_err = std::abs(hb.bound - (kappa - 1.0));
    if (tight_err > 1e-12) {
        rs.ok = false;
        rs.lines.push_back("tight 2x2 case off by " + std::to_string(tight_err));
    }
    std::ostringstream line;
    line.precision(4);
    line << "hopf: 100 random matrices, worst |lambda|/bound = " << worst
         << ", tight-case error " << tight_err;
    rs.lines.push_back(line.str());
    return rs;
}

Matrix random_stochastic(int n, Rng& rng) {
    Matrix g(n, n);
    for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            g(i, j) = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
            sum += g(i, j);
        }
        if (sum == 0.0) {
            g(static_cast<int>(rng.integer(n)), j) = 1.0;
            sum = 1.0;
        }
        g.col(j) /= sum;
    }
    return g;
}

RunSummary verify_ergodicity(std::uint64_t seed) {
    RunSummary rs;
    Rng rng(seed, 1);
    int checked = 0;
    for (int k = 0; k < 200; ++k) {
        const int n = 2 + static_cast<int>(rng.integer(7));
        const TransitionKernel g(random_stochastic(n, rng));
        const TransitionKernel h(random_stochastic(n, rng));
        const double ag = ergodicity_coefficient(g);
        const double ah = ergodicity_coefficient(h);
        const TransitionKernel gh(g.matrix() * h.matrix());
        const double agh = ergodicity_coefficient(gh);
        if (ag < -1e-12 || ag > 1.0 + 1e-12 || ah < -1e-12 || ah > 1.0 + 1e-12) {
            rs.ok = false;
            rs.lines.push_back("alpha out of [0,1]");
        }
        if (agh > ag * ah + 1e-12) {
            rs.ok = false;
            rs.lines.push_back("submultiplicativity violated: " + std::to_string(agh) + " > " +
                               std::to_string(ag * ah));
        }
        // Contraction on zero-sum vectors: ||G z||_1 <= alpha(G) ||z||_1.
        for (int rep = 0; rep < 3; ++rep) {
            Vector z(n);
            for (int i = 0; i < n; ++i) z[i] = rng.uniform(-1.0, 1.0);
            z.array() -= z.mean();
            if ((g.matrix() * z).lpNorm<1>() > ag * z.lpNorm<1>() + 1e-12) {
                rs.ok = false;
                rs.lines.push_back("zero-sum contraction violated");
            }
        }
        ++checked;
    }
    rs.lines.push_back("ergodicity: " + std::to_string(checked) +
                       " random kernel pairs checked" + (rs.ok ? ", no violations" : ""));
    return rs;
}

RunSummary verify_gfmc_stationarity(std::uint64_t seed) {
    RunSummary rs;
    Rng rng(seed, 2);
    double worst_fp = 0.0, worst_cs = 0.0, worst_uniform = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const IsingProblem problem = random_problem(n, rng);
        const DecayLaw law = DecayLaw::gfmc_power(1.0, 1.0 / n);
        const auto gamma_fn = [law](double t) { return law.value(t); };
        const GfmcModel g1 = GfmcModel::with_defaults(problem, gamma_fn, GfmcVariant::G1);
        for (double t : {0.0, 1.0, 10.0}) {
            const Eigen::VectorXd q = g1.stationary_distribution(t);
            worst_fp = std::max(worst_fp, (g1.kernel_dense(t) * q - q).lpNorm<1>());
        }
        const GfmcModel g2 = GfmcModel::with_defaults(problem, gamma_fn, GfmcVariant::G2);
        for (double t : {0.0, 1.0, 10.0}) {
            const Eigen::MatrixXd ghat = g2.ghat_dense(t);
            for (std::size_t x = 0; x < g2.dimension(); ++x)
                worst_cs = std::max(worst_cs,
                                    std::abs(ghat.col(x).sum() /
                                                 g2.weight(static_cast<std::uint32_t>(x), t) -
                                             1.0));
            const Eigen::VectorXd u =
                Eigen::VectorXd::Constant(g2.dimension(), 1.0 / g2.dimension());
            worst_uniform =
                std::max(worst_uniform, (g2.kernel_dense(t) * u - u).lpNorm<1>());
        }
    }
    if (worst_fp > 1e-12 || worst_cs > 1e-12 || worst_uniform > 1e-12) rs.ok = false;
    std::ostringstream line;
    line.precision(3);
    line << "gfmc-stationarity: fixed-point residual " << worst_fp << ", column-sum error "
         << worst_cs << ", uniform-stationarity residual " << worst_uniform;
    rs.lines.push_back(line.str());
    return rs;
}

RunSummary verify_sa_map(std::uint64_t seed) {
    RunSummary rs;
    Rng rng(seed, 3);
    double worst_ground = 0.0, worst_expect = 0.0;
    for (int k = 0; k < 10; ++k) {
        const int n = 4 + static_cast<int>(rng.integer(5));
        const IsingProblem problem = random_problem(n, rng);
        for (double temp : {0.5, 1.0, 2.0}) {
            const SaQuantumMap map = build_sa_map(problem, temp);
            worst_ground = std::max(worst_ground, map.verify_ground_state());
            for (int rep = 0; rep < 3; ++rep) {
                Vector q(std::int64_t{1} << n);
                for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = rng.uniform(-1.0, 1.0);
                worst_expect = std::max(worst_expect, std::abs(map.quantum_expectation(q) -
                                                               map.thermal_expectation(q)));
            }
        }
    }
    if (worst_ground > 1e-10 || worst_expect > 1e-10) rs.ok = false;
    std::ostringstream line;
    line.precision(3);
    line << "sa-map: worst ground-state residual " << worst_ground
         << ", worst thermal/quantum expectation gap " << worst_expect;
    rs.lines.push_back(line.str());
    return rs;
}

}  // namespace

RunSummary run_verify_suite(const std::string& suite, std::uint64_t seed) {
    if (suite == "hopf") return verify_hopf(seed);
    if (suite == "ergodicity") return verify_ergodicity(seed);
    if (suite == "gfmc-stationarity") return verify_gfmc_stationarity(seed);
    if (suite == "sa-map") return verify_sa_map(seed);
    throw std::invalid_argument(
        "unknown verify suite '" + suite +
        "' (known: hopf, ergodicity, gfmc-stationarity, sa-map)");
}

}  // namespace anneal
