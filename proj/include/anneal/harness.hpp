#ifndef ANNEAL_HARNESS_HPP
#define ANNEAL_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace anneal {

/// Flat key-value configuration with one level of [section] headers.
/// Order-preserving; serialize/parse round-trips exactly.  Lines starting
/// with '#' are comments; keys may not repeat within a section.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);
    std::string serialize() const;

    bool has(const std::string& section, const std::string& key) const;
    /// Missing keys throw with the full field path "section.key".
    std::string get(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    /// Whitespace-separated value lists.
    std::vector<std::string> get_list(const std::string& section, const std::string& key) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    std::vector<std::string> sections() const;
    std::vector<std::string> keys(const std::string& section) const;

    bool operator==(const Config& other) const;

private:
    struct Section {
        std::string name;
        std::vector<std::pair<std::string, std::string>> entries;
    };
    std::vector<Section> sections_;

    const std::string* find(const std::string& section, const std::string& key) const;
};

/// Ordinary least squares of log(metric) against log(x), restricted to the
/// points whose metric lies in [window_lo, window_hi].  Fewer than 4 points in
/// the window is an error reporting the occupancy.
struct FitResult {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
    int points_used = 0;
};

FitResult fit_slope(const std::vector<double>& x, const std::vector<double>& metric,
                    double window_lo, double window_hi);

/// Fit straight from sweep CSV text: x is taken from `x_column`, the metric
/// from `metric_column` (header names).
FitResult fit_slope_csv(const std::string& csv_text, const std::string& x_column,
                        const std::string& metric_column, double window_lo, double window_hi);

/// Worker count: ANNEAL_WORKERS when set (>= 1), else the physical core count.
int worker_count();

/// Runs fn(0..n-1) on the worker pool.  Work items must be pure functions of
/// their index that write only to their own slot, so the merged result is
/// deterministic and independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

struct RunSummary {
    bool ok = true;
    std::vector<std::string> artifacts;  ///< files written
    std::vector<std::string> lines;      ///< human-readable summary lines
};

/// Named experiment registry.  Each runner consumes a Config (its section
/// conventions are documented in README.md) and writes CSV artifacts, a
/// gnuplot stub, and a JSON summary into out_dir.
class Experiments {
public:
    using Runner = std::function<RunSummary(const Config&, const std::string& out_dir)>;

    static std::vector<std::string> names();
    /// Reads experiment.id from the spec; unknown ids throw with the id named.
    static RunSummary run(const Config& spec, const std::string& out_dir);
};

/// Property suites behind `anneal verify`: "hopf", "ergodicity",
/// "gfmc-stationarity", "sa-map".  Unknown suites throw.
RunSummary run_verify_suite(const std::string& suite, std::uint64_t seed = 20260824);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Minimal gnuplot companion script for a CSV artifact.
std::string gnuplot_stub(const std::string& csv_name, const std::string& x_column,
                         const std::string& y_column, const std::string& title,
                         bool log_log);

}  // namespace anneal

#endif
