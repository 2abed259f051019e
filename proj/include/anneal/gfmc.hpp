#ifndef ANNEAL_GFMC_HPP
#define ANNEAL_GFMC_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "anneal/rng.hpp"
#include "anneal/schedule.hpp"
#include "anneal/spin.hpp"

namespace anneal {

enum class GfmcVariant { G1, G2 };

/// The two Green's functions of the weighted-walker imaginary-time scheme for
/// H(t) = E0-diagonal - Gamma(t) sum sigma^x:
///
/// G1 (linear split):  Ghat1(y,x;t) = delta_yx [1 - dt(E0(x) - E_T)]
///                                  + dt Gamma(t) [single flip], 0 otherwise;
///   column sum w(x;t) = 1 - dt[E0(x) - E_T] + N dt Gamma(t).
///
/// G2 (exponential split): Ghat2(y,x;t) = cosh^N(dt Gamma) tanh^delta(dt Gamma)
///   e^{-dt E0(x)}, delta the flip count; column sum w2 = e^{dt N Gamma - dt E0(x)}.
class GfmcModel {
public:
    GfmcModel(IsingProblem problem, std::function<double(double)> gamma_of_t, double dt,
              double e_t, GfmcVariant variant = GfmcVariant::G1);

    /// Construct with the default policies: E_T = E_min (exact at desk scale)
    /// and dt = 0.1 / (E_max - E_min + N Gamma(0)).
    static GfmcModel with_defaults(IsingProblem problem,
                                   std::function<double(double)> gamma_of_t,
                                   GfmcVariant variant = GfmcVariant::G1);

    const IsingProblem& problem() const { return problem_; }
    int n_sites() const { return n_; }
    std::size_t dimension() const { return energies_.size(); }
    double dt() const { return dt_; }
    double e_t() const { return e_t_; }
    double gamma(double t) const { return gamma_of_t_(t); }
    GfmcVariant variant() const { return variant_; }
    double energy(std::uint32_t x) const { return energies_[x]; }
    double e_min() const { return e_min_; }
    double e_max() const { return e_max_; }

    /// Walker weight factor: w (G1) or w2 (G2).
    double weight(std::uint32_t x, double t) const;

    /// Normalized single-step transition distribution out of x at time t.
    /// G1: stay with 1 - N dt Gamma / w, flip one spin with dt Gamma / w each.
    /// G2: every spin flips independently with p = (1 - e^{-2 dt Gamma})/2.
    Eigen::VectorXd transition_column(std::uint32_t x, double t) const;

    /// Sample one move from the transition distribution.
    std::uint32_t sample_move(std::uint32_t x, double t, Rng& rng) const;

    /// Dense unnormalized Green's function Ghat(y,x;t).
    Eigen::MatrixXd ghat_dense(double t) const;

    /// Dense normalized transition kernel (columns of transition_column).
    Eigen::MatrixXd kernel_dense(double t) const;

    /// The stationary distribution of the frozen-t G1 kernel,
    ///   q(x;t) = 1/2^N - dt E0(x) / (2^N [1 + dt E_T + N dt Gamma(t)]).
    /// For G2 the stationary distribution is uniform.
    Eigen::VectorXd stationary_distribution(double t) const;

private:
    IsingProblem problem_;
    std::function<double(double)> gamma_of_t_;
    int n_;
    double dt_;
    double e_t_;
    GfmcVariant variant_;
    std::vector<double> energies_;
    double e_min_ = 0.0, e_max_ = 0.0;
};

struct GfmcRow {
    long step = 0;
    double t = 0.0;
    double gamma = 0.0;
    double mixed_energy = 0.0;     ///< <1|H|psi>/<1|psi> = sum W (E0 - N Gamma) / sum W
    double overlap_exact = 0.0;    ///< overlap with the instantaneous exact ground state
    double weight_variance = 0.0;  ///< population variance of normalized weights
    double ess = 0.0;              ///< effective sample size (sum W)^2 / sum W^2
};

struct GfmcResult {
    std::vector<GfmcRow> rows;
    Eigen::VectorXd psi_estimate;  ///< normalized weighted histogram at the last step
    double final_overlap = 0.0;
    double final_overlap_sigma = 0.0;  ///< jackknife error over walker blocks
    double log_weight_offset = 0.0;    ///< accumulated rescaling of the raw weights
};

struct GfmcOptions {
    long steps = 1000;
    int walkers = 1000;
    std::uint64_t seed = 0;
    long record_every = 10;
    /// Walker time is physical: the schedule argument is t = step * dt.
    bool exact_overlap = true;  ///< compute overlap columns (dense solve, N <= 10)
};

/// Weighted-walker run without branching; same seed means identical
/// trajectories.  Weights are renormalized by a common factor when they grow
/// large, tracked in log_weight_offset.
GfmcResult run_gfmc(const GfmcModel& model, const GfmcOptions& opts);

/// Exact dense recursion psi_{n+1} = Ghat(t_n) psi_n starting from psi_0
/// (the sampling-free oracle for run_gfmc).
Eigen::VectorXd run_gfmc_dense(const GfmcModel& model, Eigen::VectorXd psi0, long steps);

std::string gfmc_csv(const GfmcResult& result);

struct GfmcTheoremReport {
    bool stationary_fixed_point = false;  ///< ||G1 q - q|| <= 1e-12 at sampled times
    bool neighbor_bound_ok = false;  ///< G1(y,x;t) >= dt Gamma / (1 - dt(E_min - E_T) + N dt Gamma)
    bool diagonal_bound_ok = false;  ///< same bound for the diagonal beyond measured t1
    double t1_measured = -1.0;       ///< first sampled t from which the diagonal bound holds
    double weak_ergodicity_distance = 0.0;  ///< final ||p - p'|| under the compliant schedule
    double noncompliant_distance = 0.0;     ///< same horizon, fast schedule (illustration)
    std::string counterexample;
};

/// Exact enumeration checks of the GFMC lemma bounds and finite-horizon
/// ergodicity witnesses (dense evolution of two initial distributions).
GfmcTheoremReport verify_gfmc_theorems(const GfmcModel& model,
                                       const std::vector<double>& sample_times,
                                       long horizon = 20000);

}  // namespace anneal

#endif
