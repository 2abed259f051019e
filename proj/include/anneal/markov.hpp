#ifndef ANNEAL_MARKOV_HPP
#define ANNEAL_MARKOV_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "anneal/rng.hpp"
#include "anneal/schedule.hpp"
#include "anneal/spin.hpp"

namespace anneal {

/// Column-stochastic transition matrix: G(y, x) is the probability of the
/// move x -> y, so every column sums to one.  All kernel code in this project
/// uses this orientation; distributions evolve as p' = G p.
class TransitionKernel {
public:
    explicit TransitionKernel(Eigen::MatrixXd g);

    Eigen::Index size() const { return g_.rows(); }
    double operator()(Eigen::Index y, Eigen::Index x) const { return g_(y, x); }
    const Eigen::MatrixXd& matrix() const { return g_; }

private:
    Eigen::MatrixXd g_;
};

/// Coefficient of ergodicity
///   alpha(G) = 1 - min_{x,y} sum_z min(G(z,x), G(z,y))
///            = (1/2) max_{x,y} sum_z |G(z,x) - G(z,y)|.
/// Both forms are evaluated and cross-checked to 1e-12.
double ergodicity_coefficient(const TransitionKernel& g);

/// Symmetric, self-move-free, normalized, irreducible proposal distribution
/// P(y, x) over an enumerable space.
class GenerationRule {
public:
    /// Uniform single-bit-flip proposals on an n_bits hypercube.
    static GenerationRule single_spin_flip(int n_bits);

    /// General rule from explicit neighbor lists with uniform weight
    /// 1/degree; must be symmetric (regular graph) and connected.
    static GenerationRule from_neighbors(std::vector<std::vector<std::uint32_t>> neighbors);

    std::size_t size() const { return neighbors_.size(); }
    const std::vector<std::uint32_t>& neighbors(std::uint32_t x) const {
        return neighbors_[x];
    }
    double probability(std::uint32_t y, std::uint32_t x) const;
    /// Smallest nonzero proposal probability (the constant w).
    double min_probability() const { return w_; }

private:
    explicit GenerationRule(std::vector<std::vector<std::uint32_t>> neighbors);

    std::vector<std::vector<std::uint32_t>> neighbors_;
    double w_ = 0.0;
};

enum class AcceptanceFlavor { HeatBath, Metropolis, Tsallis };

/// Acceptance parameters: Boltzmann flavors use
///   u = exp(-dF0/T0 - dF1/T1),
/// heat-bath g(u) = u/(1+u), Metropolis g(u) = min(1,u).  The Tsallis flavor
/// uses u = exp(-dF0/T0) [1 + (q-1) dF1/T1]^{1/(1-q)} with q > 1 and accepts
/// with min(1, u); when the bracket is non-positive the acceptance
/// probability is defined as 0.
struct AcceptanceParams {
    AcceptanceFlavor flavor = AcceptanceFlavor::HeatBath;
    double tsallis_q = 1.5;
};

double acceptance_probability(double delta_f0, double t0, double delta_f1, double t1,
                              const AcceptanceParams& params);

/// The Suzuki-Trotter classical image of a transverse-field Ising problem:
/// M replica slices of the base problem with periodic inter-slice coupling.
/// A composite state packs the M slices into one word, slice k occupying
/// bits [k*N, (k+1)*N).
///
/// The stationary weight at Monte Carlo time t is
///   q(x; t) ∝ exp(-F0(x)/T0 - F1(x)/T1(t)),
/// with F0(x) = sum_k E(slice_k), T0 = M/beta, F1(x) the number of
/// misaligned adjacent-slice spin pairs (in 0..N*M), and T1 = 1/(2 gamma),
/// gamma(t) = (1/2) log coth(beta Gamma(t) / M).
class PimcSystem {
public:
    PimcSystem(IsingProblem problem, int trotter_m, double beta,
               std::function<double(double)> gamma_of_t);

    const IsingProblem& problem() const { return problem_; }
    int n_sites() const { return problem_.n_sites(); }
    int trotter_m() const { return m_; }
    double beta() const { return beta_; }
    std::size_t dimension() const { return std::size_t{1} << (problem_.n_sites() * m_); }

    double t0() const { return static_cast<double>(m_) / beta_; }
    double t1(double t) const;        ///< from Gamma(t) through gamma(t)
    double gamma_field(double t) const { return gamma_of_t_(t); }

    double f0(std::uint32_t x) const;  ///< sum of slice energies
    double f1(std::uint32_t x) const;  ///< misaligned inter-slice pair count

    /// Slice k of the composite word.
    SpinConfig slice(std::uint32_t x, int k) const;

    /// gamma <-> Gamma conversions at fixed beta, M.
    static double gamma_coupling(double big_gamma, double beta, int m);
    static double field_from_t1(double t1, double beta, int m);

    /// Suzuki-Trotter partition-function estimate
    ///   Z_ST = C^{N M} sum_x exp(-F0/T0 - F1/T1),  C^2 = (1/2) sinh(2 beta Gamma / M),
    /// which converges to Tr e^{-beta H} as M grows.
    double partition_function(double t) const;

private:
    IsingProblem problem_;
    int m_;
    double beta_;
    std::function<double(double)> gamma_of_t_;
    std::uint32_t slice_mask_;
};

/// One PIMC transition kernel at frozen time t: uniform single-spin-flip
/// proposals over all N*M composite bits with the given acceptance rule.
TransitionKernel pimc_kernel(const PimcSystem& system, double t,
                             const AcceptanceParams& params = {});

struct ErgodicityConstants {
    int r = 0;        ///< min over x not in S_m of max_y d(y, x)
    double l0 = 0.0;  ///< max single-move change of F0
    double l1 = 0.0;  ///< max single-move change of F1
    double w = 0.0;   ///< min nonzero proposal probability
    std::size_t n_f1_maxima = 0;  ///< size of S_m (local maxima of F1)
};

/// Exact BFS-based constants of the composite system under a generation rule.
ErgodicityConstants ergodicity_constants(const PimcSystem& system, const GenerationRule& rule);

struct ChainSnapshot {
    double t = 0.0;
    double dist_to_target = 0.0;  ///< total variation to the supplied target
    double pair_distance = 0.0;   ///< L1 distance between the two evolving p's
};

struct ChainResult {
    Eigen::VectorXd p_final;
    Eigen::VectorXd p_alt_final;
    std::vector<ChainSnapshot> trajectory;
};

/// Exact dense evolution of two initial distributions under the
/// inhomogeneous kernels G(t), t = 0..horizon-1 (one unit of t = one kernel
/// application); snapshots every `snapshot_every` steps.
ChainResult run_inhomogeneous_chain(const std::function<TransitionKernel(double)>& kernel_at,
                                    Eigen::VectorXd p0, Eigen::VectorXd p0_alt,
                                    long horizon, long snapshot_every,
                                    const Eigen::VectorXd& target);

/// Single-walker sampling path sharing the same kernels: returns the visit
/// histogram over the final `window` steps.
Eigen::VectorXd sample_chain_histogram(const std::function<TransitionKernel(double)>& kernel_at,
                                       std::uint32_t x0, long horizon, long window, Rng& rng);

struct LowerBoundReport {
    bool neighbors_ok = false;  ///< G(y,x;t) >= w g(1) exp(-L0/T0 - L1/T1(t)) for all pairs
    bool diagonal_ok = false;   ///< same bound for G(x,x;t), x outside S_m
    double min_ratio = 0.0;     ///< min over checked entries of G / bound
    std::string counterexample;
};

/// Checks the transition-probability lower bounds at frozen time t.
LowerBoundReport check_lower_bound_lemma(const PimcSystem& system, double t,
                                         const AcceptanceParams& params = {});

}  // namespace anneal

#endif
