#include "anneal/markov.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace anneal {

TransitionKernel::TransitionKernel(Eigen::MatrixXd g) : g_(std::move(g)) {
    if (g_.rows() != g_.cols() || g_.rows() < 1)
        throw std::invalid_argument("TransitionKernel: matrix must be square");
    for (Eigen::Index x = 0; x < g_.cols(); ++x) {
        double sum = 0.0;
        for (Eigen::Index y = 0; y < g_.rows(); ++y) {
            const double v = g_(y, x);
            if (v < -1e-14 || v > 1.0 + 1e-14)
                throw std::invalid_argument("TransitionKernel: entry outside [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            std::ostringstream msg;
            msg << "TransitionKernel: column " << x << " sums to " << sum;
            throw std::invalid_argument(msg.str());
        }
    }
}

double ergodicity_coefficient(const TransitionKernel& g) {
    const Eigen::MatrixXd& m = g.matrix();
    const Eigen::Index n = m.cols();
    double min_overlap = 1.0;
    double max_half_l1 = 0.0;
    for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index y = x + 1; y < n; ++y) {
            double overlap = 0.0, l1 = 0.0;
            for (Eigen::Index z = 0; z < n; ++z) {
                overlap += std::min(m(z, x), m(z, y));
                l1 += std::abs(m(z, x) - m(z, y));
            }
            min_overlap = std::min(min_overlap, overlap);
            max_half_l1 = std::max(max_half_l1, 0.5 * l1);
        }
    const double a1 = n > 1 ? 1.0 - min_overlap : 0.0;
    const double a2 = n > 1 ? max_half_l1 : 0.0;
    if (std::abs(a1 - a2) > 1e-12)
        throw std::runtime_error("ergodicity_coefficient: the two formulas disagree");
    return a1;
}

GenerationRule::GenerationRule(std::vector<std::vector<std::uint32_t>> neighbors)
    : neighbors_(std::move(neighbors)) {
    const std::size_t n = neighbors_.size();
    if (n < 2) throw std::invalid_argument("GenerationRule: need at least 2 states");
    const std::size_t degree = neighbors_[0].size();
    for (std::size_t x = 0; x < n; ++x) {
        if (neighbors_[x].empty() || neighbors_[x].size() != degree)
            throw std::invalid_argument(
                "GenerationRule: graph must be regular for a symmetric uniform rule");
        for (std::uint32_t y : neighbors_[x]) {
            if (y >= n) throw std::invalid_argument("GenerationRule: neighbor out of range");
            if (y == static_cast<std::uint32_t>(x))
                throw std::invalid_argument("GenerationRule: self-move not allowed");
            const auto& back = neighbors_[y];
            if (std::find(back.begin(), back.end(), static_cast<std::uint32_t>(x)) ==
                back.end())
                throw std::invalid_argument("GenerationRule: adjacency not symmetric");
        }
    }
    // Irreducibility: BFS reachability from state 0.
    std::vector<char> seen(n, 0);
    std::deque<std::uint32_t> queue{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!queue.empty()) {
        const std::uint32_t x = queue.front();
        queue.pop_front();
        for (std::uint32_t y : neighbors_[x])
            if (!seen[y]) {
                seen[y] = 1;
                ++count;
                queue.push_back(y);
            }
    }
    if (count != n) throw std::invalid_argument("GenerationRule: proposal graph not connected");
    w_ = 1.0 / static_cast<double>(degree);
}

GenerationRule GenerationRule::single_spin_flip(int n_bits) {
    if (n_bits < 1 || n_bits > 20)
        throw std::invalid_argument("single_spin_flip: n_bits must be in [1, 20]");
    const std::size_t n = std::size_t{1} << n_bits;
    std::vector<std::vector<std::uint32_t>> nb(n);
    for (std::size_t x = 0; x < n; ++x) {
        nb[x].reserve(n_bits);
        for (int b = 0; b < n_bits; ++b)
            nb[x].push_back(static_cast<std::uint32_t>(x ^ (std::size_t{1} << b)));
    }
    return GenerationRule(std::move(nb));
}

GenerationRule GenerationRule::from_neighbors(
    std::vector<std::vector<std::uint32_t>> neighbors) {
    return GenerationRule(std::move(neighbors));
}

double GenerationRule::probability(std::uint32_t y, std::uint32_t x) const {
    if (x >= neighbors_.size()) throw std::invalid_argument("GenerationRule: state out of range");
    const auto& nb = neighbors_[x];
    return std::find(nb.begin(), nb.end(), y) != nb.end() ? w_ : 0.0;
}

double acceptance_probability(double delta_f0, double t0, double delta_f1, double t1,
                              const AcceptanceParams& params) {
    double u;
    switch (params.flavor) {
        case AcceptanceFlavor::HeatBath:
        case AcceptanceFlavor::Metropolis:
            u = std::exp(-delta_f0 / t0 - delta_f1 / t1);
            break;
        case AcceptanceFlavor::Tsallis: {
            const double q = params.tsallis_q;
            if (!(q > 1.0))
                throw std::invalid_argument("acceptance_probability: Tsallis requires q > 1");
            const double bracket = 1.0 + (q - 1.0) * delta_f1 / t1;
            // The source form is undefined for a non-positive bracket; the
            // project convention is to reject such moves outright.
            if (bracket <= 0.0) return 0.0;
            u = std::exp(-delta_f0 / t0) * std::pow(bracket, 1.0 / (1.0 - q));
            break;
        }
        default: u = 0.0;
    }
    if (params.flavor == AcceptanceFlavor::HeatBath) return u / (1.0 + u);
    return std::min(1.0, u);  // Metropolis rule; also the Tsallis acceptance of its u
}

PimcSystem::PimcSystem(IsingProblem problem, int trotter_m, double beta,
                       std::function<double(double)> gamma_of_t)
    : problem_(std::move(problem)), m_(trotter_m), beta_(beta),
      gamma_of_t_(std::move(gamma_of_t)) {
    if (m_ < 1) throw std::invalid_argument("PimcSystem: Trotter number must be >= 1");
    if (!(beta_ > 0)) throw std::invalid_argument("PimcSystem: beta must be positive");
    if (!gamma_of_t_) throw std::invalid_argument("PimcSystem: null field schedule");
    if (problem_.n_sites() * m_ > 20)
        throw std::length_error("PimcSystem: composite space above the 2^20 cap");
    slice_mask_ = (std::uint32_t{1} << problem_.n_sites()) - 1u;
}

double PimcSystem::gamma_coupling(double big_gamma, double beta, int m) {
    if (!(big_gamma > 0))
        throw std::domain_error("PimcSystem: Gamma = 0 freezes the slices (gamma infinite)");
    return 0.5 * std::log(1.0 / std::tanh(beta * big_gamma / m));
}

double PimcSystem::field_from_t1(double t1, double beta, int m) {
    if (!(t1 > 0)) throw std::domain_error("PimcSystem: T1 must be positive");
    return (m / beta) * std::atanh(std::exp(-1.0 / t1));
}

double PimcSystem::t1(double t) const {
    const double gamma = gamma_coupling(gamma_of_t_(t), beta_, m_);
    return 1.0 / (2.0 * gamma);
}

SpinConfig PimcSystem::slice(std::uint32_t x, int k) const {
    return (x >> (k * problem_.n_sites())) & slice_mask_;
}

double PimcSystem::f0(std::uint32_t x) const {
    double e = 0.0;
    for (int k = 0; k < m_; ++k) e += problem_.energy(slice(x, k));
    return e;
}

double PimcSystem::f1(std::uint32_t x) const {
    int misaligned = 0;
    for (int k = 0; k < m_; ++k)
        misaligned += std::popcount(slice(x, k) ^ slice(x, (k + 1) % m_));
    return static_cast<double>(misaligned);
}

double PimcSystem::partition_function(double t) const {
    const double a = beta_ * gamma_of_t_(t) / m_;
    const double t0v = t0();
    const double t1v = t1(t);
    double z = 0.0;
    for (std::size_t x = 0; x < dimension(); ++x)
        z += std::exp(-f0(static_cast<std::uint32_t>(x)) / t0v -
                      f1(static_cast<std::uint32_t>(x)) / t1v);
    // The per-link transfer-matrix prefactor C e^gamma = cosh(beta Gamma / M)
    // appears once per site per slice.
    return z * std::pow(std::cosh(a), problem_.n_sites() * m_);
}

TransitionKernel pimc_kernel(const PimcSystem& system, double t,
                             const AcceptanceParams& params) {
    const int bits = system.n_sites() * system.trotter_m();
    if (bits > 12) throw std::length_error("pimc_kernel: dense kernel capped at 12 bits");
    const std::size_t dim = system.dimension();
    const double t0 = system.t0();
    const double t1 = system.t1(t);
    const double p = 1.0 / bits;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t x = 0; x < dim; ++x) {
        const double fx0 = system.f0(static_cast<std::uint32_t>(x));
        const double fx1 = system.f1(static_cast<std::uint32_t>(x));
        double leave = 0.0;
        for (int b = 0; b < bits; ++b) {
            const std::size_t y = x ^ (std::size_t{1} << b);
            const double a = acceptance_probability(
                system.f0(static_cast<std::uint32_t>(y)) - fx0, t0,
                system.f1(static_cast<std::uint32_t>(y)) - fx1, t1, params);
            g(y, x) = p * a;
            leave += p * a;
        }
        g(x, x) = 1.0 - leave;
    }
    return TransitionKernel(std::move(g));
}

ErgodicityConstants ergodicity_constants(const PimcSystem& system,
                                         const GenerationRule& rule) {
    const std::size_t dim = system.dimension();
    if (rule.size() != dim)
        throw std::invalid_argument("ergodicity_constants: rule/system size mismatch");
    if (dim > 4096)
        throw std::length_error("ergodicity_constants: all-pairs BFS capped at 4096 states");

    ErgodicityConstants c;
    c.w = rule.min_probability();

    // Max single-move changes of F0, F1 and the F1 local-maxima set.
    std::vector<char> is_max(dim, 1);
    for (std::size_t x = 0; x < dim; ++x) {
        const double fx0 = system.f0(static_cast<std::uint32_t>(x));
        const double fx1 = system.f1(static_cast<std::uint32_t>(x));
        for (std::uint32_t y : rule.neighbors(static_cast<std::uint32_t>(x))) {
            c.l0 = std::max(c.l0, std::abs(system.f0(y) - fx0));
            c.l1 = std::max(c.l1, std::abs(system.f1(y) - fx1));
            if (system.f1(y) > fx1) is_max[x] = 0;
        }
    }
    for (std::size_t x = 0; x < dim; ++x) c.n_f1_maxima += is_max[x];

    // Eccentricities by BFS from every non-maximum state.
    int best = -1;
    for (std::size_t x = 0; x < dim; ++x) {
        if (is_max[x]) continue;
        std::vector<int> dist(dim, -1);
        std::deque<std::uint32_t> queue{static_cast<std::uint32_t>(x)};
        dist[x] = 0;
        int ecc = 0;
        while (!queue.empty()) {
            const std::uint32_t u = queue.front();
            queue.pop_front();
            for (std::uint32_t v : rule.neighbors(u))
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    ecc = std::max(ecc, dist[v]);
                    queue.push_back(v);
                }
        }
        if (best < 0 || ecc < best) best = ecc;
    }
    if (best < 0)
        throw std::runtime_error("ergodicity_constants: every state is an F1 local maximum");
    c.r = best;
    return c;
}

ChainResult run_inhomogeneous_chain(const std::function<TransitionKernel(double)>& kernel_at,
                                    Eigen::VectorXd p0, Eigen::VectorXd p0_alt, long horizon,
                                    long snapshot_every, const Eigen::VectorXd& target) {
    if (snapshot_every < 1) throw std::invalid_argument("run_inhomogeneous_chain: bad stride");
    ChainResult res;
    Eigen::VectorXd p = std::move(p0), q = std::move(p0_alt);
    for (long t = 0; t < horizon; ++t) {
        const TransitionKernel g = kernel_at(static_cast<double>(t));
        p = g.matrix() * p;
        q = g.matrix() * q;
        if ((t + 1) % snapshot_every == 0 || t + 1 == horizon) {
            ChainSnapshot snap;
            snap.t = static_cast<double>(t + 1);
            snap.dist_to_target = 0.5 * (p - target).lpNorm<1>();
            snap.pair_distance = (p - q).lpNorm<1>();
            res.trajectory.push_back(snap);
        }
    }
    res.p_final = std::move(p);
    res.p_alt_final = std::move(q);
    return res;
}

Eigen::VectorXd sample_chain_histogram(
    const std::function<TransitionKernel(double)>& kernel_at, std::uint32_t x0, long horizon,
    long window, Rng& rng) {
    if (window < 1 || window > horizon)
        throw std::invalid_argument("sample_chain_histogram: bad window");
    std::uint32_t x = x0;
    Eigen::VectorXd hist;
    for (long t = 0; t < horizon; ++t) {
        const TransitionKernel g = kernel_at(static_cast<double>(t));
        if (hist.size() == 0) hist = Eigen::VectorXd::Zero(g.size());
        // Sample the next state from column x.
        double u = rng.uniform();
        Eigen::Index next = x;
        for (Eigen::Index y = 0; y < g.size(); ++y) {
            u -= g(y, x);
            if (u <= 0) {
                next = y;
                break;
            }
        }
        x = static_cast<std::uint32_t>(next);
        if (t >= horizon - window) hist[x] += 1.0;
    }
    return hist / hist.sum();
}

LowerBoundReport check_lower_bound_lemma(const PimcSystem& system, double t,
                                         const AcceptanceParams& params) {
    const int bits = system.n_sites() * system.trotter_m();
    const GenerationRule rule = GenerationRule::single_spin_flip(bits);
    const ErgodicityConstants c = ergodicity_constants(system, rule);
    const TransitionKernel g = pimc_kernel(system, t, params);
    const double g_at_one =
        params.flavor == AcceptanceFlavor::Metropolis ? 1.0 : 0.5;  // g(1)
    const double bound =
        c.w * g_at_one * std::exp(-c.l0 / system.t0() - c.l1 / system.t1(t));

    LowerBoundReport rep;
    rep.neighbors_ok = true;
    rep.diagonal_ok = true;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    const std::size_t dim = system.dimension();
    for (std::size_t x = 0; x < dim; ++x) {
        const double fx1 = system.f1(static_cast<std::uint32_t>(x));
        bool is_max = true;
        for (std::uint32_t y : rule.neighbors(static_cast<std::uint32_t>(x))) {
            rep.min_ratio = std::min(rep.min_ratio, g(y, x) / bound);
            if (g(y, x) < bound) {
                rep.neighbors_ok = false;
                std::ostringstream msg;
                msg << "neighbor pair (" << y << "," << x << "): G=" << g(y, x)
                    << " < bound=" << bound;
                rep.counterexample = msg.str();
            }
            if (system.f1(y) > fx1) is_max = false;
        }
        if (!is_max) {
            rep.min_ratio = std::min(rep.min_ratio, g(x, x) / bound);
            if (g(x, x) < bound) {
                rep.diagonal_ok = false;
                std::ostringstream msg;
                msg << "diagonal at " << x << ": G=" << g(x, x) << " < bound=" << bound;
                rep.counterexample = msg.str();
            }
        }
    }
    return rep;
}

}  // namespace anneal
