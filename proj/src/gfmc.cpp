#include "anneal/gfmc.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anneal {

GfmcModel::GfmcModel(IsingProblem problem, std::function<double(double)> gamma_of_t, double dt,
                     double e_t, GfmcVariant variant)
    : problem_(std::move(problem)), gamma_of_t_(std::move(gamma_of_t)),
      n_(problem_.n_sites()), dt_(dt), e_t_(e_t), variant_(variant) {
    if (!gamma_of_t_) throw std::invalid_argument("GfmcModel: null field schedule");
    if (!(dt_ > 0)) throw std::invalid_argument("GfmcModel: dt must be positive");
    energies_ = problem_.energy_table();
    e_min_ = e_max_ = energies_[0];
    for (double e : energies_) {
        e_min_ = std::min(e_min_, e);
        e_max_ = std::max(e_max_, e);
    }
    if (variant_ == GfmcVariant::G1 && 1.0 - dt_ * (e_max_ - e_t_) < 0.0) {
        std::ostringstream msg;
        msg << "GfmcModel: negative diagonal 1 - dt(E0 - E_T) at E0=E_max=" << e_max_
            << "; reduce dt below " << 1.0 / (e_max_ - e_t_) << " or raise E_T";
        throw std::invalid_argument(msg.str());
    }
}

GfmcModel GfmcModel::with_defaults(IsingProblem problem,
                                   std::function<double(double)> gamma_of_t,
                                   GfmcVariant variant) {
    const Extremes ext = problem.enumerate_extremes();
    const double g0 = gamma_of_t(0.0);
    const double dt = 0.1 / (ext.e_max - ext.e_min + problem.n_sites() * g0);
    return GfmcModel(std::move(problem), std::move(gamma_of_t), dt, ext.e_min, variant);
}

double GfmcModel::weight(std::uint32_t x, double t) const {
    const double gamma = gamma_of_t_(t);
    if (variant_ == GfmcVariant::G1)
        return 1.0 - dt_ * (energies_[x] - e_t_) + n_ * dt_ * gamma;
    return std::exp(dt_ * n_ * gamma - dt_ * energies_[x]);
}

Eigen::VectorXd GfmcModel::transition_column(std::uint32_t x, double t) const {
    const std::size_t dim = dimension();
    Eigen::VectorXd col = Eigen::VectorXd::Zero(dim);
    const double gamma = gamma_of_t_(t);
    if (variant_ == GfmcVariant::G1) {
        const double w = weight(x, t);
        const double flip = dt_ * gamma / w;
        for (int b = 0; b < n_; ++b) col[x ^ (std::size_t{1} << b)] = flip;
        col[x] = (1.0 - dt_ * (energies_[x] - e_t_)) / w;
    } else {
        const double p = 0.5 * (1.0 - std::exp(-2.0 * dt_ * gamma));
        for (std::size_t y = 0; y < dim; ++y) {
            const int delta = std::popcount(static_cast<std::uint32_t>(y) ^ x);
            col[y] = std::pow(p, delta) * std::pow(1.0 - p, n_ - delta);
        }
    }
    return col;
}

std::uint32_t GfmcModel::sample_move(std::uint32_t x, double t, Rng& rng) const {
    const double gamma = gamma_of_t_(t);
    if (variant_ == GfmcVariant::G1) {
        const double w = weight(x, t);
        const double flip_total = n_ * dt_ * gamma / w;
        const double u = rng.uniform();
        if (u >= flip_total) return x;  // stay
        const int b = static_cast<int>(u / (flip_total / n_));
        return x ^ (std::uint32_t{1} << std::min(b, n_ - 1));
    }
    const double p = 0.5 * (1.0 - std::exp(-2.0 * dt_ * gamma));
    std::uint32_t y = x;
    for (int b = 0; b < n_; ++b)
        if (rng.uniform() < p) y ^= std::uint32_t{1} << b;
    return y;
}

Eigen::MatrixXd GfmcModel::ghat_dense(double t) const {
    const std::size_t dim = dimension();
    Eigen::MatrixXd m(dim, dim);
    for (std::size_t x = 0; x < dim; ++x)
        m.col(x) = transition_column(static_cast<std::uint32_t>(x), t) *
                   weight(static_cast<std::uint32_t>(x), t);
    return m;
}

Eigen::MatrixXd GfmcModel::kernel_dense(double t) const {
    const std::size_t dim = dimension();
    Eigen::MatrixXd m(dim, dim);
    for (std::size_t x = 0; x < dim; ++x)
        m.col(x) = transition_column(static_cast<std::uint32_t>(x), t);
    return m;
}

Eigen::VectorXd GfmcModel::stationary_distribution(double t) const {
    const std::size_t dim = dimension();
    Eigen::VectorXd q(dim);
    if (variant_ == GfmcVariant::G2) {
        q.setConstant(1.0 / static_cast<double>(dim));
        return q;
    }
    const double gamma = gamma_of_t_(t);
    const double denom =
        static_cast<double>(dim) * (1.0 + dt_ * e_t_ + n_ * dt_ * gamma);
    for (std::size_t x = 0; x < dim; ++x)
        q[x] = 1.0 / static_cast<double>(dim) - dt_ * energies_[x] / denom;
    return q;
}

namespace {

/// Instantaneous ground state of H(t) = diag(E0) - Gamma(t) sum sigma^x,
/// sign-fixed non-negative.
Eigen::VectorXd exact_ground_state(const GfmcModel& model, double t) {
    const std::size_t dim = model.dimension();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    const double gamma = model.gamma(t);
    for (std::size_t x = 0; x < dim; ++x) {
        h(x, x) = model.energy(static_cast<std::uint32_t>(x));
        for (int b = 0; b < model.n_sites(); ++b) h(x ^ (std::size_t{1} << b), x) -= gamma;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    Eigen::VectorXd g = solver.eigenvectors().col(0);
    if (g.sum() < 0) g = -g;
    return g;
}

double overlap_with(const Eigen::VectorXd& psi_hat, const Eigen::VectorXd& ground) {
    const double norm = psi_hat.norm();
    if (norm == 0) return 0.0;
    return ground.dot(psi_hat) / norm;
}

}  // namespace

GfmcResult run_gfmc(const GfmcModel& model, const GfmcOptions& opts) {
    if (opts.walkers < 1 || opts.steps < 1)
        throw std::invalid_argument("run_gfmc: need at least one walker and one step");
    const std::size_t dim = model.dimension();
    Rng rng(opts.seed, /*stream=*/1);

    // Walkers start uniformly distributed (psi_0 = uniform superposition).
    std::vector<std::uint32_t> xs(opts.walkers);
    std::vector<double> ws(opts.walkers, 1.0);
    for (auto& x : xs) x = static_cast<std::uint32_t>(rng.integer(dim));

    GfmcResult res;
    double log_offset = 0.0;

    auto record = [&](long step) {
        const double t = static_cast<double>(step) * model.dt();
        GfmcRow row;
        row.step = step;
        row.t = t;
        row.gamma = model.gamma(t);
        double sw = 0.0, sw2 = 0.0, se = 0.0;
        Eigen::VectorXd hist = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < opts.walkers; ++i) {
            sw += ws[i];
            sw2 += ws[i] * ws[i];
            se += ws[i] * model.energy(xs[i]);
            hist[xs[i]] += ws[i];
        }
        // Mixed estimator with the uniform trial state: every column of H
        // contributes its off-diagonal sum -N Gamma on top of E0.
        row.mixed_energy = se / sw - model.n_sites() * row.gamma;
        const double mean_w = sw / opts.walkers;
        double var = 0.0;
        for (double w : ws) var += (w / mean_w - 1.0) * (w / mean_w - 1.0);
        row.weight_variance = var / opts.walkers;
        row.ess = sw * sw / sw2;
        if (opts.exact_overlap)
            row.overlap_exact = overlap_with(hist, exact_ground_state(model, t));
        res.rows.push_back(row);
        return hist;
    };

    record(0);
    for (long step = 0; step < opts.steps; ++step) {
        const double t = static_cast<double>(step) * model.dt();
        double wmax = 0.0;
        for (int i = 0; i < opts.walkers; ++i) {
            ws[i] *= model.weight(xs[i], t);
            xs[i] = model.sample_move(xs[i], t, rng);
            wmax = std::max(wmax, ws[i]);
        }
        if (wmax > 1e100 || (wmax > 0 && wmax < 1e-100)) {
            for (auto& w : ws) w /= wmax;
            log_offset += std::log(wmax);
        }
        if ((step + 1) % opts.record_every == 0 || step + 1 == opts.steps) record(step + 1);
    }

    // Final weighted histogram and block-resampled overlap error.
    const double t_final = static_cast<double>(opts.steps) * model.dt();
    Eigen::VectorXd hist = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < opts.walkers; ++i) hist[xs[i]] += ws[i];
    res.psi_estimate = hist / hist.sum();
    res.log_weight_offset = log_offset;
    if (opts.exact_overlap) {
        const Eigen::VectorXd ground = exact_ground_state(model, t_final);
        res.final_overlap = overlap_with(hist, ground);
        const int blocks = std::min(10, opts.walkers);
        std::vector<double> block_overlap;
        for (int b = 0; b < blocks; ++b) {
            Eigen::VectorXd bh = Eigen::VectorXd::Zero(dim);
            for (int i = b; i < opts.walkers; i += blocks) bh[xs[i]] += ws[i];
            if (bh.sum() > 0) block_overlap.push_back(overlap_with(bh, ground));
        }
        double mean = 0.0;
        for (double o : block_overlap) mean += o;
        mean /= block_overlap.size();
        double var = 0.0;
        for (double o : block_overlap) var += (o - mean) * (o - mean);
        var /= std::max<std::size_t>(1, block_overlap.size() - 1);
        res.final_overlap_sigma = std::sqrt(var / block_overlap.size());
    }
    return res;
}

Eigen::VectorXd run_gfmc_dense(const GfmcModel& model, Eigen::VectorXd psi0, long steps) {
    if (static_cast<std::size_t>(psi0.size()) != model.dimension())
        throw std::invalid_argument("run_gfmc_dense: dimension mismatch");
    Eigen::VectorXd psi = std::move(psi0);
    for (long k = 0; k < steps; ++k)
        psi = model.ghat_dense(static_cast<double>(k) * model.dt()) * psi;
    return psi;
}

std::string gfmc_csv(const GfmcResult& result) {
    std::ostringstream out;
    out << "step,t,Gamma,mixed_energy,overlap_exact,weight_variance,ess\n";
    out.precision(15);
    for (const auto& r : result.rows)
        out << r.step << "," << r.t << "," << r.gamma << "," << r.mixed_energy << ","
            << r.overlap_exact << "," << r.weight_variance << "," << r.ess << "\n";
    return out.str();
}

GfmcTheoremReport verify_gfmc_theorems(const GfmcModel& model,
                                       const std::vector<double>& sample_times, long horizon) {
    if (model.n_sites() > 10)
        throw std::length_error("verify_gfmc_theorems: enumeration capped at N <= 10");
    GfmcTheoremReport rep;
    rep.stationary_fixed_point = true;
    rep.neighbor_bound_ok = true;

    const std::size_t dim = model.dimension();
    for (double t : sample_times) {
        const Eigen::MatrixXd k = model.kernel_dense(t);
        if (model.variant() == GfmcVariant::G1) {
            const Eigen::VectorXd q = model.stationary_distribution(t);
            if ((k * q - q).lpNorm<1>() > 1e-12) {
                rep.stationary_fixed_point = false;
                rep.counterexample = "stationary distribution not fixed at t=" + std::to_string(t);
            }
            const double gamma = model.gamma(t);
            const double bound =
                model.dt() * gamma /
                (1.0 - model.dt() * (model.e_min() - model.e_t()) +
                 model.n_sites() * model.dt() * gamma);
            for (std::size_t x = 0; x < dim; ++x)
                for (int b = 0; b < model.n_sites(); ++b)
                    if (k(x ^ (std::size_t{1} << b), x) < bound - 1e-15) {
                        rep.neighbor_bound_ok = false;
                        rep.counterexample =
                            "neighbor bound violated at t=" + std::to_string(t);
                    }
            bool diag_ok = true;
            for (std::size_t x = 0; x < dim; ++x)
                if (k(x, x) < bound - 1e-15) diag_ok = false;
            if (diag_ok && rep.t1_measured < 0) rep.t1_measured = t;
            if (!diag_ok) rep.t1_measured = -1.0;  // must hold from t1 onward
        }
    }
    rep.diagonal_bound_ok = rep.t1_measured >= 0;

    // Weak-ergodicity witness: two initial distributions under the compliant
    // schedule, versus a fast non-compliant cut (illustration only).
    Eigen::VectorXd p = Eigen::VectorXd::Zero(dim), q = Eigen::VectorXd::Zero(dim);
    p[0] = 1.0;
    q[dim - 1] = 1.0;
    Eigen::VectorXd pf = p, qf = q;
    for (long step = 0; step < horizon; ++step) {
        const double t = static_cast<double>(step) * model.dt();
        const Eigen::MatrixXd k = model.kernel_dense(t);
        p = k * p;
        q = k * q;
    }
    rep.weak_ergodicity_distance = (p - q).lpNorm<1>();

    const double g0 = model.gamma(0.0);
    GfmcModel fast(model.problem(),
                   [g0](double t) { return g0 * std::exp(-t) / ((t + 1.0) * (t + 1.0)); },
                   model.dt(), model.e_t(), model.variant());
    for (long step = 0; step < horizon; ++step) {
        const double t = static_cast<double>(step) * model.dt();
        const Eigen::MatrixXd k = fast.kernel_dense(t);
        pf = k * pf;
        qf = k * qf;
    }
    rep.noncompliant_distance = (pf - qf).lpNorm<1>();
    return rep;
}

}  // namespace anneal
