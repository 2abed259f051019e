#include "anneal/bounds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anneal {

PositiveMatrix::PositiveMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
        throw std::invalid_argument("PositiveMatrix: matrix must be square and non-empty");
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
        for (Eigen::Index j = 0; j < m_.cols(); ++j)
            if (!(m_(i, j) > 0.0)) {
                std::ostringstream msg;
                msg << "PositiveMatrix: entry (" << i << "," << j << ") = " << m_(i, j)
                    << " is not strictly positive";
                throw std::invalid_argument(msg.str());
            }
    // kappa = max over columns k of (column max / column min).
    kappa_ = 1.0;
    for (Eigen::Index k = 0; k < m_.cols(); ++k)
        kappa_ = std::max(kappa_, m_.col(k).maxCoeff() / m_.col(k).minCoeff());
}

HopfBound hopf_bound(const PositiveMatrix& pm) {
    const Matrix& m = pm.matrix();
    const Eigen::Index n = m.rows();
    Vector v = Vector::Ones(n);
    double lambda = 0.0;
    for (int it = 0; it < 100000; ++it) {
        Vector w = m * v;
        const double next = w.norm();
        w /= next;
        // The positive dominant eigenvector is unique; the Rayleigh quotient
        // converges geometrically at rate (kappa-1)/(kappa+1) < 1.
        const double rq = w.dot(m * w) / w.squaredNorm();
        if (std::abs(rq - lambda) <= 1e-14 * std::max(std::abs(rq), 1.0) && it > 2) {
            lambda = rq;
            break;
        }
        lambda = rq;
        v = std::move(w);
    }
    HopfBound hb;
    hb.kappa = pm.kappa();
    hb.lambda0 = lambda;
    hb.bound = (hb.kappa - 1.0) / (hb.kappa + 1.0) * lambda;
    return hb;
}

double default_e_plus(const IsingProblem& problem, double gamma0) {
    return problem.enumerate_extremes().e_max + gamma0 + 1.0;
}

double tfim_gap_lower_bound(const IsingProblem& problem, double gamma, double e_plus,
                            double gamma0, double eps0) {
    const int n = problem.n_sites();
    const Extremes ext = problem.enumerate_extremes();
    if (!(e_plus > ext.e_max + gamma0))
        throw std::invalid_argument("tfim_gap_lower_bound: need E_plus > E_max + Gamma0");
    if (!(gamma > 0.0 && gamma <= gamma0))
        throw std::invalid_argument("tfim_gap_lower_bound: need 0 < Gamma <= Gamma0");
    double factorial = 1.0;
    for (int k = 2; k <= n; ++k) factorial *= k;
    const double denom = n * std::pow(e_plus - ext.e_min + n * gamma0, n);
    return 2.0 * (e_plus - eps0) * factorial * std::pow(gamma, n) / denom;
}

double mti_gap_lower_bound(const IsingProblem& problem, double gamma, double e_plus,
                           double eps0) {
    const Extremes ext = problem.enumerate_extremes();
    if (!(e_plus > ext.e_max + gamma))
        throw std::invalid_argument("mti_gap_lower_bound: need E_plus > E_max + Gamma");
    if (!(gamma > 0.0)) throw std::invalid_argument("mti_gap_lower_bound: need Gamma > 0");
    return 2.0 * gamma * (e_plus - eps0) / (e_plus - ext.e_min + 2.0 * gamma);
}

SaQuantumMap::SaQuantumMap(const IsingProblem& problem, double temperature)
    : problem_(&problem), t_(temperature) {
    if (!(temperature > 0)) throw std::domain_error("SaQuantumMap: temperature must be > 0");
    if (problem.n_sites() > 10)
        throw std::length_error("SaQuantumMap: dense construction capped at N <= 10");
    const int n = problem.n_sites();
    const std::size_t dim = std::size_t{1} << n;
    const double beta = 1.0 / t_;

    p_ = problem.max_local_energy();
    chi_ = std::exp(-beta * p_);

    hq_ = Matrix::Zero(dim, dim);
    for (std::size_t x = 0; x < dim; ++x) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            diag += chi_ * std::exp(beta * problem.local_energy(j, static_cast<SpinConfig>(x)));
            hq_(x ^ (std::size_t{1} << j), x) -= chi_;
        }
        hq_(x, x) += diag;
    }

    psi_.resize(dim);
    for (std::size_t x = 0; x < dim; ++x)
        psi_[x] = std::exp(-0.5 * beta * problem.energy(static_cast<SpinConfig>(x)));
}

double SaQuantumMap::verify_ground_state() const { return (hq_ * psi_).norm() / psi_.norm(); }

double SaQuantumMap::quantum_expectation(const Vector& q_diag) const {
    if (q_diag.size() != psi_.size())
        throw std::invalid_argument("quantum_expectation: dimension mismatch");
    return psi_.cwiseProduct(q_diag).dot(psi_) / psi_.squaredNorm();
}

double SaQuantumMap::thermal_expectation(const Vector& q_diag) const {
    if (q_diag.size() != psi_.size())
        throw std::invalid_argument("thermal_expectation: dimension mismatch");
    const double beta = 1.0 / t_;
    double z = 0.0, acc = 0.0;
    for (Eigen::Index x = 0; x < q_diag.size(); ++x) {
        const double w = std::exp(-beta * problem_->energy(static_cast<SpinConfig>(x)));
        z += w;
        acc += w * q_diag[x];
    }
    return acc / z;
}

SaQuantumMap build_sa_map(const IsingProblem& problem, double temperature) {
    return SaQuantumMap(problem, temperature);
}

SaGapReport sa_gap_and_schedule(const IsingProblem& problem, double temperature, double alpha) {
    const SaQuantumMap map(problem, temperature);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(map.hamiltonian());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("sa_gap_and_schedule: eigensolver failed");
    SaGapReport rep{solver.eigenvalues()[1] - solver.eigenvalues()[0], map.p(),
                    DecayLaw::log_temperature(map.p(), problem.n_sites(), alpha)};
    return rep;
}

}  // namespace anneal
