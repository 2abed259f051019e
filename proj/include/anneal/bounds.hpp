#ifndef ANNEAL_BOUNDS_HPP
#define ANNEAL_BOUNDS_HPP

#include <Eigen/Dense>

#include "anneal/operators.hpp"
#include "anneal/schedule.hpp"
#include "anneal/spin.hpp"

namespace anneal {

/// A strictly positive square matrix together with its entry-ratio constant
/// kappa = max_{i,j,k} M(i,k)/M(j,k).
class PositiveMatrix {
public:
    explicit PositiveMatrix(Matrix m);

    const Matrix& matrix() const { return m_; }
    double kappa() const { return kappa_; }
    Eigen::Index size() const { return m_.rows(); }

private:
    Matrix m_;
    double kappa_ = 1.0;
};

struct HopfBound {
    double kappa = 1.0;
    double lambda0 = 0.0;  ///< dominant eigenvalue, from power iteration
    double bound = 0.0;    ///< (kappa-1)/(kappa+1) * lambda0
};

/// Dominant eigenvalue by power iteration plus the subdominant-eigenvalue
/// bound |lambda| <= (kappa-1)/(kappa+1) lambda0.
HopfBound hopf_bound(const PositiveMatrix& m);

/// Gap lower bound for H = H_Ising - Gamma sum sigma^x at field Gamma <= Gamma0:
///   Delta_j >= 2 (E_plus - eps0) N! Gamma^N / (N (E_plus - E_min + N Gamma0)^N).
/// eps0 is the instantaneous ground energy (any upper substitute such as
/// eps0_max keeps the bound valid since eps0 enters as E_plus - eps0 with
/// eps0 <= E_min).  Preconditions: E_plus > E_max + Gamma0, 0 < Gamma <= Gamma0.
double tfim_gap_lower_bound(const IsingProblem& problem, double gamma, double e_plus,
                            double gamma0, double eps0);

/// Gap lower bound for the many-body transverse driver,
///   Delta_j >= 2 Gamma (E_plus - eps0) / (E_plus - E_min + 2 Gamma).
/// This keeps the 2 Gamma term of the entry-ratio denominator that the
/// asymptotic O(Gamma) form drops; with it the bound is exact-arithmetic
/// valid at every Gamma, not only as Gamma -> 0.
double mti_gap_lower_bound(const IsingProblem& problem, double gamma, double e_plus,
                           double eps0);

/// Default offset choice E_plus = E_max + Gamma0 + 1.
double default_e_plus(const IsingProblem& problem, double gamma0);

/// The classical-to-quantum image of simulated annealing at temperature T:
///   H_q(T) = -chi sum_j (sigma_x^j - e^{beta H_j}),  chi = e^{-beta p},
/// whose ground state is psi(T)_x = e^{-beta E(x)/2} with eigenvalue exactly 0.
/// H_j is the sum of the cost terms that involve site j, assigned in full to
/// every site the term touches (so sum_j H_j generally over-counts E).
class SaQuantumMap {
public:
    SaQuantumMap(const IsingProblem& problem, double temperature);

    double temperature() const { return t_; }
    double beta() const { return 1.0 / t_; }
    double p() const { return p_; }      ///< max_j max_x |H_j(x)|
    double chi() const { return chi_; }  ///< e^{-beta p}

    /// Dense H_q(T), dimension 2^N.
    const Matrix& hamiltonian() const { return hq_; }

    /// Unnormalized ground state psi(T)_x = e^{-beta E(x)/2}.
    const Vector& ground_state() const { return psi_; }

    /// ||H_q psi|| / ||psi||; zero up to roundoff by the mapping theorem.
    double verify_ground_state() const;

    /// <psi|Q|psi>/<psi|psi> for a diagonal observable Q; equals the
    /// classical thermal average of Q at temperature T.
    double quantum_expectation(const Vector& q_diag) const;

    /// Classical thermal average sum_x Q(x) e^{-beta E(x)} / Z.
    double thermal_expectation(const Vector& q_diag) const;

private:
    const IsingProblem* problem_;
    double t_;
    double p_;
    double chi_;
    Matrix hq_;
    Vector psi_;
};

SaQuantumMap build_sa_map(const IsingProblem& problem, double temperature);

struct SaGapReport {
    double gap = 0.0;          ///< Delta(T) = eps_1 of H_q(T) (eps_0 = 0)
    double p = 0.0;            ///< measured max_j |H_j|
    DecayLaw schedule;         ///< T(t) = p N / log(alpha t + 1)
};

/// Dense gap of H_q(T) plus the emitted convergence temperature law; alpha
/// has no closed form in the source theorem and stays user-supplied.
SaGapReport sa_gap_and_schedule(const IsingProblem& problem, double temperature,
                                double alpha = 1.0);

}  // namespace anneal

#endif
