#ifndef ANNEAL_OPERATORS_HPP
#define ANNEAL_OPERATORS_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anneal/schedule.hpp"
#include "anneal/spin.hpp"

namespace anneal {

using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXd;

/// Structured off-diagonal operator applied without materializing a matrix.
///
/// Kinds and their base operators (strength multiplies the whole operator):
///  - TransverseField:     -sum_i sigma_i^x            (single-bit flips)
///  - TransverseIsing:     -sum_i sigma_i^x  -  sum_(ij) sigma_i^x sigma_j^x
///  - ManyBodyTransverse:  -prod_i (1 + sigma_i^x): every z-basis element -1
///  - DatabaseKinetic:     1 - (1/N) sum_ij |i><j| on an N-item space
class DriverOperator {
public:
    enum class Kind { TransverseField, TransverseIsing, ManyBodyTransverse, DatabaseKinetic };

    static DriverOperator transverse_field(int n_sites);
    static DriverOperator transverse_ising(int n_sites, std::vector<std::pair<int, int>> pairs);
    static DriverOperator many_body_transverse(int n_sites);
    static DriverOperator database_kinetic(int n_items);

    Kind kind() const { return kind_; }
    int n_sites() const { return n_sites_; }
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    std::size_t dimension() const;

    /// out += coeff * (B v) for the base operator B above.
    void apply_add(double coeff, const CVector& v, CVector& out) const;
    void apply_add(double coeff, const Vector& v, Vector& out) const;

    /// Upper bound on the infinity-norm of the base operator (used for RK4
    /// step-size control).
    double norm_bound() const;

private:
    DriverOperator(Kind k, int n, std::vector<std::pair<int, int>> pairs)
        : kind_(k), n_sites_(n), pairs_(std::move(pairs)) {}

    Kind kind_;
    int n_sites_;
    std::vector<std::pair<int, int>> pairs_;
};

/// One additive piece of a Hamiltonian: a diagonal table plus an optional
/// driver scaled by `strength`.
struct OperatorPart {
    Vector diag;  ///< may be zero-length for "no diagonal"
    std::optional<DriverOperator> driver;
    double strength = 1.0;

    std::size_t dimension() const;
    void apply_add(double coeff, const CVector& v, CVector& out) const;
    void apply_add(double coeff, const Vector& v, Vector& out) const;
    double norm_bound() const;
};

/// Ascending instantaneous spectrum with eigenvectors (columns).
struct Spectrum {
    Vector eigenvalues;
    Matrix eigenvectors;

    double gap(int j) const { return eigenvalues[j] - eigenvalues[0]; }
};

/// Time-dependent Hamiltonian along an anneal, in one of two mixes:
///
///  f-form:      H~(s) = f(s) H_pot + (1 - f(s)) H_kin        (s = t/tau)
///  Gamma-form:  H(t)  = H_pot + Gamma(t) * driver
///
/// All models used here are real symmetric in the computational basis.
class AnnealHamiltonian {
public:
    enum class Mix { FForm, GammaForm };

    /// Cap on dense eigensolves (instantaneous_spectrum and friends).
    static constexpr std::size_t dense_cap = 4096;

    static AnnealHamiltonian f_form(OperatorPart pot, OperatorPart kin, SchedulePtr f,
                                    double tau);
    static AnnealHamiltonian gamma_form(OperatorPart pot, OperatorPart driver,
                                        std::function<double(double)> gamma_of_t, double tau);

    // Convenience factories for the standard model families.

    /// f(s) H_Ising + (1-f(s)) (-Gamma sum sigma^x).
    static AnnealHamiltonian tfim(const IsingProblem& problem, double gamma, SchedulePtr f,
                                  double tau);

    /// Like tfim but with an arbitrary driver as the kinetic part.
    static AnnealHamiltonian tfim_driver(const IsingProblem& problem, DriverOperator driver,
                                         double gamma, SchedulePtr f, double tau);

    /// Two-level crossing -(1/2 - f(s)) h sigma^z - alpha sigma^x.
    static AnnealHamiltonian landau_zener(double h, double alpha, SchedulePtr f, double tau);

    /// N-item search: f(s)(1 - |marked><marked|) + (1-f(s))(1 - (1/N) sum |i><j|).
    static AnnealHamiltonian database_search(int n_items, int marked, SchedulePtr f,
                                             double tau);

    /// H_Ising + Gamma(t) * driver with Gamma from a decay law (evaluated at
    /// t = s * tau).
    static AnnealHamiltonian ising_gamma(const IsingProblem& problem, DriverOperator driver,
                                         DecayLaw gamma, double tau);

    Mix mix() const { return mix_; }
    std::size_t dimension() const { return dim_; }
    double tau() const { return tau_; }
    const Schedule& schedule() const;
    const OperatorPart& pot() const { return pot_; }
    const OperatorPart& kin() const { return kin_; }

    /// Coefficients (c_pot, c_kin) such that H(s) = c_pot H_pot + c_kin H_kin.
    std::pair<double, double> coefficients(double s) const;

    /// out = H(s) v; throws on dimension mismatch.
    void apply(double s, const CVector& v, CVector& out) const;
    void apply(double s, const Vector& v, Vector& out) const;

    /// out = (H_pot - H_kin) v, the s-independent factor of every f-form
    /// schedule derivative d^m H~/ds^m = f^(m)(s) (H_pot - H_kin).
    /// Throws std::logic_error for Gamma-form.
    void apply_difference(const Vector& v, Vector& out) const;

    /// Dense symmetric matrix of H(s); dimension must be <= dense_cap.
    Matrix dense(double s) const;

    /// Upper bound on max_s ||H(s)||_inf for step-size control.
    double norm_bound() const;

private:
    AnnealHamiltonian() = default;

    Mix mix_ = Mix::FForm;
    std::size_t dim_ = 0;
    OperatorPart pot_;
    OperatorPart kin_;
    SchedulePtr f_;
    std::function<double(double)> gamma_of_t_;
    double tau_ = 1.0;
};

/// Full dense spectrum of H(s).  Residuals ||H v - eps v|| are verified to
/// 1e-10 * ||H|| per pair; dimension above AnnealHamiltonian::dense_cap is a
/// capacity error.
Spectrum instantaneous_spectrum(const AnnealHamiltonian& h, double s);

/// A_j^(m)(s) = <j(s)| d^m H~/ds^m |0(s)> / Delta_j(s)^(m+1) for the f-form.
/// Throws std::domain_error if the gap Delta_j(s) is numerically degenerate.
double adiabatic_functional(const AnnealHamiltonian& h, double s, int j, int m);

/// The tau-independent excitation-probability coefficient
/// [|A_j^(m)(0)| + |A_j^(m)(1)|]^2 (divide by tau^(2m) for the bound).
/// Requires schedule derivatives 1..m-1 to vanish at both endpoints (checked
/// numerically); `imaginary_time` drops the s=0 term.
double excitation_bound(const AnnealHamiltonian& h, int j, int m, bool imaginary_time = false);

/// CSV dump "s, eps_0, eps_1, ..., gap_1" over an s-grid.
std::string spectrum_csv(const AnnealHamiltonian& h, int n_points, int n_levels);

}  // namespace anneal

#endif
