#include "anneal/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anneal {

// ---------------------------------------------------------------------------
// DriverOperator

DriverOperator DriverOperator::transverse_field(int n_sites) {
    if (n_sites < 1 || n_sites > 20)
        throw std::invalid_argument("transverse_field: n_sites must be in [1, 20]");
    return DriverOperator(Kind::TransverseField, n_sites, {});
}

DriverOperator DriverOperator::transverse_ising(int n_sites,
                                                std::vector<std::pair<int, int>> pairs) {
    if (n_sites < 1 || n_sites > 20)
        throw std::invalid_argument("transverse_ising: n_sites must be in [1, 20]");
    for (const auto& [i, j] : pairs)
        if (i < 0 || j < 0 || i >= n_sites || j >= n_sites || i == j)
            throw std::invalid_argument("transverse_ising: bad pair");
    return DriverOperator(Kind::TransverseIsing, n_sites, std::move(pairs));
}

DriverOperator DriverOperator::many_body_transverse(int n_sites) {
    if (n_sites < 1 || n_sites > 20)
        throw std::invalid_argument("many_body_transverse: n_sites must be in [1, 20]");
    return DriverOperator(Kind::ManyBodyTransverse, n_sites, {});
}

DriverOperator DriverOperator::database_kinetic(int n_items) {
    if (n_items < 2) throw std::invalid_argument("database_kinetic: need N >= 2 items");
    return DriverOperator(Kind::DatabaseKinetic, n_items, {});
}

std::size_t DriverOperator::dimension() const {
    if (kind_ == Kind::DatabaseKinetic) return static_cast<std::size_t>(n_sites_);
    return std::size_t{1} << n_sites_;
}

namespace {

template <typename Vec>
void driver_apply(const DriverOperator& d, double coeff, const Vec& v, Vec& out) {
    const std::size_t dim = d.dimension();
    if (static_cast<std::size_t>(v.size()) != dim ||
        static_cast<std::size_t>(out.size()) != dim)
        throw std::invalid_argument("DriverOperator::apply_add: dimension mismatch");
    switch (d.kind()) {
        case DriverOperator::Kind::TransverseField:
            for (std::size_t x = 0; x < dim; ++x) {
                typename Vec::Scalar acc = v[x ^ 1u];
                for (int i = 1; i < d.n_sites(); ++i) acc += v[x ^ (std::size_t{1} << i)];
                out[x] -= coeff * acc;
            }
            break;
        case DriverOperator::Kind::TransverseIsing:
            for (std::size_t x = 0; x < dim; ++x) {
                typename Vec::Scalar acc{};
                for (int i = 0; i < d.n_sites(); ++i) acc += v[x ^ (std::size_t{1} << i)];
                for (const auto& [i, j] : d.pairs())
                    acc += v[x ^ ((std::size_t{1} << i) | (std::size_t{1} << j))];
                out[x] -= coeff * acc;
            }
            break;
        case DriverOperator::Kind::ManyBodyTransverse: {
            auto tot = v[0];
            for (std::size_t x = 1; x < dim; ++x) tot += v[x];
            for (std::size_t x = 0; x < dim; ++x) out[x] -= coeff * tot;
            break;
        }
        case DriverOperator::Kind::DatabaseKinetic: {
            auto tot = v[0];
            for (std::size_t x = 1; x < dim; ++x) tot += v[x];
            tot /= static_cast<double>(dim);
            for (std::size_t x = 0; x < dim; ++x) out[x] += coeff * (v[x] - tot);
            break;
        }
    }
}

}  // namespace

void DriverOperator::apply_add(double coeff, const CVector& v, CVector& out) const {
    driver_apply(*this, coeff, v, out);
}

void DriverOperator::apply_add(double coeff, const Vector& v, Vector& out) const {
    driver_apply(*this, coeff, v, out);
}

double DriverOperator::norm_bound() const {
    switch (kind_) {
        case Kind::TransverseField: return static_cast<double>(n_sites_);
        case Kind::TransverseIsing:
            return static_cast<double>(n_sites_) + static_cast<double>(pairs_.size());
        case Kind::ManyBodyTransverse: return static_cast<double>(dimension());
        case Kind::DatabaseKinetic: return 2.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// OperatorPart

std::size_t OperatorPart::dimension() const {
    if (driver) return driver->dimension();
    return static_cast<std::size_t>(diag.size());
}

namespace {

template <typename Vec>
void part_apply(const OperatorPart& p, double coeff, const Vec& v, Vec& out) {
    if (p.diag.size() > 0) {
        if (v.size() != p.diag.size())
            throw std::invalid_argument("OperatorPart::apply_add: dimension mismatch");
        for (Eigen::Index x = 0; x < v.size(); ++x) out[x] += coeff * p.diag[x] * v[x];
    }
    if (p.driver) p.driver->apply_add(coeff * p.strength, v, out);
}

}  // namespace

void OperatorPart::apply_add(double coeff, const CVector& v, CVector& out) const {
    part_apply(*this, coeff, v, out);
}

void OperatorPart::apply_add(double coeff, const Vector& v, Vector& out) const {
    part_apply(*this, coeff, v, out);
}

double OperatorPart::norm_bound() const {
    double b = 0.0;
    if (diag.size() > 0) b += diag.cwiseAbs().maxCoeff();
    if (driver) b += std::abs(strength) * driver->norm_bound();
    return b;
}

// ---------------------------------------------------------------------------
// AnnealHamiltonian

AnnealHamiltonian AnnealHamiltonian::f_form(OperatorPart pot, OperatorPart kin, SchedulePtr f,
                                            double tau) {
    if (!f) throw std::invalid_argument("AnnealHamiltonian: null schedule");
    if (tau <= 0) throw std::invalid_argument("AnnealHamiltonian: tau must be positive");
    AnnealHamiltonian h;
    h.mix_ = Mix::FForm;
    h.dim_ = pot.dimension() ? pot.dimension() : kin.dimension();
    if (kin.dimension() && kin.dimension() != h.dim_)
        throw std::invalid_argument("AnnealHamiltonian: pot/kin dimension mismatch");
    h.pot_ = std::move(pot);
    h.kin_ = std::move(kin);
    h.f_ = std::move(f);
    h.tau_ = tau;
    return h;
}

AnnealHamiltonian AnnealHamiltonian::gamma_form(OperatorPart pot, OperatorPart driver,
                                                std::function<double(double)> gamma_of_t,
                                                double tau) {
    if (!gamma_of_t) throw std::invalid_argument("AnnealHamiltonian: null gamma law");
    if (tau <= 0) throw std::invalid_argument("AnnealHamiltonian: tau must be positive");
    AnnealHamiltonian h;
    h.mix_ = Mix::GammaForm;
    h.dim_ = pot.dimension() ? pot.dimension() : driver.dimension();
    if (driver.dimension() && driver.dimension() != h.dim_)
        throw std::invalid_argument("AnnealHamiltonian: pot/driver dimension mismatch");
    h.pot_ = std::move(pot);
    h.kin_ = std::move(driver);
    h.gamma_of_t_ = std::move(gamma_of_t);
    h.tau_ = tau;
    return h;
}

AnnealHamiltonian AnnealHamiltonian::tfim(const IsingProblem& problem, double gamma,
                                          SchedulePtr f, double tau) {
    return tfim_driver(problem, DriverOperator::transverse_field(problem.n_sites()), gamma,
                       std::move(f), tau);
}

AnnealHamiltonian AnnealHamiltonian::tfim_driver(const IsingProblem& problem,
                                                 DriverOperator driver, double gamma,
                                                 SchedulePtr f, double tau) {
    const std::vector<double> table = problem.energy_table();
    OperatorPart pot{Eigen::Map<const Vector>(table.data(),
                                              static_cast<Eigen::Index>(table.size())),
                     std::nullopt, 1.0};
    OperatorPart kin{Vector(), std::move(driver), gamma};
    return f_form(std::move(pot), std::move(kin), std::move(f), tau);
}

AnnealHamiltonian AnnealHamiltonian::landau_zener(double h, double alpha, SchedulePtr f,
                                                  double tau) {
    // -(1/2 - f) h sigma^z - alpha sigma^x
    //   = f * [ +(h/2) sigma^z - alpha sigma^x ] + (1-f) * [ -(h/2) sigma^z - alpha sigma^x ].
    // Basis: index 0 = spin up (sigma^z = +1).
    Vector dpot(2), dkin(2);
    dpot << h / 2.0, -h / 2.0;
    dkin << -h / 2.0, h / 2.0;
    OperatorPart pot{dpot, DriverOperator::transverse_field(1), alpha};
    OperatorPart kin{dkin, DriverOperator::transverse_field(1), alpha};
    return f_form(std::move(pot), std::move(kin), std::move(f), tau);
}

AnnealHamiltonian AnnealHamiltonian::database_search(int n_items, int marked, SchedulePtr f,
                                                     double tau) {
    if (marked < 0 || marked >= n_items)
        throw std::invalid_argument("database_search: marked item out of range");
    Vector dpot = Vector::Ones(n_items);
    dpot[marked] = 0.0;
    OperatorPart pot{dpot, std::nullopt, 1.0};
    OperatorPart kin{Vector(), DriverOperator::database_kinetic(n_items), 1.0};
    return f_form(std::move(pot), std::move(kin), std::move(f), tau);
}

AnnealHamiltonian AnnealHamiltonian::ising_gamma(const IsingProblem& problem,
                                                 DriverOperator driver, DecayLaw gamma,
                                                 double tau) {
    const std::vector<double> table = problem.energy_table();
    OperatorPart pot{Eigen::Map<const Vector>(table.data(),
                                              static_cast<Eigen::Index>(table.size())),
                     std::nullopt, 1.0};
    OperatorPart drv{Vector(), std::move(driver), 1.0};
    auto law = [g = std::move(gamma)](double t) { return g.value(t); };
    return gamma_form(std::move(pot), std::move(drv), std::move(law), tau);
}

const Schedule& AnnealHamiltonian::schedule() const {
    if (!f_) throw std::logic_error("AnnealHamiltonian: Gamma-form has no path schedule");
    return *f_;
}

std::pair<double, double> AnnealHamiltonian::coefficients(double s) const {
    if (mix_ == Mix::FForm) {
        const double f = f_->value(s);
        return {f, 1.0 - f};
    }
    return {1.0, gamma_of_t_(s * tau_)};
}

namespace {

template <typename Vec>
void ham_apply(const AnnealHamiltonian& h, double s, const Vec& v, Vec& out) {
    if (static_cast<std::size_t>(v.size()) != h.dimension())
        throw std::invalid_argument("AnnealHamiltonian::apply: dimension mismatch");
    out.resize(v.size());
    out.setZero();
    const auto [cp, ck] = h.coefficients(s);
    h.pot().apply_add(cp, v, out);
    h.kin().apply_add(ck, v, out);
}

}  // namespace

void AnnealHamiltonian::apply(double s, const CVector& v, CVector& out) const {
    ham_apply(*this, s, v, out);
}

void AnnealHamiltonian::apply(double s, const Vector& v, Vector& out) const {
    ham_apply(*this, s, v, out);
}

void AnnealHamiltonian::apply_difference(const Vector& v, Vector& out) const {
    if (mix_ != Mix::FForm)
        throw std::logic_error("apply_difference: only defined for the f-form mix");
    out.resize(v.size());
    out.setZero();
    pot_.apply_add(1.0, v, out);
    kin_.apply_add(-1.0, v, out);
}

Matrix AnnealHamiltonian::dense(double s) const {
    if (dim_ > dense_cap)
        throw std::length_error("AnnealHamiltonian::dense: dimension above dense cap");
    Matrix m(dim_, dim_);
    Vector e = Vector::Zero(dim_), col(dim_);
    for (std::size_t x = 0; x < dim_; ++x) {
        e[x] = 1.0;
        apply(s, e, col);
        m.col(x) = col;
        e[x] = 0.0;
    }
    return m;
}

double AnnealHamiltonian::norm_bound() const {
    if (mix_ == Mix::FForm) {
        // Coefficients lie in [0,1] for monotone path schedules.
        return pot_.norm_bound() + kin_.norm_bound();
    }
    // Gamma(t) is monotone non-increasing, so the t=0 value dominates.
    return pot_.norm_bound() + gamma_of_t_(0.0) * kin_.norm_bound();
}

// ---------------------------------------------------------------------------
// Spectra and adiabatic functionals

Spectrum instantaneous_spectrum(const AnnealHamiltonian& h, double s) {
    if (h.dimension() > AnnealHamiltonian::dense_cap)
        throw std::length_error(
            "instantaneous_spectrum: dimension above the dense-eigensolve cap");
    const Matrix m = h.dense(s);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("instantaneous_spectrum: eigensolver failed");
    Spectrum sp{solver.eigenvalues(), solver.eigenvectors()};
    // Residual audit per eigenpair.
    const double scale = m.cwiseAbs().maxCoeff() * static_cast<double>(h.dimension());
    for (Eigen::Index j = 0; j < sp.eigenvalues.size(); ++j) {
        const double res =
            (m * sp.eigenvectors.col(j) - sp.eigenvalues[j] * sp.eigenvectors.col(j)).norm();
        if (res > 1e-10 * std::max(scale, 1.0))
            throw std::runtime_error("instantaneous_spectrum: residual above tolerance");
    }
    return sp;
}

double adiabatic_functional(const AnnealHamiltonian& h, double s, int j, int m) {
    if (j < 1 || static_cast<std::size_t>(j) >= h.dimension())
        throw std::invalid_argument("adiabatic_functional: excited index out of range");
    if (m < 1 || m > Schedule::max_derivative_order)
        throw std::invalid_argument("adiabatic_functional: derivative order out of range");
    const Spectrum sp = instantaneous_spectrum(h, s);
    const double gap = sp.gap(j);
    const double scale = std::max(sp.eigenvalues.cwiseAbs().maxCoeff(), 1.0);
    if (gap <= 1e-12 * scale) {
        std::ostringstream msg;
        msg << "adiabatic_functional: degenerate gap Delta_" << j << " at s=" << s;
        throw std::domain_error(msg.str());
    }
    Vector diff(h.dimension());
    h.apply_difference(sp.eigenvectors.col(0), diff);
    const double elem = sp.eigenvectors.col(j).dot(diff);
    return h.schedule().derivative(s, m) * elem / std::pow(gap, m + 1);
}

double excitation_bound(const AnnealHamiltonian& h, int j, int m, bool imaginary_time) {
    for (int k = 1; k < m; ++k) {
        for (double endpoint : {0.0, 1.0}) {
            if (std::abs(h.schedule().derivative(endpoint, k)) > 1e-9) {
                std::ostringstream msg;
                msg << "excitation_bound: schedule derivative of order " << k
                    << " does not vanish at s=" << endpoint;
                throw std::invalid_argument(msg.str());
            }
        }
    }
    const double a1 = std::abs(adiabatic_functional(h, 1.0, j, m));
    if (imaginary_time) return a1 * a1;
    const double a0 = std::abs(adiabatic_functional(h, 0.0, j, m));
    return (a0 + a1) * (a0 + a1);
}

std::string spectrum_csv(const AnnealHamiltonian& h, int n_points, int n_levels) {
    if (n_points < 2) throw std::invalid_argument("spectrum_csv: need at least 2 points");
    n_levels = std::min<int>(n_levels, static_cast<int>(h.dimension()));
    std::ostringstream out;
    out << "s";
    for (int j = 0; j < n_levels; ++j) out << ",eps_" << j;
    out << ",gap_1\n";
    out.precision(15);
    for (int k = 0; k < n_points; ++k) {
        const double s = static_cast<double>(k) / (n_points - 1);
        const Spectrum sp = instantaneous_spectrum(h, s);
        out << s;
        for (int j = 0; j < n_levels; ++j) out << "," << sp.eigenvalues[j];
        out << "," << sp.gap(1) << "\n";
    }
    return out.str();
}

}  // namespace anneal
