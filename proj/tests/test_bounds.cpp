#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "anneal/bounds.hpp"
#include "anneal/rng.hpp"

using namespace anneal;

namespace {

IsingProblem random_problem(int n, Rng& rng) {
    std::vector<FieldTerm> fields;
    std::vector<PairTerm> pairs;
    for (int i = 0; i < n; ++i) fields.push_back({i, rng.uniform(-1.0, 1.0)});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j, rng.uniform(-1.0, 1.0)});
    return IsingProblem(n, std::move(fields), std::move(pairs));
}

IsingProblem chain_ferromagnet(int n) {
    std::vector<PairTerm> pairs;
    for (int i = 0; i + 1 < n; ++i) pairs.push_back({i, i + 1, 1.0});
    return IsingProblem(n, {{0, 0.1}}, std::move(pairs));
}

// Dense H = diag(E) + gamma * driver-base; independent of AnnealHamiltonian.
Matrix ising_plus_driver(const IsingProblem& p, double gamma, bool mti) {
    const Eigen::Index dim = Eigen::Index{1} << p.n_sites();
    Matrix h = Matrix::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) h(x, x) = p.energy(static_cast<SpinConfig>(x));
    if (mti) {
        h -= gamma * Matrix::Ones(dim, dim);
    } else {
        for (Eigen::Index x = 0; x < dim; ++x)
            for (int i = 0; i < p.n_sites(); ++i) h(x ^ (Eigen::Index{1} << i), x) -= gamma;
    }
    return h;
}

double exact_gap(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    return es.eigenvalues()[1] - es.eigenvalues()[0];
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("kappa and the tight 2x2 case") {
    Matrix m(2, 2);
    m << 3, 1, 1, 3;
    const PositiveMatrix pm(m);
    CHECK(pm.kappa() == doctest::Approx(3.0));
    const HopfBound hb = hopf_bound(pm);
    CHECK(hb.lambda0 == doctest::Approx(4.0).epsilon(1e-12));
    // Subdominant eigenvalue is kappa-1 = 2 = (kappa-1)/(kappa+1) * lambda0: tight.
    CHECK(hb.bound == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("all-ones matrix is rank one with zero bound") {
    const PositiveMatrix pm(Matrix::Ones(5, 5));
    CHECK(pm.kappa() == doctest::Approx(1.0));
    const HopfBound hb = hopf_bound(pm);
    CHECK(hb.lambda0 == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(hb.bound == doctest::Approx(0.0));
}

TEST_CASE("construction rejects non-positive entries, naming the entry") {
    Matrix m = Matrix::Ones(3, 3);
    m(1, 2) = 0.0;
    CHECK_THROWS_WITH_AS((void)PositiveMatrix(m), doctest::Contains("(1,2)"),
                         std::invalid_argument);
    CHECK_THROWS_AS((void)PositiveMatrix(Matrix(0, 0)), std::invalid_argument);
}

TEST_CASE("subdominant eigenvalues obey the bound on random matrices") {
    Rng rng(51, 0);
    for (int k = 0; k < 100; ++k) {
        const int n = 2 + static_cast<int>(rng.integer(7));
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(0.05, 5.0);
        const PositiveMatrix pm(m);
        const HopfBound hb = hopf_bound(pm);
        const Eigen::EigenSolver<Matrix> es(m);
        // Power-iteration lambda0 matches the dense dominant eigenvalue.
        const double dom = es.eigenvalues().cwiseAbs().maxCoeff();
        CHECK(hb.lambda0 == doctest::Approx(dom).epsilon(1e-10));
        for (Eigen::Index j = 0; j < n; ++j) {
            const double a = std::abs(es.eigenvalues()[j]);
            if (std::abs(a - dom) < 1e-9 * dom) continue;  // the dominant one
            CHECK(a <= hb.bound + 1e-10);
        }
    }
}

TEST_CASE("oscillation contraction") {
    Rng rng(53, 0);
    for (int k = 0; k < 100; ++k) {
        const int n = 2 + static_cast<int>(rng.integer(6));
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(0.1, 4.0);
        const PositiveMatrix pm(m);
        Vector v(n), p(n);
        for (int i = 0; i < n; ++i) {
            v[i] = rng.uniform(-2.0, 2.0);
            p[i] = rng.uniform(0.1, 3.0);
        }
        const auto osc = [](const Vector& num, const Vector& den) {
            Vector r = num.cwiseQuotient(den);
            return r.maxCoeff() - r.minCoeff();
        };
        const double ratio = (pm.kappa() - 1.0) / (pm.kappa() + 1.0);
        CHECK(osc(m * v, m * p) <= ratio * osc(v, p) + 1e-12);
    }
}

TEST_CASE("tfim bound: N=1 reduction and validity against the exact gap") {
    const IsingProblem single(1, {{0, 0.4}}, {});
    const double gamma0 = 1.0, e_plus = default_e_plus(single, gamma0);
    CHECK(e_plus == doctest::Approx(0.4 + gamma0 + 1.0));
    for (double gamma : {0.25, 0.6, 1.0}) {
        const double bound = tfim_gap_lower_bound(single, gamma, e_plus, gamma0, -0.4);
        // N=1: 2 (E_plus - eps0) Gamma / (E_plus - E_min + Gamma0).
        CHECK(bound ==
              doctest::Approx(2.0 * (e_plus + 0.4) * gamma / (e_plus + 0.4 + gamma0)).epsilon(1e-13));
        // Exact two-level gap 2 sqrt(h^2 + Gamma^2) with h = 0.4.
        const double gap = exact_gap(ising_plus_driver(single, gamma, false));
        CHECK(gap == doctest::Approx(2.0 * std::hypot(0.4, gamma)).epsilon(1e-12));
        CHECK(gap >= bound - 1e-12);
    }
}

TEST_CASE("tfim bound holds for random instances over a Gamma grid") {
    Rng rng(57, 0);
    for (int k = 0; k < 20; ++k) {
        const int n = 2 + static_cast<int>(rng.integer(3));
        const IsingProblem p = random_problem(n, rng);
        const double gamma0 = 1.5;
        const double e_plus = default_e_plus(p, gamma0);
        const double eps0 = p.enumerate_extremes().e_min;  // valid upper substitute
        for (int g = 1; g <= 6; ++g) {
            const double gamma = gamma0 * g / 6.0;
            const double bound = tfim_gap_lower_bound(p, gamma, e_plus, gamma0, eps0);
            CHECK(bound > 0.0);
            CHECK(exact_gap(ising_plus_driver(p, gamma, false)) >= bound - 1e-12);
        }
    }
}

TEST_CASE("tfim bound coefficient decays exponentially with N") {
    double prev_log_a = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const IsingProblem p = chain_ferromagnet(n);
        const double gamma0 = 1.0;
        const double e_plus = default_e_plus(p, gamma0);
        const double eps0 = p.enumerate_extremes().e_min;
        const double a = tfim_gap_lower_bound(p, gamma0, e_plus, gamma0, eps0);
        const double log_a = std::log(a);
        if (n > 2) CHECK(log_a < prev_log_a);
        prev_log_a = log_a;
    }
}

TEST_CASE("tfim bound precondition errors") {
    const IsingProblem p = chain_ferromagnet(2);
    CHECK_THROWS_AS((void)tfim_gap_lower_bound(p, 0.5, 1.0, 1.0, -2.0), std::invalid_argument);
    const double e_plus = default_e_plus(p, 1.0);
    CHECK_THROWS_AS((void)tfim_gap_lower_bound(p, 2.0, e_plus, 1.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)tfim_gap_lower_bound(p, 0.0, e_plus, 1.0, -2.0), std::invalid_argument);
}

TEST_CASE("mti bound: validity, zero-cost case, and O(1) coefficient") {
    Rng rng(59, 0);
    for (int k = 0; k < 20; ++k) {
        const int n = 2 + static_cast<int>(rng.integer(3));
        const IsingProblem p = random_problem(n, rng);
        const double eps0 = p.enumerate_extremes().e_min;
        for (double gamma : {0.1, 0.5, 1.0}) {
            const double e_plus = default_e_plus(p, gamma);
            const double bound = mti_gap_lower_bound(p, gamma, e_plus, eps0);
            CHECK(bound > 0.0);
            CHECK(exact_gap(ising_plus_driver(p, gamma, true)) >= bound - 1e-12);
        }
    }

    // Zero-cost problem: H = -Gamma * J has gap 2^N Gamma, far above the bound.
    const IsingProblem zero(3, {}, {});
    const double gap = exact_gap(ising_plus_driver(zero, 0.7, true));
    CHECK(gap == doctest::Approx(8.0 * 0.7).epsilon(1e-12));
    CHECK(gap >= mti_gap_lower_bound(zero, 0.7, default_e_plus(zero, 0.7), 0.0));

    // The per-Gamma coefficient stays within a factor 2 across N = 2..5.
    double amin = 1e300, amax = 0.0;
    for (int n = 2; n <= 5; ++n) {
        const IsingProblem p = chain_ferromagnet(n);
        const double gamma = 0.05;
        const double a =
            mti_gap_lower_bound(p, gamma, p.enumerate_extremes().e_max + gamma + 1.0,
                                p.enumerate_extremes().e_min) /
            gamma;
        amin = std::min(amin, a);
        amax = std::max(amax, a);
    }
    CHECK(amax / amin <= 2.0);
}

TEST_CASE("sa map ground state has eigenvalue zero") {
    Rng rng(61, 0);
    for (int k = 0; k < 10; ++k) {
        const IsingProblem p = random_problem(3 + static_cast<int>(rng.integer(3)), rng);
        for (double temp : {0.5, 1.0, 2.0}) {
            const SaQuantumMap map = build_sa_map(p, temp);
            CHECK(map.verify_ground_state() <= 1e-10);
            // psi_x = e^{-beta E(x)/2} up to scale.
            const Vector& psi = map.ground_state();
            const double scale = psi[0] / std::exp(-p.energy(0u) / (2 * temp));
            for (Eigen::Index x = 0; x < psi.size(); ++x)
                CHECK(psi[x] == doctest::Approx(scale * std::exp(-p.energy(
                                    static_cast<SpinConfig>(x)) / (2 * temp))).epsilon(1e-12));
        }
    }
}

TEST_CASE("single spin thermal average is tanh(beta J)") {
    const double j1 = 0.8, temp = 1.3;
    const IsingProblem p(1, {{0, j1}}, {});
    const SaQuantumMap map = build_sa_map(p, temp);
    Vector sz(2);
    sz << 1.0, -1.0;
    CHECK(map.thermal_expectation(sz) == doctest::Approx(std::tanh(j1 / temp)).epsilon(1e-13));
    CHECK(map.quantum_expectation(sz) == doctest::Approx(std::tanh(j1 / temp)).epsilon(1e-13));
}

TEST_CASE("thermal and quantum expectations agree on random observables") {
    Rng rng(67, 0);
    const IsingProblem p = random_problem(5, rng);
    const SaQuantumMap map = build_sa_map(p, 0.7);
    for (int rep = 0; rep < 3; ++rep) {
        Vector q(32);
        for (Eigen::Index i = 0; i < 32; ++i) q[i] = rng.uniform(-1.0, 1.0);
        CHECK(map.quantum_expectation(q) ==
              doctest::Approx(map.thermal_expectation(q)).epsilon(1e-10));
    }
}

TEST_CASE("large temperature drives the ground state to the uniform superposition") {
    const IsingProblem p = chain_ferromagnet(3);
    const SaQuantumMap map = build_sa_map(p, 1e6);
    Eigen::SelfAdjointEigenSolver<Matrix> es(map.hamiltonian());
    const Vector ground = es.eigenvectors().col(0);
    const Vector uniform = Vector::Constant(8, 1.0 / std::sqrt(8.0));
    CHECK(std::abs(ground.dot(uniform)) > 1.0 - 1e-6);
}

TEST_CASE("sa map parameter errors") {
    const IsingProblem p = chain_ferromagnet(2);
    CHECK_THROWS_AS((void)build_sa_map(p, 0.0), std::domain_error);
    CHECK_THROWS_AS((void)build_sa_map(p, -1.0), std::domain_error);
    CHECK_THROWS_AS((void)build_sa_map(IsingProblem(11, {}, {}), 1.0), std::length_error);
}

TEST_CASE("sa gap report: positivity, monotone trend, and the emitted law") {
    // Two-site chain J=1 with field 0.3 on site 0: site 0 touches both terms,
    // so p = 0.3 + 1 = 1.3.
    const IsingProblem p(2, {{0, 0.3}}, {{0, 1, 1.0}});
    const SaGapReport rep = sa_gap_and_schedule(p, 1.0, 1.0);
    CHECK(rep.p == doctest::Approx(1.3));
    CHECK(rep.gap > 0.0);
    // T(t) = p N / log(alpha t + 1).
    CHECK(rep.schedule.value(std::exp(2.0) - 1.0) == doctest::Approx(1.3 * 2.0 / 2.0));

    double prev = 0.0;
    for (double temp : {0.4, 0.6, 0.9, 1.4, 2.0}) {
        const double gap = sa_gap_and_schedule(p, temp, 1.0).gap;
        CHECK(gap > prev);  // gap shrinks as T decreases
        prev = gap;
    }
}

TEST_CASE("matrix element identity under finite differences in T") {
    Rng rng(71, 0);
    for (int k = 0; k < 5; ++k) {
        const IsingProblem p = random_problem(4, rng);
        const double temp = 0.8 + 0.2 * k;
        const SaQuantumMap map = build_sa_map(p, temp);
        Eigen::SelfAdjointEigenSolver<Matrix> es(map.hamiltonian());
        const Vector psi = es.eigenvectors().col(0);
        const Vector psi1 = es.eigenvectors().col(1);
        const double delta = es.eigenvalues()[1] - es.eigenvalues()[0];

        const double h = 1e-5 * temp;
        const Matrix dh = (build_sa_map(p, temp + h).hamiltonian() -
                           build_sa_map(p, temp - h).hamiltonian()) /
                          (2 * h);
        Vector e_diag(16);
        for (Eigen::Index x = 0; x < 16; ++x) e_diag[x] = p.energy(static_cast<SpinConfig>(x));

        const double lhs = psi1.dot(dh * psi);
        const double rhs = -delta * psi1.dot(e_diag.cwiseProduct(psi)) / (2 * temp * temp);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4));
    }
}

}  // TEST_SUITE
