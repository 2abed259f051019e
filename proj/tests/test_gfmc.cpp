#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "anneal/gfmc.hpp"
#include "anneal/rng.hpp"

using namespace anneal;

namespace {

IsingProblem ferromagnet2x2() {
    return IsingProblem(4, {}, {{0, 1, 1.0}, {2, 3, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}});
}

IsingProblem random_problem(int n, Rng& rng) {
    std::vector<FieldTerm> fields;
    std::vector<PairTerm> pairs;
    for (int i = 0; i < n; ++i) fields.push_back({i, rng.uniform(-1.0, 1.0)});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j, rng.uniform(-1.0, 1.0)});
    return IsingProblem(n, std::move(fields), std::move(pairs));
}

// Dense H(t) = diag(E) - Gamma sum sigma^x, built independently.
Eigen::MatrixXd dense_h(const GfmcModel& m, double t) {
    const Eigen::Index dim = static_cast<Eigen::Index>(m.dimension());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        h(x, x) = m.energy(static_cast<std::uint32_t>(x));
        for (int b = 0; b < m.n_sites(); ++b)
            h(x ^ (Eigen::Index{1} << b), x) -= m.gamma(t);
    }
    return h;
}

}  // namespace

TEST_SUITE("gfmc") {

TEST_CASE("G1 Green's function is 1 - dt (H - E_T)") {
    Rng rng(91, 0);
    const IsingProblem p = random_problem(3, rng);
    const GfmcModel m = GfmcModel::with_defaults(p, [](double t) { return 1.5 / (t + 1.0); });
    for (double t : {0.0, 2.0, 10.0}) {
        const Eigen::MatrixXd expect =
            Eigen::MatrixXd::Identity(8, 8) -
            m.dt() * (dense_h(m, t) - m.e_t() * Eigen::MatrixXd::Identity(8, 8));
        CHECK((m.ghat_dense(t) - expect).cwiseAbs().maxCoeff() < 1e-14);
        // Column sums equal the walker weight.
        for (std::uint32_t x = 0; x < 8; ++x) {
            CHECK(m.ghat_dense(t).col(x).sum() ==
                  doctest::Approx(m.weight(x, t)).epsilon(1e-14));
            CHECK(m.weight(x, t) ==
                  doctest::Approx(1.0 - m.dt() * (m.energy(x) - m.e_t()) +
                                  3 * m.dt() * m.gamma(t)).epsilon(1e-14));
        }
    }
}

TEST_CASE("G2 Green's function matches the per-site matrix-exponential oracle") {
    Rng rng(93, 0);
    const IsingProblem p = random_problem(3, rng);
    const GfmcModel m =
        GfmcModel::with_defaults(p, [](double) { return 0.8; }, GfmcVariant::G2);
    const double a = m.dt() * 0.8;
    // e^{dt Gamma sigma^x} per site, Kronecker product over sites.
    Eigen::MatrixXd site(2, 2);
    site << std::cosh(a), std::sinh(a), std::sinh(a), std::cosh(a);
    Eigen::MatrixXd kin = site;
    for (int i = 1; i < 3; ++i) {
        Eigen::MatrixXd next(kin.rows() * 2, kin.cols() * 2);
        next << kin * site(0, 0), kin * site(0, 1), kin * site(1, 0), kin * site(1, 1);
        // Kronecker with site acting on the new highest bit.
        kin = std::move(next);
    }
    const Eigen::MatrixXd ghat = m.ghat_dense(1.0);
    for (Eigen::Index x = 0; x < 8; ++x) {
        for (Eigen::Index y = 0; y < 8; ++y) {
            const double expect = kin(y, x) * std::exp(-m.dt() * m.energy(
                                                static_cast<std::uint32_t>(x)));
            CHECK(ghat(y, x) == doctest::Approx(expect).epsilon(1e-13));
            // Closed form: cosh^N tanh^delta.
            const int delta = std::popcount(static_cast<std::uint32_t>(x ^ y));
            CHECK(ghat(y, x) ==
                  doctest::Approx(std::pow(std::cosh(a), 3) * std::pow(std::tanh(a), delta) *
                                  std::exp(-m.dt() * m.energy(static_cast<std::uint32_t>(x))))
                      .epsilon(1e-13));
        }
        CHECK(ghat.col(x).sum() == doctest::Approx(m.weight(static_cast<std::uint32_t>(x), 1.0))
                                       .epsilon(1e-13));
        // w2 = exp(dt N Gamma - dt E0).
        CHECK(m.weight(static_cast<std::uint32_t>(x), 1.0) ==
              doctest::Approx(std::exp(3 * a - m.dt() * m.energy(
                                  static_cast<std::uint32_t>(x)))).epsilon(1e-13));
    }
}

TEST_CASE("normalized kernels are column-stochastic and G2 flip probability is exact") {
    Rng rng(97, 0);
    for (GfmcVariant v : {GfmcVariant::G1, GfmcVariant::G2}) {
        const GfmcModel m =
            GfmcModel::with_defaults(random_problem(4, rng), [](double) { return 0.6; }, v);
        const Eigen::MatrixXd k = m.kernel_dense(0.0);
        for (Eigen::Index x = 0; x < 16; ++x) {
            CHECK(k.col(x).sum() == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(k.col(x).minCoeff() >= 0.0);
        }
    }
    // delta = 0 element of the G2 kernel is [(1+e^{-2 dt Gamma})/2]^N.
    const GfmcModel g2 = GfmcModel::with_defaults(IsingProblem(2, {}, {{0, 1, 1.0}}),
                                                  [](double) { return 0.7; }, GfmcVariant::G2);
    const double stay = 0.5 * (1.0 + std::exp(-2.0 * g2.dt() * 0.7));
    CHECK(g2.transition_column(0, 0.0)[0] == doctest::Approx(stay * stay).epsilon(1e-13));
}

TEST_CASE("stationary distributions are exact fixed points") {
    Rng rng(101, 0);
    for (int n = 2; n <= 6; ++n) {
        const GfmcModel m =
            GfmcModel::with_defaults(random_problem(n, rng), [](double t) { return 2.0 / (t + 1.0); });
        for (double t : {0.0, 3.0, 25.0}) {
            const Eigen::VectorXd q = m.stationary_distribution(t);
            CHECK(q.minCoeff() > 0.0);
            CHECK(q.sum() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK((m.kernel_dense(t) * q - q).lpNorm<1>() <= 1e-12);
        }
    }
    // G2 with E0 == 0: the kernel is symmetric, so uniform is stationary.
    const GfmcModel flat = GfmcModel::with_defaults(IsingProblem(3, {}, {}),
                                                    [](double) { return 0.5; }, GfmcVariant::G2);
    const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(8, 1.0 / 8.0);
    CHECK((flat.kernel_dense(0.0) * uniform - uniform).lpNorm<1>() <= 1e-14);
}

TEST_CASE("default policies and construction errors") {
    const IsingProblem p = ferromagnet2x2();
    auto gamma = [](double t) { return 2.0 / std::pow(t + 1.0, 0.25); };
    const GfmcModel m = GfmcModel::with_defaults(p, gamma);
    const Extremes ext = p.enumerate_extremes();
    CHECK(m.e_t() == doctest::Approx(ext.e_min));
    CHECK(m.dt() == doctest::Approx(0.1 / (ext.e_max - ext.e_min + 4 * 2.0)));
    CHECK(m.e_min() == doctest::Approx(ext.e_min));
    CHECK(m.e_max() == doctest::Approx(ext.e_max));

    // dt so large the G1 diagonal would go negative; the message names the cap.
    CHECK_THROWS_WITH_AS((void)GfmcModel(p, gamma, 1.0, ext.e_min),
                         doctest::Contains("reduce dt below"), std::invalid_argument);
    CHECK_THROWS_AS((void)GfmcModel(p, gamma, -0.1, ext.e_min), std::invalid_argument);
    CHECK_THROWS_AS((void)GfmcModel(p, nullptr, 0.01, ext.e_min), std::invalid_argument);
}

TEST_CASE("dense recursion applies the Green's function step by step") {
    Rng rng(103, 0);
    const GfmcModel m =
        GfmcModel::with_defaults(random_problem(3, rng), [](double t) { return 1.0 / (t + 1.0); });
    Eigen::VectorXd psi = Eigen::VectorXd::Constant(8, 1.0);
    const Eigen::VectorXd got = run_gfmc_dense(m, psi, 7);
    for (int k = 0; k < 7; ++k) psi = m.ghat_dense(k * m.dt()) * psi;
    CHECK((got - psi).cwiseAbs().maxCoeff() < 1e-12 * psi.cwiseAbs().maxCoeff());
    CHECK_THROWS_AS((void)run_gfmc_dense(m, Eigen::VectorXd::Ones(4), 3), std::invalid_argument);
}

TEST_CASE("sample_move frequencies follow the transition column") {
    Rng rng(107, 0);
    for (GfmcVariant v : {GfmcVariant::G1, GfmcVariant::G2}) {
        const GfmcModel m = GfmcModel::with_defaults(IsingProblem(3, {{0, 0.4}}, {{0, 1, 0.8}}),
                                                     [](double) { return 1.2 ; }, v);
        const std::uint32_t x0 = 0b010;
        const Eigen::VectorXd col = m.transition_column(x0, 0.0);
        Eigen::VectorXd hist = Eigen::VectorXd::Zero(8);
        const int trials = 40000;
        for (int k = 0; k < trials; ++k) hist[m.sample_move(x0, 0.0, rng)] += 1.0;
        hist /= trials;
        for (int y = 0; y < 8; ++y) {
            const double sigma = std::sqrt(std::max(col[y] * (1 - col[y]) / trials, 1e-12));
            CHECK(std::abs(hist[y] - col[y]) < 5 * sigma + 1e-4);
        }
    }
}

TEST_CASE("frozen-field run projects the mixed energy onto the ground energy") {
    const IsingProblem p(2, {}, {{0, 1, 1.0}});
    const GfmcModel m = GfmcModel::with_defaults(p, [](double) { return 0.5; });
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_h(m, 0.0));
    const double eps0 = es.eigenvalues()[0];

    GfmcOptions opts;
    // Keep the horizon short: the gap suppresses the excited components after
    // a few units of imaginary time, while the walker weight variance (there
    // is no branching) keeps growing with the step count.
    opts.steps = 150;
    opts.walkers = 20000;
    opts.seed = 11;
    opts.record_every = 50;
    const GfmcResult res = run_gfmc(m, opts);
    REQUIRE(!res.rows.empty());
    const GfmcRow& last = res.rows.back();
    CHECK(last.mixed_energy == doctest::Approx(eps0).epsilon(0.02));
    CHECK(last.overlap_exact > 0.99);
    CHECK(last.ess > 1.0);
    CHECK(res.final_overlap > 0.99);
    CHECK(res.final_overlap_sigma >= 0.0);

    // Deterministic replay with the same seed; different seed differs.
    const GfmcResult res2 = run_gfmc(m, opts);
    CHECK(res2.final_overlap == res.final_overlap);
    CHECK((res2.psi_estimate - res.psi_estimate).lpNorm<1>() == 0.0);
    opts.seed = 12;
    CHECK(run_gfmc(m, opts).final_overlap != res.final_overlap);

    CHECK_THROWS_AS((void)run_gfmc(m, GfmcOptions{0, 0, 0, 1, true}), std::invalid_argument);
}

TEST_CASE("csv header and row shape") {
    const GfmcModel m = GfmcModel::with_defaults(IsingProblem(2, {}, {{0, 1, 1.0}}),
                                                 [](double) { return 0.5; });
    GfmcOptions opts;
    opts.steps = 20;
    opts.walkers = 50;
    opts.record_every = 10;
    const std::string csv = gfmc_csv(run_gfmc(m, opts));
    CHECK(csv.rfind("step,t,Gamma,mixed_energy,overlap_exact,weight_variance,ess\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 3);
}

TEST_CASE("theorem report on the compliant power-law schedule") {
    const IsingProblem p = ferromagnet2x2();
    const GfmcModel m =
        GfmcModel::with_defaults(p, [](double t) { return 2.0 / std::pow(t + 1.0, 0.25); });
    const GfmcTheoremReport rep = verify_gfmc_theorems(m, {0.0, 1.0, 5.0, 20.0}, 5000);
    CHECK(rep.stationary_fixed_point);
    CHECK(rep.neighbor_bound_ok);
    CHECK(rep.diagonal_bound_ok);
    CHECK(rep.t1_measured >= 0.0);
    CHECK(rep.counterexample.empty());
    CHECK(rep.weak_ergodicity_distance < 1e-3);
    CHECK(rep.weak_ergodicity_distance <= rep.noncompliant_distance + 1e-12);
}

}  // TEST_SUITE
