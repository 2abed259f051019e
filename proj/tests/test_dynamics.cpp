#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "anneal/dynamics.hpp"
#include "anneal/rng.hpp"
#include "anneal/spin.hpp"

using namespace anneal;

namespace {

// A Hamiltonian that is constant in s: both mix parts are the same operator.
AnnealHamiltonian constant_h(double tau) {
    Vector diag(4);
    diag << 0.0, 0.7, 1.3, 2.1;
    OperatorPart part{diag, DriverOperator::transverse_field(2), 0.4};
    return AnnealHamiltonian::f_form(part, part, poly_family(1), tau);
}

IsingProblem small_problem() {
    return IsingProblem(3, {{0, 0.3}, {1, -0.8}, {2, 0.5}}, {{0, 1, 1.0}, {1, 2, -0.6}});
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("constant Hamiltonian keeps the ground state in both modes") {
    const AnnealHamiltonian h = constant_h(5.0);
    const EvolutionReport rt = evolve_rt(h);
    CHECK(rt.excitation_probs[0] < 1e-10);
    CHECK(std::abs(rt.e_res) < 1e-10);
    const EvolutionReport it = evolve_it(h);
    CHECK(it.excitation_probs[0] < 1e-10);
    CHECK(std::abs(it.e_res) < 1e-10);
}

TEST_CASE("imaginary time projects an excited admixture back to the ground state") {
    // Constant gapped H over a long horizon: whatever transient the start-up
    // has, the filtered state must satisfy E_res << gap.
    const AnnealHamiltonian h = constant_h(50.0);
    const EvolutionReport it = evolve_it(h);
    CHECK(it.e_res < 1e-12);
    CHECK(it.e_res > -1e-12);
}

TEST_CASE("residual energy is non-negative up to roundoff") {
    const AnnealHamiltonian h = AnnealHamiltonian::tfim(small_problem(), 1.0, poly_family(2), 8.0);
    CHECK(evolve_rt(h).e_res > -1e-10);
    CHECK(evolve_it(h).e_res > -1e-10);
}

TEST_CASE("real-time norm drift stays below 1e-12 at the default step control") {
    const AnnealHamiltonian lz = AnnealHamiltonian::landau_zener(2.0, 0.2, poly_family(1), 100.0);
    const EvolutionReport rep = evolve_rt(lz);
    CHECK(rep.norm_drift < 1e-12);
    CHECK(rep.schedule == poly_family(1)->name());
    CHECK(rep.steps > 0);
}

TEST_CASE("Landau-Zener transition probability matches the crossing formula") {
    // tau chosen so the crossing term dominates the boundary (tau^-2) term.
    const double h_param = 2.0, alpha = 0.2, tau = 30.0;
    const AnnealHamiltonian lz =
        AnnealHamiltonian::landau_zener(h_param, alpha, poly_family(1), tau);
    const EvolutionReport rep = evolve_rt(lz);
    const LzForms forms = lz_closed_forms(h_param, alpha, *poly_family(1), tau, 1);
    CHECK(rep.excitation_probs[0] ==
          doctest::Approx(forms.p_nonadiabatic).epsilon(0.05));
}

TEST_CASE("closed-form hand values") {
    const LzForms f = lz_closed_forms(2.0, 0.2, *poly_family(1), 10.0, 1);
    CHECK(f.p_nonadiabatic == doctest::Approx(std::exp(-0.2 * M_PI)).epsilon(1e-12));
    const double h2a2 = 4.0 + 4.0 * 0.04;
    CHECK(f.p_adiabatic_bound ==
          doctest::Approx(4.0 * 4.0 * 0.04 * 4.0 / (100.0 * std::pow(h2a2, 3))).epsilon(1e-12));
    CHECK_THROWS_AS((void)lz_closed_forms(2.0, 0.2, *poly_family(1), 10.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)lz_closed_forms(-1.0, 0.2, *poly_family(1), 10.0, 1),
                    std::invalid_argument);
}

TEST_CASE("halving the step changes the answer by less than 1e-6 relative") {
    const AnnealHamiltonian lz = AnnealHamiltonian::landau_zener(2.0, 0.2, poly_family(1), 30.0);
    IntegratorOptions coarse, fine;
    fine.dt_control = coarse.dt_control / 2;
    const double p_coarse = evolve_rt(lz, coarse).excitation_probs[0];
    const double p_fine = evolve_rt(lz, fine).excitation_probs[0];
    CHECK(std::abs(p_coarse - p_fine) / p_fine < 1e-6);
}

TEST_CASE("integrator converges at fourth order") {
    const AnnealHamiltonian lz = AnnealHamiltonian::landau_zener(2.0, 0.2, poly_family(1), 20.0);
    IntegratorOptions o1, o2, o3;
    o1.dt_control = 0.8;
    o2.dt_control = 0.4;
    o3.dt_control = 0.2;
    const CVector psi1 = evolve_rt(lz, o1).final_state;
    const CVector psi2 = evolve_rt(lz, o2).final_state;
    const CVector psi3 = evolve_rt(lz, o3).final_state;
    const double d12 = (psi1 - psi2).norm();
    const double d23 = (psi2 - psi3).norm();
    REQUIRE(d23 > 1e-12);  // above roundoff, so the ratio is meaningful
    CHECK(std::log2(d12 / d23) > 3.5);
}

TEST_CASE("step budget overflow is reported") {
    const AnnealHamiltonian lz = AnnealHamiltonian::landau_zener(2.0, 0.2, poly_family(1), 1e12);
    CHECK_THROWS_AS((void)evolve_rt(lz), std::runtime_error);
    IntegratorOptions bad;
    bad.dt_control = 0.0;
    const AnnealHamiltonian ok = AnnealHamiltonian::landau_zener(2.0, 0.2, poly_family(1), 1.0);
    CHECK_THROWS_AS((void)evolve_rt(ok, bad), std::invalid_argument);
}

TEST_CASE("sweep rows, ordering check, and csv rendering") {
    auto make = [](double tau) {
        return AnnealHamiltonian::landau_zener(2.0, 0.2, poly_family(1), tau);
    };
    const std::vector<SweepRow> rows = residual_energy_sweep(make, "f1", {5.0, 10.0});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].tau == 5.0);
    CHECK(rows[1].tau == 10.0);
    CHECK(rows[0].schedule == "f1");
    // Each row reproduces a direct single evolution.
    CHECK(rows[1].e_res == doctest::Approx(evolve_rt(make(10.0)).e_res).epsilon(1e-14));

    const std::string csv = sweep_csv(rows);
    CHECK(csv.rfind("tau,schedule,mode,E_res,P_ex_1,steps,norm_drift\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find(",rt,") != std::string::npos);

    CHECK_THROWS_AS((void)residual_energy_sweep(make, "f1", {10.0, 5.0}), std::invalid_argument);
}

TEST_CASE("envelope sampling keeps the maximum over a deterministic tau grid") {
    auto make = [](double tau) {
        return AnnealHamiltonian::landau_zener(2.0, 0.2, poly_family(1), tau);
    };
    SweepOptions opts;
    opts.envelope_jitter = 0.1;
    opts.envelope_samples = 3;
    const std::vector<SweepRow> rows = residual_energy_sweep(make, "f1", {12.0}, opts);
    REQUIRE(rows.size() == 1);
    double expect = 0.0;
    long steps = 0;
    for (double t : {12.0, 12.0 * 1.05, 12.0 * 1.1}) {
        const EvolutionReport rep = evolve_rt(make(t));
        expect = std::max(expect, rep.e_res);
        steps += rep.steps;
    }
    CHECK(rows[0].e_res == doctest::Approx(expect).epsilon(1e-14));
    CHECK(rows[0].steps == steps);
}

TEST_CASE("imaginary-time sweep mode is labeled and converges faster than real time") {
    auto make = [](double tau) {
        return AnnealHamiltonian::tfim(small_problem(), 1.0, sq_family(2), tau);
    };
    SweepOptions it_opts;
    it_opts.mode = EvolveMode::ImaginaryTime;
    const std::vector<SweepRow> it_rows = residual_energy_sweep(make, "sq2", {40.0}, it_opts);
    CHECK(it_rows[0].mode == EvolveMode::ImaginaryTime);
    CHECK(sweep_csv(it_rows).find(",it,") != std::string::npos);
    const std::vector<SweepRow> rt_rows = residual_energy_sweep(make, "sq2", {40.0});
    CHECK(it_rows[0].e_res <= rt_rows[0].e_res + 1e-12);
}

}  // TEST_SUITE
