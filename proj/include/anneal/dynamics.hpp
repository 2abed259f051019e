#ifndef ANNEAL_DYNAMICS_HPP
#define ANNEAL_DYNAMICS_HPP

#include <string>
#include <vector>

#include "anneal/operators.hpp"

namespace anneal {

enum class EvolveMode { RealTime, ImaginaryTime };

struct IntegratorOptions {
    /// Physical-time step is dt_control / ||H||_inf-bound.  The default keeps
    /// the per-step renormalization drift of the real-time integrator below
    /// 1e-12 (RK4 norm error scales like (tau ||H|| ds)^6).
    double dt_control = 0.03;
    /// Number of excited levels whose populations are reported.
    int excitation_levels = 1;
};

struct EvolutionReport {
    double tau = 0.0;
    std::string schedule;
    EvolveMode mode = EvolveMode::RealTime;
    CVector final_state;                     ///< in the computational basis
    std::vector<double> excitation_probs;    ///< |<j(1)|psi(1)>|^2, j = 1..levels
    double e_res = 0.0;                      ///< <psi|H(1)|psi> - eps_0(1)
    long steps = 0;
    double norm_drift = 0.0;  ///< max pre-renormalization |  ||psi|| - 1  |
};

/// Real-time anneal: integrate i d/ds psi = tau H(s) psi by fixed-step RK4
/// starting from the ground state of H(0).  The state is renormalized every
/// step; the largest pre-renormalization drift is reported.
EvolutionReport evolve_rt(const AnnealHamiltonian& h, IntegratorOptions opts = {});

/// Imaginary-time anneal: integrate the norm-conserving nonlinear equation
/// -d/ds psi = tau [H(s) - <H(s)>] psi in real arithmetic (stoquastic
/// drivers keep amplitudes real), renormalizing each step.
EvolutionReport evolve_it(const AnnealHamiltonian& h, IntegratorOptions opts = {});

/// The two Landau-Zener closed forms for the crossing
/// H = -(1/2 - f(s)) h sigma^z - alpha sigma^x:
///   first  = exp[-pi alpha^2 tau / (f'(s*) h)], s* the unique f(s*)=1/2;
///   second = 4 h^2 alpha^2 [|f^(m)(0)|+|f^(m)(1)|]^2 / (tau^2m (h^2+4alpha^2)^(m+2)).
struct LzForms {
    double p_nonadiabatic = 0.0;
    double p_adiabatic_bound = 0.0;
};
LzForms lz_closed_forms(double h_param, double alpha, const Schedule& f, double tau, int m);

/// One row of a residual-energy sweep.
struct SweepRow {
    double tau = 0.0;
    std::string schedule;
    EvolveMode mode = EvolveMode::RealTime;
    double e_res = 0.0;
    std::vector<double> excitation_probs;
    long steps = 0;
    double norm_drift = 0.0;
};

struct SweepOptions {
    IntegratorOptions integrator;
    EvolveMode mode = EvolveMode::RealTime;
    /// When > 0, each nominal tau is evaluated at `envelope_samples` points
    /// spread over [tau, tau*(1+jitter)] and the row keeps the maximum
    /// observable — this samples the envelope of phase-oscillating quantities
    /// such as the two-level P_ex.
    double envelope_jitter = 0.0;
    int envelope_samples = 3;
};

/// Run the same anneal for every tau in ascending tau_list; `make_h` must
/// return the Hamiltonian for a given tau.  Deterministic; rows are ordered
/// by tau regardless of execution order.
std::vector<SweepRow> residual_energy_sweep(
    const std::function<AnnealHamiltonian(double)>& make_h, const std::string& schedule_name,
    const std::vector<double>& tau_list, SweepOptions opts = {});

/// CSV rendering: `tau, schedule, mode, E_res, P_ex_1, ..., steps, norm_drift`.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace anneal

#endif
