#include "anneal/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anneal {

namespace {

constexpr long max_steps = 500'000'000;

long step_count(const AnnealHamiltonian& h, double dt_control) {
    if (dt_control <= 0) throw std::invalid_argument("IntegratorOptions: dt_control must be > 0");
    const double dt = dt_control / std::max(h.norm_bound(), 1e-12);
    const double n = std::ceil(h.tau() / dt);
    if (n > static_cast<double>(max_steps)) {
        std::ostringstream msg;
        msg << "evolve: tau=" << h.tau() << " needs about " << n
            << " RK4 steps, above the budget of " << max_steps;
        throw std::runtime_error(msg.str());
    }
    return std::max<long>(1, static_cast<long>(n));
}

Vector ground_state(const AnnealHamiltonian& h, double s) {
    const Spectrum sp = instantaneous_spectrum(h, s);
    Vector g = sp.eigenvectors.col(0);
    // Fix the global sign so stoquastic ground states come out non-negative.
    Eigen::Index imax = 0;
    g.cwiseAbs().maxCoeff(&imax);
    if (g[imax] < 0) g = -g;
    return g;
}

void finalize_report(const AnnealHamiltonian& h, EvolutionReport& rep, int levels) {
    const Spectrum sp = instantaneous_spectrum(h, 1.0);
    CVector hv(h.dimension());
    h.apply(1.0, rep.final_state, hv);
    rep.e_res = rep.final_state.dot(hv).real() - sp.eigenvalues[0];
    rep.excitation_probs.clear();
    const int jmax = std::min<int>(levels, static_cast<int>(h.dimension()) - 1);
    for (int j = 1; j <= jmax; ++j) {
        const std::complex<double> amp =
            sp.eigenvectors.col(j).cast<std::complex<double>>().dot(rep.final_state);
        rep.excitation_probs.push_back(std::norm(amp));
    }
}

}  // namespace

EvolutionReport evolve_rt(const AnnealHamiltonian& h, IntegratorOptions opts) {
    const long n = step_count(h, opts.dt_control);
    const double ds = 1.0 / static_cast<double>(n);
    const std::complex<double> mitau(0.0, -h.tau());

    CVector psi = ground_state(h, 0.0).cast<std::complex<double>>();
    CVector k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()), tmp(psi.size());

    double drift = 0.0;
    for (long step = 0; step < n; ++step) {
        const double s = static_cast<double>(step) * ds;
        h.apply(s, psi, k1);
        k1 *= mitau;
        tmp = psi + (0.5 * ds) * k1;
        h.apply(s + 0.5 * ds, tmp, k2);
        k2 *= mitau;
        tmp = psi + (0.5 * ds) * k2;
        h.apply(s + 0.5 * ds, tmp, k3);
        k3 *= mitau;
        tmp = psi + ds * k3;
        h.apply(s + ds, tmp, k4);
        k4 *= mitau;
        psi += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double norm = psi.norm();
        drift = std::max(drift, std::abs(norm - 1.0));
        psi /= norm;
    }

    EvolutionReport rep;
    rep.tau = h.tau();
    rep.mode = EvolveMode::RealTime;
    if (h.mix() == AnnealHamiltonian::Mix::FForm) rep.schedule = h.schedule().name();
    rep.final_state = std::move(psi);
    rep.steps = n;
    rep.norm_drift = drift;
    finalize_report(h, rep, opts.excitation_levels);
    return rep;
}

EvolutionReport evolve_it(const AnnealHamiltonian& h, IntegratorOptions opts) {
    const long n = step_count(h, opts.dt_control);
    const double ds = 1.0 / static_cast<double>(n);
    const double tau = h.tau();

    Vector psi = ground_state(h, 0.0);
    Vector k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()), tmp(psi.size()),
        hv(psi.size());

    // Norm-conserving nonlinear right-hand side -tau (H - <H>) psi.
    auto rhs = [&](double s, const Vector& v, Vector& out) {
        h.apply(s, v, out);
        const double mean = v.dot(out) / v.squaredNorm();
        out = -tau * (out - mean * v);
    };

    double drift = 0.0;
    for (long step = 0; step < n; ++step) {
        const double s = static_cast<double>(step) * ds;
        rhs(s, psi, k1);
        tmp = psi + (0.5 * ds) * k1;
        rhs(s + 0.5 * ds, tmp, k2);
        tmp = psi + (0.5 * ds) * k2;
        rhs(s + 0.5 * ds, tmp, k3);
        tmp = psi + ds * k3;
        rhs(s + ds, tmp, k4);
        psi += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double norm = psi.norm();
        drift = std::max(drift, std::abs(norm - 1.0));
        psi /= norm;
    }

    EvolutionReport rep;
    rep.tau = tau;
    rep.mode = EvolveMode::ImaginaryTime;
    if (h.mix() == AnnealHamiltonian::Mix::FForm) rep.schedule = h.schedule().name();
    rep.final_state = psi.cast<std::complex<double>>();
    rep.steps = n;
    rep.norm_drift = drift;
    finalize_report(h, rep, opts.excitation_levels);
    return rep;
}

LzForms lz_closed_forms(double h_param, double alpha, const Schedule& f, double tau, int m) {
    if (h_param <= 0 || alpha <= 0 || tau <= 0)
        throw std::invalid_argument("lz_closed_forms: h, alpha, tau must be positive");
    if (m < 1 || m > Schedule::max_derivative_order)
        throw std::invalid_argument("lz_closed_forms: m out of range");
    // Locate the unique s* with f(s*) = 1/2 by bisection on the monotone path.
    double lo = 0.0, hi = 1.0;
    if ((f.value(lo) - 0.5) * (f.value(hi) - 0.5) > 0)
        throw std::domain_error("lz_closed_forms: schedule never crosses 1/2");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((f.value(lo) - 0.5) * (f.value(mid) - 0.5) <= 0)
            hi = mid;
        else
            lo = mid;
    }
    const double s_star = 0.5 * (lo + hi);
    const double slope = f.derivative(s_star, 1);
    if (slope <= 0) throw std::domain_error("lz_closed_forms: non-increasing at s*");

    LzForms forms;
    forms.p_nonadiabatic = std::exp(-M_PI * alpha * alpha * tau / (slope * h_param));
    const double dm = std::abs(f.derivative(0.0, m)) + std::abs(f.derivative(1.0, m));
    const double h2a2 = h_param * h_param + 4.0 * alpha * alpha;
    forms.p_adiabatic_bound = 4.0 * h_param * h_param * alpha * alpha * dm * dm /
                              (std::pow(tau, 2 * m) * std::pow(h2a2, m + 2));
    return forms;
}

std::vector<SweepRow> residual_energy_sweep(
    const std::function<AnnealHamiltonian(double)>& make_h, const std::string& schedule_name,
    const std::vector<double>& tau_list, SweepOptions opts) {
    for (std::size_t i = 1; i < tau_list.size(); ++i)
        if (tau_list[i] <= tau_list[i - 1])
            throw std::invalid_argument("residual_energy_sweep: tau_list must ascend");

    std::vector<SweepRow> rows(tau_list.size());
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        std::vector<double> taus{tau_list[i]};
        if (opts.envelope_jitter > 0)
            for (int k = 1; k < opts.envelope_samples; ++k)
                taus.push_back(tau_list[i] *
                               (1.0 + opts.envelope_jitter * k / (opts.envelope_samples - 1)));
        SweepRow row;
        row.tau = tau_list[i];
        row.schedule = schedule_name;
        row.mode = opts.mode;
        bool first = true;
        for (double t : taus) {
            const AnnealHamiltonian h = make_h(t);
            const EvolutionReport rep = opts.mode == EvolveMode::RealTime
                                            ? evolve_rt(h, opts.integrator)
                                            : evolve_it(h, opts.integrator);
            if (first || rep.e_res > row.e_res) {
                row.e_res = rep.e_res;
                row.excitation_probs = rep.excitation_probs;
            }
            row.steps += rep.steps;
            row.norm_drift = std::max(row.norm_drift, rep.norm_drift);
            first = false;
        }
        rows[i] = std::move(row);
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::size_t levels = 0;
    for (const auto& r : rows) levels = std::max(levels, r.excitation_probs.size());
    std::ostringstream out;
    out << "tau,schedule,mode,E_res";
    for (std::size_t j = 1; j <= levels; ++j) out << ",P_ex_" << j;
    out << ",steps,norm_drift\n";
    out.precision(15);
    for (const auto& r : rows) {
        out << r.tau << "," << r.schedule << ","
            << (r.mode == EvolveMode::RealTime ? "rt" : "it") << "," << r.e_res;
        for (std::size_t j = 0; j < levels; ++j)
            out << "," << (j < r.excitation_probs.size() ? r.excitation_probs[j] : 0.0);
        out << "," << r.steps << "," << r.norm_drift << "\n";
    }
    return out.str();
}

}  // namespace anneal
