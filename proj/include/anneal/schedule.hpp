#ifndef ANNEAL_SCHEDULE_HPP
#define ANNEAL_SCHEDULE_HPP

#include <memory>
#include <string>

namespace anneal {

/// An annealing path f(s) on s in [0, 1] with f(0)=0, f(1)=1, together with
/// analytic derivatives up to order 4.  Implementations are immutable and
/// freely shareable.
class Schedule {
public:
    static constexpr int max_derivative_order = 4;

    virtual ~Schedule() = default;

    virtual double value(double s) const = 0;

    /// d^order f / ds^order, order in 1..4.  Throws std::invalid_argument for
    /// unsupported orders.
    virtual double derivative(double s, int order) const = 0;

    virtual std::string name() const = 0;
};

using SchedulePtr = std::shared_ptr<const Schedule>;

/// The polynomial error-reduction family: f_1 = s, f_2 = s^2(3-2s),
/// f_3 = s^3(10-15s+6s^2), f_4 = s^4(35-84s+70s^2-20s^3).  Derivatives of
/// order 1..m-1 vanish at both endpoints.
SchedulePtr poly_family(int m);

/// The quadratic pair: which=1 gives f_sq1 = s^2 (flat start), which=2 gives
/// f_sq2 = s(2-s) (flat finish).
SchedulePtr sq_family(int which);

/// Optimal database-search path f_opt(s) = 1/2 + (2s-1)/(2 sqrt(N-(N-1)(2s-1)^2))
/// for an N-item search space.
SchedulePtr grover_optimal(int n_items);

/// Test-only non-symmetric path f(s) = (1 - cos(pi s^2))/2.
SchedulePtr cos_sq_schedule();

/// Composition outer(inner(s)); derivatives through order 4 by the chain rule.
SchedulePtr compose(SchedulePtr outer, SchedulePtr inner);

/// Registry lookup: "f1".."f4", "sq1", "sq2", "grover_opt:N",
/// "grover_opt_m:N:m", "cos_sq".  Unknown names throw std::invalid_argument.
SchedulePtr schedule_by_name(const std::string& name);

/// A positive, monotone non-increasing control law Gamma(t) or T(t) for
/// t >= 0 (t > 0 where the form diverges at the origin, e.g. LogTemperature).
class DecayLaw {
public:
    enum class Family { PowerGamma, MTILaw, LogTemperature, PIMCLog, GFMCPower,
                        PIMCCorollaryGamma, GFMCLogGamma };

    /// Gamma(t) = a (delta t + c)^(-1/(2N-1)).
    static DecayLaw power_gamma(double a, double c, double delta, int n_sites);

    /// Gamma_MTI(t) = coeff * 2^(N-2) / (delta (t+1)).  The theorem fixes only
    /// the proportionality; coeff is user-supplied (default 1) and the +1
    /// shift keeps the law finite at t = 0.
    static DecayLaw mti_law(int n_sites, double delta, double coeff = 1.0);

    /// T(t) = p N / log(alpha t + 1); defined for t > 0.
    static DecayLaw log_temperature(double p, int n_sites, double alpha);

    /// T1(t) = R L1 / log(t + 2).
    static DecayLaw pimc_log(double r, double l1);

    /// Gamma(t) = b / (t+1)^c.
    static DecayLaw gfmc_power(double b, double c);

    /// Gamma(t) = (M/beta) atanh((t+2)^(-2/rl1)) — the field schedule implied
    /// by the T1 log law, with rl1 the product R*L1 in the convention where a
    /// single flip changes the slice-coupling exponent by up to L1.
    static DecayLaw pimc_corollary_gamma(double trotter_m, double beta, double rl1);

    /// Gamma(t) = -(1/(2 dt)) log(1 - 2 b (t+1)^(-1/N)); domain requires
    /// 2 b (t+1)^(-1/N) < 1, otherwise a std::domain_error reports the
    /// smallest valid t.
    static DecayLaw gfmc_log_gamma(double b, int n_sites, double dt);

    double value(double t) const;
    Family family() const { return family_; }
    std::string name() const;

private:
    DecayLaw(Family f, double p0, double p1, double p2, int n)
        : family_(f), p0_(p0), p1_(p1), p2_(p2), n_(n) {}

    Family family_;
    double p0_, p1_, p2_;
    int n_;
};

}  // namespace anneal

#endif
