#include "anneal/schedule.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace anneal {

namespace {

void check_order(int order) {
    if (order < 1 || order > Schedule::max_derivative_order)
        throw std::invalid_argument("Schedule: derivative order must be in 1..4");
}

/// Polynomial schedule given by coefficients c_k of sum_k c_k s^k.
class PolySchedule final : public Schedule {
public:
    PolySchedule(std::vector<double> coeffs, std::string name)
        : coeffs_(std::move(coeffs)), name_(std::move(name)) {}

    double value(double s) const override { return eval(coeffs_, s); }

    double derivative(double s, int order) const override {
        check_order(order);
        std::vector<double> c = coeffs_;
        for (int d = 0; d < order; ++d) c = differentiate(c);
        return eval(c, s);
    }

    std::string name() const override { return name_; }

private:
    static double eval(const std::vector<double>& c, double s) {
        double v = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) v = v * s + c[k];
        return v;
    }
    static std::vector<double> differentiate(const std::vector<double>& c) {
        if (c.size() <= 1) return {0.0};
        std::vector<double> d(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
        return d;
    }

    std::vector<double> coeffs_;
    std::string name_;
};

class GroverSchedule final : public Schedule {
public:
    explicit GroverSchedule(int n_items) : n_(n_items) {
        if (n_items < 2) throw std::invalid_argument("grover_optimal: need N >= 2");
    }

    // f(s) = 1/2 + u / (2 sqrt(g(u))) with u = 2s-1, g(u) = N - (N-1)u^2.
    double value(double s) const override {
        const double u = 2.0 * s - 1.0;
        return 0.5 + u / (2.0 * std::sqrt(g(u)));
    }

    double derivative(double s, int order) const override {
        check_order(order);
        const double n = static_cast<double>(n_);
        const double u = 2.0 * s - 1.0;
        const double gv = g(u);
        const double nm1 = n - 1.0;
        switch (order) {
            case 1:
                return n * std::pow(gv, -1.5);
            case 2:
                return 6.0 * n * nm1 * u * std::pow(gv, -2.5);
            case 3:
                return 12.0 * n * nm1 * std::pow(gv, -2.5) +
                       60.0 * n * nm1 * nm1 * u * u * std::pow(gv, -3.5);
            case 4:
                return 360.0 * n * nm1 * nm1 * u * std::pow(gv, -3.5) +
                       840.0 * n * nm1 * nm1 * nm1 * u * u * u * std::pow(gv, -4.5);
        }
        return 0.0;  // unreachable
    }

    std::string name() const override { return "grover_opt:" + std::to_string(n_); }

private:
    double g(double u) const {
        const double n = static_cast<double>(n_);
        return n - (n - 1.0) * u * u;
    }
    int n_;
};

class CosSqSchedule final : public Schedule {
public:
    double value(double s) const override { return 0.5 * (1.0 - std::cos(M_PI * s * s)); }

    double derivative(double s, int order) const override {
        check_order(order);
        const double th = M_PI * s * s;
        const double sn = std::sin(th), cs = std::cos(th);
        const double pi = M_PI;
        switch (order) {
            case 1: return pi * s * sn;
            case 2: return pi * sn + 2.0 * pi * pi * s * s * cs;
            case 3: return 6.0 * pi * pi * s * cs - 4.0 * pi * pi * pi * s * s * s * sn;
            case 4:
                return 6.0 * pi * pi * cs - 24.0 * pi * pi * pi * s * s * sn -
                       8.0 * pi * pi * pi * pi * s * s * s * s * cs;
        }
        return 0.0;  // unreachable
    }

    std::string name() const override { return "cos_sq"; }
};

class ComposedSchedule final : public Schedule {
public:
    ComposedSchedule(SchedulePtr outer, SchedulePtr inner)
        : outer_(std::move(outer)), inner_(std::move(inner)) {
        if (!outer_ || !inner_) throw std::invalid_argument("compose: null schedule");
    }

    double value(double s) const override { return outer_->value(inner_->value(s)); }

    // Faa di Bruno through order 4.
    double derivative(double s, int order) const override {
        check_order(order);
        const double g = inner_->value(s);
        const double g1 = inner_->derivative(s, 1);
        const double f1 = outer_->derivative(g, 1);
        if (order == 1) return f1 * g1;
        const double g2 = inner_->derivative(s, 2);
        const double f2 = outer_->derivative(g, 2);
        if (order == 2) return f2 * g1 * g1 + f1 * g2;
        const double g3 = inner_->derivative(s, 3);
        const double f3 = outer_->derivative(g, 3);
        if (order == 3) return f3 * g1 * g1 * g1 + 3.0 * f2 * g1 * g2 + f1 * g3;
        const double g4 = inner_->derivative(s, 4);
        const double f4 = outer_->derivative(g, 4);
        return f4 * g1 * g1 * g1 * g1 + 6.0 * f3 * g1 * g1 * g2 + 3.0 * f2 * g2 * g2 +
               4.0 * f2 * g1 * g3 + f1 * g4;
    }

    std::string name() const override { return outer_->name() + "(" + inner_->name() + ")"; }

private:
    SchedulePtr outer_;
    SchedulePtr inner_;
};

}  // namespace

SchedulePtr poly_family(int m) {
    switch (m) {
        case 1: return std::make_shared<PolySchedule>(std::vector<double>{0, 1}, "f1");
        case 2: return std::make_shared<PolySchedule>(std::vector<double>{0, 0, 3, -2}, "f2");
        case 3:
            return std::make_shared<PolySchedule>(std::vector<double>{0, 0, 0, 10, -15, 6}, "f3");
        case 4:
            return std::make_shared<PolySchedule>(
                std::vector<double>{0, 0, 0, 0, 35, -84, 70, -20}, "f4");
        default: throw std::invalid_argument("poly_family: m must be in 1..4");
    }
}

SchedulePtr sq_family(int which) {
    switch (which) {
        case 1: return std::make_shared<PolySchedule>(std::vector<double>{0, 0, 1}, "sq1");
        case 2: return std::make_shared<PolySchedule>(std::vector<double>{0, 2, -1}, "sq2");
        default: throw std::invalid_argument("sq_family: which must be 1 or 2");
    }
}

SchedulePtr grover_optimal(int n_items) { return std::make_shared<GroverSchedule>(n_items); }

SchedulePtr cos_sq_schedule() { return std::make_shared<CosSqSchedule>(); }

SchedulePtr compose(SchedulePtr outer, SchedulePtr inner) {
    return std::make_shared<ComposedSchedule>(std::move(outer), std::move(inner));
}

SchedulePtr schedule_by_name(const std::string& name) {
    if (name == "f1" || name == "f2" || name == "f3" || name == "f4")
        return poly_family(name[1] - '0');
    if (name == "sq1") return sq_family(1);
    if (name == "sq2") return sq_family(2);
    if (name == "cos_sq") return cos_sq_schedule();
    if (name.rfind("grover_opt:", 0) == 0)
        return grover_optimal(std::stoi(name.substr(11)));
    if (name.rfind("grover_opt_m:", 0) == 0) {
        const std::string rest = name.substr(13);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("schedule_by_name: expected grover_opt_m:N:m");
        const int n = std::stoi(rest.substr(0, colon));
        const int m = std::stoi(rest.substr(colon + 1));
        return compose(grover_optimal(n), poly_family(m));
    }
    throw std::invalid_argument("schedule_by_name: unknown schedule '" + name + "'");
}

DecayLaw DecayLaw::power_gamma(double a, double c, double delta, int n_sites) {
    if (a <= 0 || c <= 0 || delta <= 0 || n_sites < 1)
        throw std::invalid_argument("power_gamma: parameters must be positive");
    return DecayLaw(Family::PowerGamma, a, c, delta, n_sites);
}

DecayLaw DecayLaw::mti_law(int n_sites, double delta, double coeff) {
    if (delta <= 0 || coeff <= 0 || n_sites < 1)
        throw std::invalid_argument("mti_law: parameters must be positive");
    return DecayLaw(Family::MTILaw, delta, coeff, 0.0, n_sites);
}

DecayLaw DecayLaw::log_temperature(double p, int n_sites, double alpha) {
    if (p <= 0 || alpha <= 0 || n_sites < 1)
        throw std::invalid_argument("log_temperature: parameters must be positive");
    return DecayLaw(Family::LogTemperature, p, alpha, 0.0, n_sites);
}

DecayLaw DecayLaw::pimc_log(double r, double l1) {
    if (r <= 0 || l1 <= 0) throw std::invalid_argument("pimc_log: parameters must be positive");
    return DecayLaw(Family::PIMCLog, r, l1, 0.0, 0);
}

DecayLaw DecayLaw::gfmc_power(double b, double c) {
    if (b <= 0 || c <= 0) throw std::invalid_argument("gfmc_power: parameters must be positive");
    return DecayLaw(Family::GFMCPower, b, c, 0.0, 0);
}

DecayLaw DecayLaw::pimc_corollary_gamma(double trotter_m, double beta, double rl1) {
    if (trotter_m <= 0 || beta <= 0 || rl1 <= 0)
        throw std::invalid_argument("pimc_corollary_gamma: parameters must be positive");
    return DecayLaw(Family::PIMCCorollaryGamma, trotter_m, beta, rl1, 0);
}

DecayLaw DecayLaw::gfmc_log_gamma(double b, int n_sites, double dt) {
    if (b <= 0 || dt <= 0 || n_sites < 1)
        throw std::invalid_argument("gfmc_log_gamma: parameters must be positive");
    return DecayLaw(Family::GFMCLogGamma, b, dt, 0.0, n_sites);
}

double DecayLaw::value(double t) const {
    if (t < 0) throw std::domain_error("DecayLaw: t must be >= 0");
    switch (family_) {
        case Family::PowerGamma:
            // p0 = a, p1 = c, p2 = delta
            return p0_ * std::pow(p2_ * t + p1_, -1.0 / (2.0 * n_ - 1.0));
        case Family::MTILaw:
            // p0 = delta, p1 = coeff
            return p1_ * std::pow(2.0, n_ - 2) / (p0_ * (t + 1.0));
        case Family::LogTemperature: {
            // p0 = p, p1 = alpha
            if (t <= 0) throw std::domain_error("LogTemperature: defined for t > 0 only");
            return p0_ * n_ / std::log(p1_ * t + 1.0);
        }
        case Family::PIMCLog:
            // p0 = R, p1 = L1
            return p0_ * p1_ / std::log(t + 2.0);
        case Family::GFMCPower:
            // p0 = b, p1 = c
            return p0_ * std::pow(t + 1.0, -p1_);
        case Family::PIMCCorollaryGamma: {
            // p0 = M, p1 = beta, p2 = R*L1
            const double x = std::pow(t + 2.0, -2.0 / p2_);
            return (p0_ / p1_) * std::atanh(x);
        }
        case Family::GFMCLogGamma: {
            // p0 = b, p1 = dt
            const double arg = 2.0 * p0_ * std::pow(t + 1.0, -1.0 / n_);
            if (arg >= 1.0) {
                const double t_min = std::pow(2.0 * p0_, n_) - 1.0;
                std::ostringstream msg;
                msg << "gfmc_log_gamma: log argument non-positive at t=" << t
                    << "; smallest valid t is " << t_min;
                throw std::domain_error(msg.str());
            }
            return -std::log(1.0 - arg) / (2.0 * p1_);
        }
    }
    return 0.0;  // unreachable
}

std::string DecayLaw::name() const {
    switch (family_) {
        case Family::PowerGamma: return "power_gamma";
        case Family::MTILaw: return "mti_law";
        case Family::LogTemperature: return "log_temperature";
        case Family::PIMCLog: return "pimc_log";
        case Family::GFMCPower: return "gfmc_power";
        case Family::PIMCCorollaryGamma: return "pimc_corollary_gamma";
        case Family::GFMCLogGamma: return "gfmc_log_gamma";
    }
    return "";
}

}  // namespace anneal
