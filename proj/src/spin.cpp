#include "anneal/spin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "anneal/rng.hpp"

namespace anneal {

namespace {

void check_site(int i, int n) {
    if (i < 0 || i >= n) throw std::invalid_argument("IsingProblem: site index out of range");
}

}  // namespace

IsingProblem::IsingProblem(int n_sites,
                           std::vector<FieldTerm> fields,
                           std::vector<PairTerm> pairs,
                           std::vector<MultiTerm> multis)
    : n_sites_(n_sites),
      fields_(std::move(fields)),
      pairs_(std::move(pairs)),
      multis_(std::move(multis)) {
    if (n_sites_ < 1 || n_sites_ > 32)
        throw std::invalid_argument("IsingProblem: n_sites must be in [1, 32]");
    for (const auto& f : fields_) check_site(f.site, n_sites_);
    for (const auto& p : pairs_) {
        check_site(p.i, n_sites_);
        check_site(p.j, n_sites_);
        if (p.i == p.j) throw std::invalid_argument("IsingProblem: pair term with i == j");
    }
    for (const auto& m : multis_) {
        if (m.sites.size() < 3)
            throw std::invalid_argument("IsingProblem: multi-site term needs k >= 3 sites");
        std::set<int> seen;
        for (int s : m.sites) {
            check_site(s, n_sites_);
            if (!seen.insert(s).second)
                throw std::invalid_argument("IsingProblem: repeated site in multi-site term");
        }
    }
}

double IsingProblem::energy(SpinConfig x) const {
    double e = 0.0;
    for (const auto& f : fields_) e -= f.coupling * spin_value(x, f.site);
    for (const auto& p : pairs_) e -= p.coupling * spin_value(x, p.i) * spin_value(x, p.j);
    for (const auto& m : multis_) {
        int prod = 1;
        for (int s : m.sites) prod *= spin_value(x, s);
        e -= m.coupling * prod;
    }
    return e;
}

std::vector<double> IsingProblem::energy_table() const {
    if (n_sites_ > max_enumeration_sites)
        throw std::length_error("IsingProblem: enumeration requested above the 2^20 cap");
    const std::size_t dim = std::size_t{1} << n_sites_;
    std::vector<double> table(dim);
    for (std::size_t x = 0; x < dim; ++x) table[x] = energy(static_cast<SpinConfig>(x));
    return table;
}

Extremes IsingProblem::enumerate_extremes() const {
    const std::vector<double> table = energy_table();
    Extremes ext;
    ext.e_min = table[0];
    ext.e_max = table[0];
    for (double e : table) {
        ext.e_min = std::min(ext.e_min, e);
        ext.e_max = std::max(ext.e_max, e);
    }
    // Collect ground states with an exact tie rule: enumeration is pure
    // floating-point arithmetic on identical term lists, so equal energies of
    // symmetry-related configurations compare bit-equal.
    for (std::size_t x = 0; x < table.size(); ++x)
        if (table[x] == ext.e_min) ext.ground_states.push_back(static_cast<SpinConfig>(x));
    return ext;
}

double IsingProblem::site_weight(int j) const {
    check_site(j, n_sites_);
    double w = 0.0;
    for (const auto& f : fields_)
        if (f.site == j) w += std::abs(f.coupling);
    for (const auto& p : pairs_)
        if (p.i == j || p.j == j) w += std::abs(p.coupling);
    for (const auto& m : multis_)
        if (std::find(m.sites.begin(), m.sites.end(), j) != m.sites.end())
            w += std::abs(m.coupling);
    return w;
}

double IsingProblem::local_energy(int j, SpinConfig x) const {
    check_site(j, n_sites_);
    double e = 0.0;
    for (const auto& f : fields_)
        if (f.site == j) e -= f.coupling * spin_value(x, f.site);
    for (const auto& p : pairs_)
        if (p.i == j || p.j == j) e -= p.coupling * spin_value(x, p.i) * spin_value(x, p.j);
    for (const auto& m : multis_)
        if (std::find(m.sites.begin(), m.sites.end(), j) != m.sites.end()) {
            int prod = 1;
            for (int s : m.sites) prod *= spin_value(x, s);
            e -= m.coupling * prod;
        }
    return e;
}

double IsingProblem::max_local_energy() const {
    if (n_sites_ > max_enumeration_sites)
        throw std::length_error("IsingProblem: enumeration requested above the 2^20 cap");
    const std::size_t dim = std::size_t{1} << n_sites_;
    double p = 0.0;
    for (int j = 0; j < n_sites_; ++j)
        for (std::size_t x = 0; x < dim; ++x)
            p = std::max(p, std::abs(local_energy(j, static_cast<SpinConfig>(x))));
    return p;
}

IsingProblem generate_spin_glass(const SpinGlassSpec& spec) {
    if (spec.width < 1 || spec.height < 1)
        throw std::invalid_argument("generate_spin_glass: lattice dimensions must be positive");
    const int n = spec.width * spec.height;
    if (n > 32) throw std::invalid_argument("generate_spin_glass: more than 32 sites");

    Rng rng(spec.seed, /*stream=*/0);
    std::vector<PairTerm> pairs;
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
            const int here = y * spec.width + x;
            if (x + 1 < spec.width) pairs.push_back({here, here + 1, rng.uniform(-1.0, 1.0)});
            if (y + 1 < spec.height)
                pairs.push_back({here, here + spec.width, rng.uniform(-1.0, 1.0)});
        }
    std::vector<FieldTerm> fields;
    if (spec.field != 0.0)
        for (int i = 0; i < n; ++i) fields.push_back({i, spec.field});
    return IsingProblem(n, std::move(fields), std::move(pairs));
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string serialize_problem(const IsingProblem& p) {
    std::ostringstream out;
    out << p.n_sites() << "\n";
    for (const auto& f : p.fields()) out << "F " << f.site << " " << format_double(f.coupling) << "\n";
    for (const auto& t : p.pairs())
        out << "P " << t.i << " " << t.j << " " << format_double(t.coupling) << "\n";
    for (const auto& m : p.multis()) {
        out << "K " << m.sites.size();
        for (int s : m.sites) out << " " << s;
        out << " " << format_double(m.coupling) << "\n";
    }
    return out.str();
}

IsingProblem parse_problem(const std::string& text) {
    std::istringstream in(text);
    int n = 0;
    if (!(in >> n)) throw std::invalid_argument("parse_problem: missing site count");
    std::vector<FieldTerm> fields;
    std::vector<PairTerm> pairs;
    std::vector<MultiTerm> multis;
    std::string tag;
    while (in >> tag) {
        if (tag == "F") {
            FieldTerm f{};
            if (!(in >> f.site >> f.coupling)) throw std::invalid_argument("parse_problem: bad F line");
            fields.push_back(f);
        } else if (tag == "P") {
            PairTerm p{};
            if (!(in >> p.i >> p.j >> p.coupling)) throw std::invalid_argument("parse_problem: bad P line");
            pairs.push_back(p);
        } else if (tag == "K") {
            std::size_t k = 0;
            if (!(in >> k) || k < 3) throw std::invalid_argument("parse_problem: bad K arity");
            MultiTerm m;
            m.sites.resize(k);
            for (auto& s : m.sites)
                if (!(in >> s)) throw std::invalid_argument("parse_problem: bad K line");
            if (!(in >> m.coupling)) throw std::invalid_argument("parse_problem: bad K coupling");
            multis.push_back(std::move(m));
        } else {
            throw std::invalid_argument("parse_problem: unknown record tag '" + tag + "'");
        }
    }
    return IsingProblem(n, std::move(fields), std::move(pairs), std::move(multis));
}

}  // namespace anneal
