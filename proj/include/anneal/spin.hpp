#ifndef ANNEAL_SPIN_HPP
#define ANNEAL_SPIN_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace anneal {

/// A classical Ising configuration of up to 32 spins, packed into an integer.
/// Bit i of the word encodes spin i: bit value 0 means s_i = +1, bit value 1
/// means s_i = -1.  Basis-state index and configuration are the same object.
using SpinConfig = std::uint32_t;

/// Spin value s_i in {+1, -1} of site i in configuration x.
inline int spin_value(SpinConfig x, int i) { return 1 - 2 * static_cast<int>((x >> i) & 1u); }

/// One-site (longitudinal field) term  -J * s_i.
struct FieldTerm {
    int site;
    double coupling;
};

/// Two-site term  -J * s_i * s_j.
struct PairTerm {
    int i;
    int j;
    double coupling;
};

/// k-site term  -J * s_{i1} * ... * s_{ik}  (k >= 3).
struct MultiTerm {
    std::vector<int> sites;
    double coupling;
};

/// Result of exhaustive enumeration of a cost function.
struct Extremes {
    double e_min = 0.0;
    double e_max = 0.0;
    std::vector<SpinConfig> ground_states;  ///< all configurations attaining e_min
};

/// A classical Ising cost function
///
///   E(s) = - sum_i J_i s_i  -  sum_(ij) J_ij s_i s_j  -  sum_k J_k prod s,
///
/// i.e. positive couplings favour aligned spins / positive fields favour s=+1.
/// Sites are indexed 0..n_sites-1.  The class is immutable after construction.
class IsingProblem {
public:
    /// Largest site count for which exhaustive enumeration (energy_table,
    /// enumerate_extremes) is permitted.
    static constexpr int max_enumeration_sites = 20;

    IsingProblem(int n_sites,
                 std::vector<FieldTerm> fields,
                 std::vector<PairTerm> pairs,
                 std::vector<MultiTerm> multis = {});

    int n_sites() const { return n_sites_; }
    const std::vector<FieldTerm>& fields() const { return fields_; }
    const std::vector<PairTerm>& pairs() const { return pairs_; }
    const std::vector<MultiTerm>& multis() const { return multis_; }

    /// Cost of one configuration, O(#terms).
    double energy(SpinConfig x) const;

    /// Dense table E(x) for all 2^N configurations.  Throws std::length_error
    /// if n_sites exceeds max_enumeration_sites.
    std::vector<double> energy_table() const;

    /// Exhaustive min/max and the full ground-state set.
    Extremes enumerate_extremes() const;

    /// Sum of |J| over the terms that involve site j; used e.g. as the scale
    /// "H_j" of the local cost seen by a single spin.
    double site_weight(int j) const;

    /// Value of the local cost H_j(x): the sum of the terms of E that involve
    /// site j, evaluated at configuration x.  Terms shared between sites are
    /// counted in full for every site they touch (no 1/2 factors), so in
    /// general sum_j H_j(x) != E(x).
    double local_energy(int j, SpinConfig x) const;

    /// Maximum of |H_j(x)| over sites and configurations (the constant "p" of
    /// the classical-to-quantum mapping).  Requires enumerability.
    double max_local_energy() const;

private:
    int n_sites_;
    std::vector<FieldTerm> fields_;
    std::vector<PairTerm> pairs_;
    std::vector<MultiTerm> multis_;
};

/// Parameters of a random nearest-neighbour spin glass on an open
/// width x height rectangle.  Couplings are drawn i.i.d. uniform on
/// [-1, 1]; every site gets the same longitudinal field h.
struct SpinGlassSpec {
    int width = 3;
    int height = 3;
    double field = 0.0;
    std::uint64_t seed = 0;
};

/// Deterministic generator: the same spec always yields the same problem.
/// Site (x, y) has index y*width + x; bonds are emitted row-major, right bond
/// before down bond, and consume random numbers in that fixed order.
IsingProblem generate_spin_glass(const SpinGlassSpec& spec);

/// Plain-text serialization.  Line 1 holds the site count N; then one line
/// per term: "F i J", "P i j J", "K k i1 ... ik J".  Round-trips exactly.
std::string serialize_problem(const IsingProblem& p);
IsingProblem parse_problem(const std::string& text);

}  // namespace anneal

#endif
