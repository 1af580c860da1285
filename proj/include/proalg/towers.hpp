#pragma once

// Builders for the canonical towers, the cylinder-set measure, and the
// sequence-space metric.

#include "proalg/prolim.hpp"
#include "proalg/rational.hpp"

namespace proalg {

// level k is the (k+1)-fold product of X; bonds forget the last factor.
// Declared steps: chi(X) and [X] (the chi system only when chi(X) != 0).
TowerPtr build_power_tower(const VarietyModelPtr& x);

// Level n carries the strata of X with class cls(s) * L^(n*d); bonds are
// the identity on stratum ids with fiber class L^d.  Requires the base to
// be flagged smooth of dimension d; every stratum class must be a plus or
// minus monomial (the smoothness proxy).
TowerPtr build_arc_tower(const VarietyModelPtr& x, int d);

// level n has k^(n+1) point strata; bonds forget the last symbol.
TowerPtr build_sequence_tower(std::shared_ptr<const AtomTable> table, int k);

// level n+1 = level n x fibers[n]; finite depth = fibers.size().
// Declared steps gamma_n = [F_n]; chi steps only when every chi(F_n) != 0.
TowerPtr build_locally_trivial_tower(const VarietyModelPtr& base,
                                     const std::vector<VarietyModelPtr>& fibers);

// Gamma(1_C) / gamma-steps product, for a tower with certified gamma
// steps.  Throws on towers without a declared gamma multiplier system.
LocalizedClass motivic_measure(const TowerPtr& tw, int n, const ConstructibleSet& c);

struct MetricValue {
    Rational partial;
    Rational tail_bound;
};

// d_k on prefixes of equal length m: partial = sum |a_i - b_i| / k^i,
// tail_bound = (k-1) * sum_{i >= m} k^-i = k^(1-m)
MetricValue sequence_metric(int k, const std::vector<int>& a, const std::vector<int>& b);

}  // namespace proalg
