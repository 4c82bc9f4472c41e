#ifndef RELULIM_REGIONS_HPP
#define RELULIM_REGIONS_HPP

#include "relulim/eval.hpp"
#include "relulim/lp.hpp"
#include "relulim/types.hpp"

namespace relulim {

/// Interior slack used to certify a cell as nonempty.
inline constexpr double kInteriorSlack = 1e-9;

/// Desk-scale guardrails for exact enumeration.
inline constexpr int kMaxEnumDim = 3;
inline constexpr int kMaxEnumWidth = 8;
inline constexpr int kMaxEnumDepth = 6;

/// Activation domain as a constraint list over the input cube.
struct Polyhedron {
    std::vector<HalfSpace> constraints;
};

/// One activation domain with nonempty interior: its pattern, the
/// certifying polyhedron, the affine piece on it and an interior witness.
struct RegionCell {
    ActivationPattern pattern;
    Polyhedron polyhedron;
    AffinePiece piece;
    VectorXd witness;
    double slack = 0.0;
};

/// Enumerate the depth-n activation domains with nonempty interior,
/// branching layer by layer and pruning infeasible prefixes by LP.
/// Cells come back sorted by pattern, lexicographic.
std::vector<RegionCell> enumerate_regions(const Network& net, int depth);
std::vector<RegionCell> enumerate_regions(const Network& net);

/// Upper bound on one-layer domains with nonempty interior:
/// sum_{k=0}^{min(d,m)} C(m, k).
long long zaslavsky_bound(int m, int d);

struct PartitionReport {
    long long matched = 0;
    long long boundary = 0;
    long long orphaned = 0;
    bool ok() const { return orphaned == 0; }
};

/// Classify samples against the cell list by their forward pattern.
/// Samples with some pre-activation within 1e-9 of zero count as boundary.
PartitionReport verify_partition(const std::vector<RegionCell>& cells, const Network& net,
                                 const std::vector<VectorXd>& samples);

/// Structural nestedness: each depth-(k+1) cell's pattern prefix is a
/// depth-k cell whose constraint list prefixes the deeper cell's, and the
/// deeper witness satisfies the shallower polyhedron.
bool check_nested(const Network& net);

}  // namespace relulim

#endif
