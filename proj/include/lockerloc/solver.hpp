#ifndef LOCKERLOC_SOLVER_HPP
#define LOCKERLOC_SOLVER_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lockerloc/choice.hpp"
#include "lockerloc/instance.hpp"

namespace lockerloc {

enum class BranchRule { max_demand_weighted_attraction, lowest_index };
enum class PrimalHeuristic { greedy_local_search, none };
enum class SolveStatus { optimal, gap_limit, time_limit, node_limit };

const char* to_string(SolveStatus status);

struct SolveConfig {
    // Relative optimality tolerance; 0 forces a proof of exact optimality.
    double gap_tolerance = 1e-6;
    double time_limit_seconds = 0.0; // <= 0: no limit
    long long node_limit = 0;        // <= 0: no limit
    BranchRule branching_rule = BranchRule::max_demand_weighted_attraction;
    PrimalHeuristic heuristic = PrimalHeuristic::greedy_local_search;
    int threads = 1;

    void validate() const;
};

struct SolveResult {
    LocationDecision location;
    RestrictionDecision restriction;
    double profit = 0.0;
    double revenue = 0.0;
    double facility_cost = 0.0;
    double upper_bound = 0.0;
    double gap = 0.0; // |bound - profit| / |bound|
    long long nodes_explored = 0;
    double wall_time_seconds = 0.0;
    SolveStatus status = SolveStatus::optimal;
};

// Partial location decision inside the search tree; the three sets partition
// the lockers.
struct NodeState {
    std::vector<int> committed_open;
    std::vector<int> committed_closed;
    std::vector<int> free_lockers;
};

// Best feasible offer set for one zone among `available`: the antichain
// W maximizing its attraction sum. Feasibility is the window condition
// max(W) <= (1+gamma) * min(W), so the optimum is a contiguous run of the
// available attractions in sorted order and is found by a linear scan.
// Ties go to the window with the smallest starting attraction, then lowest
// ids. Returns the chosen locker ids (ascending) and their attraction sum.
std::pair<std::vector<int>, double> best_restriction(const Instance& instance, int zone,
                                                     std::span<const int> available);

// Optimistic completion value of a node: every zone gets its best window over
// committed-open plus free lockers, while only committed-open lockers pay
// their cost. Upper-bounds the profit of every completion; exact when no
// locker is free.
double node_bound(const Instance& instance, const std::vector<double>& costs,
                  const NodeState& node);

// Exact best-first branch and bound over the location variables. With
// threads = 1 the search is fully deterministic (node count included).
SolveResult solve_bb(const Instance& instance, const std::vector<double>& costs,
                     const SolveConfig& config = {});

// Ground-truth enumerator over all 2^n location vectors; refuses n > 22.
SolveResult solve_bruteforce(const Instance& instance, const std::vector<double>& costs);

// Greedy add to a local optimum, then first-improvement add/drop/swap passes.
LocationDecision greedy_local_search(const Instance& instance,
                                     const std::vector<double>& costs);

// Best restriction rows for a fixed open set; the optimal y given x.
RestrictionDecision optimal_restriction(const Instance& instance,
                                        const LocationDecision& location);

// gap = |bound - value| / |bound|, with the 0/0 case defined as 0.
double relative_gap(double bound, double value);

} // namespace lockerloc

#endif
