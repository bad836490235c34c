#ifndef LOCKERLOC_CHOICE_HPP
#define LOCKERLOC_CHOICE_HPP

#include <cstdint>
#include <vector>

#include "lockerloc/instance.hpp"

namespace lockerloc {

// Which lockers are open (x_j).
struct LocationDecision {
    std::vector<std::uint8_t> open;

    int locker_count() const { return static_cast<int>(open.size()); }
    bool is_open(int j) const { return open[j] != 0; }
    int open_count() const;
    std::vector<int> open_set() const;

    static LocationDecision none(int n) { return LocationDecision{std::vector<std::uint8_t>(n, 0)}; }
    static LocationDecision from_set(int n, const std::vector<int>& open_lockers);
};

// Which open lockers each zone is offered (y_ij). Every row must be an
// antichain under the zone's dominance relation: no offered locker may
// dominate another offered locker.
struct RestrictionDecision {
    int zones = 0;
    int lockers = 0;
    std::vector<std::uint8_t> allowed; // row-major zones x lockers

    bool is_allowed(int i, int j) const {
        return allowed[static_cast<std::size_t>(i) * lockers + j] != 0;
    }
    void set_allowed(int i, int j, bool value) {
        allowed[static_cast<std::size_t>(i) * lockers + j] = value ? 1 : 0;
    }
    std::vector<int> allowed_set(int zone) const;

    static RestrictionDecision none(int m, int n);
    // Row i = row_sets[i]; all other entries zero.
    static RestrictionDecision from_rows(int m, int n, const std::vector<std::vector<int>>& row_sets);
};

// Per-zone choice probabilities; row i sums to one with the outside option.
struct ChoiceDistribution {
    int zones = 0;
    int lockers = 0;
    std::vector<double> locker_prob; // row-major zones x lockers
    std::vector<double> outside_prob;

    double p(int i, int j) const {
        return locker_prob[static_cast<std::size_t>(i) * lockers + j];
    }
    double p_outside(int i) const { return outside_prob[i]; }
};

struct ProfitBreakdown {
    double revenue = 0.0;
    double facility_cost = 0.0;
    double profit = 0.0;
    double lost_demand = 0.0;
    std::vector<double> per_zone_revenue;
};

// Omega_ij: lockers k with a_ij > (1+gamma) * a_ik, i.e. strictly dominated by
// locker j for zone i. Empty when gamma is infinite. tie_tolerance relaxes the
// comparison to a_ij > (1+gamma) * (1+tie_tolerance) * a_ik for noisy data;
// the default 0 is the exact rule.
std::vector<int> dominated_set(const Instance& instance, int zone, int locker,
                               double tie_tolerance = 0.0);

// c_i(S): members of the offered set not dominated by any other offered
// member. Nonempty whenever the offered set is nonempty.
std::vector<int> nondominated_set(const Instance& instance, int zone,
                                  const std::vector<int>& offered,
                                  double tie_tolerance = 0.0);

// Proportional probabilities over each zone's allowed set plus the outside
// option. Throws contract_error naming the zone and offending pair if some
// row is not an antichain.
ChoiceDistribution choice_probabilities(const Instance& instance,
                                        const RestrictionDecision& restriction);

// Revenue, facility cost, profit and lost demand of a (location, restriction)
// pair. Throws contract_error if some y_ij = 1 with x_j = 0.
ProfitBreakdown profit(const Instance& instance, const LocationDecision& location,
                       const RestrictionDecision& restriction,
                       const std::vector<double>& costs);

} // namespace lockerloc

#endif
