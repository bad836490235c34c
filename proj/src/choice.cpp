#include "lockerloc/choice.hpp"

#include <algorithm>
#include <sstream>

#include "lockerloc/errors.hpp"

namespace lockerloc {

namespace {

void check_zone(const Instance& instance, int zone) {
    if (zone < 0 || zone >= instance.zone_count())
        throw contract_error("zone index out of range");
}

void check_locker(const Instance& instance, int locker) {
    if (locker < 0 || locker >= instance.locker_count())
        throw contract_error("locker index out of range");
}

// Offered sets are antichains iff max attraction <= (1+gamma) * min attraction.
// On violation returns the offending (dominating, dominated) pair.
struct AntichainCheck {
    bool ok = true;
    int dominating = -1;
    int dominated = -1;
};

AntichainCheck check_antichain(const Instance& instance, int zone, const std::vector<int>& allowed) {
    if (allowed.size() < 2) return {};
    int arg_min = allowed[0];
    int arg_max = allowed[0];
    for (int j : allowed) {
        if (instance.attraction(zone, j) < instance.attraction(zone, arg_min)) arg_min = j;
        if (instance.attraction(zone, j) > instance.attraction(zone, arg_max)) arg_max = j;
    }
    const double lo = instance.attraction(zone, arg_min);
    const double hi = instance.attraction(zone, arg_max);
    if (hi > (1.0 + instance.gamma()) * lo) return {false, arg_max, arg_min};
    return {};
}

} // namespace

int LocationDecision::open_count() const {
    int count = 0;
    for (std::uint8_t v : open) count += v != 0;
    return count;
}

std::vector<int> LocationDecision::open_set() const {
    std::vector<int> out;
    for (int j = 0; j < locker_count(); ++j)
        if (open[j]) out.push_back(j);
    return out;
}

LocationDecision LocationDecision::from_set(int n, const std::vector<int>& open_lockers) {
    LocationDecision d = none(n);
    for (int j : open_lockers) d.open.at(j) = 1;
    return d;
}

std::vector<int> RestrictionDecision::allowed_set(int zone) const {
    std::vector<int> out;
    for (int j = 0; j < lockers; ++j)
        if (is_allowed(zone, j)) out.push_back(j);
    return out;
}

RestrictionDecision RestrictionDecision::none(int m, int n) {
    return RestrictionDecision{m, n, std::vector<std::uint8_t>(static_cast<std::size_t>(m) * n, 0)};
}

RestrictionDecision RestrictionDecision::from_rows(int m, int n,
                                                   const std::vector<std::vector<int>>& row_sets) {
    RestrictionDecision d = none(m, n);
    for (int i = 0; i < static_cast<int>(row_sets.size()); ++i)
        for (int j : row_sets[i]) d.set_allowed(i, j, true);
    return d;
}

std::vector<int> dominated_set(const Instance& instance, int zone, int locker,
                               double tie_tolerance) {
    check_zone(instance, zone);
    check_locker(instance, locker);
    std::vector<int> out;
    const double threshold = (1.0 + instance.gamma()) * (1.0 + tie_tolerance);
    const double a_j = instance.attraction(zone, locker);
    for (int k = 0; k < instance.locker_count(); ++k) {
        if (k == locker) continue;
        if (a_j > threshold * instance.attraction(zone, k)) out.push_back(k);
    }
    return out;
}

std::vector<int> nondominated_set(const Instance& instance, int zone,
                                  const std::vector<int>& offered, double tie_tolerance) {
    check_zone(instance, zone);
    for (int j : offered) check_locker(instance, j);
    if (offered.empty()) return {};
    double max_attraction = 0.0;
    for (int j : offered) max_attraction = std::max(max_attraction, instance.attraction(zone, j));
    const double threshold = (1.0 + instance.gamma()) * (1.0 + tie_tolerance);
    std::vector<int> out;
    for (int j : offered)
        if (threshold * instance.attraction(zone, j) >= max_attraction) out.push_back(j);
    std::sort(out.begin(), out.end());
    return out;
}

ChoiceDistribution choice_probabilities(const Instance& instance,
                                        const RestrictionDecision& restriction) {
    const int m = instance.zone_count();
    const int n = instance.locker_count();
    if (restriction.zones != m || restriction.lockers != n)
        throw contract_error("restriction dimensions do not match instance");

    ChoiceDistribution dist;
    dist.zones = m;
    dist.lockers = n;
    dist.locker_prob.assign(static_cast<std::size_t>(m) * n, 0.0);
    dist.outside_prob.assign(m, 0.0);

    for (int i = 0; i < m; ++i) {
        const std::vector<int> allowed = restriction.allowed_set(i);
        const AntichainCheck check = check_antichain(instance, i, allowed);
        if (!check.ok) {
            std::ostringstream msg;
            msg << "restriction row " << i << " is not an antichain: locker " << check.dominating
                << " dominates locker " << check.dominated;
            throw contract_error(msg.str());
        }
        double denom = instance.outside_attraction(i);
        for (int j : allowed) denom += instance.attraction(i, j);
        for (int j : allowed)
            dist.locker_prob[static_cast<std::size_t>(i) * n + j] =
                instance.attraction(i, j) / denom;
        dist.outside_prob[i] = instance.outside_attraction(i) / denom;
    }
    return dist;
}

ProfitBreakdown profit(const Instance& instance, const LocationDecision& location,
                       const RestrictionDecision& restriction, const std::vector<double>& costs) {
    const int m = instance.zone_count();
    const int n = instance.locker_count();
    if (location.locker_count() != n)
        throw contract_error("location dimensions do not match instance");
    if (restriction.zones != m || restriction.lockers != n)
        throw contract_error("restriction dimensions do not match instance");
    if (static_cast<int>(costs.size()) != n)
        throw contract_error("cost vector length does not match locker count");

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (restriction.is_allowed(i, j) && !location.is_open(j)) {
                std::ostringstream msg;
                msg << "restriction allows closed locker " << j << " for zone " << i;
                throw contract_error(msg.str());
            }

    ProfitBreakdown breakdown;
    breakdown.per_zone_revenue.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j)
            if (restriction.is_allowed(i, j)) sum += instance.attraction(i, j);
        const double denom = sum + instance.outside_attraction(i);
        const double zone_revenue = instance.demand(i) * sum / denom;
        breakdown.per_zone_revenue[i] = zone_revenue;
        breakdown.revenue += zone_revenue;
        breakdown.lost_demand += instance.demand(i) * instance.outside_attraction(i) / denom;
    }
    for (int j = 0; j < n; ++j)
        if (location.is_open(j)) breakdown.facility_cost += costs[j];
    breakdown.profit = breakdown.revenue - breakdown.facility_cost;
    return breakdown;
}

} // namespace lockerloc
