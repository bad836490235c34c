#include "lockerloc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <mutex>
#include <optional>
#include <queue>
#include <sstream>
#include <thread>

#include "lockerloc/errors.hpp"

namespace lockerloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Mask {
    std::vector<std::uint64_t> words;

    Mask() = default;
    explicit Mask(int n) : words(static_cast<std::size_t>((n + 63) / 64), 0) {}

    bool test(int j) const { return (words[j >> 6] >> (j & 63)) & 1u; }
    void set(int j) { words[j >> 6] |= std::uint64_t(1) << (j & 63); }
    void unite(const Mask& other) {
        for (std::size_t w = 0; w < words.size(); ++w) words[w] |= other.words[w];
    }
};

// Per-zone lockers sorted by (attraction, id) ascending; all window scans walk
// this order so results and floating-point sums are reproducible.
struct ZoneOrder {
    std::vector<double> attraction;
    std::vector<int> id;
};

struct Context {
    const Instance* instance = nullptr;
    const std::vector<double>* costs = nullptr;
    int m = 0;
    int n = 0;
    double window_factor = 1.0; // 1 + gamma, may be infinite
    std::vector<ZoneOrder> zones;
    std::vector<int> branch_order;
    std::vector<Mask> free_suffix; // free_suffix[d] = lockers still undecided at depth d
};

Context make_context(const Instance& instance, const std::vector<double>& costs,
                     BranchRule rule) {
    if (static_cast<int>(costs.size()) != instance.locker_count())
        throw contract_error("cost vector length does not match locker count");
    for (double f : costs)
        if (!(f >= 0.0) || !std::isfinite(f))
            throw validation_error("cost must be nonnegative");

    Context ctx;
    ctx.instance = &instance;
    ctx.costs = &costs;
    ctx.m = instance.zone_count();
    ctx.n = instance.locker_count();
    ctx.window_factor = 1.0 + instance.gamma();

    ctx.zones.resize(ctx.m);
    for (int i = 0; i < ctx.m; ++i) {
        std::vector<std::pair<double, int>> order;
        order.reserve(ctx.n);
        for (int j = 0; j < ctx.n; ++j) order.emplace_back(instance.attraction(i, j), j);
        std::sort(order.begin(), order.end());
        ctx.zones[i].attraction.reserve(ctx.n);
        ctx.zones[i].id.reserve(ctx.n);
        for (const auto& [a, j] : order) {
            ctx.zones[i].attraction.push_back(a);
            ctx.zones[i].id.push_back(j);
        }
    }

    ctx.branch_order.resize(ctx.n);
    for (int j = 0; j < ctx.n; ++j) ctx.branch_order[j] = j;
    if (rule == BranchRule::max_demand_weighted_attraction) {
        std::vector<double> score(ctx.n, 0.0);
        for (int i = 0; i < ctx.m; ++i)
            for (int j = 0; j < ctx.n; ++j) score[j] += instance.demand(i) * instance.attraction(i, j);
        std::sort(ctx.branch_order.begin(), ctx.branch_order.end(), [&](int a, int b) {
            if (score[a] != score[b]) return score[a] > score[b];
            return a < b;
        });
    }

    ctx.free_suffix.assign(ctx.n + 1, Mask(ctx.n));
    for (int d = ctx.n - 1; d >= 0; --d) {
        ctx.free_suffix[d] = ctx.free_suffix[d + 1];
        ctx.free_suffix[d].set(ctx.branch_order[d]);
    }
    return ctx;
}

struct WindowResult {
    double sum = 0.0;
    int begin = 0; // positions into the filtered scan, [begin, end)
    int end = 0;
};

// Best feasible window over the filtered ascending attractions in `values`.
// A two-pointer pass locates candidate maximal windows; the winning window's
// sum is recomputed by direct ascending summation so the value does not carry
// running-sum drift. First strict improvement wins, which implements the
// smallest-start-attraction (then lowest id) tie-break.
WindowResult best_window(const std::vector<double>& values, double factor) {
    WindowResult best;
    const int k = static_cast<int>(values.size());
    double running = 0.0;
    int e = 0;
    for (int s = 0; s < k; ++s) {
        if (e < s) {
            e = s;
            running = 0.0;
        }
        const double cap = factor * values[s];
        while (e < k && values[e] <= cap) running += values[e++];
        if (running > best.sum) {
            best.sum = running;
            best.begin = s;
            best.end = e;
        }
        running -= values[s];
    }
    if (best.end > best.begin) {
        double exact = 0.0;
        for (int t = best.begin; t < best.end; ++t) exact += values[t];
        best.sum = exact;
    }
    return best;
}

struct Scratch {
    std::vector<double> values;
    std::vector<int> ids;
};

// Revenue of the best per-zone windows over an availability mask.
double revenue_over(const Context& ctx, const Mask& available, Scratch& scratch) {
    double total = 0.0;
    for (int i = 0; i < ctx.m; ++i) {
        const ZoneOrder& zone = ctx.zones[i];
        scratch.values.clear();
        for (int p = 0; p < ctx.n; ++p)
            if (available.test(zone.id[p])) scratch.values.push_back(zone.attraction[p]);
        const double a_star = best_window(scratch.values, ctx.window_factor).sum;
        if (a_star > 0.0)
            total += ctx.instance->demand(i) * a_star /
                     (a_star + ctx.instance->outside_attraction(i));
    }
    return total;
}

double cost_of(const Context& ctx, const Mask& open) {
    double total = 0.0;
    for (int j = 0; j < ctx.n; ++j)
        if (open.test(j)) total += (*ctx.costs)[j];
    return total;
}

// Exact profit of a complete location decision (free lockers closed).
double exact_value(const Context& ctx, const Mask& open, Scratch& scratch) {
    return revenue_over(ctx, open, scratch) - cost_of(ctx, open);
}

struct HeapNode {
    double bound = 0.0;
    long long seq = 0;
    int depth = 0;
    double committed_cost = 0.0;
    Mask open;
};

struct HeapCompare {
    bool operator()(const HeapNode& a, const HeapNode& b) const {
        if (a.bound != b.bound) return a.bound < b.bound; // larger bound first
        return a.seq > b.seq;                             // then FIFO
    }
};

struct SharedSearch {
    std::mutex mutex;
    std::condition_variable cv;
    std::priority_queue<HeapNode, std::vector<HeapNode>, HeapCompare> heap;
    std::vector<double> inflight; // per worker; NaN when idle
    double incumbent_value = 0.0;
    Mask incumbent_open;
    // Largest bound of any subtree discarded by tolerance pruning. Such
    // subtrees may hold values above the incumbent (within the tolerance), so
    // every reported global bound has to cover them.
    double pruned_bound_max = -kInf;
    long long nodes_explored = 0;
    long long seq_counter = 0;
    bool stopped = false;
    SolveStatus stop_status = SolveStatus::optimal;
    double final_bound = 0.0;
};

bool prunable(double bound, double incumbent, double tol) {
    return bound <= incumbent + tol * std::abs(bound);
}

double global_bound_locked(const SharedSearch& shared, double top_bound) {
    double bound = std::max({shared.incumbent_value, top_bound, shared.pruned_bound_max});
    for (double b : shared.inflight)
        if (!std::isnan(b)) bound = std::max(bound, b);
    return bound;
}

void worker_loop(const Context& ctx, const SolveConfig& config, Clock::time_point start,
                 SharedSearch& shared, int worker_id) {
    Scratch scratch;
    std::unique_lock<std::mutex> lock(shared.mutex);
    while (true) {
        if (shared.stopped) return;

        if (shared.heap.empty()) {
            bool any_busy = false;
            for (double b : shared.inflight)
                if (!std::isnan(b)) any_busy = true;
            if (!any_busy) {
                // Frontier exhausted. Proves optimality only when nothing
                // above the incumbent was tolerance-pruned along the way.
                shared.stopped = true;
                shared.final_bound =
                    std::max(shared.incumbent_value, shared.pruned_bound_max);
                shared.stop_status =
                    relative_gap(shared.final_bound, shared.incumbent_value) <= 1e-9
                        ? SolveStatus::optimal
                        : SolveStatus::gap_limit;
                shared.cv.notify_all();
                return;
            }
            // wait_until on the system clock: a plain wait could sleep through
            // the time limit, and this maps to the plain timedwait that
            // sanitizers instrument.
            shared.cv.wait_until(lock,
                                 std::chrono::system_clock::now() + std::chrono::milliseconds(50));
            continue;
        }

        HeapNode node = shared.heap.top();
        shared.heap.pop();

        // The popped node carries the largest frontier bound, so the global
        // bound is known here; every stopping rule is checked before the node
        // is either discarded or expanded.
        const double bound_now = global_bound_locked(shared, node.bound);
        if (bound_now - shared.incumbent_value <= config.gap_tolerance * std::abs(bound_now)) {
            shared.stopped = true;
            shared.stop_status = relative_gap(bound_now, shared.incumbent_value) <= 1e-9
                                     ? SolveStatus::optimal
                                     : SolveStatus::gap_limit;
            shared.final_bound = bound_now;
            shared.cv.notify_all();
            return;
        }
        if (config.time_limit_seconds > 0.0 && seconds_since(start) >= config.time_limit_seconds) {
            shared.stopped = true;
            shared.stop_status = SolveStatus::time_limit;
            shared.final_bound = bound_now;
            shared.cv.notify_all();
            return;
        }
        if (config.node_limit > 0 && shared.nodes_explored >= config.node_limit) {
            shared.stopped = true;
            shared.stop_status = SolveStatus::node_limit;
            shared.final_bound = bound_now;
            shared.cv.notify_all();
            return;
        }
        if (prunable(node.bound, shared.incumbent_value, config.gap_tolerance)) {
            shared.pruned_bound_max = std::max(shared.pruned_bound_max, node.bound);
            continue;
        }

        ++shared.nodes_explored;
        shared.inflight[worker_id] = node.bound;
        lock.unlock();

        // Completion: close every free locker and take the exact profit.
        const double completion = exact_value(ctx, node.open, scratch);

        double closed_bound = -kInf;
        double open_bound = -kInf;
        Mask open_child_mask;
        if (node.depth < ctx.n) {
            const int branch_locker = ctx.branch_order[node.depth];

            // Closing the branch locker shrinks availability; recompute.
            Mask closed_avail = node.open;
            closed_avail.unite(ctx.free_suffix[node.depth + 1]);
            closed_bound = revenue_over(ctx, closed_avail, scratch) - node.committed_cost;

            // Opening it keeps availability identical, only its cost is new.
            open_bound = node.bound - (*ctx.costs)[branch_locker];
            open_child_mask = node.open;
            open_child_mask.set(branch_locker);
        }

        lock.lock();
        if (completion > shared.incumbent_value) {
            shared.incumbent_value = completion;
            shared.incumbent_open = node.open;
        }
        if (node.depth < ctx.n) {
            const int branch_locker = ctx.branch_order[node.depth];
            if (!prunable(closed_bound, shared.incumbent_value, config.gap_tolerance)) {
                HeapNode child;
                child.bound = closed_bound;
                child.seq = ++shared.seq_counter;
                child.depth = node.depth + 1;
                child.committed_cost = node.committed_cost;
                child.open = node.open;
                shared.heap.push(std::move(child));
            } else {
                shared.pruned_bound_max = std::max(shared.pruned_bound_max, closed_bound);
            }
            if (!prunable(open_bound, shared.incumbent_value, config.gap_tolerance)) {
                HeapNode child;
                child.bound = open_bound;
                child.seq = ++shared.seq_counter;
                child.depth = node.depth + 1;
                child.committed_cost = node.committed_cost + (*ctx.costs)[branch_locker];
                child.open = std::move(open_child_mask);
                shared.heap.push(std::move(child));
            } else {
                shared.pruned_bound_max = std::max(shared.pruned_bound_max, open_bound);
            }
        }
        shared.inflight[worker_id] = std::numeric_limits<double>::quiet_NaN();
        shared.cv.notify_all();
    }
}

SolveResult assemble_result(const Instance& instance, const std::vector<double>& costs,
                            const Mask& open_mask, double upper_bound, SolveStatus status,
                            long long nodes, double wall_time) {
    const int n = instance.locker_count();
    LocationDecision location = LocationDecision::none(n);
    for (int j = 0; j < n; ++j)
        if (open_mask.test(j)) location.open[j] = 1;
    RestrictionDecision restriction = optimal_restriction(instance, location);
    const ProfitBreakdown breakdown = profit(instance, location, restriction, costs);

    SolveResult result;
    result.location = std::move(location);
    result.restriction = std::move(restriction);
    result.profit = breakdown.profit;
    result.revenue = breakdown.revenue;
    result.facility_cost = breakdown.facility_cost;
    result.upper_bound = std::max(upper_bound, result.profit);
    result.gap = relative_gap(result.upper_bound, result.profit);
    result.nodes_explored = nodes;
    result.wall_time_seconds = wall_time;
    result.status = status;
    return result;
}

} // namespace

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::gap_limit: return "gap_limit";
        case SolveStatus::time_limit: return "time_limit";
        case SolveStatus::node_limit: return "node_limit";
    }
    return "?";
}

void SolveConfig::validate() const {
    if (!(gap_tolerance >= 0.0) || !std::isfinite(gap_tolerance))
        throw validation_error("solve config: gap_tolerance must be nonnegative and finite");
    if (threads < 1) throw validation_error("solve config: threads must be >= 1");
}

double relative_gap(double bound, double value) {
    if (bound == value) return 0.0;
    if (bound == 0.0) return kInf;
    return std::abs(bound - value) / std::abs(bound);
}

std::pair<std::vector<int>, double> best_restriction(const Instance& instance, int zone,
                                                     std::span<const int> available) {
    if (zone < 0 || zone >= instance.zone_count())
        throw contract_error("zone index out of range");
    std::vector<std::pair<double, int>> order;
    order.reserve(available.size());
    for (int j : available) {
        if (j < 0 || j >= instance.locker_count())
            throw contract_error("locker index out of range");
        order.emplace_back(instance.attraction(zone, j), j);
    }
    std::sort(order.begin(), order.end());

    std::vector<double> values;
    values.reserve(order.size());
    for (const auto& [a, j] : order) values.push_back(a);
    const WindowResult window = best_window(values, 1.0 + instance.gamma());

    std::vector<int> chosen;
    for (int p = window.begin; p < window.end; ++p) chosen.push_back(order[p].second);
    std::sort(chosen.begin(), chosen.end());
    return {std::move(chosen), window.sum};
}

RestrictionDecision optimal_restriction(const Instance& instance,
                                        const LocationDecision& location) {
    const int m = instance.zone_count();
    const int n = instance.locker_count();
    if (location.locker_count() != n)
        throw contract_error("location dimensions do not match instance");
    const std::vector<int> open = location.open_set();
    RestrictionDecision restriction = RestrictionDecision::none(m, n);
    for (int i = 0; i < m; ++i) {
        const auto [allowed, sum] = best_restriction(instance, i, open);
        (void)sum;
        for (int j : allowed) restriction.set_allowed(i, j, true);
    }
    return restriction;
}

double node_bound(const Instance& instance, const std::vector<double>& costs,
                  const NodeState& node) {
    const int n = instance.locker_count();
    if (static_cast<int>(costs.size()) != n)
        throw contract_error("cost vector length does not match locker count");
    std::vector<int> seen(n, 0);
    auto mark = [&](const std::vector<int>& set) {
        for (int j : set) {
            if (j < 0 || j >= n) throw contract_error("locker index out of range");
            if (seen[j]++) throw contract_error("node state sets are not disjoint");
        }
    };
    mark(node.committed_open);
    mark(node.committed_closed);
    mark(node.free_lockers);
    for (int j = 0; j < n; ++j)
        if (!seen[j]) throw contract_error("node state sets do not cover all lockers");

    std::vector<int> available = node.committed_open;
    available.insert(available.end(), node.free_lockers.begin(), node.free_lockers.end());
    std::sort(available.begin(), available.end());

    double revenue = 0.0;
    for (int i = 0; i < instance.zone_count(); ++i) {
        const auto [allowed, a_star] = best_restriction(instance, i, available);
        (void)allowed;
        if (a_star > 0.0)
            revenue += instance.demand(i) * a_star / (a_star + instance.outside_attraction(i));
    }
    double committed_cost = 0.0;
    for (int j : node.committed_open) committed_cost += costs[j];
    return revenue - committed_cost;
}

namespace {

using Deadline = std::optional<Clock::time_point>;

bool expired(const Deadline& deadline) {
    return deadline && Clock::now() >= *deadline;
}

// First-improvement add / drop / swap passes to a local optimum, in place.
// Stops at the deadline with the current (always feasible) state.
double local_search_passes(const Context& ctx, std::vector<std::uint8_t>& is_open, double value,
                           Scratch& scratch, const Deadline& deadline) {
    const int n = ctx.n;
    auto mask_with = [&](int drop, int add) {
        Mask mask(n);
        for (int t = 0; t < n; ++t)
            if ((is_open[t] && t != drop) || t == add) mask.set(t);
        return mask;
    };
    bool improved = true;
    while (improved && !expired(deadline)) {
        improved = false;
        for (int j = 0; j < n && !improved && !expired(deadline); ++j) {
            if (is_open[j]) continue;
            const double candidate = exact_value(ctx, mask_with(-1, j), scratch);
            if (candidate > value) {
                is_open[j] = 1;
                value = candidate;
                improved = true;
            }
        }
        for (int j = 0; j < n && !improved && !expired(deadline); ++j) {
            if (!is_open[j]) continue;
            const double candidate = exact_value(ctx, mask_with(j, -1), scratch);
            if (candidate > value) {
                is_open[j] = 0;
                value = candidate;
                improved = true;
            }
        }
        for (int j = 0; j < n && !improved && !expired(deadline); ++j) {
            if (!is_open[j]) continue;
            for (int k = 0; k < n && !improved; ++k) {
                if (is_open[k]) continue;
                const double candidate = exact_value(ctx, mask_with(j, k), scratch);
                if (candidate > value) {
                    is_open[j] = 0;
                    is_open[k] = 1;
                    value = candidate;
                    improved = true;
                }
            }
        }
    }
    return value;
}

double value_of(const Context& ctx, const std::vector<std::uint8_t>& is_open, Scratch& scratch) {
    Mask mask(ctx.n);
    for (int t = 0; t < ctx.n; ++t)
        if (is_open[t]) mask.set(t);
    return exact_value(ctx, mask, scratch);
}

std::vector<std::uint8_t> greedy_core(const Context& ctx, Scratch& scratch,
                                      const Deadline& deadline) {
    const int n = ctx.n;

    // Greedy add phase: best single opening while it strictly improves.
    std::vector<std::uint8_t> is_open(n, 0);
    double value = value_of(ctx, is_open, scratch);
    while (!expired(deadline)) {
        int best_j = -1;
        double best_value = value;
        for (int j = 0; j < n; ++j) {
            if (is_open[j]) continue;
            is_open[j] = 1;
            const double candidate = value_of(ctx, is_open, scratch);
            is_open[j] = 0;
            if (candidate > best_value) {
                best_value = candidate;
                best_j = j;
            }
        }
        if (best_j < 0) break;
        is_open[best_j] = 1;
        value = best_value;
    }
    value = local_search_passes(ctx, is_open, value, scratch, deadline);

    // Second start from everything open. Dropping from the top escapes the
    // single-strong-locker trap, where one locker beats each partner
    // individually but an antichain of partners beats it jointly.
    if (!expired(deadline)) {
        std::vector<std::uint8_t> from_top(n, 1);
        const double top_value = local_search_passes(
            ctx, from_top, value_of(ctx, from_top, scratch), scratch, deadline);
        if (top_value > value) is_open = std::move(from_top);
    }
    return is_open;
}

} // namespace

LocationDecision greedy_local_search(const Instance& instance,
                                     const std::vector<double>& costs) {
    const Context ctx = make_context(instance, costs, BranchRule::lowest_index);
    Scratch scratch;
    const std::vector<std::uint8_t> is_open = greedy_core(ctx, scratch, std::nullopt);
    LocationDecision result = LocationDecision::none(ctx.n);
    for (int j = 0; j < ctx.n; ++j) result.open[j] = is_open[j];
    return result;
}

SolveResult solve_bb(const Instance& instance, const std::vector<double>& costs,
                     const SolveConfig& config) {
    config.validate();
    const auto start = Clock::now();
    const Context ctx = make_context(instance, costs, config.branching_rule);
    Scratch scratch;

    SharedSearch shared;
    shared.incumbent_open = Mask(ctx.n);
    shared.incumbent_value = exact_value(ctx, shared.incumbent_open, scratch); // empty set, 0

    if (config.heuristic == PrimalHeuristic::greedy_local_search && ctx.n > 0) {
        // Leave the search at least half of any time budget.
        Deadline warm_deadline;
        if (config.time_limit_seconds > 0.0)
            warm_deadline = start + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(
                                            0.5 * config.time_limit_seconds));
        const std::vector<std::uint8_t> warm = greedy_core(ctx, scratch, warm_deadline);
        Mask warm_mask(ctx.n);
        for (int j = 0; j < ctx.n; ++j)
            if (warm[j]) warm_mask.set(j);
        const double warm_value = exact_value(ctx, warm_mask, scratch);
        if (warm_value > shared.incumbent_value) {
            shared.incumbent_value = warm_value;
            shared.incumbent_open = warm_mask;
        }
    }

    HeapNode root;
    root.depth = 0;
    root.committed_cost = 0.0;
    root.open = Mask(ctx.n);
    root.bound = revenue_over(ctx, ctx.free_suffix[0], scratch);
    shared.heap.push(std::move(root));

    const int threads = std::max(1, config.threads);
    shared.inflight.assign(threads, std::numeric_limits<double>::quiet_NaN());

    if (threads == 1) {
        worker_loop(ctx, config, start, shared, 0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] { worker_loop(ctx, config, start, shared, t); });
        for (std::thread& t : pool) t.join();
    }

    return assemble_result(instance, costs, shared.incumbent_open, shared.final_bound,
                           shared.stop_status, shared.nodes_explored, seconds_since(start));
}

SolveResult solve_bruteforce(const Instance& instance, const std::vector<double>& costs) {
    const int n = instance.locker_count();
    if (n > 22) {
        std::ostringstream msg;
        msg << "brute force enumerates 2^n location vectors and is limited to n <= 22; got n = "
            << n;
        throw validation_error(msg.str());
    }
    const auto start = Clock::now();
    const Context ctx = make_context(instance, costs, BranchRule::lowest_index);
    Scratch scratch;

    Mask best_mask(n);
    double best_value = exact_value(ctx, best_mask, scratch);
    const std::uint64_t limit = std::uint64_t(1) << n;
    for (std::uint64_t bits = 1; bits < limit; ++bits) {
        Mask mask(n);
        mask.words[0] = bits;
        const double value = exact_value(ctx, mask, scratch);
        if (value > best_value) {
            best_value = value;
            best_mask = mask;
        }
    }
    return assemble_result(instance, costs, best_mask, best_value, SolveStatus::optimal,
                           static_cast<long long>(limit), seconds_since(start));
}

} // namespace lockerloc
