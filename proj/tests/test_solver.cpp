#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lockerloc/errors.hpp"
#include "lockerloc/rng.hpp"
#include "lockerloc/solver.hpp"
#include "oracles.hpp"

using namespace lockerloc;

TEST_CASE("best_restriction picks the heaviest feasible window") {
    const Instance ex = oracles::worked_example();

    SUBCASE("worked example prefers the pair of twins over the star") {
        const std::vector<int> available = {0, 1, 2};
        const auto [allowed, sum] = best_restriction(ex, 0, available);
        CHECK(allowed == std::vector<int>{0, 1});
        CHECK(sum == doctest::Approx(4.0).epsilon(1e-15));
    }

    SUBCASE("singleton") {
        const std::vector<int> available = {2};
        const auto [allowed, sum] = best_restriction(ex, 0, available);
        CHECK(allowed == std::vector<int>{2});
        CHECK(sum == 3.1);
    }

    SUBCASE("empty") {
        const auto [allowed, sum] = best_restriction(ex, 0, {});
        CHECK(allowed.empty());
        CHECK(sum == 0.0);
    }

    SUBCASE("derived four-locker case") {
        const Instance four({{0, 1.0, std::nullopt}},
                            {{0, 0.0, std::nullopt},
                             {1, 0.0, std::nullopt},
                             {2, 0.0, std::nullopt},
                             {3, 0.0, std::nullopt}},
                            {10.0, 6.0, 5.0, 1.0}, {1.0}, 0.2);
        const std::vector<int> available = {0, 1, 2, 3};
        const auto [allowed, sum] = best_restriction(four, 0, available);
        CHECK(allowed == std::vector<int>{1, 2}); // attractions 6 and 5
        CHECK(sum == doctest::Approx(11.0).epsilon(1e-15));
        CHECK(sum == oracles::brute_best_antichain_sum(four, 0, available));
    }
}

TEST_CASE("best_restriction equals exhaustive antichain enumeration") {
    Rng rng(171717);
    for (int trial = 0; trial < 120; ++trial) {
        const double gammas[] = {0.0, 0.3, 1.0, 4.0, std::numeric_limits<double>::infinity()};
        const int n = 1 + static_cast<int>(rng.next_double() * 10.0);
        const Instance instance = oracles::random_instance(rng, 2, n, gammas[trial % 5]);
        std::vector<int> available;
        for (int j = 0; j < n; ++j)
            if (rng.next_double() < 0.7) available.push_back(j);
        const auto [allowed, sum] = best_restriction(instance, 0, available);
        CHECK(sum == oracles::brute_best_antichain_sum(instance, 0, available));
        CHECK(oracles::is_antichain(instance, 0, allowed));
        CHECK(sum == oracles::sorted_sum(instance, 0, allowed));
    }
}

TEST_CASE("node_bound") {
    const Instance ex = oracles::worked_example();
    const std::vector<double> costs(3, 0.0);

    SUBCASE("root bound of the worked example is fifty") {
        const NodeState root{{}, {}, {0, 1, 2}};
        CHECK(node_bound(ex, costs, root) == doctest::Approx(50.0).epsilon(1e-12));
    }

    SUBCASE("bound at a leaf equals the exact profit") {
        const NodeState leaf{{0, 2}, {1}, {}};
        const LocationDecision location = LocationDecision::from_set(3, {0, 2});
        const RestrictionDecision restriction = optimal_restriction(ex, location);
        const double exact = profit(ex, location, restriction, costs).profit;
        CHECK(node_bound(ex, costs, leaf) == doctest::Approx(exact).epsilon(1e-12));
    }

    SUBCASE("closing a locker never raises the bound") {
        const NodeState wide{{}, {}, {0, 1, 2}};
        const NodeState narrow{{}, {2}, {0, 1}};
        CHECK(node_bound(ex, costs, narrow) <= node_bound(ex, costs, wide) + 1e-12);
    }

    SUBCASE("the partition is validated") {
        CHECK_THROWS_AS(node_bound(ex, costs, NodeState{{0}, {0}, {1, 2}}), contract_error);
        CHECK_THROWS_AS(node_bound(ex, costs, NodeState{{0}, {1}, {}}), contract_error);
    }

    SUBCASE("bound dominates every completion") {
        Rng rng(5511);
        for (int trial = 0; trial < 30; ++trial) {
            const Instance instance = oracles::random_instance(rng, 4, 7, 0.8);
            std::vector<double> f(7);
            for (double& v : f) v = rng.next_double(0.0, 10.0);
            NodeState node;
            for (int j = 0; j < 7; ++j) {
                const double coin = rng.next_double();
                if (coin < 0.3)
                    node.committed_open.push_back(j);
                else if (coin < 0.5)
                    node.committed_closed.push_back(j);
                else
                    node.free_lockers.push_back(j);
            }
            const double bound = node_bound(instance, f, node);
            const int free_count = static_cast<int>(node.free_lockers.size());
            for (std::uint32_t bits = 0; bits < (1u << free_count); ++bits) {
                std::vector<int> open = node.committed_open;
                for (int t = 0; t < free_count; ++t)
                    if (bits & (1u << t)) open.push_back(node.free_lockers[t]);
                const LocationDecision location = LocationDecision::from_set(7, open);
                const double value =
                    profit(instance, location, optimal_restriction(instance, location), f).profit;
                CHECK(bound >= value - 1e-9);
            }
        }
    }
}

TEST_CASE("brute force solves the worked example") {
    const Instance ex = oracles::worked_example();
    const SolveResult result = solve_bruteforce(ex, {0.0, 0.0, 0.0});
    CHECK(result.profit == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(result.status == SolveStatus::optimal);
    CHECK(result.gap == 0.0);

    SUBCASE("no lockers at all") {
        const Instance none({{0, 5.0, std::nullopt}}, {}, {}, {1.0}, 0.5);
        const SolveResult empty = solve_bruteforce(none, {});
        CHECK(empty.profit == 0.0);
        CHECK(empty.location.open_count() == 0);
    }

    SUBCASE("the enumeration guard refuses large n") {
        Rng rng(1);
        const Instance big = oracles::random_instance(rng, 1, 23, 1.0);
        CHECK_THROWS_WITH_AS(solve_bruteforce(big, std::vector<double>(23, 0.0)),
                             doctest::Contains("22"), validation_error);
    }
}

TEST_CASE("branch and bound on the worked example") {
    const Instance ex = oracles::worked_example();

    SUBCASE("opening the twins wins at cost 0.1") {
        SolveConfig config;
        config.gap_tolerance = 0.0;
        const SolveResult result = solve_bb(ex, {0.1, 0.1, 0.1}, config);
        CHECK(result.profit == doctest::Approx(49.8).epsilon(1e-12));
        CHECK(result.location.open_set() == std::vector<int>{0, 1});
        CHECK(result.status == SolveStatus::optimal);
    }

    SUBCASE("prohibitive costs keep everything closed") {
        const SolveResult result = solve_bb(ex, {1000.0, 1000.0, 1000.0});
        CHECK(result.profit == 0.0);
        CHECK(result.location.open_count() == 0);
    }

    SUBCASE("free lockers under the proportional limit all open") {
        SolveConfig config;
        config.gap_tolerance = 0.0;
        const SolveResult result = solve_bb(ex.with_gamma(std::numeric_limits<double>::infinity()),
                                            {0.0, 0.0, 0.0}, config);
        CHECK(result.location.open_count() == 3);
        CHECK(result.profit == doctest::Approx(100.0 * 7.1 / 11.1).epsilon(1e-12));
    }
}

TEST_CASE("branch and bound agrees with brute force") {
    Rng rng(271828);
    const double gammas[] = {0.0, 0.5, 1.0, 2.0, 5.0, std::numeric_limits<double>::infinity()};
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 2 + static_cast<int>(rng.next_double() * 13.0);
        const int n = 2 + static_cast<int>(rng.next_double() * 10.0);
        const Instance instance = oracles::random_instance(rng, m, n, gammas[trial % 6]);
        const double f_levels[] = {0.0, rng.next_double(0.5, 5.0), rng.next_double(20.0, 60.0)};
        const std::vector<double> costs(n, f_levels[trial % 3]);

        SolveConfig config;
        config.gap_tolerance = 0.0;
        config.branching_rule = trial % 2 == 0 ? BranchRule::max_demand_weighted_attraction
                                               : BranchRule::lowest_index;
        config.heuristic =
            trial % 4 < 2 ? PrimalHeuristic::greedy_local_search : PrimalHeuristic::none;

        const SolveResult bb = solve_bb(instance, costs, config);
        const SolveResult brute = solve_bruteforce(instance, costs);
        CHECK(std::abs(bb.profit - brute.profit) <= 1e-9);
        CHECK(bb.status == SolveStatus::optimal);
        CHECK(bb.upper_bound >= bb.profit - 1e-9);
        CHECK(bb.gap == relative_gap(bb.upper_bound, bb.profit));
    }
}

TEST_CASE("single-threaded runs are bit-reproducible") {
    Rng rng(55);
    const Instance instance = oracles::random_instance(rng, 8, 9, 1.0);
    const std::vector<double> costs(9, 3.0);
    SolveConfig config;
    config.gap_tolerance = 0.0;
    const SolveResult a = solve_bb(instance, costs, config);
    const SolveResult b = solve_bb(instance, costs, config);
    CHECK(a.profit == b.profit);
    CHECK(a.upper_bound == b.upper_bound);
    CHECK(a.nodes_explored == b.nodes_explored);
    CHECK(a.location.open == b.location.open);
}

TEST_CASE("multi-threaded search finds the same value") {
    Rng rng(66);
    const Instance instance = oracles::random_instance(rng, 10, 10, 0.7);
    const std::vector<double> costs(10, 2.0);
    SolveConfig single;
    single.gap_tolerance = 0.0;
    SolveConfig dual = single;
    dual.threads = 2;
    const SolveResult a = solve_bb(instance, costs, single);
    const SolveResult b = solve_bb(instance, costs, dual);
    CHECK(std::abs(a.profit - b.profit) <= 1e-9);
    CHECK(b.status == SolveStatus::optimal);
}

TEST_CASE("limits end the search with a valid incumbent and bound") {
    Rng rng(99);
    const Instance instance = oracles::random_instance(rng, 12, 12, 1.5);
    const std::vector<double> costs(12, 1.0);

    SolveConfig config;
    config.gap_tolerance = 0.0;
    config.node_limit = 3;
    config.heuristic = PrimalHeuristic::none;
    const SolveResult limited = solve_bb(instance, costs, config);
    CHECK(limited.status == SolveStatus::node_limit);
    CHECK(limited.nodes_explored <= 3);
    CHECK(limited.upper_bound >= limited.profit - 1e-9);

    const SolveResult exact = solve_bruteforce(instance, costs);
    CHECK(limited.upper_bound >= exact.profit - 1e-9); // bound stays valid
    CHECK(limited.profit <= exact.profit + 1e-9);      // incumbent stays feasible

    config.node_limit = 0;
    config.time_limit_seconds = 1e-9;
    const SolveResult timed = solve_bb(instance, costs, config);
    CHECK(timed.status == SolveStatus::time_limit);
    CHECK(timed.upper_bound >= exact.profit - 1e-9);
}

TEST_CASE("loose gap tolerances stop early but report honestly") {
    Rng rng(1001);
    const Instance instance = oracles::random_instance(rng, 10, 11, 2.0);
    const std::vector<double> costs(11, 2.0);
    SolveConfig config;
    config.gap_tolerance = 0.25;
    const SolveResult result = solve_bb(instance, costs, config);
    CHECK((result.status == SolveStatus::optimal || result.status == SolveStatus::gap_limit));
    CHECK(relative_gap(result.upper_bound, result.profit) <= 0.25 + 1e-12);
    const SolveResult exact = solve_bruteforce(instance, costs);
    CHECK(result.upper_bound >= exact.profit - 1e-9);
    CHECK(result.profit <= exact.profit + 1e-9);
}

TEST_CASE("optimal profit never drops as gamma grows") {
    Rng rng(314159);
    for (int trial = 0; trial < 10; ++trial) {
        const Instance base = oracles::random_instance(rng, 6, 7, 0.0);
        const std::vector<double> costs(7, rng.next_double(0.0, 8.0));
        double previous = -1e300;
        for (double gamma : {0.0, 0.5, 1.0, 2.0, 5.0, 1e300}) {
            const double value = solve_bruteforce(base.with_gamma(gamma), costs).profit;
            CHECK(value >= previous - 1e-9);
            previous = value;
        }
    }
}

TEST_CASE("greedy local search") {
    const Instance ex = oracles::worked_example();

    SUBCASE("reaches the global optimum of the worked example") {
        const LocationDecision heuristic = greedy_local_search(ex, {0.1, 0.1, 0.1});
        const RestrictionDecision restriction = optimal_restriction(ex, heuristic);
        CHECK(profit(ex, heuristic, restriction, {0.1, 0.1, 0.1}).profit ==
              doctest::Approx(49.8).epsilon(1e-12));
    }

    SUBCASE("opens nothing when every locker loses money") {
        const LocationDecision heuristic = greedy_local_search(ex, {1e6, 1e6, 1e6});
        CHECK(heuristic.open_count() == 0);
    }

    SUBCASE("lands on a local optimum no worse than three quarters of optimal") {
        Rng rng(414243);
        for (int trial = 0; trial < 10; ++trial) {
            const Instance instance = oracles::random_instance(rng, 8, 9, 1.0);
            const std::vector<double> costs(9, rng.next_double(0.0, 5.0));
            const LocationDecision heuristic = greedy_local_search(instance, costs);
            const double value =
                profit(instance, heuristic, optimal_restriction(instance, heuristic), costs)
                    .profit;
            const double best = solve_bruteforce(instance, costs).profit;
            CHECK(value <= best + 1e-9);
            if (best > 0) CHECK(value >= 0.75 * best - 1e-9);
        }
    }
}

TEST_CASE("gap formula") {
    CHECK(relative_gap(100.0, 99.0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(relative_gap(0.0, 0.0) == 0.0);
    CHECK(relative_gap(50.0, 50.0) == 0.0);
    CHECK(std::isinf(relative_gap(0.0, 1.0)));
}
