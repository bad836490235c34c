#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lockerloc/errors.hpp"
#include "lockerloc/eval.hpp"
#include "lockerloc/rng.hpp"
#include "oracles.hpp"

using namespace lockerloc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GeneratorSpec small_spec(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.zones = 8;
    spec.lockers = 6;
    spec.side = 8.0;
    spec.demand_lo = 10.0;
    spec.demand_hi = 100.0;
    spec.alpha = 1.0;
    spec.xi = 1.0;
    spec.seed = seed;
    return spec;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("metric formulas") {
    CHECK(delta_percent(57380.0, 44737.0) == doctest::Approx(28.26).epsilon(2e-4));
    CHECK(delta_percent(100.0, 100.0) == 0.0);
    CHECK_THROWS_AS(delta_percent(10.0, 0.0), domain_error);

    CHECK(rel_loss(28737.0, 26725.0) == doctest::Approx(7.00).epsilon(1e-3));
    CHECK(rel_loss(42.0, 42.0) == 0.0);
    CHECK_THROWS_AS(rel_loss(0.0, 0.0), domain_error);
    CHECK_THROWS_AS(rel_loss(-1.0, 0.0), domain_error);
}

TEST_CASE("actual profit re-optimizes offers over a frozen location") {
    const Instance ex = oracles::worked_example();
    const std::vector<double> costs(3, 0.0);

    SUBCASE("frozen all-open location recovers fifty under the threshold model") {
        const LocationDecision all_open = LocationDecision::from_set(3, {0, 1, 2});
        CHECK(actual_profit(ex, 0.5, all_open, costs) == doctest::Approx(50.0).epsilon(1e-12));
    }

    SUBCASE("self-evaluation at the proportional limit") {
        SolveConfig config;
        config.gap_tolerance = 0.0;
        const SolveResult mnl = solve_bb(ex.with_gamma(kInf), costs, config);
        CHECK(actual_profit(ex, kInf, mnl.location, costs) ==
              doctest::Approx(mnl.profit).epsilon(1e-12));
    }

    SUBCASE("empty location yields zero") {
        CHECK(actual_profit(ex, 0.5, LocationDecision::none(3), costs) == 0.0);
    }
}

TEST_CASE("actual profit never beats the optimum") {
    Rng rng(8888);
    for (int trial = 0; trial < 12; ++trial) {
        const double gammas[] = {0.0, 0.5, 1.0, 3.0};
        const Instance instance = oracles::random_instance(rng, 6, 7, gammas[trial % 4]);
        const std::vector<double> costs(7, rng.next_double(0.0, 6.0));
        const SolveResult mnl = solve_bruteforce(instance.with_gamma(kInf), costs);
        const SolveResult best = solve_bruteforce(instance, costs);
        const double actual = actual_profit(instance, instance.gamma(), mnl.location, costs);
        CHECK(actual <= best.profit + 1e-9);
        if (best.profit > 0.0) CHECK(rel_loss(best.profit, actual) >= -1e-9);
    }
}

TEST_CASE("loss records tie the three profit figures together") {
    Rng rng(9191);
    const Instance instance = oracles::random_instance(rng, 5, 6, 0.0);
    const std::vector<double> costs(6, 1.0);
    SolveConfig config;
    config.gap_tolerance = 0.0;

    const LossRecord record = compute_loss(instance, 0.5, costs, config);
    CHECK(record.gamma == 0.5);
    CHECK(record.optimal_profit ==
          doctest::Approx(solve_bruteforce(instance.with_gamma(0.5), costs).profit)
              .epsilon(1e-9));
    CHECK(record.actual_profit <= record.optimal_profit + 1e-9);
    CHECK(record.rel_loss_percent ==
          doctest::Approx(rel_loss(record.optimal_profit, record.actual_profit)).epsilon(1e-12));
    CHECK(record.rel_loss_percent >= -1e-9);

    const LossRecord at_limit = compute_loss(instance, 1e300, costs, config);
    CHECK(at_limit.rel_loss_percent == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("delta compares the two models at their own optima") {
    Rng rng(2222);
    const Instance instance = oracles::random_instance(rng, 4, 5, 0.5);
    const std::vector<double> costs(5, 0.5);
    SolveConfig config;
    config.gap_tolerance = 0.0;

    const auto [tlm, mnl] = delta(instance, 0.5, costs, config);
    CHECK(tlm.gamma_label == "TLM-0.5");
    CHECK(mnl.gamma_label == "MNL");
    CHECK(!mnl.delta_percent.has_value());
    REQUIRE(tlm.delta_percent.has_value());

    const SolveResult tlm_brute = solve_bruteforce(instance.with_gamma(0.5), costs);
    const SolveResult mnl_brute = solve_bruteforce(instance.with_gamma(kInf), costs);
    CHECK(tlm.revenue == doctest::Approx(tlm_brute.revenue).epsilon(1e-9));
    CHECK(mnl.revenue == doctest::Approx(mnl_brute.revenue).epsilon(1e-9));
    CHECK(*tlm.delta_percent ==
          doctest::Approx(delta_percent(mnl_brute.revenue, tlm_brute.revenue)).epsilon(1e-9));

    const auto [bnl, mnl2] = delta(instance, 0.0, costs, config);
    CHECK(bnl.gamma_label == "BNL");
    CHECK(mnl2.facility_count == mnl.facility_count);
}

TEST_CASE("gamma sweep trends on a seeded instance") {
    const Instance base = generate(small_spec(7));
    const std::vector<double> costs(6, 5.0);
    SolveConfig config;
    config.gap_tolerance = 0.0;

    const std::vector<double> gammas = {0.0, 1.0, 2.0, kInf};
    const std::vector<SweepRecord> records =
        sweep(base, std::nullopt, Vary::gamma, gammas, costs, config);
    REQUIRE(records.size() == 4);

    for (std::size_t t = 1; t < records.size(); ++t)
        CHECK(records[t].profit >= records[t - 1].profit - 1e-9);
    CHECK(std::isinf(records.back().param_value));
    REQUIRE(records.back().rel_loss_percent.has_value());
    CHECK(*records.back().rel_loss_percent == doctest::Approx(0.0).epsilon(1e-9));
    REQUIRE(records.back().delta_percent.has_value());
    CHECK(*records.back().delta_percent == doctest::Approx(0.0).epsilon(1e-9));
    for (const SweepRecord& record : records) {
        CHECK(record.param_name == "gamma");
        if (record.rel_loss_percent) CHECK(*record.rel_loss_percent >= -1e-9);
    }
}

TEST_CASE("xi sweep regenerates the outside option and profit falls") {
    const Instance base = generate(small_spec(11)).with_gamma(1.0);
    const std::vector<double> costs(6, 5.0);
    SolveConfig config;
    config.gap_tolerance = 0.0;

    const std::vector<double> xis = {0.25, 0.5, 1.0, 1.5};
    const std::vector<SweepRecord> records = sweep(base, std::nullopt, Vary::xi, xis, costs, config);
    REQUIRE(records.size() == 4);
    for (std::size_t t = 1; t < records.size(); ++t)
        CHECK(records[t].profit <= records[t - 1].profit + 1e-9);
}

TEST_CASE("alpha sweep keeps the geometry and profit falls") {
    const Instance base = generate(small_spec(13)).with_gamma(2.0);
    const std::vector<double> costs(6, 2.0);
    SolveConfig config;
    config.gap_tolerance = 0.0;

    const std::vector<double> alphas = {0.5, 1.0, 1.5, 2.0};
    const std::vector<SweepRecord> records =
        sweep(base, std::nullopt, Vary::alpha, alphas, costs, config);
    REQUIRE(records.size() == 4);
    for (std::size_t t = 1; t < records.size(); ++t)
        CHECK(records[t].profit <= records[t - 1].profit + 1e-9);

    SUBCASE("an explicit spec overrides missing provenance") {
        const Instance bare = oracles::worked_example();
        CHECK_THROWS_AS(sweep(bare, std::nullopt, Vary::alpha, alphas, {0, 0, 0}, config),
                        validation_error);
        const std::vector<SweepRecord> with_spec =
            sweep(bare, small_spec(13), Vary::alpha, alphas, std::vector<double>(6, 0.0), config);
        CHECK(with_spec.size() == 4);
    }
}

TEST_CASE("f sweep reuses the instance data") {
    const Instance base = generate(small_spec(17)).with_gamma(1.0);
    SolveConfig config;
    config.gap_tolerance = 0.0;
    const std::vector<SweepRecord> records =
        sweep(base, std::nullopt, Vary::f, {0.0, 2.0, 8.0}, std::vector<double>(6, 0.0), config);
    REQUIRE(records.size() == 3);
    // raising every facility cost cannot raise the optimal profit
    for (std::size_t t = 1; t < records.size(); ++t)
        CHECK(records[t].profit <= records[t - 1].profit + 1e-9);
}

TEST_CASE("sweep rejects an empty value list") {
    const Instance base = generate(small_spec(3));
    CHECK_THROWS_AS(
        sweep(base, std::nullopt, Vary::gamma, {}, std::vector<double>(6, 0.0), SolveConfig{}),
        validation_error);
}

TEST_CASE("records are ordered by parameter value") {
    const Instance base = generate(small_spec(5));
    SolveConfig config;
    config.gap_tolerance = 0.0;
    const std::vector<SweepRecord> records =
        sweep(base, std::nullopt, Vary::gamma, {2.0, 0.0, kInf, 1.0},
              std::vector<double>(6, 1.0), config);
    REQUIRE(records.size() == 4);
    CHECK(records[0].param_value == 0.0);
    CHECK(records[1].param_value == 1.0);
    CHECK(records[2].param_value == 2.0);
    CHECK(std::isinf(records[3].param_value));
}

TEST_CASE("csv emission") {
    std::vector<SweepRecord> records(2);
    records[0].param_name = "gamma";
    records[0].param_value = 0.5;
    records[0].profit = 12.25;
    records[0].revenue = 20.5;
    records[0].facility_count = 3;
    records[0].gap = 0.0;
    records[0].status = SolveStatus::optimal;
    records[0].wall_time_seconds = 0.125;
    records[0].delta_percent = 10.0;
    records[0].rel_loss_percent = 1.5;
    records[1].param_name = "gamma";
    records[1].param_value = kInf;
    records[1].profit = 14.0;
    records[1].revenue = 22.0;
    records[1].facility_count = 4;
    records[1].gap = 0.01;
    records[1].status = SolveStatus::time_limit;
    records[1].wall_time_seconds = 1.0;

    const std::vector<std::string> lines = csv_lines(sweep_to_csv(records));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "param_name,param_value,profit,revenue,facility_count,gap,status,wall_time_s,"
          "delta_pct,rel_loss_pct");
    CHECK(lines[1] == "gamma,0.5,12.25,20.5,3,0,optimal,0.125,10,1.5");
    CHECK(lines[2] == "gamma,inf,14,22,4,0.01,time_limit,1,,");
}
