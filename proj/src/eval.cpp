#include "lockerloc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lockerloc/choice.hpp"
#include "lockerloc/errors.hpp"
#include "jsonio.hpp"

namespace lockerloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string gamma_label(double gamma) {
    if (gamma == 0.0) return "BNL";
    if (std::isinf(gamma)) return "MNL";
    std::ostringstream out;
    out << "TLM-" << gamma;
    return out.str();
}

GeneratorSpec spec_from_meta(const Instance& instance) {
    const auto& meta = instance.meta();
    auto it = meta.find("generator");
    if (it == meta.end() || !it->is_object())
        throw validation_error(
            "alpha/xi sweep needs the base generator parameters; pass a spec or use a "
            "generated instance");
    GeneratorSpec spec;
    try {
        spec.zones = it->at("m").get<int>();
        spec.lockers = it->at("n").get<int>();
        spec.side = it->at("side").get<double>();
        spec.demand_lo = it->at("demand_lo").get<double>();
        spec.demand_hi = it->at("demand_hi").get<double>();
        spec.alpha = it->at("alpha").get<double>();
        spec.xi = it->at("xi").get<double>();
        spec.seed = it->at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("instance meta.generator is incomplete: ") + e.what());
    }
    return spec;
}

} // namespace

const char* to_string(Vary vary) {
    switch (vary) {
        case Vary::gamma: return "gamma";
        case Vary::alpha: return "alpha";
        case Vary::xi: return "xi";
        case Vary::f: return "f";
    }
    return "?";
}

double delta_percent(double revenue_mnl, double revenue_tlm) {
    if (revenue_tlm == 0.0)
        throw domain_error("delta is undefined when the threshold-model revenue is zero");
    return (revenue_mnl - revenue_tlm) / revenue_tlm * 100.0;
}

double rel_loss(double optimal_profit, double actual_profit) {
    if (!(optimal_profit > 0.0))
        throw domain_error("rel_loss is undefined for nonpositive optimal profit");
    return (optimal_profit - actual_profit) / optimal_profit * 100.0;
}

double actual_profit(const Instance& instance, double gamma,
                     const LocationDecision& mnl_location, const std::vector<double>& costs) {
    const Instance shifted = instance.with_gamma(gamma);
    const RestrictionDecision restriction = optimal_restriction(shifted, mnl_location);
    return profit(shifted, mnl_location, restriction, costs).profit;
}

LossRecord compute_loss(const Instance& instance, double gamma,
                        const std::vector<double>& costs, const SolveConfig& config) {
    const SolveResult best = solve_bb(instance.with_gamma(gamma), costs, config);
    const SolveResult mnl = solve_bb(instance.with_gamma(kInf), costs, config);
    LossRecord record;
    record.gamma = gamma;
    record.optimal_profit = best.profit;
    record.actual_profit = actual_profit(instance, gamma, mnl.location, costs);
    record.rel_loss_percent = rel_loss(record.optimal_profit, record.actual_profit);
    return record;
}

std::pair<ComparisonRecord, ComparisonRecord> delta(const Instance& instance, double gamma,
                                                    const std::vector<double>& costs,
                                                    const SolveConfig& config) {
    const SolveResult tlm = solve_bb(instance.with_gamma(gamma), costs, config);
    const SolveResult mnl = solve_bb(instance.with_gamma(kInf), costs, config);

    ComparisonRecord tlm_record;
    tlm_record.gamma_label = gamma_label(gamma);
    tlm_record.profit = tlm.profit;
    tlm_record.revenue = tlm.revenue;
    tlm_record.facility_count = tlm.location.open_count();
    tlm_record.delta_percent = delta_percent(mnl.revenue, tlm.revenue);

    ComparisonRecord mnl_record;
    mnl_record.gamma_label = gamma_label(kInf);
    mnl_record.profit = mnl.profit;
    mnl_record.revenue = mnl.revenue;
    mnl_record.facility_count = mnl.location.open_count();

    return {std::move(tlm_record), std::move(mnl_record)};
}

std::vector<SweepRecord> sweep(const Instance& base, const std::optional<GeneratorSpec>& spec,
                               Vary vary, const std::vector<double>& values,
                               const std::vector<double>& costs, const SolveConfig& config) {
    if (values.empty()) throw validation_error("sweep needs at least one parameter value");

    std::vector<double> ordered = values;
    std::sort(ordered.begin(), ordered.end());

    std::optional<GeneratorSpec> base_spec = spec;
    if (!base_spec && (vary == Vary::alpha || vary == Vary::xi))
        base_spec = spec_from_meta(base);

    // For a gamma sweep the proportional-model reference is the same solve at
    // every point; compute it once.
    std::optional<SolveResult> shared_mnl;
    if (vary == Vary::gamma)
        shared_mnl = solve_bb(base.with_gamma(kInf), costs, config);

    std::vector<SweepRecord> records;
    records.reserve(ordered.size());
    for (double value : ordered) {
        Instance point = base;
        std::vector<double> point_costs = costs;
        switch (vary) {
            case Vary::gamma:
                point = base.with_gamma(value);
                break;
            case Vary::f:
                if (!(value >= 0.0)) throw validation_error("f sweep values must be nonnegative");
                point_costs.assign(costs.size(), value);
                break;
            case Vary::alpha: {
                GeneratorSpec point_spec = *base_spec;
                point_spec.alpha = value;
                point = generate(point_spec).with_gamma(base.gamma());
                break;
            }
            case Vary::xi: {
                GeneratorSpec point_spec = *base_spec;
                point_spec.xi = value;
                point = generate(point_spec).with_gamma(base.gamma());
                break;
            }
        }

        const SolveResult result = solve_bb(point, point_costs, config);
        SolveResult mnl_local;
        if (!shared_mnl) mnl_local = solve_bb(point.with_gamma(kInf), point_costs, config);
        const SolveResult& mnl_ref = shared_mnl ? *shared_mnl : mnl_local;

        SweepRecord record;
        record.param_name = to_string(vary);
        record.param_value = value;
        record.profit = result.profit;
        record.revenue = result.revenue;
        record.facility_count = result.location.open_count();
        record.gap = result.gap;
        record.status = result.status;
        record.wall_time_seconds = result.wall_time_seconds;
        if (result.revenue > 0.0)
            record.delta_percent = delta_percent(mnl_ref.revenue, result.revenue);
        if (result.profit > 0.0) {
            const double gamma_here = vary == Vary::gamma ? value : point.gamma();
            const double actual =
                actual_profit(point, gamma_here, mnl_ref.location, point_costs);
            record.rel_loss_percent = rel_loss(result.profit, actual);
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
    using detail::format_double;
    std::ostringstream out;
    out << "param_name,param_value,profit,revenue,facility_count,gap,status,wall_time_s,"
           "delta_pct,rel_loss_pct\n";
    for (const SweepRecord& record : records) {
        out << record.param_name << ",";
        out << (std::isinf(record.param_value) ? "inf" : format_double(record.param_value)) << ",";
        out << format_double(record.profit) << ",";
        out << format_double(record.revenue) << ",";
        out << record.facility_count << ",";
        out << format_double(record.gap) << ",";
        out << to_string(record.status) << ",";
        out << format_double(record.wall_time_seconds) << ",";
        if (record.delta_percent) out << format_double(*record.delta_percent);
        out << ",";
        if (record.rel_loss_percent) out << format_double(*record.rel_loss_percent);
        out << "\n";
    }
    return out.str();
}

} // namespace lockerloc
