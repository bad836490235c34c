#include "lockerloc.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "lockerloc/errors.hpp"
#include "lockerloc/eval.hpp"
#include "lockerloc/instance.hpp"
#include "lockerloc/model.hpp"
#include "lockerloc/domgraph.hpp"
#include "lockerloc/solver.hpp"
#include "jsonio.hpp"

struct llp_instance {
    lockerloc::Instance value;
};

struct llp_result {
    lockerloc::SolveResult value;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

char* copy_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out != nullptr) std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

// Translates C++ exceptions into status codes and the thread-local message.
template <typename Fn>
llp_status_code guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const lockerloc::parse_error& e) {
        set_error(e.what());
        return LLP_ERROR_PARSE;
    } catch (const lockerloc::validation_error& e) {
        set_error(e.what());
        return LLP_ERROR_VALIDATION;
    } catch (const lockerloc::domain_error& e) {
        set_error(e.what());
        return LLP_ERROR_VALIDATION;
    } catch (const lockerloc::contract_error& e) {
        set_error(e.what());
        return LLP_ERROR_CONTRACT;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return LLP_ERROR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return LLP_ERROR_INTERNAL;
    }
}

llp_status_code invalid_argument(const char* message) {
    set_error(message);
    return LLP_ERROR_INVALID_ARGUMENT;
}

std::vector<double> resolve_costs(const lockerloc::Instance& instance, const double* costs) {
    if (costs == nullptr) return instance.costs();
    return std::vector<double>(costs, costs + instance.locker_count());
}

lockerloc::SolveConfig to_config(const llp_solve_options& options) {
    lockerloc::SolveConfig config;
    if (options.gap_tolerance >= 0.0) config.gap_tolerance = options.gap_tolerance;
    config.time_limit_seconds = options.time_limit_seconds;
    config.node_limit = options.node_limit;
    config.branching_rule = options.branching_rule == LLP_BRANCH_LOWEST_INDEX
                                ? lockerloc::BranchRule::lowest_index
                                : lockerloc::BranchRule::max_demand_weighted_attraction;
    config.heuristic = options.heuristic == LLP_HEURISTIC_NONE
                           ? lockerloc::PrimalHeuristic::none
                           : lockerloc::PrimalHeuristic::greedy_local_search;
    config.threads = options.threads >= 1 ? options.threads : 1;
    return config;
}

} // namespace

extern "C" {

const char* llp_version(void) { return "0.1.0"; }

const char* llp_last_error(void) { return g_last_error.c_str(); }

void llp_string_free(char* text) { std::free(text); }

llp_status_code llp_instance_generate(const llp_generator_spec* spec, llp_instance** out) {
    if (spec == nullptr || out == nullptr) return invalid_argument("null argument");
    return guarded([&] {
        lockerloc::GeneratorSpec s;
        s.zones = spec->zones;
        s.lockers = spec->lockers;
        s.side = spec->side;
        s.demand_lo = spec->demand_lo;
        s.demand_hi = spec->demand_hi;
        s.alpha = spec->alpha;
        s.xi = spec->xi;
        s.seed = spec->seed;
        *out = new llp_instance{lockerloc::generate(s)};
        return LLP_OK;
    });
}

llp_status_code llp_instance_load(const char* path, llp_instance** out) {
    if (path == nullptr || out == nullptr) return invalid_argument("null argument");
    return guarded([&] {
        *out = new llp_instance{lockerloc::load(path)};
        return LLP_OK;
    });
}

llp_status_code llp_instance_from_json(const char* text, llp_instance** out) {
    if (text == nullptr || out == nullptr) return invalid_argument("null argument");
    return guarded([&] {
        *out = new llp_instance{lockerloc::from_json_string(text)};
        return LLP_OK;
    });
}

llp_status_code llp_instance_save(const llp_instance* instance, const char* path) {
    if (instance == nullptr || path == nullptr) return invalid_argument("null argument");
    return guarded([&] {
        lockerloc::save(instance->value, path);
        return LLP_OK;
    });
}

llp_status_code llp_instance_to_json(const llp_instance* instance, char** out) {
    if (instance == nullptr || out == nullptr) return invalid_argument("null argument");
    return guarded([&] {
        *out = copy_string(lockerloc::to_json_string(instance->value));
        return *out != nullptr ? LLP_OK : LLP_ERROR_INTERNAL;
    });
}

void llp_instance_free(llp_instance* instance) { delete instance; }

int llp_instance_zone_count(const llp_instance* instance) {
    return instance != nullptr ? instance->value.zone_count() : 0;
}

int llp_instance_locker_count(const llp_instance* instance) {
    return instance != nullptr ? instance->value.locker_count() : 0;
}

double llp_instance_gamma(const llp_instance* instance) {
    return instance != nullptr ? instance->value.gamma() : 0.0;
}

double llp_instance_total_demand(const llp_instance* instance) {
    return instance != nullptr ? instance->value.total_demand() : 0.0;
}

uint64_t llp_instance_hash(const llp_instance* instance) {
    return instance != nullptr ? lockerloc::instance_hash(instance->value) : 0;
}

llp_status_code llp_instance_with_gamma(const llp_instance* instance, double gamma,
                                        llp_instance** out) {
    if (instance == nullptr || out == nullptr) return invalid_argument("null argument");
    return guarded([&] {
        *out = new llp_instance{instance->value.with_gamma(gamma)};
        return LLP_OK;
    });
}

void llp_solve_options_default(llp_solve_options* options) {
    if (options == nullptr) return;
    options->gap_tolerance = 1e-6;
    options->time_limit_seconds = 0.0;
    options->node_limit = 0;
    options->branching_rule = LLP_BRANCH_MAX_DEMAND_WEIGHTED_ATTRACTION;
    options->heuristic = LLP_HEURISTIC_GREEDY_LOCAL_SEARCH;
    options->threads = 1;
    options->method = LLP_METHOD_BB;
}

llp_status_code llp_solve(const llp_instance* instance, const double* costs,
                          const llp_solve_options* options, llp_result** out) {
    if (instance == nullptr || options == nullptr || out == nullptr)
        return invalid_argument("null argument");
    return guarded([&] {
        const std::vector<double> cost_vector = resolve_costs(instance->value, costs);
        lockerloc::SolveResult result;
        if (options->method == LLP_METHOD_BRUTEFORCE)
            result = lockerloc::solve_bruteforce(instance->value, cost_vector);
        else
            result = lockerloc::solve_bb(instance->value, cost_vector, to_config(*options));
        *out = new llp_result{std::move(result)};
        return LLP_OK;
    });
}

void llp_result_free(llp_result* result) { delete result; }

double llp_result_profit(const llp_result* result) {
    return result != nullptr ? result->value.profit : 0.0;
}

double llp_result_revenue(const llp_result* result) {
    return result != nullptr ? result->value.revenue : 0.0;
}

double llp_result_facility_cost(const llp_result* result) {
    return result != nullptr ? result->value.facility_cost : 0.0;
}

double llp_result_upper_bound(const llp_result* result) {
    return result != nullptr ? result->value.upper_bound : 0.0;
}

double llp_result_gap(const llp_result* result) {
    return result != nullptr ? result->value.gap : 0.0;
}

long long llp_result_nodes(const llp_result* result) {
    return result != nullptr ? result->value.nodes_explored : 0;
}

double llp_result_wall_time(const llp_result* result) {
    return result != nullptr ? result->value.wall_time_seconds : 0.0;
}

int llp_result_status(const llp_result* result) {
    if (result == nullptr) return LLP_SOLVE_OPTIMAL;
    switch (result->value.status) {
        case lockerloc::SolveStatus::optimal: return LLP_SOLVE_OPTIMAL;
        case lockerloc::SolveStatus::gap_limit: return LLP_SOLVE_GAP_LIMIT;
        case lockerloc::SolveStatus::time_limit: return LLP_SOLVE_TIME_LIMIT;
        case lockerloc::SolveStatus::node_limit: return LLP_SOLVE_NODE_LIMIT;
    }
    return LLP_SOLVE_OPTIMAL;
}

int llp_result_open_count(const llp_result* result) {
    return result != nullptr ? result->value.location.open_count() : 0;
}

int llp_result_is_open(const llp_result* result, int locker) {
    if (result == nullptr) return 0;
    if (locker < 0 || locker >= result->value.location.locker_count()) return 0;
    return result->value.location.is_open(locker) ? 1 : 0;
}

int llp_result_is_allowed(const llp_result* result, int zone, int locker) {
    if (result == nullptr) return 0;
    const auto& restriction = result->value.restriction;
    if (zone < 0 || zone >= restriction.zones) return 0;
    if (locker < 0 || locker >= restriction.lockers) return 0;
    return restriction.is_allowed(zone, locker) ? 1 : 0;
}

llp_status_code llp_result_to_json(const llp_result* result, char** out) {
    if (result == nullptr || out == nullptr) return invalid_argument("null argument");
    return guarded([&] {
        using lockerloc::detail::format_double;
        const lockerloc::SolveResult& r = result->value;
        std::ostringstream text;
        text << "{\n";
        text << "  \"profit\": " << format_double(r.profit) << ",\n";
        text << "  \"revenue\": " << format_double(r.revenue) << ",\n";
        text << "  \"facility_cost\": " << format_double(r.facility_cost) << ",\n";
        text << "  \"upper_bound\": " << format_double(r.upper_bound) << ",\n";
        text << "  \"gap\": " << format_double(r.gap) << ",\n";
        text << "  \"nodes_explored\": " << r.nodes_explored << ",\n";
        text << "  \"status\": \"" << lockerloc::to_string(r.status) << "\",\n";
        text << "  \"facility_count\": " << r.location.open_count() << ",\n";
        text << "  \"x\": [";
        for (int j = 0; j < r.location.locker_count(); ++j)
            text << (j ? ", " : "") << (r.location.is_open(j) ? 1 : 0);
        text << "],\n";
        text << "  \"y\": [\n";
        for (int i = 0; i < r.restriction.zones; ++i) {
            text << "    [";
            const std::vector<int> allowed = r.restriction.allowed_set(i);
            for (std::size_t t = 0; t < allowed.size(); ++t)
                text << (t ? ", " : "") << allowed[t];
            text << (i + 1 < r.restriction.zones ? "],\n" : "]\n");
        }
        text << "  ],\n";
        text << "  \"wall_time_seconds\": " << format_double(r.wall_time_seconds) << "\n";
        text << "}";
        *out = copy_string(text.str());
        return *out != nullptr ? LLP_OK : LLP_ERROR_INTERNAL;
    });
}

llp_status_code llp_export_model(const llp_instance* instance, const double* costs, int form,
                                 int format, char** out) {
    if (instance == nullptr || out == nullptr) return invalid_argument("null argument");
    return guarded([&] {
        const std::vector<double> cost_vector = resolve_costs(instance->value, costs);
        lockerloc::Formulation formulation;
        switch (form) {
            case LLP_FORM_IPD:
                formulation = lockerloc::build_ip_d(instance->value, cost_vector);
                break;
            case LLP_FORM_IPA:
                formulation = lockerloc::build_ip_a(instance->value, cost_vector);
                break;
            case LLP_FORM_MICQP_D:
                formulation = lockerloc::build_micqp(instance->value, cost_vector,
                                                     lockerloc::DominanceBlock::ddc);
                break;
            case LLP_FORM_MICQP_A:
                formulation = lockerloc::build_micqp(instance->value, cost_vector,
                                                     lockerloc::DominanceBlock::adc_path);
                break;
            default:
                return invalid_argument("unknown form");
        }
        lockerloc::ExportFormat fmt;
        switch (format) {
            case LLP_EXPORT_LP: fmt = lockerloc::ExportFormat::lp_text; break;
            case LLP_EXPORT_CONIC: fmt = lockerloc::ExportFormat::conic_text; break;
            case LLP_EXPORT_JSON: fmt = lockerloc::ExportFormat::json; break;
            default: return invalid_argument("unknown export format");
        }
        *out = copy_string(lockerloc::export_formulation(formulation, fmt));
        return *out != nullptr ? LLP_OK : LLP_ERROR_INTERNAL;
    });
}

llp_status_code llp_export_dot(const llp_instance* instance, int zone, char** out) {
    if (instance == nullptr || out == nullptr) return invalid_argument("null argument");
    return guarded([&] {
        *out = copy_string(lockerloc::to_dot(lockerloc::build(instance->value, zone)));
        return *out != nullptr ? LLP_OK : LLP_ERROR_INTERNAL;
    });
}

llp_status_code llp_sweep_csv(const llp_instance* base, int vary, const double* values,
                              size_t value_count, const double* costs,
                              const llp_solve_options* options, char** out_csv) {
    if (base == nullptr || values == nullptr || options == nullptr || out_csv == nullptr)
        return invalid_argument("null argument");
    return guarded([&] {
        lockerloc::Vary v;
        switch (vary) {
            case LLP_VARY_GAMMA: v = lockerloc::Vary::gamma; break;
            case LLP_VARY_ALPHA: v = lockerloc::Vary::alpha; break;
            case LLP_VARY_XI: v = lockerloc::Vary::xi; break;
            case LLP_VARY_F: v = lockerloc::Vary::f; break;
            default: return invalid_argument("unknown sweep parameter");
        }
        const std::vector<double> cost_vector = resolve_costs(base->value, costs);
        const std::vector<double> value_vector(values, values + value_count);
        const std::vector<lockerloc::SweepRecord> records = lockerloc::sweep(
            base->value, std::nullopt, v, value_vector, cost_vector, to_config(*options));
        *out_csv = copy_string(lockerloc::sweep_to_csv(records));
        return *out_csv != nullptr ? LLP_OK : LLP_ERROR_INTERNAL;
    });
}

} // extern "C"
