#ifndef LOCKERLOC_EVAL_HPP
#define LOCKERLOC_EVAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "lockerloc/instance.hpp"
#include "lockerloc/solver.hpp"

namespace lockerloc {

// One side of a choice-model comparison at its own optimal solution.
struct ComparisonRecord {
    std::string gamma_label; // "BNL", "TLM-<gamma>", or "MNL"
    double profit = 0.0;
    double revenue = 0.0;
    int facility_count = 0;
    std::optional<double> delta_percent; // revenue overestimation of MNL vs this model
};

struct LossRecord {
    double gamma = 0.0;
    double optimal_profit = 0.0;
    double actual_profit = 0.0;
    double rel_loss_percent = 0.0;
};

enum class Vary { gamma, alpha, xi, f };

const char* to_string(Vary vary);

struct SweepRecord {
    std::string param_name;
    double param_value = 0.0;
    double profit = 0.0;
    double revenue = 0.0;
    int facility_count = 0;
    double gap = 0.0;
    SolveStatus status = SolveStatus::optimal;
    double wall_time_seconds = 0.0;
    std::optional<double> delta_percent;
    std::optional<double> rel_loss_percent;
};

// (R_mnl - R_tlm) / R_tlm * 100. Throws domain_error when R_tlm is 0.
double delta_percent(double revenue_mnl, double revenue_tlm);

// (optimal - actual) / optimal * 100. Throws domain_error when optimal <= 0.
double rel_loss(double optimal_profit, double actual_profit);

// Solves the same data under the threshold model at `gamma` and under the
// proportional limit (gamma = infinity); returns (threshold record, MNL
// record) with the revenue gap on the threshold side.
std::pair<ComparisonRecord, ComparisonRecord> delta(const Instance& instance, double gamma,
                                                    const std::vector<double>& costs,
                                                    const SolveConfig& config = {});

// Profit when the location decision is frozen at the MNL optimum but
// customers follow the threshold model: offers are re-optimized per zone over
// the fixed open set.
double actual_profit(const Instance& instance, double gamma,
                     const LocationDecision& mnl_location, const std::vector<double>& costs);

// Solves at `gamma` for the optimal profit, freezes the MNL-optimal location
// for the actual profit, and reports the relative loss between them.
LossRecord compute_loss(const Instance& instance, double gamma,
                        const std::vector<double>& costs, const SolveConfig& config = {});

// One solve per parameter value. gamma and f points reuse the base instance;
// alpha and xi points regenerate the attraction data from the base generator
// spec (same seed, hence same geometry). Δ and RelLoss are filled whenever
// the MNL reference solve succeeds and the metrics are defined. Records are
// ordered by parameter value; a solver failure on one point is recorded in
// its status and the sweep continues.
std::vector<SweepRecord> sweep(const Instance& base, const std::optional<GeneratorSpec>& spec,
                               Vary vary, const std::vector<double>& values,
                               const std::vector<double>& costs, const SolveConfig& config);

// RFC-4180-style CSV with the fixed header
// param_name,param_value,profit,revenue,facility_count,gap,status,wall_time_s,delta_pct,rel_loss_pct
std::string sweep_to_csv(const std::vector<SweepRecord>& records);

} // namespace lockerloc

#endif
