#ifndef LOCKERLOC_MODEL_HPP
#define LOCKERLOC_MODEL_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lockerloc/instance.hpp"

namespace lockerloc {

enum class FormKind { ip_d, ip_a, micqp };
enum class DominanceBlock { ddc, adc_path };
enum class ConstraintSense { le, ge, eq };
enum class ObjectiveSense { maximize, minimize };
enum class VarType { binary, continuous };
enum class ExportFormat { lp_text, conic_text, json };

struct Variable {
    std::string name;
    VarType type = VarType::binary;
    double lb = 0.0;
    double ub = 1.0;
};

struct LinearConstraint {
    std::string name;
    std::vector<std::pair<int, double>> terms; // (variable index, coefficient)
    ConstraintSense sense = ConstraintSense::le;
    double rhs = 0.0;
};

// Rotated-cone row beta * z >= 1, stored as the two variable indices.
struct ConeConstraint {
    int beta_var = -1;
    int z_var = -1;
};

// Describes the hyperbolic revenue objective of the IP kinds:
//   sum_i d_i * (sum_j a_ij y_ij) / (sum_j a_ij y_ij + a_i0) - sum_j f_j x_j
// Kept as data so evaluators can score integer points; it is not a linear
// objective and is never emitted as one.
struct FractionalObjective {
    struct ZoneTerm {
        double demand = 0.0;
        double outside = 0.0;
        std::vector<std::pair<int, double>> numerator; // (y variable index, a_ij)
    };
    std::vector<ZoneTerm> zones;
    std::vector<std::pair<int, double>> cost_terms; // (x variable index, f_j)
};

struct Formulation {
    FormKind kind = FormKind::ip_d;
    std::vector<Variable> variables;
    std::vector<LinearConstraint> linear;
    std::vector<ConeConstraint> cones;
    ObjectiveSense objective_sense = ObjectiveSense::maximize;
    std::vector<std::pair<int, double>> objective_terms;
    double objective_constant = 0.0;
    std::optional<FractionalObjective> fractional;

    int variable_index(const std::string& name) const; // -1 if absent
    std::size_t count_constraints_with_prefix(const std::string& prefix) const;
};

struct ModelOptions {
    // Extra vertex-disjoint path rows per zone on top of the longest path.
    int extra_paths = 0;
    // Also add path rows to the pairwise formulation (off by default; the
    // pairwise rows already imply them).
    bool paths_in_ip_d = false;
};

// Pairwise dominance formulation: linking rows y_ij <= x_j, one row
// y_ij + y_ik <= 1 per dominance pair, fractional objective descriptor.
Formulation build_ip_d(const Instance& instance, const std::vector<double>& costs,
                       const ModelOptions& options = {});

// Aggregated formulation: linking rows, one row
// sum_{k in Omega_ij} y_ik <= |Omega_ij| * (1 - y_ij) per locker with a
// nonempty dominated set, and one longest-path row per zone.
Formulation build_ip_a(const Instance& instance, const std::vector<double>& costs,
                       const ModelOptions& options = {});

// Conic reformulation: minimize sum_i d_i beta_i + sum_j f_j x_j with
// z_i = sum_j (a_ij / a_i0) y_ij + 1, 0 <= beta_i <= 1, beta_i z_i >= 1,
// plus the chosen dominance block.
Formulation build_micqp(const Instance& instance, const std::vector<double>& costs,
                        DominanceBlock block, const ModelOptions& options = {});

// Text export. lp_text uses LP-file syntax (cones appear as comments and a
// warning is included for conic kinds); conic_text is the documented block
// format; json is lossless and can be re-imported.
std::string export_formulation(const Formulation& formulation, ExportFormat format);

Formulation formulation_from_json(const std::string& text);

} // namespace lockerloc

#endif
