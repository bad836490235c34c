#include "lockerloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lockerloc/choice.hpp"
#include "lockerloc/domgraph.hpp"
#include "lockerloc/errors.hpp"
#include "jsonio.hpp"

namespace lockerloc {

namespace {

using detail::format_double;

std::string x_name(int j) { return "x_" + std::to_string(j + 1); }

std::string y_name(int i, int j) {
    return "y_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

// Shared scaffolding: x and y variables plus the linking rows y_ij <= x_j.
struct Skeleton {
    Formulation form;
    std::vector<int> x_index;               // j -> variable index
    std::vector<std::vector<int>> y_index;  // i, j -> variable index
};

Skeleton make_skeleton(const Instance& instance) {
    const int m = instance.zone_count();
    const int n = instance.locker_count();
    Skeleton s;
    s.x_index.resize(n);
    s.y_index.assign(m, std::vector<int>(n));
    for (int j = 0; j < n; ++j) {
        s.x_index[j] = static_cast<int>(s.form.variables.size());
        s.form.variables.push_back({x_name(j), VarType::binary, 0.0, 1.0});
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            s.y_index[i][j] = static_cast<int>(s.form.variables.size());
            s.form.variables.push_back({y_name(i, j), VarType::binary, 0.0, 1.0});
        }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            LinearConstraint row;
            row.name = "link_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
            row.terms = {{s.y_index[i][j], 1.0}, {s.x_index[j], -1.0}};
            row.sense = ConstraintSense::le;
            row.rhs = 0.0;
            s.form.linear.push_back(std::move(row));
        }
    return s;
}

void add_ddc_rows(const Instance& instance, Skeleton& s) {
    const int m = instance.zone_count();
    const int n = instance.locker_count();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            for (int k : dominated_set(instance, i, j)) {
                LinearConstraint row;
                row.name = "ddc_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" +
                           std::to_string(k + 1);
                row.terms = {{s.y_index[i][j], 1.0}, {s.y_index[i][k], 1.0}};
                row.sense = ConstraintSense::le;
                row.rhs = 1.0;
                s.form.linear.push_back(std::move(row));
            }
}

// sum_{k in Omega_ij} y_ik <= |Omega_ij| * (1 - y_ij), stored with y_ij moved
// to the left-hand side.
void add_adc_rows(const Instance& instance, Skeleton& s) {
    const int m = instance.zone_count();
    const int n = instance.locker_count();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const std::vector<int> omega = dominated_set(instance, i, j);
            if (omega.empty()) continue;
            LinearConstraint row;
            row.name = "adc_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
            for (int k : omega) row.terms.emplace_back(s.y_index[i][k], 1.0);
            row.terms.emplace_back(s.y_index[i][j], static_cast<double>(omega.size()));
            row.sense = ConstraintSense::le;
            row.rhs = static_cast<double>(omega.size());
            s.form.linear.push_back(std::move(row));
        }
}

void add_path_rows(const Instance& instance, Skeleton& s, int extra_paths) {
    const int m = instance.zone_count();
    for (int i = 0; i < m; ++i) {
        const DominanceGraph graph = build(instance, i);
        const std::vector<PathInequality> paths = longest_paths(graph, extra_paths);
        int counter = 0;
        for (const PathInequality& path : paths) {
            if (path.vertices.size() < 2) continue; // vacuous
            LinearConstraint row;
            row.name = "path_" + std::to_string(i + 1);
            if (counter > 0) row.name += "_" + std::to_string(counter + 1);
            ++counter;
            for (int v : path.vertices) row.terms.emplace_back(s.y_index[i][v], 1.0);
            row.sense = ConstraintSense::le;
            row.rhs = 1.0;
            s.form.linear.push_back(std::move(row));
        }
    }
}

void attach_fractional_objective(const Instance& instance, const std::vector<double>& costs,
                                 Skeleton& s) {
    const int m = instance.zone_count();
    const int n = instance.locker_count();
    FractionalObjective fractional;
    fractional.zones.resize(m);
    for (int i = 0; i < m; ++i) {
        auto& zone = fractional.zones[i];
        zone.demand = instance.demand(i);
        zone.outside = instance.outside_attraction(i);
        for (int j = 0; j < n; ++j)
            zone.numerator.emplace_back(s.y_index[i][j], instance.attraction(i, j));
    }
    for (int j = 0; j < n; ++j) fractional.cost_terms.emplace_back(s.x_index[j], costs[j]);
    s.form.fractional = std::move(fractional);

    s.form.objective_sense = ObjectiveSense::maximize;
    for (int j = 0; j < n; ++j)
        if (costs[j] != 0.0) s.form.objective_terms.emplace_back(s.x_index[j], -costs[j]);
}

void check_costs(const Instance& instance, const std::vector<double>& costs) {
    if (static_cast<int>(costs.size()) != instance.locker_count())
        throw contract_error("cost vector length does not match locker count");
}

} // namespace

int Formulation::variable_index(const std::string& name) const {
    for (int idx = 0; idx < static_cast<int>(variables.size()); ++idx)
        if (variables[idx].name == name) return idx;
    return -1;
}

std::size_t Formulation::count_constraints_with_prefix(const std::string& prefix) const {
    std::size_t count = 0;
    for (const LinearConstraint& row : linear)
        if (row.name.rfind(prefix, 0) == 0) ++count;
    return count;
}

Formulation build_ip_d(const Instance& instance, const std::vector<double>& costs,
                       const ModelOptions& options) {
    check_costs(instance, costs);
    Skeleton s = make_skeleton(instance);
    s.form.kind = FormKind::ip_d;
    add_ddc_rows(instance, s);
    if (options.paths_in_ip_d) add_path_rows(instance, s, options.extra_paths);
    attach_fractional_objective(instance, costs, s);
    return std::move(s.form);
}

Formulation build_ip_a(const Instance& instance, const std::vector<double>& costs,
                       const ModelOptions& options) {
    check_costs(instance, costs);
    Skeleton s = make_skeleton(instance);
    s.form.kind = FormKind::ip_a;
    add_adc_rows(instance, s);
    add_path_rows(instance, s, options.extra_paths);
    attach_fractional_objective(instance, costs, s);
    return std::move(s.form);
}

Formulation build_micqp(const Instance& instance, const std::vector<double>& costs,
                        DominanceBlock block, const ModelOptions& options) {
    check_costs(instance, costs);
    const int m = instance.zone_count();
    const int n = instance.locker_count();
    Skeleton s = make_skeleton(instance);
    s.form.kind = FormKind::micqp;
    if (block == DominanceBlock::ddc) {
        add_ddc_rows(instance, s);
    } else {
        add_adc_rows(instance, s);
        add_path_rows(instance, s, options.extra_paths);
    }

    std::vector<int> beta_index(m), z_index(m);
    for (int i = 0; i < m; ++i) {
        beta_index[i] = static_cast<int>(s.form.variables.size());
        s.form.variables.push_back(
            {"b_" + std::to_string(i + 1), VarType::continuous, 0.0, 1.0});
    }
    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        z_index[i] = static_cast<int>(s.form.variables.size());
        s.form.variables.push_back({"z_" + std::to_string(i + 1), VarType::continuous, 1.0, inf});
    }

    // z_i - sum_j (a_ij / a_i0) y_ij = 1
    for (int i = 0; i < m; ++i) {
        LinearConstraint row;
        row.name = "zdef_" + std::to_string(i + 1);
        row.terms.emplace_back(z_index[i], 1.0);
        for (int j = 0; j < n; ++j)
            row.terms.emplace_back(s.y_index[i][j],
                                   -instance.attraction(i, j) / instance.outside_attraction(i));
        row.sense = ConstraintSense::eq;
        row.rhs = 1.0;
        s.form.linear.push_back(std::move(row));
    }
    for (int i = 0; i < m; ++i) s.form.cones.push_back({beta_index[i], z_index[i]});

    s.form.objective_sense = ObjectiveSense::minimize;
    for (int i = 0; i < m; ++i)
        s.form.objective_terms.emplace_back(beta_index[i], instance.demand(i));
    for (int j = 0; j < n; ++j)
        if (costs[j] != 0.0) s.form.objective_terms.emplace_back(s.x_index[j], costs[j]);
    return std::move(s.form);
}

namespace {

void append_terms(std::ostream& out, const Formulation& form,
                  const std::vector<std::pair<int, double>>& terms) {
    bool first = true;
    for (const auto& [var, coef] : terms) {
        const std::string& name = form.variables[var].name;
        if (first) {
            if (coef == 1.0)
                out << name;
            else if (coef == -1.0)
                out << "- " << name;
            else
                out << format_double(coef) << " " << name;
            first = false;
        } else {
            if (coef == 1.0)
                out << " + " << name;
            else if (coef == -1.0)
                out << " - " << name;
            else if (coef < 0.0)
                out << " - " << format_double(-coef) << " " << name;
            else
                out << " + " << format_double(coef) << " " << name;
        }
    }
    if (first) out << "0 " << (form.variables.empty() ? "x_1" : form.variables[0].name);
}

const char* sense_text(ConstraintSense sense) {
    switch (sense) {
        case ConstraintSense::le: return "<=";
        case ConstraintSense::ge: return ">=";
        case ConstraintSense::eq: return "=";
    }
    return "<=";
}

const char* kind_text(FormKind kind) {
    switch (kind) {
        case FormKind::ip_d: return "IP-D";
        case FormKind::ip_a: return "IP-A";
        case FormKind::micqp: return "MICQP";
    }
    return "?";
}

std::string export_lp(const Formulation& form) {
    std::ostringstream out;
    out << "\\ lockerloc model export v1\n";
    out << "\\ kind: " << kind_text(form.kind) << "\n";
    if (!form.cones.empty())
        out << "\\ WARNING: rotated-cone rows are emitted as comments below; "
               "this LP file does not enforce them\n";
    if (form.fractional) {
        out << "\\ fractional revenue objective (not LP-representable); the linear\n";
        out << "\\ objective below carries only the facility-cost terms:\n";
        for (std::size_t i = 0; i < form.fractional->zones.size(); ++i) {
            const auto& zone = form.fractional->zones[i];
            out << "\\   zone " << (i + 1) << ": d=" << format_double(zone.demand)
                << " a0=" << format_double(zone.outside) << " numerator:";
            for (const auto& [var, coef] : zone.numerator)
                out << " + " << format_double(coef) << " " << form.variables[var].name;
            out << "\n";
        }
    }
    out << (form.objective_sense == ObjectiveSense::maximize ? "Maximize\n" : "Minimize\n");
    out << " obj: ";
    append_terms(out, form, form.objective_terms);
    out << "\n";
    out << "Subject To\n";
    for (const LinearConstraint& row : form.linear) {
        out << " " << row.name << ": ";
        append_terms(out, form, row.terms);
        out << " " << sense_text(row.sense) << " " << format_double(row.rhs) << "\n";
    }
    for (const ConeConstraint& cone : form.cones)
        out << "\\ cone: " << form.variables[cone.beta_var].name << " * "
            << form.variables[cone.z_var].name << " >= 1\n";

    std::ostringstream bounds;
    for (const Variable& var : form.variables) {
        if (var.type != VarType::continuous) continue;
        bounds << " " << format_double(var.lb) << " <= " << var.name;
        if (std::isfinite(var.ub)) bounds << " <= " << format_double(var.ub);
        bounds << "\n";
    }
    if (!bounds.str().empty()) out << "Bounds\n" << bounds.str();

    out << "Binaries\n";
    int per_line = 0;
    for (const Variable& var : form.variables) {
        if (var.type != VarType::binary) continue;
        out << (per_line == 0 ? " " : " ") << var.name;
        if (++per_line == 10) {
            out << "\n";
            per_line = 0;
        }
    }
    if (per_line != 0) out << "\n";
    out << "End\n";
    return out.str();
}

std::string export_conic(const Formulation& form) {
    std::ostringstream out;
    out << "LOCKERLOC-CONIC v1\n";
    out << "kind " << kind_text(form.kind) << "\n";
    out << "objective " << (form.objective_sense == ObjectiveSense::maximize ? "maximize" : "minimize")
        << "\n";
    out << "  const " << format_double(form.objective_constant) << "\n";
    for (const auto& [var, coef] : form.objective_terms)
        out << "  " << format_double(coef) << " " << form.variables[var].name << "\n";
    out << "variables " << form.variables.size() << "\n";
    for (const Variable& var : form.variables) {
        out << "  " << var.name << " " << (var.type == VarType::binary ? "binary" : "continuous")
            << " " << format_double(var.lb) << " ";
        if (std::isfinite(var.ub))
            out << format_double(var.ub);
        else
            out << "inf";
        out << "\n";
    }
    out << "linear " << form.linear.size() << "\n";
    for (const LinearConstraint& row : form.linear) {
        out << "  " << row.name << " " << sense_text(row.sense) << " " << format_double(row.rhs)
            << " :";
        for (const auto& [var, coef] : row.terms)
            out << " " << format_double(coef) << " " << form.variables[var].name;
        out << "\n";
    }
    out << "cones " << form.cones.size() << "\n";
    for (const ConeConstraint& cone : form.cones)
        out << "  rotated " << form.variables[cone.beta_var].name << " "
            << form.variables[cone.z_var].name << " 1\n";
    out << "end\n";
    return out.str();
}

nlohmann::ordered_json terms_to_json(const std::vector<std::pair<int, double>>& terms) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [var, coef] : terms) arr.push_back({var, coef});
    return arr;
}

std::vector<std::pair<int, double>> terms_from_json(const nlohmann::json& arr) {
    std::vector<std::pair<int, double>> terms;
    for (const auto& entry : arr)
        terms.emplace_back(entry.at(0).get<int>(), entry.at(1).get<double>());
    return terms;
}

std::string export_json(const Formulation& form) {
    nlohmann::ordered_json doc;
    doc["format"] = "lockerloc-formulation";
    doc["version"] = 1;
    doc["kind"] = kind_text(form.kind);
    doc["objective_sense"] = form.objective_sense == ObjectiveSense::maximize ? "max" : "min";
    doc["objective_constant"] = form.objective_constant;
    doc["objective_terms"] = terms_to_json(form.objective_terms);
    nlohmann::ordered_json vars = nlohmann::ordered_json::array();
    for (const Variable& var : form.variables) {
        nlohmann::ordered_json v;
        v["name"] = var.name;
        v["type"] = var.type == VarType::binary ? "binary" : "continuous";
        v["lb"] = var.lb;
        v["ub"] = std::isfinite(var.ub) ? nlohmann::ordered_json(var.ub)
                                        : nlohmann::ordered_json("inf");
        vars.push_back(std::move(v));
    }
    doc["variables"] = std::move(vars);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const LinearConstraint& row : form.linear) {
        nlohmann::ordered_json r;
        r["name"] = row.name;
        r["sense"] = sense_text(row.sense);
        r["rhs"] = row.rhs;
        r["terms"] = terms_to_json(row.terms);
        rows.push_back(std::move(r));
    }
    doc["linear"] = std::move(rows);
    nlohmann::ordered_json cones = nlohmann::ordered_json::array();
    for (const ConeConstraint& cone : form.cones) cones.push_back({cone.beta_var, cone.z_var});
    doc["cones"] = std::move(cones);
    if (form.fractional) {
        nlohmann::ordered_json fr;
        nlohmann::ordered_json zones = nlohmann::ordered_json::array();
        for (const auto& zone : form.fractional->zones) {
            nlohmann::ordered_json z;
            z["demand"] = zone.demand;
            z["outside"] = zone.outside;
            z["numerator"] = terms_to_json(zone.numerator);
            zones.push_back(std::move(z));
        }
        fr["zones"] = std::move(zones);
        fr["cost_terms"] = terms_to_json(form.fractional->cost_terms);
        doc["fractional"] = std::move(fr);
    } else {
        doc["fractional"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

} // namespace

std::string export_formulation(const Formulation& formulation, ExportFormat format) {
    switch (format) {
        case ExportFormat::lp_text: return export_lp(formulation);
        case ExportFormat::conic_text: return export_conic(formulation);
        case ExportFormat::json: return export_json(formulation);
    }
    throw contract_error("unknown export format");
}

Formulation formulation_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("formulation file: ") + e.what());
    }
    if (doc.value("format", "") != "lockerloc-formulation")
        throw parse_error("formulation file: missing format marker");

    Formulation form;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "IP-D")
        form.kind = FormKind::ip_d;
    else if (kind == "IP-A")
        form.kind = FormKind::ip_a;
    else if (kind == "MICQP")
        form.kind = FormKind::micqp;
    else
        throw parse_error("formulation file: unknown kind '" + kind + "'");

    form.objective_sense = doc.at("objective_sense").get<std::string>() == "max"
                               ? ObjectiveSense::maximize
                               : ObjectiveSense::minimize;
    form.objective_constant = doc.at("objective_constant").get<double>();
    form.objective_terms = terms_from_json(doc.at("objective_terms"));

    for (const auto& v : doc.at("variables")) {
        Variable var;
        var.name = v.at("name").get<std::string>();
        var.type = v.at("type").get<std::string>() == "binary" ? VarType::binary
                                                               : VarType::continuous;
        var.lb = v.at("lb").get<double>();
        const auto& ub = v.at("ub");
        var.ub = ub.is_string() ? std::numeric_limits<double>::infinity() : ub.get<double>();
        form.variables.push_back(std::move(var));
    }
    for (const auto& r : doc.at("linear")) {
        LinearConstraint row;
        row.name = r.at("name").get<std::string>();
        const std::string sense = r.at("sense").get<std::string>();
        row.sense = sense == "<=" ? ConstraintSense::le
                                  : (sense == ">=" ? ConstraintSense::ge : ConstraintSense::eq);
        row.rhs = r.at("rhs").get<double>();
        row.terms = terms_from_json(r.at("terms"));
        form.linear.push_back(std::move(row));
    }
    for (const auto& c : doc.at("cones"))
        form.cones.push_back({c.at(0).get<int>(), c.at(1).get<int>()});

    if (doc.contains("fractional") && !doc.at("fractional").is_null()) {
        FractionalObjective fractional;
        for (const auto& z : doc.at("fractional").at("zones")) {
            FractionalObjective::ZoneTerm zone;
            zone.demand = z.at("demand").get<double>();
            zone.outside = z.at("outside").get<double>();
            zone.numerator = terms_from_json(z.at("numerator"));
            fractional.zones.push_back(std::move(zone));
        }
        fractional.cost_terms = terms_from_json(doc.at("fractional").at("cost_terms"));
        form.fractional = std::move(fractional);
    }
    return form;
}

} // namespace lockerloc
