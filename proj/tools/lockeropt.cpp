// Command-line driver for the locker location library. All domain work goes
// through the C API in lockerloc.h; this file only parses flags, assembles
// run manifests, and moves bytes between the library and the filesystem.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lockerloc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolverLimit = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, value);
    return buf;
}

std::string json_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

int fail_with(llp_status_code code) {
    std::cerr << "error: " << llp_last_error() << "\n";
    return code == LLP_ERROR_INVALID_ARGUMENT ? kExitUsage : kExitData;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

double parse_number(const std::string& text, const char* flag) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, "'" + text + "' is not a number");
    }
}

double parse_gamma(const std::string& text) {
    if (text == "inf" || text == "infinity") return INFINITY;
    return parse_number(text, "--gamma");
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        if (item == "inf" || item == "infinity")
            values.push_back(INFINITY);
        else
            values.push_back(parse_number(item, "--values"));
    }
    return values;
}

// RAII for C-API handles and strings.
struct InstanceHandle {
    llp_instance* ptr = nullptr;
    ~InstanceHandle() { llp_instance_free(ptr); }
};

struct ResultHandle {
    llp_result* ptr = nullptr;
    ~ResultHandle() { llp_result_free(ptr); }
};

struct StringHandle {
    char* ptr = nullptr;
    ~StringHandle() { llp_string_free(ptr); }
    std::string str() const { return ptr != nullptr ? std::string(ptr) : std::string(); }
};

struct Manifest {
    std::string command_line;
    std::string config_json; // snapshot of effective settings
    std::string instance_hash;
    std::string tool_version;

    std::string hash() const {
        return hex64(fnv1a64(command_line + config_json + instance_hash + tool_version));
    }

    std::string to_json(int indent_spaces) const {
        const std::string pad(indent_spaces, ' ');
        std::ostringstream out;
        out << "{\n";
        out << pad << "  \"command_line\": \"" << json_escape(command_line) << "\",\n";
        out << pad << "  \"config\": " << config_json << ",\n";
        out << pad << "  \"instance_hash\": \"" << instance_hash << "\",\n";
        out << pad << "  \"tool_version\": \"" << tool_version << "\",\n";
        out << pad << "  \"manifest_hash\": \"" << hash() << "\",\n";
        out << pad << "  \"timestamp\": \"" << iso_timestamp() << "\"\n";
        out << pad << "}";
        return out.str();
    }
};

std::string join_command_line(int argc, char** argv) {
    std::string joined;
    for (int i = 0; i < argc; ++i) {
        if (i) joined += ' ';
        joined += argv[i];
    }
    return joined;
}

std::string format_number(double value) {
    if (std::isinf(value)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

// ---- gen ----

struct GenArgs {
    int zones = 0;
    int lockers = 0;
    double side = 30.0;
    double demand_lo = 1.0;
    double demand_hi = 1000.0;
    double alpha = 1.0;
    double xi = 1.0;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen(const GenArgs& args, const std::string& command_line) {
    llp_generator_spec spec;
    spec.zones = args.zones;
    spec.lockers = args.lockers;
    spec.side = args.side;
    spec.demand_lo = args.demand_lo;
    spec.demand_hi = args.demand_hi;
    spec.alpha = args.alpha;
    spec.xi = args.xi;
    spec.seed = args.seed;

    InstanceHandle instance;
    if (const llp_status_code rc = llp_instance_generate(&spec, &instance.ptr); rc != LLP_OK)
        return fail_with(rc);
    if (const llp_status_code rc = llp_instance_save(instance.ptr, args.out.c_str()); rc != LLP_OK)
        return fail_with(rc);

    std::cout << "wrote " << args.out << "  (m=" << llp_instance_zone_count(instance.ptr)
              << " n=" << llp_instance_locker_count(instance.ptr) << " seed=" << args.seed
              << " hash=" << hex64(llp_instance_hash(instance.ptr)) << ")\n";
    (void)command_line;
    return kExitOk;
}

// ---- solve ----

struct SolveArgs {
    std::string instance_path;
    std::string gamma_text;
    double cost = 0.0;
    bool has_cost = false;
    std::string method = "bb";
    double gap = 1e-6;
    double time_limit = 0.0;
    long long node_limit = 0;
    int threads = 1;
    bool seed_check = false;
    std::string out;
};

std::string solve_config_json(const SolveArgs& args, double gamma) {
    std::ostringstream out;
    out << "{\"method\": \"" << args.method << "\", \"gamma\": "
        << (std::isinf(gamma) ? "\"inf\"" : format_number(gamma))
        << ", \"cost\": " << (args.has_cost ? format_number(args.cost) : "null")
        << ", \"gap\": " << format_number(args.gap)
        << ", \"time_limit\": " << format_number(args.time_limit)
        << ", \"node_limit\": " << args.node_limit << ", \"threads\": " << args.threads << "}";
    return out.str();
}

int solve_once(const llp_instance* instance, const std::vector<double>* costs,
               const llp_solve_options& options, ResultHandle& result) {
    const llp_status_code rc =
        llp_solve(instance, costs != nullptr ? costs->data() : nullptr, &options, &result.ptr);
    if (rc != LLP_OK) return fail_with(rc);
    return kExitOk;
}

// Result JSON modulo fields that legitimately change between identical runs.
std::string strip_volatile(const std::string& json) {
    std::istringstream in(json);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("\"wall_time_seconds\"") != std::string::npos) continue;
        if (line.find("\"timestamp\"") != std::string::npos) continue;
        out << line << "\n";
    }
    return out.str();
}

int run_solve(const SolveArgs& args, const std::string& command_line) {
    InstanceHandle loaded;
    if (const llp_status_code rc = llp_instance_load(args.instance_path.c_str(), &loaded.ptr);
        rc != LLP_OK)
        return fail_with(rc);

    InstanceHandle shifted;
    const llp_instance* instance = loaded.ptr;
    double gamma = llp_instance_gamma(loaded.ptr);
    if (!args.gamma_text.empty()) {
        gamma = parse_gamma(args.gamma_text);
        if (const llp_status_code rc = llp_instance_with_gamma(loaded.ptr, gamma, &shifted.ptr);
            rc != LLP_OK)
            return fail_with(rc);
        instance = shifted.ptr;
    }

    std::vector<double> costs;
    const std::vector<double>* costs_ptr = nullptr;
    if (args.has_cost) {
        costs.assign(static_cast<std::size_t>(llp_instance_locker_count(instance)), args.cost);
        costs_ptr = &costs;
    }

    llp_solve_options options;
    llp_solve_options_default(&options);
    options.gap_tolerance = args.gap;
    options.time_limit_seconds = args.time_limit;
    options.node_limit = args.node_limit;
    options.threads = args.threads;
    options.method = args.method == "bruteforce" ? LLP_METHOD_BRUTEFORCE : LLP_METHOD_BB;

    ResultHandle result;
    if (const int rc = solve_once(instance, costs_ptr, options, result); rc != kExitOk) return rc;

    StringHandle result_json;
    if (const llp_status_code rc = llp_result_to_json(result.ptr, &result_json.ptr); rc != LLP_OK)
        return fail_with(rc);

    if (args.seed_check) {
        ResultHandle second;
        if (const int rc = solve_once(instance, costs_ptr, options, second); rc != kExitOk)
            return rc;
        StringHandle second_json;
        if (const llp_status_code rc = llp_result_to_json(second.ptr, &second_json.ptr);
            rc != LLP_OK)
            return fail_with(rc);
        if (strip_volatile(result_json.str()) != strip_volatile(second_json.str())) {
            std::cerr << "error: seed check failed, two identical runs produced different "
                         "results\n";
            return kExitData;
        }
        std::cout << "seed check passed: repeated run is identical\n";
    }

    Manifest manifest;
    manifest.command_line = command_line;
    manifest.config_json = solve_config_json(args, gamma);
    manifest.instance_hash = hex64(llp_instance_hash(instance));
    manifest.tool_version = llp_version();

    if (!args.out.empty()) {
        std::ostringstream file;
        file << "{\n";
        file << "  \"manifest\": " << manifest.to_json(2) << ",\n";
        file << "  \"result\": " << result_json.str() << "\n";
        file << "}\n";
        if (!write_file(args.out, file.str())) {
            std::cerr << "error: cannot write '" << args.out << "'\n";
            return kExitData;
        }
    }

    const int status = llp_result_status(result.ptr);
    std::cout << "profit    " << format_number(llp_result_profit(result.ptr)) << "\n";
    std::cout << "revenue   " << format_number(llp_result_revenue(result.ptr)) << "\n";
    std::cout << "open      " << llp_result_open_count(result.ptr) << "\n";
    std::cout << "bound     " << format_number(llp_result_upper_bound(result.ptr)) << "\n";
    std::cout << "gap       " << format_number(llp_result_gap(result.ptr) * 100.0) << "%\n";
    std::cout << "nodes     " << llp_result_nodes(result.ptr) << "\n";
    std::cout << "time      " << format_number(llp_result_wall_time(result.ptr)) << "s\n";
    std::cout << "status    "
              << (status == LLP_SOLVE_OPTIMAL       ? "optimal"
                  : status == LLP_SOLVE_GAP_LIMIT   ? "gap_limit"
                  : status == LLP_SOLVE_TIME_LIMIT  ? "time_limit"
                                                    : "node_limit")
              << "\n";
    std::cout << "manifest  " << manifest.hash() << "\n";

    if (status == LLP_SOLVE_TIME_LIMIT || status == LLP_SOLVE_NODE_LIMIT) return kExitSolverLimit;
    return kExitOk;
}

// ---- export ----

struct ExportArgs {
    std::string instance_path;
    std::string gamma_text;
    double cost = 0.0;
    bool has_cost = false;
    std::string form = "ipd";
    std::string format = "lp";
    int zone = 0;
    std::string out;
};

int run_export(const ExportArgs& args) {
    InstanceHandle loaded;
    if (const llp_status_code rc = llp_instance_load(args.instance_path.c_str(), &loaded.ptr);
        rc != LLP_OK)
        return fail_with(rc);

    InstanceHandle shifted;
    const llp_instance* instance = loaded.ptr;
    if (!args.gamma_text.empty()) {
        if (const llp_status_code rc =
                llp_instance_with_gamma(loaded.ptr, parse_gamma(args.gamma_text), &shifted.ptr);
            rc != LLP_OK)
            return fail_with(rc);
        instance = shifted.ptr;
    }

    StringHandle text;
    if (args.format == "dot") {
        if (const llp_status_code rc = llp_export_dot(instance, args.zone, &text.ptr);
            rc != LLP_OK)
            return fail_with(rc);
    } else {
        int form;
        if (args.form == "ipd")
            form = LLP_FORM_IPD;
        else if (args.form == "ipa")
            form = LLP_FORM_IPA;
        else if (args.form == "micqp-d")
            form = LLP_FORM_MICQP_D;
        else if (args.form == "micqp-a")
            form = LLP_FORM_MICQP_A;
        else {
            std::cerr << "error: unknown --form '" << args.form << "'\n";
            return kExitUsage;
        }
        int format;
        if (args.format == "lp")
            format = LLP_EXPORT_LP;
        else if (args.format == "conic")
            format = LLP_EXPORT_CONIC;
        else if (args.format == "json")
            format = LLP_EXPORT_JSON;
        else {
            std::cerr << "error: unknown --format '" << args.format << "'\n";
            return kExitUsage;
        }

        std::vector<double> costs;
        const double* costs_ptr = nullptr;
        if (args.has_cost) {
            costs.assign(static_cast<std::size_t>(llp_instance_locker_count(instance)), args.cost);
            costs_ptr = costs.data();
        }
        if (const llp_status_code rc =
                llp_export_model(instance, costs_ptr, form, format, &text.ptr);
            rc != LLP_OK)
            return fail_with(rc);
    }

    if (!write_file(args.out, text.str())) {
        std::cerr << "error: cannot write '" << args.out << "'\n";
        return kExitData;
    }
    std::cout << "wrote " << args.out << "\n";
    return kExitOk;
}

// ---- sweep ----

struct SweepArgs {
    std::string instance_path;
    std::string spec_text;
    std::string gamma_text;
    std::string vary = "gamma";
    std::string values_text;
    double cost = 0.0;
    bool has_cost = false;
    double gap = 1e-6;
    double time_limit = 0.0;
    int threads = 1;
    std::string out;
};

// --spec "m=40,n=20,side=30,demand-lo=1,demand-hi=1000,alpha=1,xi=1,seed=7"
llp_generator_spec parse_spec(const std::string& text) {
    llp_generator_spec spec{0, 0, 30.0, 1.0, 1000.0, 1.0, 1.0, 0};
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--spec", "expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "m" || key == "zones")
            spec.zones = static_cast<int>(parse_number(value, "--spec"));
        else if (key == "n" || key == "lockers")
            spec.lockers = static_cast<int>(parse_number(value, "--spec"));
        else if (key == "side")
            spec.side = parse_number(value, "--spec");
        else if (key == "demand-lo")
            spec.demand_lo = parse_number(value, "--spec");
        else if (key == "demand-hi")
            spec.demand_hi = parse_number(value, "--spec");
        else if (key == "alpha")
            spec.alpha = parse_number(value, "--spec");
        else if (key == "xi")
            spec.xi = parse_number(value, "--spec");
        else if (key == "seed") {
            try {
                spec.seed = std::stoull(value);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--spec", "'" + value + "' is not a seed");
            }
        } else {
            throw CLI::ValidationError("--spec", "unknown key '" + key + "'");
        }
    }
    return spec;
}

int run_sweep(const SweepArgs& args, const std::string& command_line) {
    InstanceHandle base;
    if (!args.instance_path.empty()) {
        if (const llp_status_code rc = llp_instance_load(args.instance_path.c_str(), &base.ptr);
            rc != LLP_OK)
            return fail_with(rc);
    } else {
        const llp_generator_spec spec = parse_spec(args.spec_text);
        if (const llp_status_code rc = llp_instance_generate(&spec, &base.ptr); rc != LLP_OK)
            return fail_with(rc);
    }

    InstanceHandle shifted;
    const llp_instance* instance = base.ptr;
    if (!args.gamma_text.empty()) {
        if (const llp_status_code rc =
                llp_instance_with_gamma(base.ptr, parse_gamma(args.gamma_text), &shifted.ptr);
            rc != LLP_OK)
            return fail_with(rc);
        instance = shifted.ptr;
    }

    const std::vector<double> values = parse_values(args.values_text);
    if (values.empty()) {
        std::cerr << "error: --values must list at least one value\n";
        return kExitUsage;
    }

    int vary;
    if (args.vary == "gamma")
        vary = LLP_VARY_GAMMA;
    else if (args.vary == "alpha")
        vary = LLP_VARY_ALPHA;
    else if (args.vary == "xi")
        vary = LLP_VARY_XI;
    else if (args.vary == "f")
        vary = LLP_VARY_F;
    else {
        std::cerr << "error: unknown --vary '" << args.vary << "'\n";
        return kExitUsage;
    }

    std::vector<double> costs;
    const double* costs_ptr = nullptr;
    if (args.has_cost) {
        costs.assign(static_cast<std::size_t>(llp_instance_locker_count(instance)), args.cost);
        costs_ptr = costs.data();
    }

    llp_solve_options options;
    llp_solve_options_default(&options);
    options.gap_tolerance = args.gap;
    options.time_limit_seconds = args.time_limit;
    options.threads = args.threads;

    StringHandle csv;
    if (const llp_status_code rc = llp_sweep_csv(instance, vary, values.data(), values.size(),
                                                 costs_ptr, &options, &csv.ptr);
        rc != LLP_OK)
        return fail_with(rc);

    if (!write_file(args.out, csv.str())) {
        std::cerr << "error: cannot write '" << args.out << "'\n";
        return kExitData;
    }

    Manifest manifest;
    manifest.command_line = command_line;
    std::ostringstream config;
    config << "{\"vary\": \"" << args.vary << "\", \"values\": \"" << args.values_text
           << "\", \"cost\": " << (args.has_cost ? format_number(args.cost) : "null")
           << ", \"gap\": " << format_number(args.gap)
           << ", \"time_limit\": " << format_number(args.time_limit)
           << ", \"threads\": " << args.threads << "}";
    manifest.config_json = config.str();
    manifest.instance_hash = hex64(llp_instance_hash(instance));
    manifest.tool_version = llp_version();
    write_file(args.out + ".manifest.json", manifest.to_json(0) + "\n");

    std::cout << "wrote " << args.out << " (" << values.size() << " points, manifest "
              << manifest.hash() << ")\n";
    return kExitOk;
}

int default_threads() {
    if (const char* env = std::getenv("LOCKER_OPT_THREADS")) {
        const int value = std::atoi(env);
        if (value >= 1) return value;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Profit-maximizing parcel locker location under threshold-dominance choice"};
    app.require_subcommand(1);
    const std::string command_line = join_command_line(argc, argv);

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic instance");
    gen_cmd->add_option("--zones", gen.zones, "number of customer zones")->required();
    gen_cmd->add_option("--lockers", gen.lockers, "number of candidate lockers")->required();
    gen_cmd->add_option("--side", gen.side, "side of the square region");
    gen_cmd->add_option("--demand-lo", gen.demand_lo, "demand range lower bound");
    gen_cmd->add_option("--demand-hi", gen.demand_hi, "demand range upper bound");
    gen_cmd->add_option("--alpha", gen.alpha, "distance sensitivity");
    gen_cmd->add_option("--xi", gen.xi, "outside-option scale");
    gen_cmd->add_option("--seed", gen.seed, "PRNG seed");
    gen_cmd->add_option("--out", gen.out, "output instance file")->required();

    SolveArgs solve;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve an instance");
    solve_cmd->add_option("--instance", solve.instance_path, "instance file")->required();
    solve_cmd->add_option("--gamma", solve.gamma_text, "dominance threshold (number or 'inf')");
    CLI::Option* solve_cost = solve_cmd->add_option("--cost", solve.cost, "uniform facility cost");
    solve_cmd->add_option("--method", solve.method, "bb or bruteforce")
        ->check(CLI::IsMember({"bb", "bruteforce"}));
    solve_cmd->add_option("--gap", solve.gap, "relative optimality tolerance");
    solve_cmd->add_option("--time-limit", solve.time_limit, "time limit in seconds");
    solve_cmd->add_option("--node-limit", solve.node_limit, "node limit");
    solve_cmd->add_option("--threads", solve.threads, "worker threads")
        ->default_val(default_threads());
    solve_cmd->add_flag("--seed-check", solve.seed_check,
                        "solve twice and fail unless the runs are identical");
    solve_cmd->add_option("--out", solve.out, "result JSON file");

    ExportArgs exp;
    CLI::App* export_cmd = app.add_subcommand("export", "export a model or dominance graph");
    export_cmd->add_option("--instance", exp.instance_path, "instance file")->required();
    export_cmd->add_option("--gamma", exp.gamma_text, "dominance threshold (number or 'inf')");
    CLI::Option* export_cost = export_cmd->add_option("--cost", exp.cost, "uniform facility cost");
    export_cmd->add_option("--form", exp.form, "ipd, ipa, micqp-d, micqp-a");
    export_cmd->add_option("--format", exp.format, "lp, conic, json, dot");
    export_cmd->add_option("--zone", exp.zone, "zone index for dot export");
    export_cmd->add_option("--out", exp.out, "output file")->required();

    SweepArgs sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a sensitivity sweep");
    CLI::Option* sweep_instance =
        sweep_cmd->add_option("--instance", sweep.instance_path, "instance file");
    CLI::Option* sweep_spec = sweep_cmd->add_option(
        "--spec", sweep.spec_text, "generator spec, e.g. m=40,n=20,side=30,seed=7");
    sweep_instance->excludes(sweep_spec);
    sweep_cmd->add_option("--gamma", sweep.gamma_text, "base dominance threshold");
    sweep_cmd->add_option("--vary", sweep.vary, "gamma, alpha, xi, or f")->required();
    sweep_cmd->add_option("--values", sweep.values_text, "comma-separated values")->required();
    CLI::Option* sweep_cost = sweep_cmd->add_option("--cost", sweep.cost, "uniform facility cost");
    sweep_cmd->add_option("--gap", sweep.gap, "relative optimality tolerance");
    sweep_cmd->add_option("--time-limit", sweep.time_limit, "per-solve time limit in seconds");
    sweep_cmd->add_option("--threads", sweep.threads, "worker threads")
        ->default_val(default_threads());
    sweep_cmd->add_option("--out", sweep.out, "output CSV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    solve.has_cost = solve_cost->count() > 0;
    exp.has_cost = export_cost->count() > 0;
    sweep.has_cost = sweep_cost->count() > 0;

    try {
        if (gen_cmd->parsed()) return run_gen(gen, command_line);
        if (solve_cmd->parsed()) return run_solve(solve, command_line);
        if (export_cmd->parsed()) return run_export(exp);
        if (sweep_cmd->parsed()) {
            if (sweep.instance_path.empty() && sweep.spec_text.empty()) {
                std::cerr << "error: sweep needs --instance or --spec\n";
                return kExitUsage;
            }
            return run_sweep(sweep, command_line);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
