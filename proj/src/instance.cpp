#include "lockerloc/instance.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lockerloc/errors.hpp"
#include "lockerloc/rng.hpp"
#include "jsonio.hpp"

namespace lockerloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double euclidean(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace

void GeneratorSpec::validate() const {
    if (zones < 1) throw validation_error("generator spec: zones must be >= 1");
    if (lockers < 1) throw validation_error("generator spec: lockers must be >= 1");
    if (!(side > 0.0) || !std::isfinite(side))
        throw validation_error("generator spec: side must be positive and finite");
    if (!(demand_lo > 0.0)) throw validation_error("generator spec: demand_lo must be positive");
    if (!(demand_hi >= demand_lo))
        throw validation_error("generator spec: demand_hi must be >= demand_lo");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw validation_error("generator spec: alpha must be nonnegative and finite");
    if (!(xi > 0.0) || !std::isfinite(xi))
        throw validation_error("generator spec: xi must be positive and finite");
}

Instance::Instance(std::vector<Zone> zones, std::vector<Locker> lockers,
                   std::vector<double> attraction_row_major,
                   std::vector<double> outside_attraction, double gamma,
                   nlohmann::ordered_json meta)
    : zones_(std::move(zones)),
      lockers_(std::move(lockers)),
      attraction_(std::move(attraction_row_major)),
      outside_(std::move(outside_attraction)),
      gamma_(gamma),
      meta_(std::move(meta)) {
    validate();
}

void Instance::validate() const {
    const std::size_t m = zones_.size();
    const std::size_t n = lockers_.size();
    if (attraction_.size() != m * n)
        throw validation_error("attraction matrix size does not match zone/locker counts");
    if (outside_.size() != m)
        throw validation_error("outside attraction length does not match zone count");
    for (const Zone& zone : zones_)
        if (!(zone.demand > 0.0) || !std::isfinite(zone.demand))
            throw validation_error("demand must be positive");
    for (const Locker& locker : lockers_)
        if (!(locker.cost >= 0.0) || !std::isfinite(locker.cost))
            throw validation_error("cost must be nonnegative");
    for (double a : attraction_)
        if (!(a > 0.0) || !std::isfinite(a))
            throw validation_error("attraction must be positive");
    for (double a : outside_)
        if (!(a > 0.0) || !std::isfinite(a))
            throw validation_error("outside attraction must be positive");
    if (std::isnan(gamma_) || gamma_ < 0.0)
        throw validation_error("gamma must be nonnegative (or infinite)");
}

bool Instance::gamma_is_infinite() const { return std::isinf(gamma_); }

double Instance::total_demand() const {
    double total = 0.0;
    for (const Zone& zone : zones_) total += zone.demand;
    return total;
}

Instance Instance::with_gamma(double gamma) const {
    Instance copy = *this;
    copy.gamma_ = gamma;
    copy.validate();
    return copy;
}

Instance Instance::with_uniform_cost(double cost) const {
    Instance copy = *this;
    for (Locker& locker : copy.lockers_) locker.cost = cost;
    copy.validate();
    return copy;
}

std::vector<double> Instance::costs() const {
    std::vector<double> out;
    out.reserve(lockers_.size());
    for (const Locker& locker : lockers_) out.push_back(locker.cost);
    return out;
}

double attraction_from_distance(double distance, double alpha) {
    if (!(distance >= 0.0)) throw domain_error("distance must be nonnegative");
    if (!(alpha >= 0.0)) throw domain_error("alpha must be nonnegative");
    return std::exp(-alpha * distance);
}

double outside_option_attraction(double xi) {
    if (!(xi > 0.0)) throw domain_error("xi must be positive");
    return xi * std::exp(-1.0);
}

Instance generate(const GeneratorSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    const int m = spec.zones;
    const int n = spec.lockers;

    std::vector<Zone> zones(m);
    for (int i = 0; i < m; ++i) {
        zones[i].id = i;
        const double x = rng.next_double(0.0, spec.side);
        const double y = rng.next_double(0.0, spec.side);
        zones[i].position = {x, y};
    }
    std::vector<Locker> lockers(n);
    for (int j = 0; j < n; ++j) {
        lockers[j].id = j;
        lockers[j].cost = 0.0;
        const double x = rng.next_double(0.0, spec.side);
        const double y = rng.next_double(0.0, spec.side);
        lockers[j].position = {x, y};
    }
    for (int i = 0; i < m; ++i)
        zones[i].demand = rng.next_double(spec.demand_lo, spec.demand_hi);

    std::vector<double> attraction(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            attraction[static_cast<std::size_t>(i) * n + j] =
                attraction_from_distance(euclidean(*zones[i].position, *lockers[j].position),
                                         spec.alpha);

    std::vector<double> outside(m, outside_option_attraction(spec.xi));

    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    meta["generator"] = {
        {"m", spec.zones},     {"n", spec.lockers},       {"side", spec.side},
        {"demand_lo", spec.demand_lo}, {"demand_hi", spec.demand_hi},
        {"alpha", spec.alpha}, {"xi", spec.xi},           {"seed", spec.seed},
    };
    meta["demand_kind"] = "continuous";
    meta["prng"] = "splitmix64+xoshiro256++ v1";

    return Instance(std::move(zones), std::move(lockers), std::move(attraction),
                    std::move(outside), kInf, std::move(meta));
}

std::string to_json_string(const Instance& instance) {
    using detail::format_double;
    const int m = instance.zone_count();
    const int n = instance.locker_count();

    std::ostringstream out;
    out << "{\n";
    out << "  \"m\": " << m << ",\n";
    out << "  \"n\": " << n << ",\n";
    out << "  \"demand\": [";
    for (int i = 0; i < m; ++i)
        out << (i ? ", " : "") << format_double(instance.zones()[i].demand);
    out << "],\n";
    out << "  \"cost\": [";
    for (int j = 0; j < n; ++j)
        out << (j ? ", " : "") << format_double(instance.lockers()[j].cost);
    out << "],\n";
    out << "  \"attraction\": [\n";
    for (int i = 0; i < m; ++i) {
        out << "    [";
        for (int j = 0; j < n; ++j)
            out << (j ? ", " : "") << format_double(instance.attraction(i, j));
        out << (i + 1 < m ? "],\n" : "]\n");
    }
    out << "  ],\n";
    out << "  \"outside\": [";
    for (int i = 0; i < m; ++i)
        out << (i ? ", " : "") << format_double(instance.outside_attraction(i));
    out << "],\n";
    out << "  \"gamma\": " << detail::format_gamma(instance.gamma()) << ",\n";
    out << "  \"meta\": " << instance.meta().dump() << "\n";
    out << "}\n";
    return out.str();
}

namespace {

const nlohmann::ordered_json& require_field(const nlohmann::ordered_json& doc,
                                             const char* name) {
    auto it = doc.find(name);
    if (it == doc.end())
        throw parse_error(std::string("instance file: missing field '") + name + "'");
    return *it;
}

double number_field(const nlohmann::ordered_json& value, const char* name) {
    if (!value.is_number())
        throw parse_error(std::string("instance file: field '") + name + "' must be a number");
    return value.get<double>();
}

} // namespace

Instance from_json_string(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("instance file: ") + e.what());
    }
    if (!doc.is_object()) throw parse_error("instance file: top level must be an object");

    const auto& m_field = require_field(doc, "m");
    const auto& n_field = require_field(doc, "n");
    if (!m_field.is_number_integer() || !n_field.is_number_integer())
        throw parse_error("instance file: 'm' and 'n' must be integers");
    const int m = m_field.get<int>();
    const int n = n_field.get<int>();
    if (m < 0 || n < 0) throw parse_error("instance file: 'm' and 'n' must be nonnegative");

    const auto& demand = require_field(doc, "demand");
    const auto& cost = require_field(doc, "cost");
    const auto& attraction = require_field(doc, "attraction");
    const auto& outside = require_field(doc, "outside");
    const auto& gamma_field = require_field(doc, "gamma");

    if (!demand.is_array() || static_cast<int>(demand.size()) != m)
        throw parse_error("instance file: 'demand' must be an array of length m");
    if (!cost.is_array() || static_cast<int>(cost.size()) != n)
        throw parse_error("instance file: 'cost' must be an array of length n");
    if (!attraction.is_array() || static_cast<int>(attraction.size()) != m)
        throw parse_error("instance file: 'attraction' must be an array of m rows");
    if (!outside.is_array() || static_cast<int>(outside.size()) != m)
        throw parse_error("instance file: 'outside' must be an array of length m");

    std::vector<Zone> zones(m);
    for (int i = 0; i < m; ++i) {
        zones[i].id = i;
        zones[i].demand = number_field(demand[i], "demand");
    }
    std::vector<Locker> lockers(n);
    for (int j = 0; j < n; ++j) {
        lockers[j].id = j;
        lockers[j].cost = number_field(cost[j], "cost");
    }
    std::vector<double> a(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
        const auto& row = attraction[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            std::ostringstream msg;
            msg << "instance file: attraction row " << i << " must have length n";
            throw parse_error(msg.str());
        }
        for (int j = 0; j < n; ++j)
            a[static_cast<std::size_t>(i) * n + j] = number_field(row[j], "attraction");
    }
    std::vector<double> o(m);
    for (int i = 0; i < m; ++i) o[i] = number_field(outside[i], "outside");

    double gamma;
    if (gamma_field.is_string()) {
        if (gamma_field.get<std::string>() != "inf")
            throw parse_error("instance file: 'gamma' string value must be \"inf\"");
        gamma = std::numeric_limits<double>::infinity();
    } else if (gamma_field.is_number()) {
        gamma = gamma_field.get<double>();
    } else {
        throw parse_error("instance file: 'gamma' must be a number or \"inf\"");
    }

    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    if (auto it = doc.find("meta"); it != doc.end()) {
        if (!it->is_object()) throw parse_error("instance file: 'meta' must be an object");
        meta = *it;
    }

    return Instance(std::move(zones), std::move(lockers), std::move(a), std::move(o), gamma,
                    std::move(meta));
}

void save(const Instance& instance, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot open '" + path + "' for writing");
    out << to_json_string(instance);
    if (!out) throw parse_error("write to '" + path + "' failed");
}

Instance load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_string(buffer.str());
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t instance_hash(const Instance& instance) {
    return fnv1a64(to_json_string(instance));
}

} // namespace lockerloc
