#ifndef LOCKERLOC_INSTANCE_HPP
#define LOCKERLOC_INSTANCE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace lockerloc {

struct Zone {
    int id = 0;
    double demand = 0.0;
    std::optional<std::array<double, 2>> position;
};

struct Locker {
    int id = 0;
    double cost = 0.0;
    std::optional<std::array<double, 2>> position;
};

// Parameters for synthetic instance generation: zones and lockers are placed
// i.i.d. uniform on [0, side]^2, demands i.i.d. uniform on [demand_lo, demand_hi),
// attractions decay exponentially with Euclidean distance.
struct GeneratorSpec {
    int zones = 0;
    int lockers = 0;
    double side = 30.0;
    double demand_lo = 1.0;
    double demand_hi = 1000.0;
    double alpha = 1.0;
    double xi = 1.0;
    std::uint64_t seed = 0;

    // Throws validation_error naming the offending field.
    void validate() const;
};

// Immutable problem data: customer zones, candidate lockers, the positive
// attraction matrix, outside-option attractions, and the dominance threshold.
// gamma may be infinity, meaning no option ever dominates another.
class Instance {
public:
    Instance() = default;
    Instance(std::vector<Zone> zones, std::vector<Locker> lockers,
             std::vector<double> attraction_row_major,
             std::vector<double> outside_attraction, double gamma,
             nlohmann::ordered_json meta = nlohmann::ordered_json::object());

    int zone_count() const { return static_cast<int>(zones_.size()); }
    int locker_count() const { return static_cast<int>(lockers_.size()); }

    const std::vector<Zone>& zones() const { return zones_; }
    const std::vector<Locker>& lockers() const { return lockers_; }

    double attraction(int zone, int locker) const {
        return attraction_[static_cast<std::size_t>(zone) * lockers_.size() + locker];
    }
    double outside_attraction(int zone) const { return outside_[zone]; }
    double demand(int zone) const { return zones_[zone].demand; }
    double total_demand() const;
    double gamma() const { return gamma_; }
    bool gamma_is_infinite() const;

    const nlohmann::ordered_json& meta() const { return meta_; }

    // Copy of this instance with a different dominance threshold.
    Instance with_gamma(double gamma) const;
    // Copy with per-locker costs replaced by a uniform value.
    Instance with_uniform_cost(double cost) const;

    // Per-locker facility costs as stored on the instance.
    std::vector<double> costs() const;

private:
    void validate() const;

    std::vector<Zone> zones_;
    std::vector<Locker> lockers_;
    std::vector<double> attraction_; // row-major, zone_count x locker_count
    std::vector<double> outside_;
    double gamma_ = 0.0;
    nlohmann::ordered_json meta_ = nlohmann::ordered_json::object();
};

// a(distance) = exp(-alpha * distance), in (0, 1]. Throws domain_error on
// negative inputs.
double attraction_from_distance(double distance, double alpha);

// Outside-option attraction xi * exp(-1). Throws domain_error for xi <= 0.
double outside_option_attraction(double xi);

// Deterministic synthetic instance. Draw order is fixed (zone x,y per zone,
// then locker x,y per locker, then demands) so a seed pins the instance
// exactly. Generated instances carry gamma = infinity and zero costs; both
// are supplied at solve time.
Instance generate(const GeneratorSpec& spec);

// JSON serialization. Doubles are written with 17 significant digits, so a
// round trip is lossless and output bytes are a pure function of the data.
std::string to_json_string(const Instance& instance);
Instance from_json_string(const std::string& text);
void save(const Instance& instance, const std::string& path);
Instance load(const std::string& path);

// FNV-1a 64 over the serialized form; used for provenance manifests.
std::uint64_t instance_hash(const Instance& instance);
std::uint64_t fnv1a64(const std::string& bytes);

} // namespace lockerloc

#endif
