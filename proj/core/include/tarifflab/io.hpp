#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tarifflab/coretail.hpp"
#include "tarifflab/dist.hpp"
#include "tarifflab/matroid.hpp"
#include "tarifflab/mechanism.hpp"

namespace tarifflab {

using Json = nlohmann::ordered_json;

// Rationals serialize as exact strings ("a/b" or integers); parsing accepts
// integers, "a/b" and decimal strings.
Json rat_to_json(const Rat& r);
Rat rat_from_json(const nlohmann::json& j);

Json dist_to_json(const ValueDist& d);
// Instance-facing parser: atom values must be nonnegative.
ValueDist dist_from_json(const nlohmann::json& j);

Json matroid_to_json(const Matroid& M);
Matroid matroid_from_json(const nlohmann::json& j);

// Multi-agent problem instance. Distributions, constraints and ex ante caps
// accept either one shared entry or one entry per agent.
struct Instance {
    int n = 1;
    size_t m = 0;
    std::vector<ProductDist> dists;  // per agent
    std::vector<Matroid> feas;       // per agent
    std::optional<std::vector<std::vector<Rat>>> ex_ante;  // per agent per item
    bool shared = false;             // true when given in shared (symmetric) form
};

Instance instance_from_json(const nlohmann::json& j);
Instance instance_from_file(const std::string& path);
Json instance_to_json(const Instance& inst);

// Mechanism files hold either a single two-part tariff or a sequential
// tariff; sequential files may carry the pre-halving standalone fees so an
// evaluation can report the stitching margin.
struct MechanismFile {
    std::optional<TwoPartTariff> single;
    std::optional<SequentialTariff> sequential;
    std::optional<std::vector<Rat>> standalone_fees;
};

MechanismFile mechanism_from_json(const nlohmann::json& j);
MechanismFile mechanism_from_file(const std::string& path);
Json mechanism_to_json(const TwoPartTariff& t);
Json mechanism_to_json(const SequentialTariff& t,
                       const std::optional<std::vector<Rat>>& standalone_fees = {});

Json certificate_to_json(const BoundCertificate& cert);
std::string certificate_csv_header();
std::string certificate_to_csv_row(const BoundCertificate& cert);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// FNV-1a hash of a canonical config string, hex-encoded; embedded in reports
// so reruns are byte-comparable.
std::string config_hash(const std::string& canonical);

}  // namespace tarifflab
