#include "tarifflab/io.hpp"

#include <fstream>
#include <sstream>

namespace tarifflab {

Json rat_to_json(const Rat& r) {
    if (r.get_den() == 1 && r.get_num().fits_slong_p())
        return Json(r.get_num().get_si());
    return Json(rat_str(r));
}

Rat rat_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw parse_error("expected a rational (integer or string), got: " + j.dump());
}

Json dist_to_json(const ValueDist& d) {
    Json atoms = Json::array();
    for (const auto& a : d.atoms()) atoms.push_back(Json::array({rat_to_json(a.value), rat_to_json(a.prob)}));
    return Json{{"atoms", atoms}};
}

ValueDist dist_from_json(const nlohmann::json& j) {
    if (!j.contains("atoms") || !j["atoms"].is_array())
        throw parse_error("distribution: missing atoms array");
    std::vector<Atom> atoms;
    for (const auto& a : j["atoms"]) {
        if (!a.is_array() || a.size() != 2)
            throw parse_error("distribution: atom must be a [value, prob] pair");
        Atom atom{rat_from_json(a[0]), rat_from_json(a[1])};
        if (atom.value < 0) throw parse_error("distribution: atom values must be nonnegative");
        atoms.push_back(std::move(atom));
    }
    try {
        return ValueDist(std::move(atoms));
    } catch (const std::invalid_argument& e) {
        throw parse_error(std::string("distribution: ") + e.what());
    }
}

Json matroid_to_json(const Matroid& M) {
    switch (M.kind()) {
        case Matroid::Kind::uniform:
            return Json{{"variant", "uniform"}, {"m", M.ground_size()}, {"k", M.uniform_cap()}};
        case Matroid::Kind::partition: {
            std::vector<std::vector<int>> parts(M.part_caps().size());
            for (int j = 0; j < M.ground_size(); ++j) parts[M.part_of()[j]].push_back(j);
            Json jp = Json::array();
            for (const auto& p : parts) jp.push_back(p);
            return Json{{"variant", "partition"},
                        {"m", M.ground_size()},
                        {"parts", jp},
                        {"caps", M.part_caps()}};
        }
        case Matroid::Kind::explicit_table: {
            Json sets = Json::array();
            for (ItemSet s : M.maximal_independent_sets()) {
                std::vector<int> items;
                for (int j = 0; j < M.ground_size(); ++j)
                    if (s & (1u << j)) items.push_back(j);
                sets.push_back(items);
            }
            return Json{{"variant", "explicit"}, {"m", M.ground_size()}, {"independent_sets", sets}};
        }
    }
    throw std::logic_error("matroid_to_json: unknown variant");
}

Matroid matroid_from_json(const nlohmann::json& j) {
    if (!j.contains("variant")) throw parse_error("matroid: missing variant");
    std::string variant = j["variant"].get<std::string>();
    try {
        if (variant == "uniform") {
            return Matroid::uniform(j.at("m").get<int>(), j.at("k").get<int>());
        }
        if (variant == "partition") {
            auto parts = j.at("parts").get<std::vector<std::vector<int>>>();
            auto caps = j.at("caps").get<std::vector<int>>();
            return Matroid::partition(j.at("m").get<int>(), parts, caps);
        }
        if (variant == "explicit") {
            int m = j.at("m").get<int>();
            std::vector<ItemSet> indep;
            for (const auto& set : j.at("independent_sets")) {
                ItemSet mask = 0;
                for (const auto& item : set) {
                    int idx = item.get<int>();
                    if (idx < 0 || idx >= m) throw parse_error("matroid: item index out of range");
                    mask |= 1u << idx;
                }
                indep.push_back(mask);
            }
            return Matroid::explicit_from_independent_sets(m, indep);
        }
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("matroid: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw parse_error(std::string("matroid: ") + e.what());
    }
    throw parse_error("matroid: unknown variant " + variant);
}

namespace {

ProductDist product_from_json(const nlohmann::json& arr, size_t m) {
    if (!arr.is_array() || arr.size() != m)
        throw parse_error("instance: expected one distribution per item");
    std::vector<ValueDist> items;
    for (const auto& d : arr) items.push_back(dist_from_json(d));
    return ProductDist(std::move(items));
}

}  // namespace

Instance instance_from_json(const nlohmann::json& j) {
    Instance inst;
    try {
        inst.n = j.at("n").get<int>();
        inst.m = j.at("items").get<size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("instance: ") + e.what());
    }
    if (inst.n < 1) throw parse_error("instance: n must be positive");
    if (inst.m < 1) throw parse_error("instance: items must be positive");

    const auto& dists = j.at("distributions");
    if (!dists.is_array() || dists.empty()) throw parse_error("instance: missing distributions");
    // shared form: array of m dist objects; per-agent form: array of n arrays
    if (dists[0].is_object()) {
        ProductDist shared = product_from_json(dists, inst.m);
        inst.dists.assign(inst.n, shared);
        inst.shared = true;
    } else if (dists[0].is_array()) {
        if (dists.size() != static_cast<size_t>(inst.n))
            throw parse_error("instance: expected one distribution list per agent");
        for (const auto& row : dists) inst.dists.push_back(product_from_json(row, inst.m));
    } else {
        throw parse_error("instance: malformed distributions");
    }

    const auto& mat = j.at("matroid");
    if (mat.is_array()) {
        if (mat.size() != static_cast<size_t>(inst.n))
            throw parse_error("instance: expected one matroid per agent");
        for (const auto& mj : mat) inst.feas.push_back(matroid_from_json(mj));
        inst.shared = false;
    } else {
        Matroid shared = matroid_from_json(mat);
        inst.feas.assign(inst.n, shared);
    }
    for (const auto& M : inst.feas)
        if (static_cast<size_t>(M.ground_size()) != inst.m)
            throw parse_error("instance: matroid ground size must match items");

    if (j.contains("ex_ante") && !j["ex_ante"].is_null()) {
        const auto& q = j["ex_ante"];
        std::vector<std::vector<Rat>> rows;
        if (!q.is_array() || q.empty()) throw parse_error("instance: malformed ex_ante");
        if (q[0].is_array()) {
            if (q.size() != static_cast<size_t>(inst.n))
                throw parse_error("instance: expected one ex_ante row per agent");
            for (const auto& row : q) {
                std::vector<Rat> qs;
                for (const auto& v : row) qs.push_back(rat_from_json(v));
                rows.push_back(std::move(qs));
            }
        } else {
            std::vector<Rat> qs;
            for (const auto& v : q) qs.push_back(rat_from_json(v));
            rows.assign(inst.n, qs);
        }
        for (const auto& row : rows) {
            if (row.size() != inst.m) throw parse_error("instance: ex_ante length mismatch");
            for (const auto& v : row)
                if (v < 0 || v > 1) throw parse_error("instance: ex_ante entries must be in [0,1]");
        }
        inst.ex_ante = std::move(rows);
    }
    return inst;
}

Instance instance_from_file(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    return instance_from_json(j);
}

Json instance_to_json(const Instance& inst) {
    Json j;
    j["n"] = inst.n;
    j["items"] = inst.m;
    if (inst.shared) {
        Json arr = Json::array();
        for (const auto& d : inst.dists.front().items()) arr.push_back(dist_to_json(d));
        j["distributions"] = arr;
        j["matroid"] = matroid_to_json(inst.feas.front());
    } else {
        Json arr = Json::array();
        for (const auto& pd : inst.dists) {
            Json row = Json::array();
            for (const auto& d : pd.items()) row.push_back(dist_to_json(d));
            arr.push_back(row);
        }
        j["distributions"] = arr;
        Json mats = Json::array();
        for (const auto& M : inst.feas) mats.push_back(matroid_to_json(M));
        j["matroid"] = mats;
    }
    if (inst.ex_ante) {
        Json rows = Json::array();
        for (const auto& row : *inst.ex_ante) {
            Json r = Json::array();
            for (const auto& v : row) r.push_back(rat_to_json(v));
            rows.push_back(r);
        }
        j["ex_ante"] = rows;
    }
    return j;
}

Json mechanism_to_json(const TwoPartTariff& t) {
    Json j;
    j["type"] = "two_part_tariff";
    j["entry_fee"] = rat_to_json(t.entry_fee);
    Json prices = Json::array();
    for (const auto& p : t.prices) prices.push_back(rat_to_json(p));
    j["prices"] = prices;
    j["demand_limit"] = t.demand_limit ? matroid_to_json(*t.demand_limit) : Json(nullptr);
    return j;
}

Json mechanism_to_json(const SequentialTariff& t,
                       const std::optional<std::vector<Rat>>& standalone_fees) {
    Json j;
    j["type"] = "sequential_tariff";
    j["order"] = t.order;
    Json fees = Json::array();
    for (const auto& f : t.fees) fees.push_back(rat_to_json(f));
    j["fees"] = fees;
    Json prices = Json::array();
    for (const auto& row : t.prices) {
        Json r = Json::array();
        for (const auto& p : row) r.push_back(rat_to_json(p));
        prices.push_back(r);
    }
    j["prices"] = prices;
    Json limits = Json::array();
    for (const auto& l : t.limits) limits.push_back(l ? matroid_to_json(*l) : Json(nullptr));
    j["limits"] = limits;
    if (standalone_fees) {
        Json sf = Json::array();
        for (const auto& f : *standalone_fees) sf.push_back(rat_to_json(f));
        j["standalone_fees"] = sf;
    }
    return j;
}

MechanismFile mechanism_from_json(const nlohmann::json& j) {
    MechanismFile out;
    std::string type;
    try {
        type = j.at("type").get<std::string>();
        if (type == "two_part_tariff") {
            TwoPartTariff t;
            t.entry_fee = rat_from_json(j.at("entry_fee"));
            for (const auto& p : j.at("prices")) t.prices.push_back(rat_from_json(p));
            if (j.contains("demand_limit") && !j["demand_limit"].is_null())
                t.demand_limit = matroid_from_json(j["demand_limit"]);
            out.single = std::move(t);
            return out;
        }
        if (type == "sequential_tariff") {
            SequentialTariff t;
            t.order = j.at("order").get<std::vector<int>>();
            for (const auto& f : j.at("fees")) t.fees.push_back(rat_from_json(f));
            for (const auto& row : j.at("prices")) {
                std::vector<Rat> prices;
                for (const auto& p : row) prices.push_back(rat_from_json(p));
                t.prices.push_back(std::move(prices));
            }
            for (const auto& l : j.at("limits")) {
                if (l.is_null()) t.limits.push_back(std::nullopt);
                else t.limits.push_back(matroid_from_json(l));
            }
            if (j.contains("standalone_fees")) {
                std::vector<Rat> sf;
                for (const auto& f : j["standalone_fees"]) sf.push_back(rat_from_json(f));
                out.standalone_fees = std::move(sf);
            }
            out.sequential = std::move(t);
            return out;
        }
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("mechanism: ") + e.what());
    }
    throw parse_error("mechanism: unknown type " + type);
}

MechanismFile mechanism_from_file(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    return mechanism_from_json(j);
}

namespace {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::exact: return "exact";
        case Provenance::lp: return "lp";
        case Provenance::montecarlo: return "montecarlo";
        case Provenance::float64: return "float64";
    }
    return "exact";
}

Json term_to_json(const TermValue& t) {
    Json j;
    j["name"] = t.name;
    j["value"] = t.exact ? rat_to_json(*t.exact) : Json(nullptr);
    {
        char buf[64];
        snprintf(buf, sizeof(buf), "%.17g", t.approx);
        j["approx"] = std::string(buf);
    }
    j["provenance"] = provenance_name(t.prov);
    if (t.prov == Provenance::montecarlo) {
        char buf[64];
        snprintf(buf, sizeof(buf), "%.17g", t.sigma);
        j["sigma"] = std::string(buf);
    }
    return j;
}

}  // namespace

Json certificate_to_json(const BoundCertificate& cert) {
    Json j;
    j["name"] = cert.name;
    j["holds"] = cert.holds;
    j["lhs"] = term_to_json(cert.lhs);
    j["rhs"] = term_to_json(cert.rhs);
    {
        char buf[64];
        snprintf(buf, sizeof(buf), "%.17g", cert.tolerance);
        j["tolerance"] = std::string(buf);
    }
    Json terms = Json::array();
    for (const auto& t : cert.terms) terms.push_back(term_to_json(t));
    j["terms"] = terms;
    return j;
}

std::string certificate_csv_header() { return "name,holds,lhs,rhs,tolerance"; }

std::string certificate_to_csv_row(const BoundCertificate& cert) {
    char buf[160];
    snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g,%.17g", cert.name.c_str(),
             cert.holds ? 1 : 0, cert.lhs.approx, cert.rhs.approx, cert.tolerance);
    return std::string(buf);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string config_hash(const std::string& canonical) {
    uint64_t h = fnv1a64(canonical);
    char buf[32];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace tarifflab
