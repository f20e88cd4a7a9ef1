#include "mildrep/io.hpp"

#include <fstream>
#include <vector>

#include "mildrep/errors.hpp"

namespace mildrep {

nlohmann::json measure_to_json(const DiscreteMeasure& mu) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const Atom& a : mu.atoms()) atoms.push_back({a.position, a.mass});
    return {{"atoms", std::move(atoms)}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array()) {
        throw DomainError("measure JSON must be an object with an \"atoms\" array");
    }
    std::vector<Atom> atoms;
    for (const auto& entry : j["atoms"]) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number()) {
            throw DomainError("each atom must be a [position, mass] pair of numbers");
        }
        atoms.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
    return DiscreteMeasure::from_atoms(atoms);
}

DiscreteMeasure read_measure_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open measure file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("cannot parse " + path.string() + ": " + e.what());
    }
    return measure_from_json(j);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) { return nlohmann::json(v).dump(); }

}  // namespace mildrep
