#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "errors.hpp"

namespace stcl::config {

namespace {

using nlohmann::ordered_json;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    size_t h = line.find('#');
    return h == std::string::npos ? line : line.substr(0, h);
}

double to_double(const std::string& s, const std::string& ctx) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (trim(s.substr(pos)).empty()) return v;
    } catch (...) {
    }
    throw ValidationError("config: bad number '" + s + "' in " + ctx);
}

long to_int(const std::string& s, const std::string& ctx) {
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (trim(s.substr(pos)).empty()) return v;
    } catch (...) {
    }
    throw ValidationError("config: bad integer '" + s + "' in " + ctx);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

// Strips enclosing brackets and splits on commas.
std::vector<std::string> parse_bracketed(const std::string& s, char open, char close,
                                         const std::string& ctx) {
    const std::string t = trim(s);
    if (t.size() < 2 || t.front() != open || t.back() != close)
        throw ValidationError("config: expected " + std::string(1, open) + "..." +
                              std::string(1, close) + " in " + ctx);
    return split_list(t.substr(1, t.size() - 2));
}

struct KeyValue {
    std::string section;
    std::string key;
    std::string value;
};

model::Setup parse_text(const std::string& text, Tolerances tol) {
    std::istringstream in(text);
    std::string line;
    std::string section;

    double temperature = 0.0;
    std::vector<double> energies;
    std::vector<std::string> state_labels;
    std::vector<model::Reservoir> reservoirs;
    std::vector<model::CouplingEntry> coupling;
    std::optional<ResonantLevelConfig> rl;

    while (std::getline(in, line)) {
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ValidationError("config: malformed section " + s);
            section = trim(s.substr(1, s.size() - 2));
            if (section == "reservoir") reservoirs.push_back(model::Reservoir{});
            if (section == "resonant_level" && !rl) rl = ResonantLevelConfig{};
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: expected key = value, got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));

        if (section.empty()) {
            if (key == "temperature") temperature = to_double(value, "temperature");
            else throw ValidationError("config: unknown top-level key '" + key + "'");
        } else if (section == "system") {
            if (key == "energies") {
                for (const auto& e : parse_bracketed(value, '[', ']', "system.energies"))
                    energies.push_back(to_double(e, "system.energies"));
            } else if (key == "labels") {
                for (const auto& l : parse_bracketed(value, '[', ']', "system.labels"))
                    state_labels.push_back(l);
            } else {
                throw ValidationError("config: unknown system key '" + key + "'");
            }
        } else if (section == "reservoir") {
            auto& r = reservoirs.back();
            if (key == "label") r.label = static_cast<int>(to_int(value, "reservoir.label"));
            else if (key == "mu") r.mu = to_double(value, "reservoir.mu");
            else if (key == "dos") r.dos = to_double(value, "reservoir.dos");
            else if (key == "cutoff") r.cutoff = to_double(value, "reservoir.cutoff");
            else if (key == "charge") r.charge = to_double(value, "reservoir.charge");
            else if (key == "statistics") r.statistics = value;
            else throw ValidationError("config: unknown reservoir key '" + key + "'");
        } else if (section == "coupling") {
            if (key != "entry") throw ValidationError("config: unknown coupling key '" + key + "'");
            const auto parts = parse_bracketed(value, '(', ')', "coupling entry");
            if (parts.size() != 5)
                throw ValidationError("config: coupling entry needs (n, m, lambda, re, im)");
            model::CouplingEntry e;
            e.n = static_cast<int>(to_int(parts[0], "coupling n"));
            e.m = static_cast<int>(to_int(parts[1], "coupling m"));
            e.lambda = static_cast<int>(to_int(parts[2], "coupling lambda"));
            e.v = {to_double(parts[3], "coupling re"), to_double(parts[4], "coupling im")};
            coupling.push_back(e);
        } else if (section == "resonant_level") {
            if (key == "eps0") rl->eps0 = to_double(value, "resonant_level.eps0");
            else if (key == "gamma0") rl->gamma0 = to_double(value, "resonant_level.gamma0");
            else if (key == "mu") rl->mu = to_double(value, "resonant_level.mu");
            else if (key == "cutoff") rl->cutoff = to_double(value, "resonant_level.cutoff");
            else throw ValidationError("config: unknown resonant_level key '" + key + "'");
        } else {
            throw ValidationError("config: unknown section [" + section + "]");
        }
    }

    if (rl) {
        if (!(temperature > 0.0))
            throw ValidationError("config: resonant_level needs a top-level temperature");
        rl->temperature = temperature;
        return model::resonant_level(rl->eps0, rl->gamma0, rl->mu, temperature, rl->cutoff, tol);
    }
    return model::Setup(temperature, energies, state_labels, reservoirs, coupling, tol);
}

model::Setup parse_json(const std::string& text, Tolerances tol) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config: JSON parse error: ") + e.what());
    }
    try {
        double temperature = j.at("temperature").get<double>();
        std::vector<double> energies = j.at("system").at("energies").get<std::vector<double>>();
        std::vector<std::string> labels;
        if (j.at("system").contains("labels"))
            labels = j.at("system").at("labels").get<std::vector<std::string>>();
        std::vector<model::Reservoir> reservoirs;
        for (const auto& rj : j.at("reservoirs")) {
            model::Reservoir r;
            r.label = rj.at("label").get<int>();
            r.mu = rj.at("mu").get<double>();
            r.dos = rj.at("dos").get<double>();
            r.cutoff = rj.at("cutoff").get<double>();
            r.charge = rj.at("charge").get<double>();
            if (rj.contains("statistics")) r.statistics = rj.at("statistics").get<std::string>();
            reservoirs.push_back(r);
        }
        std::vector<model::CouplingEntry> coupling;
        for (const auto& cj : j.at("coupling")) {
            model::CouplingEntry e;
            e.n = cj.at("n").get<int>();
            e.m = cj.at("m").get<int>();
            e.lambda = cj.at("lambda").get<int>();
            e.v = {cj.at("re").get<double>(), cj.at("im").get<double>()};
            coupling.push_back(e);
        }
        return model::Setup(temperature, energies, labels, reservoirs, coupling, tol);
    } catch (const ordered_json::exception& e) {
        throw ValidationError(std::string("config: JSON schema error: ") + e.what());
    }
}

} // namespace

model::Setup parse(const std::string& text, Tolerances tol) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') return parse_json(text, tol);
    return parse_text(text, tol);
}

model::Setup parse_file(const std::string& path, Tolerances tol) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open setup file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), tol);
}

std::string serialize(const model::Setup& setup) {
    ordered_json j;
    j["temperature"] = setup.temperature();
    j["system"] = ordered_json::object();
    j["system"]["energies"] = setup.energies();
    j["system"]["labels"] = setup.state_labels();
    j["reservoirs"] = ordered_json::array();
    for (const auto& r : setup.reservoirs()) {
        ordered_json rj;
        rj["label"] = r.label;
        rj["mu"] = r.mu;
        rj["dos"] = r.dos;
        rj["cutoff"] = r.cutoff;
        rj["charge"] = r.charge;
        rj["statistics"] = r.statistics;
        j["reservoirs"].push_back(rj);
    }
    // coupling entries in canonical (n, m, lambda) order
    std::vector<model::CouplingEntry> entries = setup.coupling_entries();
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return std::tie(a.n, a.m, a.lambda) < std::tie(b.n, b.m, b.lambda);
    });
    j["coupling"] = ordered_json::array();
    for (const auto& e : entries) {
        ordered_json cj;
        cj["n"] = e.n;
        cj["m"] = e.m;
        cj["lambda"] = e.lambda;
        cj["re"] = e.v.real();
        cj["im"] = e.v.imag();
        j["coupling"].push_back(cj);
    }
    return j.dump(2) + "\n";
}

std::optional<ResonantLevelConfig> parse_resonant_level(const std::string& text) {
    std::istringstream in(text);
    std::string line, section;
    std::optional<ResonantLevelConfig> rl;
    double temperature = 1.0;
    while (std::getline(in, line)) {
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            section = trim(s.substr(1, s.size() - 2));
            if (section == "resonant_level" && !rl) rl = ResonantLevelConfig{};
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (section.empty() && key == "temperature") temperature = to_double(value, "temperature");
        if (section == "resonant_level" && rl) {
            if (key == "eps0") rl->eps0 = to_double(value, "eps0");
            else if (key == "gamma0") rl->gamma0 = to_double(value, "gamma0");
            else if (key == "mu") rl->mu = to_double(value, "mu");
            else if (key == "cutoff") rl->cutoff = to_double(value, "cutoff");
        }
    }
    if (rl) rl->temperature = temperature;
    return rl;
}

} // namespace stcl::config
