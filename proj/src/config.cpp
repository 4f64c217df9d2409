#include "virial/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace virial::cli {

namespace {

using Section = std::map<std::string, std::string>;
using Document = std::map<std::string, Section>;

const std::map<std::string, std::set<std::string>> schema = {
    {"potential", {"kind", "A", "m", "strength"}},
    {"dimension", {"N"}},
    {"states", {"list", "source"}},
    {"probes", {"list"}},
    {"relations", {"select"}},
    {"grid", {"h", "rho_max"}},
    {"tolerance", {"relative", "solver"}},
    {"output", {"dir"}},
    {"classical", {"E", "l2", "probes", "gap_state", "nodes"}},
};

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw config_error("empty item in list '" + s + "'");
        out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s, const std::string& key)
{
    double x = 0.0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, x);
    if (ec != std::errc() || p != end || !std::isfinite(x))
        throw config_error(key + ": '" + s + "' is not a finite number");
    return x;
}

int to_int(const std::string& s, const std::string& key)
{
    int x = 0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, x);
    if (ec != std::errc() || p != end) throw config_error(key + ": '" + s + "' is not an integer");
    return x;
}

StateSpec to_state(const std::string& s, const std::string& key)
{
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw config_error(key + ": state '" + s + "' must read n:l");
    return {to_int(trim(s.substr(0, colon)), key), to_int(trim(s.substr(colon + 1)), key)};
}

bool valid_probe(const std::string& t)
{
    if (t == "2l+2" || t == "-2l" || t == "gauss" || t == "exp") return true;
    double x;
    const char* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(t.data(), end, x);
    return ec == std::errc() && p == end && std::isfinite(x);
}

RunConfig from_document(const Document& doc)
{
    for (const auto& [name, section] : doc) {
        const auto it = schema.find(name);
        if (it == schema.end()) throw config_error("unknown section [" + name + "]");
        for (const auto& [key, value] : section)
            if (!it->second.count(key)) throw config_error("unknown key '" + key + "' in [" + name + "]");
    }
    auto get = [&](const std::string& sec, const std::string& key) -> const std::string* {
        const auto s = doc.find(sec);
        if (s == doc.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };

    RunConfig c;
    if (auto v = get("potential", "kind")) c.potential.kind = *v;
    const std::string& kind = c.potential.kind;
    const bool pl = kind == "power_law";
    if (kind == "oscillator") {
        c.potential.m = 2.0;
    } else if (kind == "linear") {
        c.potential.m = 1.0;
    } else if (!pl && kind != "coulomb") {
        throw config_error("potential.kind: unknown kind '" + kind + "'");
    }
    if (auto v = get("potential", "A")) {
        if (!pl) throw config_error("potential.A applies to power_law only");
        c.potential.A = to_double(*v, "potential.A");
    }
    if (auto v = get("potential", "m")) {
        if (!pl) throw config_error("potential.m applies to power_law only");
        c.potential.m = to_double(*v, "potential.m");
    }
    if (auto v = get("potential", "strength")) {
        if (kind != "coulomb") throw config_error("potential.strength applies to coulomb only");
        c.potential.strength = to_double(*v, "potential.strength");
    }
    if (pl && (!(c.potential.A > 0.0) || !(c.potential.m > 0.0)))
        throw config_error("power_law needs A > 0 and m > 0 for bound states");
    if (kind == "coulomb" && !(c.potential.strength > 0.0)) throw config_error("coulomb needs strength > 0");

    if (auto v = get("dimension", "N")) c.N = to_int(*v, "dimension.N");
    if (c.N < 1) throw config_error("dimension.N must be >= 1");

    if (auto v = get("states", "list")) {
        c.states.clear();
        for (const auto& s : split_list(*v)) c.states.push_back(to_state(s, "states.list"));
    }
    for (const auto& s : c.states) {
        if (s.n < 0) throw config_error("states.list: n must be >= 0");
        try {
            DimensionConfig{c.N, s.l}.validate();
        } catch (const std::exception& e) {
            throw config_error(std::string("states.list: ") + e.what());
        }
    }
    if (auto v = get("states", "source")) c.source = *v;
    if (c.source != "solver" && c.source != "exact") throw config_error("states.source must be solver or exact");

    if (auto v = get("probes", "list")) c.probes = split_list(*v);
    for (const auto& t : c.probes)
        if (!valid_probe(t)) throw config_error("probes.list: unknown probe '" + t + "'");

    if (auto v = get("relations", "select")) c.relations = split_list(*v);
    for (const auto& r : c.relations)
        if (r != "general" && r != "special" && r != "power")
            throw config_error("relations.select: unknown relation family '" + r + "'");

    if (auto v = get("grid", "h")) c.grid_h = to_double(*v, "grid.h");
    if (auto v = get("grid", "rho_max")) c.rho_max = to_double(*v, "grid.rho_max");
    if (!(c.grid_h > 0.0)) throw config_error("grid.h must be > 0");
    if (c.rho_max < 0.0) throw config_error("grid.rho_max must be >= 0");

    if (auto v = get("tolerance", "relative")) c.tolerance = to_double(*v, "tolerance.relative");
    if (auto v = get("tolerance", "solver")) c.solver_tolerance = to_double(*v, "tolerance.solver");
    if (!(c.tolerance > 0.0) || !(c.solver_tolerance > 0.0)) throw config_error("tolerances must be > 0");

    if (auto v = get("output", "dir")) c.output_dir = *v;

    if (doc.count("classical")) {
        auto& cl = c.classical;
        cl.enabled = true;
        const auto* E = get("classical", "E");
        const auto* l2 = get("classical", "l2");
        if (!E || !l2) throw config_error("[classical] needs E and l2");
        cl.E = to_double(*E, "classical.E");
        cl.l2 = to_double(*l2, "classical.l2");
        if (cl.l2 < 0.0) throw config_error("classical.l2 must be >= 0");
        if (auto v = get("classical", "probes")) {
            cl.probes.clear();
            for (const auto& s : split_list(*v)) cl.probes.push_back(to_double(s, "classical.probes"));
        }
        if (auto v = get("classical", "gap_state")) cl.gap_state = to_state(*v, "classical.gap_state");
        if (auto v = get("classical", "nodes")) cl.nodes = to_int(*v, "classical.nodes");
        if (cl.nodes < 8) throw config_error("classical.nodes must be >= 8");
    }
    return c;
}

std::string json_scalar(const nlohmann::json& v, const std::string& key)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    throw config_error(key + ": expected a number or string");
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out;
}

} // namespace

ScaledPotential PotentialSpec::build() const
{
    if (kind == "coulomb") return ScaledPotential::coulomb(strength);
    return ScaledPotential::power_law(A, m);
}

std::string format_double(double x)
{
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

RunConfig parse_ini(const std::string& text)
{
    Document doc;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find_first_of("#;");
        const std::string line = trim(raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw config_error(where + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (doc.count(section)) throw config_error(where + "duplicate section [" + section + "]");
            doc[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error(where + "expected key = value");
        if (section.empty()) throw config_error(where + "key outside a section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw config_error(where + "empty key or value");
        if (!doc[section].emplace(key, value).second) throw config_error(where + "duplicate key '" + key + "'");
    }
    return from_document(doc);
}

RunConfig parse_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("JSON config must be an object of sections");
    Document doc;
    for (const auto& [name, sec] : j.items()) {
        if (!sec.is_object()) throw config_error("section '" + name + "' must be an object");
        auto& out = doc[name];
        for (const auto& [key, v] : sec.items()) {
            if (v.is_array()) {
                std::vector<std::string> items;
                for (const auto& e : v) items.push_back(json_scalar(e, name + "." + key));
                out[key] = join(items);
            } else {
                out[key] = json_scalar(v, name + "." + key);
            }
        }
    }
    return from_document(doc);
}

RunConfig parse_config(const std::string& text)
{
    const auto b = text.find_first_not_of(" \t\r\n");
    if (b != std::string::npos && text[b] == '{') return parse_json(text);
    return parse_ini(text);
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_canonical(const RunConfig& c)
{
    std::ostringstream o;
    o << "[potential]\nkind = " << c.potential.kind << "\n";
    if (c.potential.kind == "power_law")
        o << "A = " << format_double(c.potential.A) << "\nm = " << format_double(c.potential.m) << "\n";
    if (c.potential.kind == "coulomb") o << "strength = " << format_double(c.potential.strength) << "\n";

    o << "\n[dimension]\nN = " << c.N << "\n";

    std::vector<std::string> states;
    for (const auto& s : c.states) states.push_back(std::to_string(s.n) + ":" + std::to_string(s.l));
    o << "\n[states]\nlist = " << join(states) << "\nsource = " << c.source << "\n";
    o << "\n[probes]\nlist = " << join(c.probes) << "\n";
    o << "\n[relations]\nselect = " << join(c.relations) << "\n";
    o << "\n[grid]\nh = " << format_double(c.grid_h) << "\nrho_max = " << format_double(c.rho_max) << "\n";
    o << "\n[tolerance]\nrelative = " << format_double(c.tolerance)
      << "\nsolver = " << format_double(c.solver_tolerance) << "\n";
    o << "\n[output]\ndir = " << c.output_dir << "\n";
    if (c.classical.enabled) {
        const auto& cl = c.classical;
        std::vector<std::string> probes;
        for (double j : cl.probes) probes.push_back(format_double(j));
        o << "\n[classical]\nE = " << format_double(cl.E) << "\nl2 = " << format_double(cl.l2)
          << "\nprobes = " << join(probes) << "\n";
        if (cl.gap_state) o << "gap_state = " << cl.gap_state->n << ":" << cl.gap_state->l << "\n";
        o << "nodes = " << cl.nodes << "\n";
    }
    return o.str();
}

} // namespace virial::cli
