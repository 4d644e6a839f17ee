#include "dic/json_io.hpp"

#include <cstdio>
#include <json.hpp>

namespace dic {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void append_segments(std::string& out, const PiecewiseFn& f) {
    out += "[";
    const auto& segs = f.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const Segment& s = segs[i];
        if (i) out += ",";
        out += "\n    {\"lo\":" + fmt17(s.lo) + ",\"hi\":" + fmt17(s.hi) +
               ",\"c_m1\":" + fmt17(s.c.c_m1) + ",\"c0\":" + fmt17(s.c.c0) +
               ",\"c1\":" + fmt17(s.c.c1) + ",\"c2\":" + fmt17(s.c.c2) +
               ",\"ch\":" + fmt17(s.c.ch) + "}";
    }
    out += "\n  ]";
}

void append_array(std::string& out, const std::vector<double>& v) {
    out += "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt17(v[i]);
    }
    out += "]";
}

json parse_checked(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("json parse error: ") + e.what());
    }
}

double num_field(const json& j, const char* name, const std::string& ctx) {
    auto it = j.find(name);
    if (it == j.end() || !it->is_number())
        throw ParseError(ctx + ": missing or non-numeric field \"" + name + "\"");
    return it->get<double>();
}

}  // namespace

std::string to_json(const SingleAgentMechanism& m) {
    const MechanismParams& p = m.params();
    std::string out = "{\n  \"version\":1,\n  \"kind\":\"single_agent\",\n  \"params\":{";
    out += "\"mu\":" + fmt17(p.mu) + ",\"z_star\":" + fmt17(p.z_star) +
           ",\"lambda1\":" + fmt17(p.lambda1) + ",\"lambda0\":" + fmt17(p.lambda0) +
           ",\"nu_low\":" + fmt17(p.nu_low) + ",\"nu_circ\":" + fmt17(p.nu_circ) +
           ",\"nu_star\":" + fmt17(p.nu_star) + ",\"nu_bar\":" + fmt17(p.nu_bar);
    if (p.tau) out += ",\"tau\":" + fmt17(*p.tau);
    if (p.nu_prime) out += ",\"nu_prime\":" + fmt17(*p.nu_prime);
    if (p.nu_dprime) out += ",\"nu_dprime\":" + fmt17(*p.nu_dprime);
    out += "},\n  \"allocation\":";
    append_segments(out, m.allocation());
    out += ",\n  \"payment\":";
    append_segments(out, m.payment());
    out += "\n}\n";
    return out;
}

std::string to_json(const MultiAgentTable& t) {
    std::string out = "{\n  \"version\":1,\n  \"kind\":\"multi_agent\",\n";
    out += "  \"agents\":" + std::to_string(t.agents()) + ",\n";
    out += "  \"grid\":" + std::to_string(t.grid()) + ",\n";
    out += "  \"x\":";
    append_array(out, t.x());
    out += ",\n  \"p\":";
    append_array(out, t.p());
    out += ",\n  \"pm\":";
    append_array(out, t.pm());
    out += ",\n  \"lambda1\":" + fmt17(t.lambda1()) + ",\n  \"lambda0\":" + fmt17(t.lambda0());
    out += ",\n  \"flags\":[";
    for (std::size_t i = 0; i < t.constraint_flags().size(); ++i) {
        if (i) out += ",";
        out += "\"" + t.constraint_flags()[i] + "\"";
    }
    out += "]\n}\n";
    return out;
}

std::string to_json(const GridDistribution& d) {
    std::string out = "{\n  \"version\":1,\n  \"kind\":\"distribution\",\n";
    out += "  \"dims\":" + std::to_string(d.dims()) + ",\n  \"support\":[";
    for (std::size_t i = 0; i < d.support().size(); ++i) {
        if (i) out += ",";
        out += "[";
        for (int a = 0; a < d.dims(); ++a) {
            if (a) out += ",";
            out += fmt17(d.support()[i][a]);
        }
        out += "]";
    }
    out += "],\n  \"weights\":";
    append_array(out, d.weights());
    out += "\n}\n";
    return out;
}

FileKind detect_kind(const std::string& json_text) {
    json j = parse_checked(json_text);
    const std::string kind = j.value("kind", "");
    if (kind == "single_agent") return FileKind::SingleAgentMechanism;
    if (kind == "multi_agent") return FileKind::MultiAgentTable;
    if (kind == "distribution") return FileKind::Distribution;
    throw ParseError("unknown or missing \"kind\": \"" + kind + "\"");
}

namespace {

PiecewiseFn segments_from_json(const json& arr, const std::string& ctx) {
    if (!arr.is_array() || arr.empty())
        throw ParseError(ctx + ": expected a non-empty segment array");
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string sctx = ctx + "[" + std::to_string(i) + "]";
        const json& sj = arr[i];
        Segment s;
        s.lo = num_field(sj, "lo", sctx);
        s.hi = num_field(sj, "hi", sctx);
        s.c.c_m1 = num_field(sj, "c_m1", sctx);
        s.c.c0 = num_field(sj, "c0", sctx);
        s.c.c1 = num_field(sj, "c1", sctx);
        s.c.c2 = num_field(sj, "c2", sctx);
        s.c.ch = num_field(sj, "ch", sctx);
        segs.push_back(s);
    }
    try {
        return PiecewiseFn(std::move(segs));
    } catch (const std::invalid_argument& e) {
        throw ParseError(ctx + ": " + e.what());
    }
}

}  // namespace

SingleAgentMechanism mechanism_from_json(const std::string& json_text) {
    json j = parse_checked(json_text);
    if (j.value("kind", "") != "single_agent")
        throw ParseError("mechanism file: kind is not \"single_agent\"");
    if (j.value("version", 0) != 1) throw ParseError("mechanism file: unsupported version");
    auto pj = j.find("params");
    if (pj == j.end() || !pj->is_object()) throw ParseError("mechanism file: missing params");
    MechanismParams p;
    p.mu = num_field(*pj, "mu", "params");
    p.z_star = num_field(*pj, "z_star", "params");
    p.lambda1 = num_field(*pj, "lambda1", "params");
    p.lambda0 = num_field(*pj, "lambda0", "params");
    p.nu_low = num_field(*pj, "nu_low", "params");
    p.nu_circ = num_field(*pj, "nu_circ", "params");
    p.nu_star = num_field(*pj, "nu_star", "params");
    p.nu_bar = num_field(*pj, "nu_bar", "params");
    if (pj->contains("tau")) p.tau = num_field(*pj, "tau", "params");
    if (pj->contains("nu_prime")) p.nu_prime = num_field(*pj, "nu_prime", "params");
    if (pj->contains("nu_dprime")) p.nu_dprime = num_field(*pj, "nu_dprime", "params");
    if (!j.contains("allocation") || !j.contains("payment"))
        throw ParseError("mechanism file: missing allocation or payment");
    PiecewiseFn alloc = segments_from_json(j["allocation"], "allocation");
    PiecewiseFn pay = segments_from_json(j["payment"], "payment");
    try {
        return SingleAgentMechanism(std::move(alloc), std::move(pay), p);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("mechanism file: ") + e.what());
    }
}

MultiAgentTable table_from_json(const std::string& json_text) {
    json j = parse_checked(json_text);
    if (j.value("kind", "") != "multi_agent")
        throw ParseError("table file: kind is not \"multi_agent\"");
    if (j.value("version", 0) != 1) throw ParseError("table file: unsupported version");
    const int agents = j.value("agents", 0);
    const int grid = j.value("grid", 0);
    auto arr = [&](const char* name) {
        auto it = j.find(name);
        if (it == j.end() || !it->is_array())
            throw ParseError(std::string("table file: missing array \"") + name + "\"");
        return it->get<std::vector<double>>();
    };
    std::vector<std::string> flags;
    if (j.contains("flags")) flags = j["flags"].get<std::vector<std::string>>();
    try {
        return MultiAgentTable(agents, grid, arr("x"), arr("p"), arr("pm"),
                               num_field(j, "lambda1", "table"),
                               num_field(j, "lambda0", "table"), std::move(flags));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("table file: ") + e.what());
    }
}

GridDistribution distribution_from_json(const std::string& json_text) {
    json j = parse_checked(json_text);
    if (j.value("kind", "") != "distribution")
        throw ParseError("distribution file: kind is not \"distribution\"");
    const int dims = j.value("dims", 0);
    auto sj = j.find("support");
    auto wj = j.find("weights");
    if (sj == j.end() || !sj->is_array() || wj == j.end() || !wj->is_array())
        throw ParseError("distribution file: missing support or weights");
    std::vector<std::vector<double>> support;
    for (const auto& row : *sj) support.push_back(row.get<std::vector<double>>());
    try {
        return GridDistribution(dims, std::move(support), wj->get<std::vector<double>>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("distribution file: ") + e.what());
    }
}

}  // namespace dic
