// Copyright 2026 The vecop Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vecop/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace vecop {

namespace {

constexpr std::string_view kColumns =
    "demand_kbps,setting,objective,status,total_power_w,max_delay_ms,objective_value,"
    "w_power,w_delay,targets,fractions,max_hops,verified,detail";

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t lineno)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw ValidationError("line " + std::to_string(lineno) + ": unterminated quote");
    out.push_back(std::move(cur));
    return out;
}

double parse_double(const std::string& s, std::size_t lineno)
{
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ValidationError("line " + std::to_string(lineno) + ": bad number '" + s + "'");
    return v;
}

bool close(double a, double b)
{
    return std::abs(a - b) <= 1e-9 * std::max({1e-300, std::abs(a), std::abs(b)});
}

void fill_row(const Scenario& s, SweepRow& row, const SolveResult& r)
{
    row.result = r;
    row.w_power = r.weights.w_power;
    row.w_delay = r.weights.w_delay;
    if (!r.feasible()) {
        row.status = CellStatus::Infeasible;
        row.detail = r.infeasible_reason;
        return;
    }
    row.status = CellStatus::Optimal;
    row.total_power_w = r.total_power_w;
    row.max_delay_s = r.max_delay_s;
    row.objective_value = r.objective;
    std::string targets, fractions;
    for (const auto& da : r.allocation.demands)
        for (std::size_t i = 0; i < da.targets.size(); ++i) {
            if (!targets.empty()) {
                targets += ';';
                fractions += ';';
            }
            targets += s.nodes[da.targets[i]].id;
            fractions += num(da.fractions[i]);
            row.max_hops = std::max(row.max_hops, static_cast<int>(da.routes[i].size()));
        }
    row.targets = targets;
    row.fractions = fractions;
}

}  // namespace

ObjectiveChoice parse_objective(std::string_view text)
{
    if (text == "power" || text == "power_only")
        return {ObjectivePreset::PowerOnly};
    if (text == "joint" || text == "joint_equal")
        return {ObjectivePreset::JointEqual};
    if (text.starts_with("custom:")) {
        const std::string rest(text.substr(7));
        const auto comma = rest.find(',');
        if (comma != std::string::npos) {
            try {
                std::size_t a = 0, b = 0;
                const std::string wp = rest.substr(0, comma), wd = rest.substr(comma + 1);
                const double p = std::stod(wp, &a), d = std::stod(wd, &b);
                if (a == wp.size() && b == wd.size()) {
                    make_weights(ObjectivePreset::Custom, 0, 0, p, d);  // range check
                    return {ObjectivePreset::Custom, p, d};
                }
            } catch (const std::logic_error&) {
            } catch (const FormulationError&) {
            }
        }
    }
    throw ValidationError("objective: expected power, joint or custom:WP,WD, got '" +
                          std::string(text) + "'");
}

std::string objective_label(const ObjectiveChoice& c)
{
    if (c.preset == ObjectivePreset::Custom)
        return "custom:" + num(c.w_power) + ";" + num(c.w_delay);
    return std::string(to_string(c.preset));
}

ObjectiveWeights resolve_weights(const Scenario& s, const LinkSet& ls,
                                 const std::vector<DelayTable>& tables, const ObjectiveChoice& c,
                                 const SolverLimits& limits)
{
    if (c.preset != ObjectivePreset::JointEqual)
        return make_weights(c.preset, 0, 0, c.w_power, c.w_delay);
    SolverLimits pre = limits;
    pre.value_only = true;
    const SolveResult p = solve(s, ls, tables, {1.0, 0.0, ObjectivePreset::Custom}, pre);
    if (!p.feasible())
        throw FormulationError("joint normalizer: power-only problem infeasible (" +
                               p.infeasible_reason + ")");
    const SolveResult t = solve(s, ls, tables, {0.0, 1.0, ObjectivePreset::Custom}, pre);
    if (!t.feasible())
        throw FormulationError("joint normalizer: delay-only problem infeasible (" +
                               t.infeasible_reason + ")");
    return make_weights(c.preset, p.objective, t.objective);
}

SolveResult solve_with(const Scenario& s, const LinkSet& ls, const std::vector<DelayTable>& tables,
                       const ObjectiveChoice& c, const SolverLimits& limits)
{
    if (c.preset == ObjectivePreset::JointEqual) {
        // An infeasible normalizing solve means the instance is infeasible.
        SolverLimits pre = limits;
        pre.value_only = true;
        const SolveResult p = solve(s, ls, tables, {1.0, 0.0, ObjectivePreset::Custom}, pre);
        if (!p.feasible())
            return p;
    }
    return solve(s, ls, tables, resolve_weights(s, ls, tables, c, limits), limits);
}

std::string result_json(const Scenario& s, const LinkSet& ls, const SolveResult& r)
{
    auto link_name = [&](std::size_t l) {
        return s.nodes[ls.links[l].tx_node].id + "->" + s.nodes[ls.links[l].rx_node].id;
    };
    nlohmann::ordered_json doc;
    doc["scenario_hash"] = scenario_hash(s);
    doc["processing_setting"] = to_string(s.settings.processing_setting);
    doc["status"] = r.feasible() ? "optimal" : "infeasible";
    if (!r.feasible())
        doc["infeasible_reason"] = r.infeasible_reason;
    doc["weights"] = {{"preset", to_string(r.weights.preset)},
                      {"w_power", r.weights.w_power},
                      {"w_delay", r.weights.w_delay}};
    if (r.feasible()) {
        doc["objective"] = r.objective;
        doc["total_power_w"] = r.total_power_w;
        doc["max_delay_s"] = r.max_delay_s;
        auto& demands = doc["allocation"] = nlohmann::ordered_json::array();
        for (std::size_t d = 0; d < r.allocation.demands.size(); ++d) {
            const auto& da = r.allocation.demands[d];
            nlohmann::ordered_json jd;
            jd["demand"] = s.demands[d].id;
            jd["targets"] = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < da.targets.size(); ++i) {
                nlohmann::ordered_json jt;
                jt["node"] = s.nodes[da.targets[i]].id;
                jt["fraction"] = da.fractions[i];
                jt["route"] = nlohmann::ordered_json::array();
                for (std::size_t l : da.routes[i])
                    jt["route"].push_back(link_name(l));
                jd["targets"].push_back(std::move(jt));
            }
            demands.push_back(std::move(jd));
        }
        auto& devices = doc["per_device_power_w"] = nlohmann::ordered_json::object();
        for (const auto& [id, w] : r.per_device_power_w)
            if (w != 0)
                devices[id] = w;
        auto& delays = doc["route_delays"] = nlohmann::ordered_json::array();
        for (const RouteDelay& rd : r.route_delays)
            delays.push_back({{"demand", s.demands[rd.demand].id},
                              {"target", s.nodes[rd.target].id},
                              {"delay_s", rd.delay_s}});
    }
    doc["stats"] = {{"nodes_explored", r.stats.nodes_explored},
                    {"serving_sets", r.stats.serving_sets},
                    {"wall_time_s", r.stats.wall_time_s},
                    {"threads", r.stats.threads}};
    return doc.dump(2) + "\n";
}

std::string_view to_string(CellStatus status)
{
    switch (status) {
    case CellStatus::Optimal: return "optimal";
    case CellStatus::Infeasible: return "infeasible";
    case CellStatus::Error: return "error";
    }
    return "?";
}

ResultTable sweep(const Scenario& base, const SweepSpec& spec)
{
    ResultTable table;
    const Settings& st = base.settings;
    table.provenance = {
        "scenario_hash=" + scenario_hash(base),
        "mips_per_kbps=" + num(st.mips_per_kbps),
        "rho_max=" + num(st.rho_max),
        "bins=" + std::to_string(st.bins),
        "packet_size_bytes=" + num(st.packet_size_bytes),
        "radiated_power=" + std::string(to_string(st.radiated_power)),
        "weights=power_only:1,0 joint_equal:0.5/P*,0.5/T* per cell",
        "limits=max_nodes:" + std::to_string(spec.limits.max_nodes) +
            " force:" + (spec.limits.force ? "1" : "0"),
    };
    std::string grid;
    for (double d : spec.demands_kbps)
        grid += (grid.empty() ? "" : ";") + num(d);
    table.provenance.push_back("demand_grid_kbps=" + grid + " (assumed grid)");

    for (double kbps : spec.demands_kbps) {
        for (ProcessingSetting setting : spec.settings) {
            Scenario s = base;
            s.settings.processing_setting = setting;
            for (auto& d : s.demands) {
                d.traffic_kbps = kbps;
                d.load_mips.reset();
            }
            for (const ObjectiveChoice& c : spec.objectives) {
                SweepRow row;
                row.demand_kbps = kbps;
                row.setting = setting;
                row.objective = objective_label(c);
                try {
                    validate(s);
                    const LinkSet ls = build_links(s);
                    const auto tables = build_tables(s, ls);
                    fill_row(s, row, solve_with(s, ls, tables, c, spec.limits));
                    if (row.status == CellStatus::Optimal) {
                        const SolveResult e =
                            evaluate(s, ls, tables, row.result.allocation, row.result.weights);
                        row.verified = close(e.total_power_w, row.total_power_w) &&
                                       close(e.max_delay_s, row.max_delay_s) &&
                                       close(e.objective, row.objective_value);
                    }
                } catch (const IsolatedSourceError& e) {
                    row.status = CellStatus::Infeasible;
                    row.detail = std::string("C4: ") + e.what();
                } catch (const std::exception& e) {
                    row.status = CellStatus::Error;
                    row.detail = e.what();
                }
                table.rows.push_back(std::move(row));
            }
        }
    }
    return table;
}

double percent_change(double baseline, double variant)
{
    if (baseline == 0)
        throw std::domain_error("percent change from a zero baseline");
    return 100.0 * (variant - baseline) / baseline;
}

std::string table_csv(const ResultTable& t)
{
    std::string out;
    for (const auto& p : t.provenance)
        out += "# " + p + "\n";
    out += kColumns;
    out += '\n';
    for (const SweepRow& r : t.rows) {
        const bool ok = r.status == CellStatus::Optimal;
        auto opt = [&](double v) { return ok ? num(v) : std::string(); };
        out += num(r.demand_kbps) + ',' + std::string(to_string(r.setting)) + ',' +
               csv_field(r.objective) + ',' + std::string(to_string(r.status)) + ',' +
               opt(r.total_power_w) + ',' + opt(r.max_delay_s * 1e3) + ',' +
               opt(r.objective_value) + ',' + opt(r.w_power) + ',' + opt(r.w_delay) + ',' +
               csv_field(r.targets) + ',' + csv_field(r.fractions) + ',' +
               (ok ? std::to_string(r.max_hops) : std::string()) + ',' +
               (ok ? (r.verified ? "1" : "0") : "") + ',' + csv_field(r.detail) + '\n';
    }
    return out;
}

ResultTable read_table_csv(std::string_view text)
{
    ResultTable t;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::string p = line.substr(1);
            if (!p.empty() && p[0] == ' ')
                p.erase(0, 1);
            t.provenance.push_back(p);
            continue;
        }
        if (!header) {
            if (line != kColumns)
                throw ValidationError("line " + std::to_string(lineno) + ": unexpected header");
            header = true;
            continue;
        }
        const auto f = split_csv_line(line, lineno);
        if (f.size() != 14)
            throw ValidationError("line " + std::to_string(lineno) + ": expected 14 fields, got " +
                                  std::to_string(f.size()));
        SweepRow r;
        r.demand_kbps = parse_double(f[0], lineno);
        r.setting = parse_processing_setting(f[1]);
        r.objective = f[2];
        if (f[3] == "optimal")
            r.status = CellStatus::Optimal;
        else if (f[3] == "infeasible")
            r.status = CellStatus::Infeasible;
        else if (f[3] == "error")
            r.status = CellStatus::Error;
        else
            throw ValidationError("line " + std::to_string(lineno) + ": bad status '" + f[3] + "'");
        if (r.status == CellStatus::Optimal) {
            r.total_power_w = parse_double(f[4], lineno);
            r.max_delay_s = parse_double(f[5], lineno) / 1e3;
            r.objective_value = parse_double(f[6], lineno);
            r.w_power = parse_double(f[7], lineno);
            r.w_delay = parse_double(f[8], lineno);
            r.max_hops = static_cast<int>(parse_double(f[11], lineno));
            r.verified = f[12] == "1";
        }
        r.targets = f[9];
        r.fractions = f[10];
        r.detail = f[13];
        t.rows.push_back(std::move(r));
    }
    if (!header)
        throw ValidationError("missing header line");
    return t;
}

std::string table_json(const ResultTable& t)
{
    nlohmann::ordered_json doc;
    doc["provenance"] = t.provenance;
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const SweepRow& r : t.rows) {
        nlohmann::ordered_json j;
        j["demand_kbps"] = r.demand_kbps;
        j["setting"] = to_string(r.setting);
        j["objective"] = r.objective;
        j["status"] = to_string(r.status);
        if (r.status == CellStatus::Optimal) {
            j["total_power_w"] = r.total_power_w;
            j["max_delay_ms"] = r.max_delay_s * 1e3;
            j["objective_value"] = r.objective_value;
            j["w_power"] = r.w_power;
            j["w_delay"] = r.w_delay;
            j["targets"] = r.targets;
            j["fractions"] = r.fractions;
            j["max_hops"] = r.max_hops;
            j["verified"] = r.verified;
        } else {
            j["detail"] = r.detail;
        }
        const SolverStats& st = r.result.stats;
        j["stats"] = {{"nodes_explored", st.nodes_explored},
                      {"serving_sets", st.serving_sets},
                      {"wall_time_s", st.wall_time_s},
                      {"threads", st.threads}};
        rows.push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

std::string plotdata_csv(const ResultTable& t)
{
    std::string out = "figure,setting,objective,demand_kbps,value\n";
    for (const char* figure : {"power_w", "delay_ms"})
        for (const SweepRow& r : t.rows) {
            if (r.status != CellStatus::Optimal)
                continue;
            const bool power = std::string_view(figure) == "power_w";
            out += std::string(figure) + ',' + std::string(to_string(r.setting)) + ',' +
                   csv_field(r.objective) + ',' + num(r.demand_kbps) + ',' +
                   num(power ? r.total_power_w : r.max_delay_s * 1e3) + '\n';
        }
    return out;
}

std::string_view reference_band(std::string_view family, std::string_view setting)
{
    if (family == kFamilyPowerIncrease) {
        if (setting == "vehicles_only")
            return "22%-34%";
        if (setting == "vehicles_and_edge")
            return "3%-6%";
        return "";
    }
    if (family == kFamilyPowerSaving)
        return "73%-89%";
    if (family == kFamilyDelayReduction)
        return "48%-74%";
    if (family == kFamilyDelayVsCloud)
        return "60%-80%";
    return "";
}

Report report(const ResultTable& t)
{
    using Key = std::tuple<double, std::string, std::string>;  // demand, setting, objective
    std::map<Key, const SweepRow*> cell;
    std::vector<double> demands;
    bool has_cloud = false;
    for (const SweepRow& r : t.rows) {
        cell[{r.demand_kbps, std::string(to_string(r.setting)), r.objective}] = &r;
        if (std::find(demands.begin(), demands.end(), r.demand_kbps) == demands.end())
            demands.push_back(r.demand_kbps);
        has_cloud = has_cloud || r.setting == ProcessingSetting::CloudOnly;
    }
    if (!has_cloud)
        throw ReportError("baseline absent: the table has no cloud_only rows");

    const std::string power = "power_only", joint = "joint_equal", cloud = "cloud_only";
    auto get = [&](double d, const std::string& setting, const std::string& obj) -> const SweepRow* {
        auto it = cell.find({d, setting, obj});
        if (it == cell.end() || it->second->status != CellStatus::Optimal)
            return nullptr;
        return it->second;
    };
    auto pct = [](const SweepRow* base, const SweepRow* var, bool use_power,
                  bool negate) -> std::optional<double> {
        if (!base || !var)
            return std::nullopt;
        const double b = use_power ? base->total_power_w : base->max_delay_s;
        const double v = use_power ? var->total_power_w : var->max_delay_s;
        if (b == 0)
            return std::nullopt;
        const double p = percent_change(b, v);
        return negate ? 0.0 - p : p;  // no "-0" for equal cells
    };

    std::sort(demands.begin(), demands.end());
    Report rep;
    const std::vector<std::string> settings = {"vehicles_only", "vehicles_and_edge", "cloud_only"};
    for (double d : demands) {
        for (const auto& st : settings) {
            const SweepRow* p = get(d, st, power);
            const SweepRow* j = get(d, st, joint);
            rep.entries.push_back({std::string(kFamilyPowerIncrease), st, joint, d,
                                   pct(p, j, true, false)});
            rep.entries.push_back({std::string(kFamilyDelayReduction), st, joint, d,
                                   pct(p, j, false, true)});
        }
        for (const auto& st : {settings[0], settings[1]})
            for (const auto& obj : {power, joint})
                rep.entries.push_back({std::string(kFamilyPowerSaving), st, obj, d,
                                       pct(get(d, cloud, obj), get(d, st, obj), true, true)});
        rep.entries.push_back({std::string(kFamilyDelayVsCloud), settings[1], joint, d,
                               pct(get(d, cloud, joint), get(d, settings[1], joint), false, true)});
    }
    std::stable_sort(rep.entries.begin(), rep.entries.end(),
                     [](const ReportEntry& a, const ReportEntry& b) { return a.family < b.family; });
    return rep;
}

std::string report_csv(const Report& r)
{
    std::string out = "family,setting,objective,demand_kbps,percent,reference_band\n";
    for (const auto& e : r.entries)
        out += e.family + ',' + e.setting + ',' + e.objective + ',' + num(e.demand_kbps) + ',' +
               (e.percent ? num(*e.percent) : std::string()) + ',' +
               std::string(reference_band(e.family, e.setting)) + '\n';
    return out;
}

std::string report_json(const Report& r)
{
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& e : r.entries) {
        auto& fam = doc[e.family];
        if (fam.is_null()) {
            fam["entries"] = nlohmann::ordered_json::array();
        }
        nlohmann::ordered_json j;
        j["setting"] = e.setting;
        j["objective"] = e.objective;
        j["demand_kbps"] = e.demand_kbps;
        j["percent"] = e.percent ? nlohmann::ordered_json(*e.percent) : nlohmann::ordered_json();
        j["reference_band"] = reference_band(e.family, e.setting);
        fam["entries"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

}  // namespace vecop
