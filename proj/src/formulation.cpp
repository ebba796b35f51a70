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

#include "vecop/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace vecop {

// ----- MilpModel -----

std::size_t MilpModel::add_variable(std::string name, VarKind kind, double lower, double upper)
{
    if (index_.count(name))
        throw FormulationError("duplicate variable " + name);
    index_.emplace(name, variables.size());
    variables.push_back({std::move(name), kind, lower, upper});
    return variables.size() - 1;
}

std::size_t MilpModel::variable(std::string_view name) const
{
    auto it = index_.find(name);
    if (it == index_.end())
        throw FormulationError("unknown variable " + std::string(name));
    return it->second;
}

bool MilpModel::has_variable(std::string_view name) const { return index_.find(name) != index_.end(); }

double MilpModel::objective_coefficient(std::string_view name) const
{
    const std::size_t v = variable(name);
    double c = 0.0;
    for (const auto& [var, coef] : objective) {
        if (var == v)
            c += coef;
    }
    return c;
}

namespace {

std::string family_of(const std::string& name)
{
    return name.substr(0, name.find('_'));
}

Terms sorted_terms(const MilpModel& m, const Terms& terms)
{
    Terms out = terms;
    std::sort(out.begin(), out.end(), [&m](const auto& a, const auto& b) {
        return m.variables[a.first].name < m.variables[b.first].name;
    });
    return out;
}

bool terms_equal(const MilpModel& ma, const Terms& a, const MilpModel& mb, const Terms& b,
                 double tol)
{
    if (a.size() != b.size())
        return false;
    const Terms sa = sorted_terms(ma, a);
    const Terms sb = sorted_terms(mb, b);
    for (std::size_t i = 0; i < sa.size(); ++i) {
        if (ma.variables[sa[i].first].name != mb.variables[sb[i].first].name)
            return false;
        const double scale = std::max({1.0, std::abs(sa[i].second), std::abs(sb[i].second)});
        if (std::abs(sa[i].second - sb[i].second) > tol * scale)
            return false;
    }
    return true;
}

bool close(double a, double b, double tol)
{
    if (a == b)
        return true;  // also equal infinities
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

ModelCensus census(const MilpModel& m)
{
    ModelCensus c;
    for (const auto& v : m.variables)
        ++c.variables[family_of(v.name)];
    for (const auto& con : m.constraints)
        ++c.constraints[family_of(con.name)];
    c.total_variables = m.variables.size();
    c.total_constraints = m.constraints.size();
    return c;
}

bool structurally_equal(const MilpModel& a, const MilpModel& b, double tol)
{
    if (a.variables.size() != b.variables.size() || a.constraints.size() != b.constraints.size())
        return false;
    for (std::size_t i = 0; i < a.variables.size(); ++i) {
        const auto& va = a.variables[i];
        if (!b.has_variable(va.name))
            return false;
        const auto& vb = b.variables[b.variable(va.name)];
        if (va.kind != vb.kind || !close(va.lower, vb.lower, tol) || !close(va.upper, vb.upper, tol))
            return false;
    }
    std::map<std::string, const Constraint*> by_name;
    for (const auto& c : b.constraints)
        by_name[c.name] = &c;
    for (const auto& ca : a.constraints) {
        auto it = by_name.find(ca.name);
        if (it == by_name.end())
            return false;
        const Constraint& cb = *it->second;
        if (ca.sense != cb.sense || !close(ca.rhs, cb.rhs, tol) ||
            !terms_equal(a, ca.terms, b, cb.terms, tol))
            return false;
    }
    if (!terms_equal(a, a.objective, b, b.objective, tol))
        return false;
    if (a.big_m.size() != b.big_m.size())
        return false;
    for (const auto& [name, m] : a.big_m) {
        auto it = b.big_m.find(name);
        if (it == b.big_m.end() || !close(m, it->second, tol))
            return false;
    }
    return true;
}

// ----- formulate -----

namespace {

bool can_self_process(const Scenario& s, const std::vector<std::size_t>& eligible,
                      std::size_t demand)
{
    const std::size_t src = *s.find_node(s.demands[demand].source);
    return std::binary_search(eligible.begin(), eligible.end(), src) &&
           s.nodes[src].processor.capacity_mips >= s.load_mips(demand);
}

std::string link_name(std::size_t l) { return "l" + std::to_string(l); }

}  // namespace

MilpModel formulate(const Scenario& s, const LinkSet& ls, const std::vector<DelayTable>& tables,
                    const ObjectiveWeights& w)
{
    const auto eligible = eligible_processors(s);
    if (eligible.empty())
        throw FormulationError("no eligible processors");
    for (std::size_t d = 0; d < s.demands.size(); ++d) {
        const std::size_t src = *s.find_node(s.demands[d].source);
        if (!can_self_process(s, eligible, d) && ls.out_links[src].empty())
            throw FormulationError("demand source isolated: " + s.demands[d].id);
    }

    MilpModel m;
    const double inf = std::numeric_limits<double>::infinity();
    const double packet_bits = 8.0 * s.settings.packet_size_bytes;
    const std::size_t K = static_cast<std::size_t>(s.settings.bins);

    auto add_con = [&m](std::string name, Terms terms, Sense sense, double rhs) {
        m.constraints.push_back({std::move(name), std::move(terms), sense, rhs});
    };

    // x, y
    std::vector<std::vector<std::size_t>> xv(s.demands.size()), yv(s.demands.size());
    for (std::size_t d = 0; d < s.demands.size(); ++d) {
        const std::string& did = s.demands[d].id;
        for (std::size_t n : eligible) {
            xv[d].push_back(m.add_variable("x_" + did + "_" + s.nodes[n].id, VarKind::Continuous,
                                           0.0, 1.0));
            yv[d].push_back(
                m.add_variable("y_" + did + "_" + s.nodes[n].id, VarKind::Binary, 0.0, 1.0));
        }
    }
    // a
    std::vector<std::size_t> av(ls.devices.size());
    for (std::size_t g = 0; g < ls.devices.size(); ++g)
        av[g] = m.add_variable("a_" + ls.devices[g].id, VarKind::Binary, 0.0, 1.0);

    // per-link queue variables
    std::vector<std::size_t> lam(ls.links.size()), qtab(ls.links.size());
    std::vector<std::vector<std::size_t>> zv(ls.links.size());
    for (const Link& l : ls.links) {
        const std::string ln = link_name(l.id);
        lam[l.id] = m.add_variable("lam_" + ln, VarKind::Continuous, 0.0, inf);
        qtab[l.id] = m.add_variable("Q_" + ln, VarKind::Continuous, 0.0, inf);
        for (std::size_t k = 1; k <= K; ++k)
            zv[l.id].push_back(m.add_variable("z_" + ln + "_" + std::to_string(k),
                                              VarKind::Binary, 0.0, 1.0));
    }

    // r, q per remote (demand, target)
    struct Stream {
        std::size_t d, n, y;
        std::vector<std::pair<std::size_t, std::size_t>> r;  // (link, var)
        std::vector<std::size_t> q;                          // parallel to r
    };
    std::vector<Stream> streams;
    for (std::size_t d = 0; d < s.demands.size(); ++d) {
        const std::size_t src = *s.find_node(s.demands[d].source);
        for (std::size_t i = 0; i < eligible.size(); ++i) {
            const std::size_t n = eligible[i];
            if (n == src)
                continue;
            Stream st{d, n, yv[d][i], {}, {}};
            const std::string base = s.demands[d].id + "_" + s.nodes[n].id + "_";
            for (const Link& l : ls.links) {
                if (l.rx_node == src || l.tx_node == n)
                    continue;
                const std::string ln = link_name(l.id);
                st.r.emplace_back(l.id, m.add_variable("r_" + base + ln, VarKind::Binary, 0, 1));
                st.q.push_back(m.add_variable("q_" + base + ln, VarKind::Continuous, 0.0, inf));
            }
            streams.push_back(std::move(st));
        }
    }
    const std::size_t T = m.add_variable("T", VarKind::Continuous, 0.0, inf);

    // C1, C2
    for (std::size_t d = 0; d < s.demands.size(); ++d) {
        const std::string& did = s.demands[d].id;
        Terms sum;
        for (std::size_t i = 0; i < eligible.size(); ++i)
            sum.emplace_back(xv[d][i], 1.0);
        add_con("C1_" + did, std::move(sum), Sense::Equal, 1.0);
        for (std::size_t i = 0; i < eligible.size(); ++i) {
            const std::string nid = s.nodes[eligible[i]].id;
            add_con("C2x_" + did + "_" + nid, {{xv[d][i], 1.0}, {yv[d][i], -1.0}},
                    Sense::LessEqual, 0.0);
            add_con("C2a_" + did + "_" + nid,
                    {{yv[d][i], 1.0}, {av[ls.processor_of[eligible[i]]], -1.0}}, Sense::LessEqual,
                    0.0);
        }
    }
    // C3
    for (std::size_t i = 0; i < eligible.size(); ++i) {
        Terms t;
        for (std::size_t d = 0; d < s.demands.size(); ++d)
            t.emplace_back(xv[d][i], s.load_mips(d));
        add_con("C3_" + s.nodes[eligible[i]].id, std::move(t), Sense::LessEqual,
                s.nodes[eligible[i]].processor.capacity_mips);
    }
    // C4
    for (const Stream& st : streams) {
        const std::size_t src = *s.find_node(s.demands[st.d].source);
        const std::string base = s.demands[st.d].id + "_" + s.nodes[st.n].id + "_";
        for (std::size_t v = 0; v < s.nodes.size(); ++v) {
            if (!ls.in_graph[v])
                continue;
            Terms flow, out;
            for (std::size_t j = 0; j < st.r.size(); ++j) {
                const Link& l = ls.links[st.r[j].first];
                if (l.tx_node == v) {
                    flow.emplace_back(st.r[j].second, 1.0);
                    out.emplace_back(st.r[j].second, 1.0);
                }
                if (l.rx_node == v)
                    flow.emplace_back(st.r[j].second, -1.0);
            }
            const double rhs_coef = (v == src ? 1.0 : 0.0) - (v == st.n ? 1.0 : 0.0);
            if (rhs_coef != 0.0)
                flow.emplace_back(st.y, -rhs_coef);
            add_con("C4_" + base + s.nodes[v].id, std::move(flow), Sense::Equal, 0.0);
            add_con("C4s_" + base + s.nodes[v].id, std::move(out), Sense::LessEqual, 1.0);
        }
    }
    // C5a, C7
    std::vector<Terms> traffic(ls.links.size());
    for (const Stream& st : streams) {
        const double bps = s.demands[st.d].traffic_kbps * 1e3;
        for (const auto& [l, var] : st.r)
            traffic[l].emplace_back(var, bps);
    }
    for (const Link& l : ls.links) {
        const std::string ln = link_name(l.id);
        add_con("C5a_" + ln, traffic[l.id], Sense::LessEqual, l.capacity_bps);
    }
    for (const auto& [ap, cell] : ls.cells) {
        Terms t;
        for (std::size_t l : cell)
            t.insert(t.end(), traffic[l].begin(), traffic[l].end());
        add_con("C5b_" + ls.devices[ap].id, std::move(t), Sense::LessEqual,
                ls.devices[ap].capacity);
    }
    // C6
    for (const Stream& st : streams) {
        const std::string base = s.demands[st.d].id + "_" + s.nodes[st.n].id + "_";
        for (const auto& [l, var] : st.r) {
            const Link& link = ls.links[l];
            add_con("C6t_" + base + link_name(l), {{var, 1.0}, {av[link.tx_device], -1.0}},
                    Sense::LessEqual, 0.0);
            if (link.rx_device != kNoDevice)
                add_con("C6r_" + base + link_name(l), {{var, 1.0}, {av[link.rx_device], -1.0}},
                        Sense::LessEqual, 0.0);
        }
    }
    for (const Link& l : ls.links) {
        const std::string ln = link_name(l.id);
        const DelayTable& tab = tables[l.id];
        Terms pick, cap{{lam[l.id], 1.0}}, qdef{{qtab[l.id], 1.0}};
        for (std::size_t k = 0; k < K; ++k) {
            pick.emplace_back(zv[l.id][k], 1.0);
            cap.emplace_back(zv[l.id][k], -tab.upper_pps[k]);
            qdef.emplace_back(zv[l.id][k], -tab.delay_s[k]);
        }
        add_con("C7z_" + ln, std::move(pick), Sense::Equal, 1.0);
        Terms rate{{lam[l.id], 1.0}};
        for (const auto& [var, bps] : traffic[l.id])
            rate.emplace_back(var, -bps / packet_bits);
        add_con("C7l_" + ln, std::move(rate), Sense::Equal, 0.0);
        add_con("C7c_" + ln, std::move(cap), Sense::LessEqual, 0.0);
        add_con("C7q_" + ln, std::move(qdef), Sense::Equal, 0.0);
    }
    // C8, C9
    for (const Stream& st : streams) {
        const std::string base = s.demands[st.d].id + "_" + s.nodes[st.n].id + "_";
        Terms delay{{T, 1.0}};
        for (std::size_t j = 0; j < st.r.size(); ++j) {
            const auto [l, var] = st.r[j];
            const double big_m = tables[l].delay_s.back();
            const std::string name = "C8_" + base + link_name(l);
            // q - Q - M r >= -M
            add_con(name, {{st.q[j], 1.0}, {qtab[l], -1.0}, {var, -big_m}}, Sense::GreaterEqual,
                    -big_m);
            m.big_m[name] = big_m;
            const Link& link = ls.links[l];
            delay.emplace_back(var, -(link.prop_delay_s + link.tx_delay_per_packet_s));
            delay.emplace_back(st.q[j], -1.0);
        }
        add_con("C9_" + s.demands[st.d].id + "_" + s.nodes[st.n].id, std::move(delay),
                Sense::GreaterEqual, 0.0);
    }

    // objective
    if (w.w_power != 0.0) {
        for (std::size_t g = 0; g < ls.devices.size(); ++g)
            m.objective.emplace_back(av[g], w.w_power * ls.devices[g].power_idle_w);
        for (std::size_t d = 0; d < s.demands.size(); ++d) {
            for (std::size_t i = 0; i < eligible.size(); ++i) {
                const auto& p = s.nodes[eligible[i]].processor;
                const double span = (p.power_max_w - p.power_idle_w) / p.capacity_mips;
                m.objective.emplace_back(xv[d][i], w.w_power * span * s.load_mips(d));
            }
        }
        std::vector<double> per_bps(ls.links.size());
        for (const Link& l : ls.links)
            per_bps[l.id] = link_watts_per_bps(s, ls, l.id);
        for (const Stream& st : streams) {
            const double bps = s.demands[st.d].traffic_kbps * 1e3;
            for (const auto& [l, var] : st.r)
                m.objective.emplace_back(var, w.w_power * per_bps[l] * bps);
        }
    }
    if (w.w_delay != 0.0)
        m.objective.emplace_back(T, w.w_delay);
    return m;
}

// ----- evaluate -----

ConstraintViolation::ConstraintViolation(std::string family, std::string entity,
                                         std::string measure, double amount)
    : std::runtime_error([&] {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%g", amount);
          return family + ", " + entity + ", " + measure + " " + buf;
      }()),
      family_(std::move(family)),
      entity_(std::move(entity)),
      amount_(amount)
{
}

namespace {
constexpr double kTol = 1e-9;
}

SolveResult evaluate(const Scenario& s, const LinkSet& ls, const std::vector<DelayTable>& tables,
                     const Allocation& a, const ObjectiveWeights& w)
{
    if (a.demands.size() != s.demands.size())
        throw ConstraintViolation("C1", "allocation", "demand count mismatch",
                                  static_cast<double>(a.demands.size()));
    const auto eligible = eligible_processors(s);
    std::vector<double> node_mips(s.nodes.size(), 0.0);

    for (std::size_t d = 0; d < s.demands.size(); ++d) {
        const auto& da = a.demands[d];
        const std::string entity = "demand " + s.demands[d].id;
        const std::size_t src = *s.find_node(s.demands[d].source);
        if (da.fractions.size() != da.targets.size() || da.routes.size() != da.targets.size())
            throw ConstraintViolation("C2", entity, "malformed serving set", 0.0);
        double sum = 0.0;
        for (std::size_t i = 0; i < da.targets.size(); ++i) {
            const std::size_t n = da.targets[i];
            if (n >= s.nodes.size() || !std::binary_search(eligible.begin(), eligible.end(), n))
                throw ConstraintViolation("C2", entity, "ineligible target", static_cast<double>(n));
            if (i > 0 && da.targets[i - 1] >= n)
                throw ConstraintViolation("C2", entity, "unsorted or repeated target",
                                          static_cast<double>(n));
            const double x = da.fractions[i];
            if (!(x >= -kTol && x <= 1 + kTol))
                throw ConstraintViolation("C2", entity + " node " + s.nodes[n].id,
                                          "fraction out of range", x);
            sum += x;
            node_mips[n] += x * s.load_mips(d);

            const auto& route = da.routes[i];
            const std::string sid = entity + " target " + s.nodes[n].id;
            if (n == src) {
                if (!route.empty())
                    throw ConstraintViolation("C4", sid, "route on local processing",
                                              static_cast<double>(route.size()));
                continue;
            }
            if (route.empty())
                throw ConstraintViolation("C4", sid, "missing route", 0.0);
            std::set<std::size_t> seen{src};
            std::size_t at = src;
            for (std::size_t l : route) {
                if (l >= ls.links.size() || ls.links[l].tx_node != at)
                    throw ConstraintViolation("C4", sid, "broken route at link",
                                              static_cast<double>(l));
                at = ls.links[l].rx_node;
                if (!seen.insert(at).second)
                    throw ConstraintViolation("C4", sid, "route revisits a node",
                                              static_cast<double>(at));
            }
            if (at != n)
                throw ConstraintViolation("C4", sid, "route ends elsewhere",
                                          static_cast<double>(at));
        }
        if (std::abs(sum - 1.0) > kTol) {
            if (sum < 1.0)
                throw ConstraintViolation("C1", entity, "deficit", 1.0 - sum);
            throw ConstraintViolation("C1", entity, "excess", sum - 1.0);
        }
    }

    for (std::size_t n = 0; n < s.nodes.size(); ++n) {
        const double cap = s.nodes[n].processor.capacity_mips;
        if (node_mips[n] > cap * (1 + kTol))
            throw ConstraintViolation("C3", "node " + s.nodes[n].id, "excess", node_mips[n] - cap);
    }

    const AllocationLoads loads = compute_loads(s, ls, a);
    for (const Link& l : ls.links) {
        const double t = loads.link_traffic_bps[l.id];
        if (t > l.capacity_bps * (1 + kTol))
            throw ConstraintViolation("C5a", "link " + link_name(l.id), "excess",
                                      t - l.capacity_bps);
        if (loads.link_lambda_pps[l.id] > tables[l.id].max_lambda() * (1 + kTol))
            throw ConstraintViolation("C7", "link " + link_name(l.id), "excess",
                                      loads.link_lambda_pps[l.id] - tables[l.id].max_lambda());
    }
    for (const auto& [ap, cell] : ls.cells) {
        double t = 0.0;
        for (std::size_t l : cell)
            t += loads.link_traffic_bps[l];
        if (t > ls.devices[ap].capacity * (1 + kTol))
            throw ConstraintViolation("C5b", "cell " + ls.devices[ap].id, "excess",
                                      t - ls.devices[ap].capacity);
    }

    SolveResult r;
    r.allocation = a;
    r.weights = w;
    const PowerBreakdown power = system_power(s, ls, a);
    r.total_power_w = power.total_w;
    r.per_device_power_w = power.per_device_w;
    for (std::size_t d = 0; d < a.demands.size(); ++d) {
        const auto& da = a.demands[d];
        for (std::size_t i = 0; i < da.targets.size(); ++i) {
            // Bin lookups clamp to the cap; the check above already allows 1e-9 slack.
            std::vector<double> lambda = loads.link_lambda_pps;
            for (std::size_t l : da.routes[i])
                lambda[l] = std::min(lambda[l], tables[l].max_lambda());
            const double delay = path_delay(da.routes[i], ls, tables, lambda);
            r.route_delays.push_back({d, da.targets[i], delay});
            r.max_delay_s = std::max(r.max_delay_s, delay);
        }
    }
    r.objective = w.w_power * r.total_power_w + w.w_delay * r.max_delay_s;
    return r;
}

ObjectiveWeights make_weights(ObjectivePreset preset, double power_optimum_w,
                              double delay_optimum_s, double custom_power, double custom_delay)
{
    switch (preset) {
    case ObjectivePreset::PowerOnly:
        return {1.0, 0.0, preset};
    case ObjectivePreset::JointEqual:
        if (!(power_optimum_w > 0) || !(delay_optimum_s > 0))
            throw FormulationError("nonpositive normalizer for joint weights");
        return {0.5 / power_optimum_w, 0.5 / delay_optimum_s, preset};
    case ObjectivePreset::Custom:
        if (!(custom_power >= 0) || !(custom_delay >= 0) ||
            (custom_power == 0 && custom_delay == 0))
            throw FormulationError("custom weights must be non-negative and not both zero");
        return {custom_power, custom_delay, preset};
    }
    throw FormulationError("unknown preset");
}

}  // namespace vecop
