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

// CPLEX LP text. The writer emits whitespace-separated tokens, one
// constraint per logical row (wrapped every few terms), every continuous
// variable in Bounds and every binary in Binary. Big-M values travel as
// "\ bigM <constraint> <value>" comment lines. The reader accepts that
// dialect plus the usual keyword spellings.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "vecop/formulation.hpp"

namespace vecop {

LpParseError::LpParseError(const std::string& what, std::size_t line)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

std::string num(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_terms(std::ostringstream& os, const MilpModel& m, const Terms& terms)
{
    std::size_t on_line = 0;
    for (const auto& [var, coef] : terms) {
        if (on_line == 6) {
            os << "\n   ";
            on_line = 0;
        }
        os << (coef < 0 ? " - " : " + ") << num(std::abs(coef)) << ' ' << m.variables[var].name;
        ++on_line;
    }
}

const char* sense_text(Sense s)
{
    switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
    }
    return "=";
}

}  // namespace

std::string export_lp(const MilpModel& m)
{
    std::ostringstream os;
    os << "\\ vecop allocation model\n";
    for (const auto& [name, value] : m.big_m)
        os << "\\ bigM " << name << ' ' << num(value) << '\n';
    os << "Minimize\n obj:";
    if (m.objective.empty())
        os << " 0";
    else
        write_terms(os, m, m.objective);
    os << "\nSubject To\n";
    for (const auto& c : m.constraints) {
        os << ' ' << c.name << ':';
        if (c.terms.empty())
            os << " 0";
        write_terms(os, m, c.terms);
        os << ' ' << sense_text(c.sense) << ' ' << num(c.rhs) << '\n';
    }
    os << "Bounds\n";
    for (const auto& v : m.variables) {
        if (v.kind == VarKind::Binary)
            continue;
        if (std::isinf(v.upper))
            os << ' ' << v.name << " >= " << num(v.lower) << '\n';
        else
            os << ' ' << num(v.lower) << " <= " << v.name << " <= " << num(v.upper) << '\n';
    }
    os << "Binary\n";
    for (const auto& v : m.variables) {
        if (v.kind == VarKind::Binary)
            os << ' ' << v.name << '\n';
    }
    os << "End\n";
    return os.str();
}

// ----- reader -----

namespace {

enum class Section { Preamble, Objective, Constraints, Bounds, Binary, General, End };

struct Token {
    std::string text;
    std::size_t line;
};

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool parse_number(const std::string& t, double& out)
{
    const std::string l = lower(t);
    if (l == "inf" || l == "+inf" || l == "infinity" || l == "+infinity") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    if (l == "-inf" || l == "-infinity") {
        out = -std::numeric_limits<double>::infinity();
        return true;
    }
    if (t.empty())
        return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && (std::isdigit(static_cast<unsigned char>(t[0])) ||
                                           t[0] == '.' || t[0] == '-' || t[0] == '+');
}

bool is_sense(const std::string& t, Sense& s)
{
    if (t == "<=" || t == "=<" || t == "<") {
        s = Sense::LessEqual;
        return true;
    }
    if (t == ">=" || t == "=>" || t == ">") {
        s = Sense::GreaterEqual;
        return true;
    }
    if (t == "=") {
        s = Sense::Equal;
        return true;
    }
    return false;
}

std::optional<Section> section_keyword(const std::string& line)
{
    const std::string l = lower(line);
    if (l == "minimize" || l == "minimum" || l == "min")
        return Section::Objective;
    if (l == "maximize" || l == "maximum" || l == "max")
        return std::nullopt;  // rejected by caller
    if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.")
        return Section::Constraints;
    if (l == "bounds" || l == "bound")
        return Section::Bounds;
    if (l == "binary" || l == "binaries" || l == "bin")
        return Section::Binary;
    if (l == "general" || l == "generals" || l == "gen")
        return Section::General;
    if (l == "end")
        return Section::End;
    return std::nullopt;
}

struct LpBuilder {
    MilpModel model;

    std::size_t var(const std::string& name, std::size_t line)
    {
        if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0])))
            throw LpParseError("bad variable name '" + name + "'", line);
        if (model.has_variable(name))
            return model.variable(name);
        return model.add_variable(name, VarKind::Continuous, 0.0,
                                  std::numeric_limits<double>::infinity());
    }

    // [name:] (+|-)? coef? var ... [sense rhs]
    void linear(const std::vector<Token>& toks, std::size_t& i, Terms& terms, bool stop_on_name)
    {
        double sign = 1.0;
        double coef = 1.0;
        bool have_coef = false;
        while (i < toks.size()) {
            const Token& t = toks[i];
            Sense s;
            if (is_sense(t.text, s))
                return;
            if (stop_on_name && t.text.back() == ':')
                return;
            if (t.text == "+") {
                ++i;
                continue;
            }
            if (t.text == "-") {
                sign = -sign;
                ++i;
                continue;
            }
            double v;
            if (parse_number(t.text, v)) {
                if (have_coef)
                    throw LpParseError("two numbers in a row", t.line);
                coef = v;
                have_coef = true;
                ++i;
                // A trailing constant (e.g. "obj: 0") has no variable.
                if (i == toks.size() || toks[i].text == "+" || toks[i].text == "-" ||
                    toks[i].text.back() == ':' || is_sense(toks[i].text, s)) {
                    if (coef != 0.0)
                        throw LpParseError("constant terms are not supported", t.line);
                    sign = 1.0;
                    coef = 1.0;
                    have_coef = false;
                }
                continue;
            }
            terms.emplace_back(var(t.text, t.line), sign * coef);
            sign = 1.0;
            coef = 1.0;
            have_coef = false;
            ++i;
        }
    }
};

std::vector<Token> tokenize(const std::string& text, std::size_t line)
{
    std::vector<Token> out;
    std::istringstream is(text);
    std::string t;
    while (is >> t) {
        // split "name:rest"
        auto colon = t.find(':');
        if (colon != std::string::npos && colon + 1 < t.size()) {
            out.push_back({t.substr(0, colon + 1), line});
            out.push_back({t.substr(colon + 1), line});
        } else {
            out.push_back({t, line});
        }
    }
    return out;
}

}  // namespace

MilpModel read_lp(std::string_view text)
{
    LpBuilder b;
    Section section = Section::Preamble;
    std::vector<Token> objective_toks, constraint_toks;
    std::vector<std::pair<std::string, std::size_t>> binaries;
    std::vector<std::pair<std::string, std::size_t>> bounds;

    std::size_t line_no = 0;
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (auto bs = line.find('\\'); bs != std::string::npos) {
            std::istringstream cs(line.substr(bs + 1));
            std::string tag, name, value;
            if (cs >> tag >> name >> value && tag == "bigM") {
                double v;
                if (!parse_number(value, v))
                    throw LpParseError("bad bigM value", line_no);
                b.model.big_m[name] = v;
            }
            line.erase(bs);
        }
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
        if (trimmed.empty())
            continue;
        if (auto sec = section_keyword(trimmed)) {
            section = *sec;
            continue;
        }
        const std::string low = lower(trimmed);
        if (low == "maximize" || low == "maximum" || low == "max")
            throw LpParseError("only minimization models are supported", line_no);
        switch (section) {
        case Section::Preamble:
            throw LpParseError("expected Minimize", line_no);
        case Section::Objective: {
            auto t = tokenize(trimmed, line_no);
            objective_toks.insert(objective_toks.end(), t.begin(), t.end());
            break;
        }
        case Section::Constraints: {
            auto t = tokenize(trimmed, line_no);
            constraint_toks.insert(constraint_toks.end(), t.begin(), t.end());
            break;
        }
        case Section::Bounds:
            bounds.emplace_back(trimmed, line_no);
            break;
        case Section::Binary:
        case Section::General:
            for (const auto& t : tokenize(trimmed, line_no)) {
                if (section == Section::General)
                    throw LpParseError("general integers are not supported", line_no);
                binaries.emplace_back(t.text, t.line);
            }
            break;
        case Section::End:
            throw LpParseError("content after End", line_no);
        }
    }
    if (section != Section::End)
        throw LpParseError("missing End", line_no);

    // objective
    {
        std::size_t i = 0;
        if (!objective_toks.empty() && objective_toks[0].text.back() == ':')
            ++i;
        b.linear(objective_toks, i, b.model.objective, false);
        if (i != objective_toks.size())
            throw LpParseError("unexpected token in objective", objective_toks[i].line);
    }

    // constraints
    std::size_t i = 0;
    std::size_t unnamed = 0;
    while (i < constraint_toks.size()) {
        Constraint c;
        const std::size_t start_line = constraint_toks[i].line;
        if (constraint_toks[i].text.back() == ':') {
            c.name = constraint_toks[i].text.substr(0, constraint_toks[i].text.size() - 1);
            ++i;
        } else {
            c.name = "R" + std::to_string(++unnamed);
        }
        b.linear(constraint_toks, i, c.terms, true);
        if (i >= constraint_toks.size() || !is_sense(constraint_toks[i].text, c.sense))
            throw LpParseError("constraint " + c.name + " has no sense", start_line);
        ++i;
        double sign = 1.0;
        if (i < constraint_toks.size() &&
            (constraint_toks[i].text == "-" || constraint_toks[i].text == "+")) {
            sign = constraint_toks[i].text == "-" ? -1.0 : 1.0;
            ++i;
        }
        if (i >= constraint_toks.size() || !parse_number(constraint_toks[i].text, c.rhs))
            throw LpParseError("constraint " + c.name + " has no right-hand side", start_line);
        c.rhs *= sign;
        ++i;
        b.model.constraints.push_back(std::move(c));
    }

    // bounds: "lo <= x <= hi", "x >= lo", "x <= hi", "x = v", "x free"
    for (const auto& [text, ln] : bounds) {
        auto toks = tokenize(text, ln);
        std::vector<std::string> t;
        for (auto& tok : toks)
            t.push_back(tok.text);
        double v1, v2;
        Sense s1, s2;
        if (t.size() == 2 && lower(t[1]) == "free") {
            auto& var = b.model.variables[b.var(t[0], ln)];
            var.lower = -std::numeric_limits<double>::infinity();
            var.upper = std::numeric_limits<double>::infinity();
        } else if (t.size() == 5 && parse_number(t[0], v1) && is_sense(t[1], s1) &&
                   is_sense(t[3], s2) && parse_number(t[4], v2) && s1 == Sense::LessEqual &&
                   s2 == Sense::LessEqual) {
            auto& var = b.model.variables[b.var(t[2], ln)];
            var.lower = v1;
            var.upper = v2;
        } else if (t.size() == 3 && is_sense(t[1], s1) && parse_number(t[2], v1)) {
            auto& var = b.model.variables[b.var(t[0], ln)];
            if (s1 == Sense::GreaterEqual)
                var.lower = v1;
            else if (s1 == Sense::LessEqual)
                var.upper = v1;
            else
                var.lower = var.upper = v1;
        } else {
            throw LpParseError("unrecognized bound '" + text + "'", ln);
        }
    }

    for (const auto& [name, ln] : binaries) {
        auto& var = b.model.variables[b.var(name, ln)];
        var.kind = VarKind::Binary;
        var.lower = 0.0;
        var.upper = 1.0;
    }
    return std::move(b.model);
}

}  // namespace vecop
