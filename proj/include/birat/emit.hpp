#pragma once
// Plain-text emitters: aligned markdown tables, csv, json rows, and the
// little formatting helpers shared by the command-line reports.

#include "sequence.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>
#endif

#include <algorithm>
#include <string>
#include <vector>

namespace birat {

struct TextTable {
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;
};

inline std::string to_markdown(const TextTable& t) {
    std::vector<size_t> width(t.headers.size());
    for (size_t j = 0; j < t.headers.size(); ++j) width[j] = t.headers[j].size();
    for (const auto& row : t.rows)
        for (size_t j = 0; j < row.size() && j < width.size(); ++j)
            width[j] = std::max(width[j], row[j].size());

    std::string out;
    auto line = [&out, &width](const std::vector<std::string>& cells) {
        out += '|';
        for (size_t j = 0; j < width.size(); ++j) {
            const std::string& c = j < cells.size() ? cells[j] : std::string();
            out += ' ';
            out += c;
            out.append(width[j] - c.size() + 1, ' ');
            out += '|';
        }
        out += '\n';
    };
    line(t.headers);
    out += '|';
    for (size_t j = 0; j < width.size(); ++j) {
        out.append(width[j] + 2, '-');
        out += '|';
    }
    out += '\n';
    for (const auto& row : t.rows) line(row);
    return out;
}

inline std::string to_csv(const TextTable& t) {
    auto escape = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    std::string out;
    auto line = [&out, &escape](const std::vector<std::string>& cells) {
        for (size_t j = 0; j < cells.size(); ++j) {
            if (j) out += ',';
            out += escape(cells[j]);
        }
        out += '\n';
    };
    line(t.headers);
    for (const auto& row : t.rows) line(row);
    return out;
}

inline nlohmann::ordered_json to_json_rows(const TextTable& t) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (size_t j = 0; j < t.headers.size() && j < row.size(); ++j)
            obj[t.headers[j]] = row[j];
        rows.push_back(std::move(obj));
    }
    return rows;
}

// ---- shared report pieces -----------------------------------------------------

inline TextTable orbit_table(const OrbitTable& t) {
    TextTable out;
    out.headers = {"n", "d"};
    for (const std::string& name : t.chart_names) out.headers.push_back(name);
    for (const OrbitRow& r : t.rows) {
        std::vector<std::string> row{std::to_string(r.n), std::to_string(r.degree)};
        for (int nu : r.indices) row.push_back(std::to_string(nu));
        out.rows.push_back(std::move(row));
    }
    return out;
}

inline TextTable affine_table(const std::vector<QVec>& states,
                              const std::vector<std::string>& labels) {
    TextTable out;
    out.headers = {"n"};
    for (const std::string& l : labels) out.headers.push_back(l);
    for (size_t n = 0; n < states.size(); ++n) {
        std::vector<std::string> row{std::to_string(n)};
        for (const Rational& x : states[n]) row.push_back(x.str());
        out.rows.push_back(std::move(row));
    }
    return out;
}

inline TextTable degree_only_table(const std::vector<Rational>& degrees) {
    TextTable out;
    out.headers = {"n", "d"};
    for (size_t n = 0; n < degrees.size(); ++n)
        out.rows.push_back({std::to_string(n), degrees[n].str()});
    return out;
}

// polynomial in a scalar variable from ascending coefficients, highest power first
inline std::string format_poly_in(const QVec& ascending, const std::string& var) {
    std::string out;
    for (int k = static_cast<int>(ascending.size()) - 1; k >= 0; --k) {
        const Rational& c = ascending[k];
        if (c.is_zero()) continue;
        Rational a = c;
        if (out.empty()) {
            if (a.sign() < 0) {
                out += '-';
                a = -a;
            }
        } else {
            out += a.sign() < 0 ? " - " : " + ";
            if (a.sign() < 0) a = -a;
        }
        if (k == 0) {
            out += a.str();
        } else {
            if (a != Rational(1)) out += a.str() + "*";
            out += var;
            if (k > 1) out += "^" + std::to_string(k);
        }
    }
    return out.empty() ? "0" : out;
}

inline std::string format_closed_form(const ClosedForm& cf, const std::string& var = "n") {
    std::string out = format_poly_in(cf.p, var);
    if (!cf.pure()) {
        std::string q = format_poly_in(cf.q, var);
        out += " + (-1)^" + var + " * (" + q + ")";
    }
    if (cf.first_valid > 0) out += "   (" + var + " >= " + std::to_string(cf.first_valid) + ")";
    return out;
}

inline std::string format_recurrence(const LinearRecurrence& rec, const std::string& seq = "d") {
    std::string out = seq + "(n) = ";
    bool first = true;
    for (int j = 1; j <= rec.order; ++j) {
        Rational c = rec.coefficients[j - 1];
        if (c.is_zero()) continue;
        if (first) {
            if (c.sign() < 0) {
                out += '-';
                c = -c;
            }
            first = false;
        } else {
            out += c.sign() < 0 ? " - " : " + ";
            if (c.sign() < 0) c = -c;
        }
        if (c != Rational(1)) out += c.str() + "*";
        out += seq + "(n-" + std::to_string(j) + ")";
    }
    if (first) out += "0";
    return out;
}

inline std::string format_rational_list(const QVec& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += xs[i].str();
    }
    return out;
}

inline nlohmann::ordered_json rational_list_json(const QVec& xs) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const Rational& x : xs) a.push_back(x.str());
    return a;
}

}  // namespace birat
