#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "riemann2d/distortion.hpp"
#include "riemann2d/geodesic.hpp"

namespace riemann2d {

// All emitted numbers use 10 significant digits.
inline std::string format_sig10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// Small column-major-agnostic numeric table with deterministic emission.
struct NumericTable {
    std::vector<std::string> headers;
    std::vector<std::vector<double>> rows;

    void push(std::vector<double> row) { rows.push_back(std::move(row)); }

    void write_csv(std::ostream& os) const {
        for (std::size_t i = 0; i < headers.size(); ++i)
            os << (i ? "," : "") << headers[i];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << format_sig10(row[i]);
            os << "\n";
        }
    }

    void write_text(std::ostream& os) const {
        std::vector<std::size_t> width(headers.size());
        std::vector<std::vector<std::string>> cells(rows.size());
        for (std::size_t i = 0; i < headers.size(); ++i) width[i] = headers[i].size();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            cells[r].reserve(rows[r].size());
            for (std::size_t i = 0; i < rows[r].size(); ++i) {
                cells[r].push_back(format_sig10(rows[r][i]));
                width[i] = std::max(width[i], cells[r].back().size());
            }
        }
        for (std::size_t i = 0; i < headers.size(); ++i) {
            os << (i ? "  " : "");
            os << headers[i] << std::string(width[i] - headers[i].size(), ' ');
        }
        os << "\n";
        for (const auto& row : cells) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                os << (i ? "  " : "");
                os << row[i] << std::string(width[i] - row[i].size(), ' ');
            }
            os << "\n";
        }
    }

    void write_json(std::ostream& os) const {
        os << "{\n  \"columns\": [";
        for (std::size_t i = 0; i < headers.size(); ++i)
            os << (i ? ", " : "") << '"' << headers[i] << '"';
        os << "],\n  \"rows\": [\n";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            os << "    [";
            for (std::size_t i = 0; i < rows[r].size(); ++i)
                os << (i ? ", " : "") << format_sig10(rows[r][i]);
            os << (r + 1 < rows.size() ? "],\n" : "]\n");
        }
        os << "  ]\n}\n";
    }
};

// columns t, x, y, vx, vy, g_speed
inline void write_curve_csv(std::ostream& os, const GeodesicCurve& c) {
    NumericTable t;
    t.headers = {"t", "x", "y", "vx", "vy", "g_speed"};
    for (std::size_t i = 0; i < c.size(); ++i)
        t.push({c.param[i], c.points[i].x, c.points[i].y, c.tangents[i].x,
                c.tangents[i].y, g_speed(c, i)});
    t.write_csv(os);
}

// columns r, r_prime, r_hat, slip, g
inline NumericTable profile_table(const RadialProfile& p) {
    NumericTable t;
    t.headers = {"r", "r_prime", "r_hat", "slip", "g"};
    for (double r : p.sample_grid()) {
        const double rp = p.r_prime(r);
        t.push({r, rp, p.r_hat(r), r < 1e-9 ? 1.0 : p.slip(r),
                p.g_of_r_prime(rp)});
    }
    return t;
}

inline void write_profile_csv(std::ostream& os, const RadialProfile& p) {
    profile_table(p).write_csv(os);
}

} // namespace riemann2d
