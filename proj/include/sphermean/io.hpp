#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphermean/common.hpp"
#include "sphermean/grid.hpp"
#include "sphermean/morphology.hpp"
#include "sphermean/profile.hpp"
#include "sphermean/report.hpp"
#include "sphermean/specfun.hpp"

namespace sphermean::io {

using field::GridField;
using field::GridGeometry;

/// Field file format: raw little-endian float64 values (row-major) at `path`
/// plus a JSON sidecar at `path`.json carrying the geometry.
inline void save_field(const std::string& path, const GridField& f) {
    {
        std::ofstream os(path, std::ios::binary);
        require(os.good(), "save_field: cannot open " + path);
        os.write(reinterpret_cast<const char*>(f.values.data()),
                 static_cast<std::streamsize>(f.values.size() * sizeof(double)));
        require(os.good(), "save_field: write failed on " + path);
    }
    report::Value side = report::Value::object();
    side.set("dim", std::int64_t(f.geom.dim));
    report::Value shape = report::Value::array();
    for (int a = 0; a < f.geom.dim; ++a) shape.push(std::int64_t(f.geom.shape[a]));
    side.set("shape", std::move(shape));
    side.set("spacing", f.geom.spacing);
    report::Value origin = report::Value::array();
    for (int a = 0; a < f.geom.dim; ++a) origin.push(f.geom.origin[a]);
    side.set("origin", std::move(origin));
    side.set("order", "row-major");
    std::ofstream os(path + ".json");
    require(os.good(), "save_field: cannot open " + path + ".json");
    os << side.str();
}

inline GridField load_field(const std::string& path) {
    nlohmann::json side;
    {
        std::ifstream is(path + ".json");
        require(is.good(), "load_field: missing sidecar " + path + ".json");
        is >> side;
    }
    GridGeometry g;
    g.dim = side.at("dim").get<int>();
    const auto shape = side.at("shape");
    require(shape.size() == static_cast<std::size_t>(g.dim), "load_field: bad shape");
    g.shape = {1, 1, 1};
    for (int a = 0; a < g.dim; ++a) g.shape[a] = shape.at(a).get<int>();
    if (g.dim == 2) g.shape[2] = 1;
    g.spacing = side.at("spacing").get<double>();
    const auto origin = side.at("origin");
    g.origin = {0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) g.origin[a] = origin.at(a).get<double>();
    require(side.at("order").get<std::string>() == "row-major",
            "load_field: unsupported value order");
    g.validate();

    GridField f(g);
    std::ifstream is(path, std::ios::binary);
    require(is.good(), "load_field: cannot open " + path);
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    require(is.gcount() == static_cast<std::streamsize>(f.values.size() * sizeof(double)),
            "load_field: file shorter than the sidecar geometry");
    f.check_finite();
    return f;
}

/// Masks share the field binary format with values in {0, 1}.
inline void save_mask(const std::string& path, const geometry::DomainMask& m) {
    GridField f(m.geom);
    for (std::size_t i = 0; i < m.inside.size(); ++i) f.values[i] = m.inside[i] ? 1.0 : 0.0;
    save_field(path, f);
}

inline geometry::DomainMask load_mask(const std::string& path) {
    const GridField f = load_field(path);
    geometry::DomainMask m(f.geom);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        require(f.values[i] == 0.0 || f.values[i] == 1.0, "load_mask: values must be 0 or 1");
        m.inside[i] = f.values[i] != 0.0 ? 1 : 0;
    }
    return m;
}

/// Profiles as CSV `r,value` rows.
inline void save_profile_csv(const std::string& path, const field::RadialProfile& p) {
    std::ofstream os(path);
    require(os.good(), "save_profile_csv: cannot open " + path);
    os << "r,value\n";
    char buf[96];
    for (int i = 0; i < p.count; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.radius(i), p.values[i]);
        os << buf;
    }
}

inline void save_even_profile_csv(const std::string& path, const field::EvenProfile& g) {
    std::ofstream os(path);
    require(os.good(), "save_even_profile_csv: cannot open " + path);
    os << "r,value\n";
    char buf[96];
    for (int i = 0; i < g.count; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.p(i), g.values[i]);
        os << buf;
    }
}

namespace detail_io {

inline std::vector<std::pair<double, double>> read_csv_pairs(const std::string& path) {
    std::ifstream is(path);
    require(is.good(), "load_profile_csv: cannot open " + path);
    std::string line;
    std::getline(is, line); // header
    std::vector<std::pair<double, double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        require(comma != std::string::npos, "load_profile_csv: malformed row in " + path);
        rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    require(rows.size() >= 2, "load_profile_csv: too few rows in " + path);
    return rows;
}

} // namespace detail_io

/// Loads a uniform-grid profile from CSV (validates the grid uniformity).
inline field::RadialProfile load_profile_csv(const std::string& path) {
    const auto rows = detail_io::read_csv_pairs(path);
    field::RadialProfile p;
    p.count = static_cast<int>(rows.size());
    p.r_max = rows.back().first;
    p.values.resize(rows.size());
    const double h = p.r_max / (p.count - 1);
    for (int i = 0; i < p.count; ++i) {
        require(std::abs(rows[i].first - i * h) <= 1e-9 * std::max(1.0, p.r_max),
                "load_profile_csv: radius grid must be uniform from 0");
        p.values[i] = rows[i].second;
    }
    p.validate();
    return p;
}

inline field::EvenProfile load_even_profile_csv(const std::string& path) {
    const auto rows = detail_io::read_csv_pairs(path);
    field::EvenProfile g;
    g.count = static_cast<int>(rows.size());
    g.p_max = rows.back().first;
    g.values.resize(rows.size());
    const double h = g.p_max / (g.count - 1);
    for (int i = 0; i < g.count; ++i) {
        require(std::abs(rows[i].first - i * h) <= 1e-9 * std::max(1.0, g.p_max),
                "load_even_profile_csv: grid must be uniform from 0");
        g.values[i] = rows[i].second;
    }
    g.validate();
    return g;
}

/// Zero tables as CSV `index,zero` with 15 significant digits.
inline void write_zero_table_csv(std::ostream& os, const specfun::BesselZeroTable& t) {
    os << "index,zero\n";
    char buf[64];
    for (std::size_t i = 0; i < t.zeros.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.15g\n", i, t.zeros[i]);
        os << buf;
    }
}

} // namespace sphermean::io
