#include "qnehari/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qnehari/error.hpp"

namespace qnehari {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json quaternion_to_json(const Quaternion& q) { return nlohmann::json::array({q.x0, q.x1, q.x2, q.x3}); }

Quaternion quaternion_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4) throw ConfigError("quaternion: expected an array of four numbers");
    for (const auto& v : j)
        if (!v.is_number()) throw ConfigError("quaternion: expected an array of four numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

nlohmann::json series_to_json(const TruncatedSeries& f) {
    auto out = nlohmann::json::array();
    for (const auto& a : f.coeffs()) out.push_back(quaternion_to_json(a));
    return out;
}

TruncatedSeries series_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("series: expected an array of coefficients");
    std::vector<Quaternion> coeffs;
    coeffs.reserve(j.size());
    for (const auto& c : j) coeffs.push_back(quaternion_from_json(c));
    return TruncatedSeries(std::move(coeffs));
}

void write_series_csv(std::ostream& os, const TruncatedSeries& f) {
    os << "n,x0,x1,x2,x3\n";
    for (std::size_t n = 0; n < f.size(); ++n) {
        const auto& a = f[n];
        os << n << ',' << format_double(a.x0) << ',' << format_double(a.x1) << ',' << format_double(a.x2) << ','
           << format_double(a.x3) << '\n';
    }
}

TruncatedSeries read_series_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("n,x0,x1,x2,x3", 0) != 0)
        throw ConfigError("series CSV: missing header n,x0,x1,x2,x3");
    TruncatedSeries out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double v[5];
        for (double& x : v) {
            if (!std::getline(row, cell, ',')) throw ConfigError("series CSV: short row: " + line);
            try {
                x = std::stod(cell);
            } catch (const std::exception&) {
                throw ConfigError("series CSV: bad number: " + cell);
            }
        }
        if (v[0] < 0.0 || v[0] != static_cast<double>(static_cast<std::size_t>(v[0])))
            throw ConfigError("series CSV: degree must be a nonnegative integer");
        out.at(static_cast<std::size_t>(v[0])) = {v[1], v[2], v[3], v[4]};
    }
    return out;
}

}  // namespace qnehari
