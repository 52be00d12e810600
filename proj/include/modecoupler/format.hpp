// format.hpp: numeric text formatting shared by every CSV/JSON writer

#pragma once

#include <cmath>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace modecoupler {

inline constexpr int output_digits = 12;

/// 12 significant digits, "nan" for missing values.
inline std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (v == 0.0) return "0";  // no "-0"
    std::ostringstream os;
    os.precision(output_digits);
    os << v;
    return os.str();
}

inline std::string join_csv(std::initializer_list<double> values) {
    std::string out;
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += fmt_num(v);
        first = false;
    }
    return out;
}

inline std::string join_csv(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    return out;
}

} // namespace modecoupler

#include <limits>

#include <nlohmann/json.hpp>

namespace modecoupler {

/// JSON number rounded to the same 12 significant digits as the CSV writers;
/// non-finite values become null.
inline nlohmann::json json_num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(fmt_num(v));
}

} // namespace modecoupler
