#include "quaddivisor/report.hpp"

#include "quaddivisor/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qd {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json PredictionReport::to_json() const {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["k"] = k;
    j["error_slope"] = format_double(error_slope);
    j["decreasing"] = decreasing;
    nlohmann::json rws = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row;
        row["X"] = rational_string(r.X);
        row["exact"] = r.exact_total.str();
        row["lattice_count"] = r.lattice_count.str();
        row["fmax"] = r.fmax_used;
        row["prediction"] = format_double(r.prediction);
        nlohmann::json pieces = nlohmann::json::array();
        for (double p : r.pieces) pieces.push_back(format_double(p));
        row["pieces"] = pieces;
        row["rel_error"] = format_double(r.rel_error);
        row["sing_tail"] = format_double(r.sing_tail);
        row["quad_error"] = format_double(r.quad_error);
        row["cells"] = r.cells;
        row["quad_ok"] = r.quad_ok;
        rws.push_back(row);
    }
    j["rows"] = rws;
    return j;
}

std::string PredictionReport::to_csv() const {
    std::ostringstream os;
    os << "X,exact,lattice_count,fmax,prediction";
    for (int r = 0; r < k; ++r) os << ",piece_r" << r;
    os << ",rel_error,sing_tail,quad_error,cells,quad_ok\n";
    for (const auto& r : rows) {
        os << rational_string(r.X) << "," << r.exact_total.str() << "," << r.lattice_count.str()
           << "," << r.fmax_used << "," << format_double(r.prediction);
        for (double p : r.pieces) os << "," << format_double(p);
        os << "," << format_double(r.rel_error) << "," << format_double(r.sing_tail) << ","
           << format_double(r.quad_error) << "," << r.cells << "," << (r.quad_ok ? 1 : 0) << "\n";
    }
    return os.str();
}

void PredictionReport::write(const std::string& csv_path, const std::string& json_path) const {
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw Error("cannot write report: " + csv_path);
        out << to_csv();
    }
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw Error("cannot write report: " + json_path);
        out << to_json().dump(2) << "\n";
    }
}

}  // namespace qd
