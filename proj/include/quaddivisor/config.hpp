// Run configuration: polynomial, box, k, X ladder, truncation and quadrature
// settings.  JSON on disk; rationals serialized as canonical "p/q" strings so
// emit -> parse round-trips exactly.

#pragma once

#include "quaddivisor/numeric.hpp"
#include "quaddivisor/quad_poly.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qd {

struct RunConfig {
    int schema_version = 1;
    std::vector<std::vector<Int>> Q;
    std::vector<Int> L;
    Int N = 0;
    std::vector<Rat> box_lo, box_hi;
    int k = 2;
    std::vector<Rat> ladder;  // X values
    std::int64_t pmax = 1000;
    int lmax = 6;
    int jet_order = -1;  // -1: derived from k
    double quad_tol = 1e-6;
    int quad_max_depth = 40;
    unsigned threads = 0;  // 0: hardware
    std::uint64_t seed = 12345;
    std::string out_csv = "report.csv";
    std::string out_json = "report.json";

    QuadraticPolynomial polynomial() const;
    BoxRegion box_at(const Rat& X) const;

    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static RunConfig load(const std::string& path);
    void save(const std::string& path) const;
};

// "p/q", decimal string, or integer string; JSON numbers map through their
// exact binary value.
Rat parse_rational(const nlohmann::json& v);
std::string rational_string(const Rat& r);

}  // namespace qd
