#include "quaddivisor/config.hpp"

#include <fstream>
#include <sstream>

namespace qd {

Rat parse_rational(const nlohmann::json& v) {
    if (v.is_number_integer()) return Rat(Int(v.get<std::int64_t>()));
    if (v.is_number_float()) return Rat(v.get<double>());  // exact binary value
    if (!v.is_string()) throw DomainError("rational: expected number or string");
    std::string s = v.get<std::string>();
    auto slash = s.find('/');
    if (slash != std::string::npos)
        return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(Int(s));
    bool neg = !s.empty() && s[0] == '-';
    std::string digits = s;
    digits.erase(dot, 1);
    if (neg) digits.erase(0, 1);
    Int num(digits);
    Int den = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    return neg ? Rat(-num, den) : Rat(num, den);
}

std::string rational_string(const Rat& r) {
    if (rat_den(r) == 1) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

QuadraticPolynomial RunConfig::polynomial() const { return QuadraticPolynomial(Q, L, N); }

BoxRegion RunConfig::box_at(const Rat& X) const { return BoxRegion(box_lo, box_hi, X); }

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    c.schema_version = j.value("schema_version", 1);
    const auto& poly = j.at("polynomial");
    for (const auto& row : poly.at("Q")) {
        std::vector<Int> r;
        for (const auto& e : row) r.emplace_back(e.get<std::int64_t>());
        c.Q.push_back(std::move(r));
    }
    for (const auto& e : poly.at("L")) c.L.emplace_back(e.get<std::int64_t>());
    c.N = Int(poly.value("N", 0));
    const auto& box = j.at("box");
    for (const auto& e : box.at("lo")) c.box_lo.push_back(parse_rational(e));
    for (const auto& e : box.at("hi")) c.box_hi.push_back(parse_rational(e));
    c.k = j.at("k").get<int>();
    if (j.contains("ladder"))
        for (const auto& e : j.at("ladder")) c.ladder.push_back(parse_rational(e));
    if (j.contains("truncation")) {
        const auto& t = j.at("truncation");
        c.pmax = t.value("pmax", c.pmax);
        c.lmax = t.value("lmax", c.lmax);
        c.jet_order = t.value("jet_order", c.jet_order);
    }
    if (j.contains("quadrature")) {
        const auto& t = j.at("quadrature");
        c.quad_tol = t.value("tol", c.quad_tol);
        c.quad_max_depth = t.value("max_depth", c.quad_max_depth);
    }
    c.threads = j.value("threads", 0u);
    c.seed = j.value("seed", static_cast<std::uint64_t>(12345));
    if (j.contains("output")) {
        c.out_csv = j.at("output").value("csv", c.out_csv);
        c.out_json = j.at("output").value("json", c.out_json);
    }
    return c;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    nlohmann::json qrows = nlohmann::json::array();
    for (const auto& row : Q) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& e : row) r.push_back(to_i64(e));
        qrows.push_back(r);
    }
    nlohmann::json lrow = nlohmann::json::array();
    for (const auto& e : L) lrow.push_back(to_i64(e));
    j["polynomial"] = {{"Q", qrows}, {"L", lrow}, {"N", to_i64(N)}};
    nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
    for (const auto& e : box_lo) lo.push_back(rational_string(e));
    for (const auto& e : box_hi) hi.push_back(rational_string(e));
    j["box"] = {{"lo", lo}, {"hi", hi}};
    j["k"] = k;
    nlohmann::json lad = nlohmann::json::array();
    for (const auto& e : ladder) lad.push_back(rational_string(e));
    j["ladder"] = lad;
    j["truncation"] = {{"pmax", pmax}, {"lmax", lmax}, {"jet_order", jet_order}};
    j["quadrature"] = {{"tol", quad_tol}, {"max_depth", quad_max_depth}};
    j["threads"] = threads;
    j["seed"] = seed;
    j["output"] = {{"csv", out_csv}, {"json", out_json}};
    return j;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

void RunConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write config file: " + path);
    out << to_json().dump(2) << "\n";
}

}  // namespace qd
