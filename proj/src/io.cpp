#include "hypercone/io.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hypercone {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ParseError("cannot write file: " + path);
    out << content;
}

json parse_json(const std::string& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded())
        throw ParseError("malformed JSON in " + path);
    return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    return fields;
}

bool parse_double(const std::string& raw, Scalar& out) {
    std::size_t a = 0, b = raw.size();
    while (a < b && std::isspace(static_cast<unsigned char>(raw[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(raw[b - 1]))) --b;
    if (a == b) return false;
    const char* first = raw.data() + a;
    const char* last = raw.data() + b;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

std::string format_double(Scalar v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x00000100000001b3ULL;
    }
    return h;
}

FiniteMetricSpace load_space_csv(const std::string& path, Scalar tol) {
    std::istringstream in(read_file(path));
    std::string line;
    std::vector<std::vector<Scalar>> rows;
    std::vector<std::string> labels;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        std::vector<Scalar> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (const auto& f : fields) {
            Scalar v;
            if (!parse_double(f, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first) { // header row of labels
                labels = fields;
                first = false;
                continue;
            }
            throw ParseError("non-numeric entry in " + path);
        }
        rows.push_back(std::move(row));
        first = false;
    }
    if (rows.empty())
        throw ParseError("no rows in " + path);
    const Index n = static_cast<Index>(rows.size());
    Matrix D(n, n);
    for (Index i = 0; i < n; ++i) {
        if (static_cast<Index>(rows[static_cast<std::size_t>(i)].size()) != n)
            throw ParseError("ragged row in " + path);
        for (Index j = 0; j < n; ++j)
            D(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return validate_metric(D, tol, std::move(labels));
}

FiniteMetricSpace load_space_json(const std::string& path, Scalar tol) {
    const json j = parse_json(path);
    if (!j.is_object() || !j.contains("dist") || !j["dist"].is_array())
        throw ParseError("space JSON needs a \"dist\" matrix: " + path);
    std::vector<std::string> labels;
    if (j.contains("labels"))
        labels = j["labels"].get<std::vector<std::string>>();
    const auto& rows = j["dist"];
    const Index n = static_cast<Index>(rows.size());
    if (n == 0)
        throw ParseError("empty matrix in " + path);
    Matrix D(n, n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != n)
            throw ParseError("ragged row in " + path);
        for (Index j2 = 0; j2 < n; ++j2) {
            if (!row[static_cast<std::size_t>(j2)].is_number())
                throw ParseError("non-numeric entry in " + path);
            D(i, j2) = row[static_cast<std::size_t>(j2)].get<Scalar>();
        }
    }
    return validate_metric(D, tol, std::move(labels));
}

FiniteMetricSpace load_space(const std::string& path, Scalar tol) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        return load_space_json(path, tol);
    return load_space_csv(path, tol);
}

void save_space_csv(const FiniteMetricSpace& S, const std::string& path) {
    std::ostringstream out;
    if (!S.labels.empty()) {
        for (Index i = 0; i < S.n(); ++i)
            out << (i ? "," : "") << S.labels[static_cast<std::size_t>(i)];
        out << "\n";
    }
    for (Index i = 0; i < S.n(); ++i) {
        for (Index j = 0; j < S.n(); ++j)
            out << (j ? "," : "") << format_double(S.d(i, j));
        out << "\n";
    }
    write_file(path, out.str());
}

void save_space_json(const FiniteMetricSpace& S, const std::string& path) {
    nlohmann::ordered_json j;
    j["labels"] = S.labels;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Index i = 0; i < S.n(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Index k = 0; k < S.n(); ++k) row.push_back(S.d(i, k));
        rows.push_back(std::move(row));
    }
    j["dist"] = std::move(rows);
    write_file(path, j.dump(2) + "\n");
}

PointMap load_map_json(const std::string& path) {
    const json j = parse_json(path);
    if (!j.is_object() || !j.contains("pairing") || !j["pairing"].is_array())
        throw ParseError("map JSON needs a \"pairing\" array: " + path);
    PointMap f;
    for (const auto& v : j["pairing"]) {
        if (!v.is_number_integer())
            throw ParseError("non-integer pairing entry in " + path);
        f.pairing.push_back(v.get<Index>());
    }
    return f;
}

void save_map_json(const PointMap& f, const std::string& path) {
    nlohmann::ordered_json j;
    j["pairing"] = f.pairing;
    write_file(path, j.dump(2) + "\n");
}

ConeSample load_sample_json(const std::string& path) {
    const json j = parse_json(path);
    if (!j.is_object() || !j.contains("points"))
        throw ParseError("sample JSON needs a \"points\" array: " + path);
    ConeSample sample;
    sample.space_hash = j.value("space", std::uint64_t{0});
    if (j.contains("heights"))
        sample.height_grid = j["heights"].get<std::vector<Scalar>>();
    for (const auto& p : j["points"])
        sample.points.emplace_back(p.at("base").get<Index>(), p.at("height").get<Scalar>());
    return sample;
}

void save_sample_json(const ConeSample& sample, const std::string& path) {
    nlohmann::ordered_json j;
    j["space"] = sample.space_hash;
    j["heights"] = sample.height_grid;
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const ConePoint& p : sample.points)
        pts.push_back({{"base", p.base}, {"height", p.height}});
    j["points"] = std::move(pts);
    write_file(path, j.dump(2) + "\n");
}

ConeMapExtension load_extension_json(const std::string& path) {
    const json j = parse_json(path);
    if (!j.is_object() || !j.contains("pairing") || !j.contains("per_point"))
        throw ParseError("extension JSON needs \"pairing\" and \"per_point\": " + path);
    ConeMapExtension ext;
    ext.map.pairing = j["pairing"].get<std::vector<Index>>();
    for (const auto& m : j["per_point"]) {
        PiecewiseLinearMap map;
        map.knots = m.at("knots").get<std::vector<Scalar>>();
        map.values = m.at("values").get<std::vector<Scalar>>();
        map.left_slope = m.value("left_slope", 1.0);
        map.right_slope = m.value("right_slope", 1.0);
        ext.per_point.push_back(std::move(map));
    }
    return ext;
}

void save_extension_json(const ConeMapExtension& ext, const std::string& path) {
    nlohmann::ordered_json j;
    j["pairing"] = ext.map.pairing;
    nlohmann::ordered_json pp = nlohmann::ordered_json::array();
    for (const PiecewiseLinearMap& m : ext.per_point)
        pp.push_back({{"knots", m.knots},
                      {"values", m.values},
                      {"left_slope", m.left_slope},
                      {"right_slope", m.right_slope}});
    j["per_point"] = std::move(pp);
    write_file(path, j.dump(2) + "\n");
}

} // namespace hypercone
