#pragma once

#include "hypercone/cone.hpp"
#include "hypercone/extension.hpp"
#include "hypercone/metric_space.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace hypercone {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Distance matrices: CSV (n rows of n decimals, optional label header row)
// or JSON {"labels": [...], "dist": [[...]]}. Loaders validate the metric.
FiniteMetricSpace load_space_csv(const std::string& path, Scalar tol = 1e-9);
FiniteMetricSpace load_space_json(const std::string& path, Scalar tol = 1e-9);
FiniteMetricSpace load_space(const std::string& path, Scalar tol = 1e-9); // by extension
void save_space_csv(const FiniteMetricSpace& S, const std::string& path);
void save_space_json(const FiniteMetricSpace& S, const std::string& path);

// Maps: JSON {"pairing": [j0, j1, ...]}.
PointMap load_map_json(const std::string& path);
void save_map_json(const PointMap& f, const std::string& path);

// Cone samples: JSON {"space": <hash>, "heights": [...], "points": [...]}.
ConeSample load_sample_json(const std::string& path);
void save_sample_json(const ConeSample& sample, const std::string& path);

// Extensions: pairing plus per-point breakpoints; enough to re-evaluate the
// cone map without the source spaces.
ConeMapExtension load_extension_json(const std::string& path);
void save_extension_json(const ConeMapExtension& ext, const std::string& path);

} // namespace hypercone
