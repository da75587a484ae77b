#pragma once

#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ein/charts.hpp"
#include "ein/connectivity.hpp"
#include "ein/diamonds.hpp"
#include "ein/domains.hpp"

namespace ein::cli {

using json = nlohmann::json;

// Malformed input document: bad type, missing field, unknown key.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Throws SchemaError if `j` is not an object or has a key outside `allowed`.
void require_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what);

double get_number(const json& j, std::string_view key);
std::int64_t get_integer(const json& j, std::string_view key);

json to_json(const Vec& v);
Vec vec_from_json(const json& j, std::string_view what);
json to_json(const Mat& m);  // row-major list of rows

json to_json(const Tolerance& tol);
Tolerance tolerance_from_json(const json& j);

json to_json(const UniPoint& p);
UniPoint unipoint_from_json(const json& j, const Tolerance& tol);

json to_json(const ChartFrame& f);
ChartFrame frame_from_json(const json& j);

/// {"orientation": "future" | "past", "dim": n, "planes": [{"v": [...], "s": s}]}.
json to_json(const BoundaryData& data);
BoundaryData boundary_from_json(const json& j);

json to_json(const CounterexampleScene& sc);
CounterexampleScene counterexample_scene_from_json(const json& j);
json to_json(const SliceVerdicts& s);

/// CSV with header x1,...,xn,label; one row per point.
void write_cloud_csv(std::ostream& os, const SampleCloud& cloud, const std::vector<int>& labels);

}  // namespace ein::cli
