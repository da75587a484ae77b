#include "ein/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ein::cli {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write " + path);
  out << text;
}

void require_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
  if (!j.is_object()) throw SchemaError(std::string(what) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw SchemaError(std::string(what) + ": unknown key \"" + key + "\"");
  }
}

double get_number(const json& j, std::string_view key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) throw SchemaError("\"" + std::string(key) + "\" must be a number");
  return it->get<double>();
}

std::int64_t get_integer(const json& j, std::string_view key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) {
    throw SchemaError("\"" + std::string(key) + "\" must be an integer");
  }
  return it->get<std::int64_t>();
}

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) throw SchemaError(std::string(what) + ": expected a non-empty array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(std::string(what) + ": entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json(Vec(m.row(r).transpose())));
  return rows;
}

json to_json(const Tolerance& tol) { return {{"tau", tol.tau}, {"band", tol.band}}; }

Tolerance tolerance_from_json(const json& j) {
  require_keys(j, {"tau", "band"}, "tolerance");
  Tolerance tol;
  if (j.contains("tau")) tol.tau = get_number(j, "tau");
  if (j.contains("band")) tol.band = get_number(j, "band");
  tol.validate();
  return tol;
}

json to_json(const UniPoint& p) { return {{"x", to_json(p.x())}, {"t", p.t()}}; }

UniPoint unipoint_from_json(const json& j, const Tolerance& tol) {
  require_keys(j, {"x", "t"}, "point");
  if (!j.contains("x")) throw SchemaError("point: missing \"x\"");
  return UniPoint(vec_from_json(j.at("x"), "point.x"), get_number(j, "t"), tol);
}

json to_json(const ChartFrame& f) {
  return {{"xi_inf", to_json(f.xi_inf())},
          {"xi_zero", to_json(f.xi_zero())},
          {"block", to_json(f.block())},
          {"center", to_json(f.center())},
          {"tolerance", to_json(f.tolerance())}};
}

ChartFrame frame_from_json(const json& j) {
  require_keys(j, {"xi_inf", "xi_zero", "block", "center", "tolerance"}, "frame");
  for (const char* key : {"xi_inf", "xi_zero", "block", "center"}) {
    if (!j.contains(key)) throw SchemaError(std::string("frame: missing \"") + key + "\"");
  }
  const Tolerance tol = j.contains("tolerance") ? tolerance_from_json(j.at("tolerance")) : Tolerance{};
  const json& rows = j.at("block");
  if (!rows.is_array() || rows.empty()) throw SchemaError("frame.block: expected rows");
  Mat block(static_cast<Eigen::Index>(rows.size()), 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Vec row = vec_from_json(rows[r], "frame.block row");
    if (r == 0) block.resize(static_cast<Eigen::Index>(rows.size()), row.size());
    if (row.size() != block.cols()) throw SchemaError("frame.block: ragged rows");
    block.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return ChartFrame(vec_from_json(j.at("xi_inf"), "frame.xi_inf"), vec_from_json(j.at("xi_zero"), "frame.xi_zero"),
                    block, unipoint_from_json(j.at("center"), tol), tol);
}

json to_json(const BoundaryData& data) {
  json planes = json::array();
  for (const auto& h : data.planes) planes.push_back({{"v", to_json(h.v)}, {"s", h.s}});
  return {{"orientation", data.orientation == Orientation::FutureRegular ? "future" : "past"},
          {"dim", data.dim},
          {"planes", planes}};
}

BoundaryData boundary_from_json(const json& j) {
  require_keys(j, {"orientation", "dim", "planes"}, "boundary data");
  BoundaryData data;
  if (j.contains("orientation")) {
    const json& o = j.at("orientation");
    if (o == "future") {
      data.orientation = Orientation::FutureRegular;
    } else if (o == "past") {
      data.orientation = Orientation::PastRegular;
    } else {
      throw SchemaError("boundary data: orientation must be \"future\" or \"past\"");
    }
  }
  if (!j.contains("planes") || !j.at("planes").is_array()) throw SchemaError("boundary data: \"planes\" must be an array");
  for (const auto& p : j.at("planes")) {
    require_keys(p, {"v", "s"}, "plane");
    if (!p.contains("v")) throw SchemaError("plane: missing \"v\"");
    data.planes.push_back({vec_from_json(p.at("v"), "plane.v"), get_number(p, "s")});
  }
  if (j.contains("dim")) {
    data.dim = static_cast<int>(get_integer(j, "dim"));
  } else if (!data.planes.empty()) {
    data.dim = static_cast<int>(data.planes.front().v.size());
  }
  return data;
}

json to_json(const CounterexampleScene& sc) {
  return {{"n", sc.n},     {"lambda", sc.lambda},   {"k", sc.k},      {"r_inner", sc.r_inner},
          {"samples", sc.samples}, {"seed", sc.seed}, {"knn", sc.knn}};
}

CounterexampleScene counterexample_scene_from_json(const json& j) {
  require_keys(j, {"n", "lambda", "k", "r_inner", "samples", "seed", "knn"}, "counterexample scene");
  CounterexampleScene sc;
  if (j.contains("n")) sc.n = static_cast<int>(get_integer(j, "n"));
  if (j.contains("lambda")) sc.lambda = get_number(j, "lambda");
  if (j.contains("k")) sc.k = static_cast<int>(get_integer(j, "k"));
  if (j.contains("r_inner")) sc.r_inner = get_number(j, "r_inner");
  if (j.contains("samples")) sc.samples = static_cast<int>(get_integer(j, "samples"));
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw SchemaError("\"seed\" must be a non-negative integer");
    sc.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("knn")) sc.knn = static_cast<int>(get_integer(j, "knn"));
  return sc;
}

json to_json(const SliceVerdicts& s) {
  return {{"xplane", {{"inner", s.xplane_inner},
                      {"outer", s.xplane_outer},
                      {"nonempty", s.xplane_nonempty},
                      {"fixed_residual", s.xplane_fixed_residual}}},
          {"yz_plane", {{"a_extent", s.yz_a_extent}, {"b_extent", s.yz_b_extent}}},
          {"yz_plane_empty", s.yz_plane_empty}};
}

void write_cloud_csv(std::ostream& os, const SampleCloud& cloud, const std::vector<int>& labels) {
  if (labels.size() != cloud.points.size()) throw PreconditionError("labels do not match the cloud");
  const Eigen::Index dim = cloud.points.empty() ? 0 : cloud.points.front().size();
  for (Eigen::Index i = 0; i < dim; ++i) os << 'x' << (i + 1) << ',';
  os << "label\n";
  for (std::size_t r = 0; r < cloud.points.size(); ++r) {
    for (Eigen::Index i = 0; i < dim; ++i) os << format_double(cloud.points[r][i]) << ',';
    os << labels[r] << '\n';
  }
}

}  // namespace ein::cli
