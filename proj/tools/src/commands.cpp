#include "ein/cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "ein/cli/io.hpp"
#include "ein/random.hpp"

#ifndef EIN_VERSION
#define EIN_VERSION "0.0.0"
#endif

namespace ein::cli {

const char* version() { return EIN_VERSION; }

namespace {

struct Options {
  std::string scene;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out;
  bool oracle = false;
  std::string lambda;
};

// Thrown by a command whose checks fail; carries the finished report.
struct PropertyFailure {
  std::string message;
};

class Context {
 public:
  Context(const Options& opts, std::ostream& out) : opts_(opts), out_(out) {
    if (opts.tol) {
      tol_.tau = *opts.tol;
      if (!(tol_.tau > 0.0 && tol_.tau < tol_.band)) throw SchemaError("--tol must lie in (0, 1e-6)");
    }
    scene_ = opts.scene.empty() ? json::object() : read_json_file(opts.scene);
    if (!scene_.is_object()) throw SchemaError("scene must be a JSON object");
  }

  const json& scene() const { return scene_; }
  const Tolerance& tol() const { return tol_; }
  const Options& options() const { return opts_; }

  std::uint64_t seed(std::uint64_t fallback) const {
    if (opts_.seed) return *opts_.seed;
    if (scene_.contains("seed")) {
      if (!scene_.at("seed").is_number_unsigned()) throw SchemaError("\"seed\" must be a non-negative integer");
      return scene_.at("seed").get<std::uint64_t>();
    }
    return fallback;
  }

  json header(std::string_view command, const json& resolved) const {
    return {{"tool", "ein"},
            {"version", version()},
            {"command", std::string(command)},
            {"scene", resolved},
            {"tolerance", to_json(tol_)}};
  }

  void emit(const json& report, const std::string& name) const {
    const std::string text = report.dump(2) + "\n";
    if (opts_.out.empty()) {
      out_ << text;
    } else {
      write_text_file(opts_.out + name, text);
    }
  }

 private:
  Options opts_;
  std::ostream& out_;
  Tolerance tol_;
  json scene_;
};

int optional_int(const json& j, std::string_view key, int fallback) {
  return j.contains(key) ? static_cast<int>(get_integer(j, key)) : fallback;
}

double optional_number(const json& j, std::string_view key, double fallback) {
  return j.contains(key) ? get_number(j, key) : fallback;
}

UniPoint default_center(const json& j, const Tolerance& tol) {
  if (j.contains("center")) return unipoint_from_json(j.at("center"), tol);
  return UniPoint(basis_vector(3, 0), 0.0, tol);
}

int cmd_counterexample(const Context& ctx) {
  json scene = ctx.scene();
  CounterexampleScene sc = counterexample_scene_from_json(scene);
  sc.seed = ctx.seed(sc.seed);
  sc.validate();
  const CounterexampleReport rep = counterexample_scene(sc);
  const json resolved = to_json(sc);
  const std::string prefix = ctx.options().out;

  std::ostringstream csv;
  write_cloud_csv(csv, rep.cloud, rep.components.labels);
  write_text_file(prefix + "cloud.csv", csv.str());

  json slices = ctx.header("counterexample", resolved);
  slices["slices"] = to_json(rep.slices);
  write_text_file(prefix + "slices.json", slices.dump(2) + "\n");

  json report = ctx.header("counterexample", resolved);
  // Smallest k with lambda^{-k} <= r_inner.
  const int k_threshold = static_cast<int>(std::ceil(std::log(1.0 / sc.r_inner) / std::log(sc.lambda) - 1e-12));
  report["components"] = rep.components.count;
  report["component_sizes"] = rep.components.sizes;
  report["mutual_components"] = rep.mutual_components;
  report["graph"] = "symmetric-knn";
  report["points"] = rep.cloud.points.size();
  report["drawn"] = rep.drawn;
  report["degenerate"] = rep.degenerate;
  report["thresholds"] = {{"yz_plane_empty_from_k", std::max(k_threshold, 0)}};
  report["yz_plane_empty"] = rep.slices.yz_plane_empty;
  write_text_file(prefix + "report.json", report.dump(2) + "\n");
  if (rep.degenerate) throw PropertyFailure{"degenerate sampling: fewer than 100 points in the intersection"};
  return kExitOk;
}

int cmd_classify(const Context& ctx) {
  const json& scene = ctx.scene();
  require_keys(scene, {"past", "future", "grid_density", "seed"}, "classify scene");
  if (!scene.contains("past") || !scene.contains("future")) throw SchemaError("classify scene needs \"past\" and \"future\"");
  const UniPoint past = unipoint_from_json(scene.at("past"), ctx.tol());
  const UniPoint future = unipoint_from_json(scene.at("future"), ctx.tol());
  const int density = optional_int(scene, "grid_density", 64);
  const Diamond d = Diamond::make(past, future, ctx.tol());
  const DiamondKind kind = classify_diamond(d, ctx.tol());
  const double dist = sphere_distance(past.x(), future.x(), ctx.tol());

  json resolved = {{"past", to_json(past)}, {"future", to_json(future)}, {"grid_density", density}};
  json report = ctx.header("classify", resolved);
  report["kind"] = std::string(to_string(kind));
  report["distance"] = dist;
  report["time_gap"] = future.t() - past.t();
  report["thresholds"] = {dist, kTwoPi - dist};
  bool agree = true;
  if (ctx.options().oracle) {
    const auto pair = find_conjugate_pair(d, density, ctx.tol());
    const auto photon = contains_complete_photon(d, density, ctx.tol());
    switch (kind) {
      case DiamondKind::ConjugateCylinder: agree = pair.has_value(); break;
      case DiamondKind::NullHalfSpace:
      case DiamondKind::AffineChart: agree = photon.has_value() && !pair; break;
      default: agree = !pair && !photon; break;
    }
    json oracle = {{"agrees", agree}};
    oracle["conjugate_pair"] = pair ? json{to_json(pair->first), to_json(pair->second)} : json(nullptr);
    oracle["complete_photon"] =
        photon ? json{{"base", to_json(photon->base)}, {"tangent", to_json(photon->tangent)}} : json(nullptr);
    report["oracle"] = oracle;
  }
  ctx.emit(report, "report.json");
  if (!agree) throw PropertyFailure{"taxonomy disagrees with the oracles"};
  return kExitOk;
}

BoundaryData load_boundary(const Context& ctx) {
  if (!ctx.options().lambda.empty()) return boundary_from_json(read_json_file(ctx.options().lambda));
  if (!ctx.scene().contains("boundary")) throw SchemaError("boundary data required: --lambda <file> or scene \"boundary\"");
  return boundary_from_json(ctx.scene().at("boundary"));
}

json membership_json(const Membership& m) {
  json j = {{"verdict", std::string(to_string(m.verdict))}};
  j["margin"] = std::isfinite(m.margin) ? json(m.margin + 0.0) : json(nullptr);
  return j;
}

int cmd_domain_member(const Context& ctx) {
  const json& scene = ctx.scene();
  require_keys(scene, {"boundary", "points"}, "member scene");
  const RegularDomain omega(load_boundary(ctx), ctx.tol());
  if (!scene.contains("points") || !scene.at("points").is_array()) throw SchemaError("member scene needs \"points\"");
  json results = json::array();
  for (const auto& p : scene.at("points")) {
    const Vec q = vec_from_json(p, "point");
    json r = membership_json(member(omega, q));
    r["point"] = to_json(q);
    results.push_back(r);
  }
  json report = ctx.header("domain member", {{"boundary", to_json(omega.data())}, {"points", scene.at("points")}});
  report["results"] = results;
  ctx.emit(report, "report.json");
  return kExitOk;
}

int cmd_domain_regular(const Context& ctx) {
  require_keys(ctx.scene(), {"boundary"}, "regular scene");
  const BoundaryData data = load_boundary(ctx);
  data.validate(ctx.tol());
  const RegularityVerdict v = is_regular(data);
  json report = ctx.header("domain regular", {{"boundary", to_json(data)}});
  report["regular"] = v.regular;
  report["proper"] = is_proper(data, ctx.tol());
  report["bound"] = v.bound ? json(*v.bound) : json(nullptr);
  report["witness"] = v.witness ? to_json(*v.witness) : json(nullptr);
  ctx.emit(report, "report.json");
  if (!v.regular) throw PropertyFailure{"boundary data are not regular"};
  return kExitOk;
}

int cmd_domain_reconstruct(const Context& ctx) {
  const json& scene = ctx.scene();
  require_keys(scene, {"boundary", "p", "probes", "directions", "box_half_width", "seed"}, "reconstruct scene");
  const RegularDomain omega(load_boundary(ctx), ctx.tol());
  if (!scene.contains("p")) throw SchemaError("reconstruct scene needs \"p\"");
  const Vec p = vec_from_json(scene.at("p"), "p");
  const int probes = optional_int(scene, "probes", 1000);
  PipOptions opts;
  opts.directions = optional_int(scene, "directions", opts.directions);
  opts.box_half_width = optional_number(scene, "box_half_width", opts.box_half_width);
  const std::uint64_t seed = ctx.seed(1);

  const auto exits = lambda_minus(omega, p, opts.directions);
  const PipReport rep = pip_reconstruction_check(omega, p, probes, seed, opts);
  json exit_list = json::array();
  for (const auto& e : exits) {
    json j = {{"direction", to_json(e.direction)}};
    if (e.parameter) {
      j["parameter"] = *e.parameter;
      j["point"] = to_json(e.point);
      j["plane"] = e.plane;
    } else {
      j["parameter"] = "Unbounded";
    }
    exit_list.push_back(j);
  }
  json resolved = {{"boundary", to_json(omega.data())}, {"p", to_json(p)},           {"probes", probes},
                   {"directions", opts.directions},     {"box_half_width", opts.box_half_width}, {"seed", seed}};
  json report = ctx.header("domain reconstruct", resolved);
  report["lambda_minus"] = exit_list;
  report["probes"] = rep.probes;
  report["excluded"] = rep.excluded;
  report["mismatches"] = rep.mismatches;
  report["inside"] = rep.inside;
  report["outside"] = rep.outside;
  ctx.emit(report, "report.json");
  if (rep.mismatches != 0) throw PropertyFailure{"reconstruction mismatches"};
  return kExitOk;
}

int cmd_domain_convexity(const Context& ctx) {
  const json& scene = ctx.scene();
  require_keys(scene, {"boundary", "diamond", "trials", "box_center", "box_half_width", "expect_witness", "seed"},
               "convexity scene");
  const int trials = optional_int(scene, "trials", 10000);
  const std::uint64_t seed = ctx.seed(1);
  ConvexityOptions opts;
  opts.box_half_width = optional_number(scene, "box_half_width", opts.box_half_width);
  if (scene.contains("box_center")) opts.box_center = vec_from_json(scene.at("box_center"), "box_center");

  Region region;
  int dim = 0;
  json resolved = {{"trials", trials}, {"seed", seed}, {"box_half_width", opts.box_half_width}};
  if (scene.contains("diamond")) {
    // Flat diamond I(future, past) given by its two vertices in chart coordinates.
    const json& d = scene.at("diamond");
    require_keys(d, {"past", "future"}, "diamond");
    if (!d.contains("past") || !d.contains("future")) throw SchemaError("diamond needs \"past\" and \"future\"");
    const Vec past = vec_from_json(d.at("past"), "diamond.past");
    const Vec future = vec_from_json(d.at("future"), "diamond.future");
    if (past.size() != future.size()) throw SchemaError("diamond vertices differ in dimension");
    if (flat_relation(past, future, ctx.tol()).tag != Relation::ChronoFuture) {
      throw PreconditionError("diamond future vertex is not chronologically after the past vertex");
    }
    region = intersect(chronological_past_region(future, ctx.tol()), chronological_future_region(past, ctx.tol()));
    dim = static_cast<int>(past.size());
    if (opts.box_center.size() != dim) opts.box_center = 0.5 * (past + future);
    resolved["diamond"] = {{"past", to_json(past)}, {"future", to_json(future)}};
  } else {
    const RegularDomain omega(load_boundary(ctx), ctx.tol());
    region = as_region(omega);
    dim = omega.dim();
    resolved["boundary"] = to_json(omega.data());
  }
  if (opts.box_center.size() == dim) resolved["box_center"] = to_json(opts.box_center);
  const auto witness = strict_convexity_witness(region, dim, trials, seed, opts, ctx.tol());
  json report = ctx.header("domain convexity", resolved);
  report["witness"] = witness ? json{to_json(witness->first), to_json(witness->second)} : json(nullptr);
  ctx.emit(report, "report.json");
  const bool expected = scene.contains("expect_witness") ? scene.at("expect_witness").get<bool>() : false;
  if (scene.contains("expect_witness") && !scene.at("expect_witness").is_boolean()) {
    throw SchemaError("\"expect_witness\" must be a boolean");
  }
  if (witness.has_value() != expected) {
    throw PropertyFailure{witness ? "spacelike boundary chord found" : "expected witness not found"};
  }
  return kExitOk;
}

int cmd_chart_conformality(const Context& ctx) {
  const json& scene = ctx.scene();
  require_keys(scene, {"center", "points", "box_half_width", "h", "seed"}, "conformality scene");
  const UniPoint center = default_center(scene, ctx.tol());
  const int points = optional_int(scene, "points", 100);
  const double half = optional_number(scene, "box_half_width", 3.0);
  const double h = optional_number(scene, "h", 1e-5);
  const std::uint64_t seed = ctx.seed(1);
  const ChartFrame frame = frame_for(center, ctx.tol());
  Rng rng(seed);
  double worst = 0.0;
  double omega_min = INFINITY;
  double omega_max = 0.0;
  for (int i = 0; i < points; ++i) {
    const ConformalityCheck c = conformality_at(frame, rng.uniform_box(frame.dim(), half), h);
    worst = std::max(worst, c.residual);
    omega_min = std::min(omega_min, c.omega2);
    omega_max = std::max(omega_max, c.omega2);
  }
  json resolved = {{"center", to_json(center)}, {"points", points}, {"box_half_width", half}, {"h", h}, {"seed", seed}};
  json report = ctx.header("chart conformality", resolved);
  report["frame"] = to_json(frame);
  report["max_residual"] = worst;
  report["omega2_range"] = {omega_min, omega_max};
  ctx.emit(report, "report.json");
  if (!(worst < 1e-5 && omega_min > 0.0)) throw PropertyFailure{"pullback is not conformal"};
  return kExitOk;
}

int cmd_chart_endpoint(const Context& ctx) {
  const json& scene = ctx.scene();
  require_keys(scene, {"center", "x0", "w", "far"}, "endpoint scene");
  const UniPoint center = default_center(scene, ctx.tol());
  const ChartFrame frame = frame_for(center, ctx.tol());
  const int n = frame.dim();
  const Vec x0 = scene.contains("x0") ? vec_from_json(scene.at("x0"), "x0") : Vec(Vec::Zero(n));
  if (!scene.contains("w")) throw SchemaError("endpoint scene needs \"w\"");
  const Vec w = vec_from_json(scene.at("w"), "w");
  const double far = optional_number(scene, "far", 1e6);
  const EinPoint end = photon_endpoint(frame, x0, w);
  const double gap = angular_gap(end, embed(frame, x0 + far * w));
  const BoundaryHyperplane h = boundary_to_hyperplane(frame, end);

  json resolved = {{"center", to_json(center)}, {"x0", to_json(x0)}, {"w", to_json(w)}, {"far", far}};
  json report = ctx.header("chart endpoint", resolved);
  report["frame"] = to_json(frame);
  report["endpoint"] = to_json(end.rep());
  report["angular_gap"] = gap;
  report["hyperplane"] = {{"v", to_json(h.plane.v)},
                          {"s", h.plane.s},
                          {"sheet", h.sheet == Sheet::Future ? "future" : "past"}};
  ctx.emit(report, "report.json");
  if (!(gap < 1e-5)) throw PropertyFailure{"endpoint does not match the far ray point"};
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& opts, bool with_lambda) {
  cmd->add_option("--scene", opts.scene, "scene JSON file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "64-bit seed (overrides the scene)");
  cmd->add_option("--tol", opts.tol, "equality tolerance tau");
  cmd->add_option("--out", opts.out, "output path prefix");
  cmd->add_flag("--oracle", opts.oracle, "run the brute-force oracles as a cross-check");
  if (with_lambda) cmd->add_option("--lambda", opts.lambda, "boundary data JSON file")->check(CLI::ExistingFile);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal geometry of the Einstein universe", "ein"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  Options opts;
  std::function<int(const Context&)> action;
  auto bind = [&](CLI::App* cmd, int (*fn)(const Context&), bool with_lambda) {
    add_common(cmd, opts, with_lambda);
    cmd->callback([&action, fn] { action = fn; });
  };

  bind(app.add_subcommand("counterexample", "disconnected diamond intersection scene"), cmd_counterexample, false);
  bind(app.add_subcommand("classify", "diamond taxonomy"), cmd_classify, false);
  CLI::App* domain = app.add_subcommand("domain", "regular domains");
  domain->require_subcommand(1);
  bind(domain->add_subcommand("member", "membership verdicts"), cmd_domain_member, true);
  bind(domain->add_subcommand("regular", "regularity criterion"), cmd_domain_regular, true);
  bind(domain->add_subcommand("reconstruct", "past of a point from its exit set"), cmd_domain_reconstruct, true);
  bind(domain->add_subcommand("convexity", "spacelike boundary chord search"), cmd_domain_convexity, true);
  CLI::App* chart = app.add_subcommand("chart", "affine charts");
  chart->require_subcommand(1);
  bind(chart->add_subcommand("conformality", "finite-difference conformality audit"), cmd_chart_conformality, false);
  bind(chart->add_subcommand("endpoint", "photon endpoint on the Penrose boundary"), cmd_chart_endpoint, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSchema;
  }

  try {
    const Context ctx(opts, out);
    return action(ctx);
  } catch (const PropertyFailure& f) {
    err << "check failed: " << f.message << "\n";
    return kExitProperty;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const json::exception& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

}  // namespace ein::cli
