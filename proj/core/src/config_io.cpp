#include "sbloc/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "sbloc/matrix_io.hpp"

namespace sbloc {

using nlohmann::json;

namespace {

// Reads the members of one JSON object, remembering which keys were used so
// that leftovers can be rejected.
class Fields {
public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError(path_ + ": expected an object");
  }

  const json* find(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  const json& need(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr)
      throw ConfigError(where(key) + ": missing required field");
    return *v;
  }

  double number(const std::string& key) { return as_number(need(key), key); }
  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    return v ? as_number(*v, key) : fallback;
  }

  std::uint64_t count(const std::string& key) { return as_count(need(key), key); }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    const json* v = find(key);
    return v ? as_count(*v, key) : fallback;
  }

  bool flag(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v)
      return fallback;
    if (!v->is_boolean())
      throw ConfigError(where(key) + ": expected true or false");
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v)
      return fallback;
    if (!v->is_string())
      throw ConfigError(where(key) + ": expected a string");
    return v->get<std::string>();
  }

  Vec3 vec3(const std::string& key) { return as_vec3(need(key), where(key)); }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    std::vector<std::string> unknown;
    for (const auto& [key, _] : j_.items())
      if (!used_.count(key))
        unknown.push_back(key);
    if (!unknown.empty()) {
      std::string msg = path_ + ": unknown field";
      msg += unknown.size() > 1 ? "s" : "";
      for (const auto& k : unknown)
        msg += " '" + k + "'";
      throw ConfigError(msg);
    }
  }

  static Vec3 as_vec3(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); }))
      throw ConfigError(where + ": expected [x, y, z]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }

private:
  double as_number(const json& v, const std::string& key) const {
    if (!v.is_number())
      throw ConfigError(where(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
      throw ConfigError(where(key) + ": must be finite");
    return d;
  }

  std::uint64_t as_count(const json& v, const std::string& key) const {
    if (v.is_number_unsigned())
      return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(where(key) + ": expected a non-negative integer");
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Axis parse_axis(const std::string& s, const std::string& where) {
  if (s == "x")
    return Axis::x;
  if (s == "y")
    return Axis::y;
  if (s == "z")
    return Axis::z;
  throw ConfigError(where + ": expected \"x\", \"y\" or \"z\"");
}

const char* axis_name(Axis a) {
  switch (a) {
  case Axis::x:
    return "x";
  case Axis::y:
    return "y";
  default:
    return "z";
  }
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

ArrayGeometry parse_array(const json& j) {
  Fields f(j, "array");
  ArrayGeometry g;
  if (const json* mics = f.find("mic_positions")) {
    if (!mics->is_array())
      throw ConfigError("array.mic_positions: expected an array of [x, y, z]");
    for (std::size_t i = 0; i < mics->size(); ++i)
      g.mic_positions.push_back(Fields::as_vec3((*mics)[i], "array.mic_positions[" + std::to_string(i) + "]"));
    if (f.find("layout"))
      throw ConfigError("array: give either mic_positions or layout, not both");
  } else {
    const std::string layout = f.text("layout", "");
    if (layout != "sunflower")
      throw ConfigError("array: expected mic_positions or layout \"sunflower\"");
    const auto count = f.count("count");
    const double aperture = f.number("aperture");
    const json* c = f.find("centre");
    const Vec3 centre = c ? Fields::as_vec3(*c, "array.centre") : Vec3::Zero();
    const Axis normal = parse_axis(f.text("normal", "z"), "array.normal");
    g = sunflower_array(count, aperture, centre, normal);
  }
  f.finish();
  return g;
}

} // namespace

const char* to_string(SolverMode m) { return m == SolverMode::weighted ? "weighted" : "structured"; }

SolverMode parse_solver_mode(const std::string& s) {
  if (s == "weighted")
    return SolverMode::weighted;
  if (s == "structured")
    return SolverMode::structured;
  throw ConfigError("solver mode must be \"weighted\" or \"structured\", got \"" + s + "\"");
}

FocusGrid parse_grid(const json& j, const std::string& path) {
  Fields f(j, path);
  FocusGrid g;
  g.nx = f.count("nx");
  g.ny = f.count("ny");
  g.spacing = f.number("spacing");
  g.origin = f.vec3("origin");
  g.normal = parse_axis(f.text("normal", "z"), f.where("normal"));
  f.finish();
  return g;
}

json to_json(const FocusGrid& g) {
  return {{"nx", g.nx}, {"ny", g.ny}, {"spacing", g.spacing}, {"origin", vec_json(g.origin)}, {"normal", axis_name(g.normal)}};
}

SolverConfig parse_solver_config(const json& j, const std::string& path) {
  Fields f(j, path);
  SolverConfig c;
  c.mode = parse_solver_mode(f.text("mode", "structured"));
  c.outer_iterations = f.count("outer_iterations", c.outer_iterations);
  c.alternating_sweeps = f.count("alternating_sweeps", c.alternating_sweeps);
  c.gd_steps = f.count("gd_steps", c.gd_steps);
  c.coupling_weight = f.number("coupling_weight", c.coupling_weight);
  c.sparsity_weight = f.number("sparsity_weight", c.sparsity_weight);
  if (const json* w = f.find("weights")) {
    Fields wf(*w, f.where("weights"));
    c.weights.diagonal = wf.number("diagonal", 1.0);
    c.weights.off_diagonal = wf.number("off_diagonal", 1.0);
    wf.finish();
  }
  if (const json* s = f.find("step")) {
    if (s->is_string() && s->get<std::string>() == "optimal") {
      c.optimal_step = true;
    } else if (s->is_number()) {
      c.optimal_step = false;
      c.fixed_step = s->get<double>();
    } else {
      throw ConfigError(f.where("step") + ": expected \"optimal\" or a fixed step size");
    }
  }
  c.residual_tol = f.number("residual_tol", c.residual_tol);
  c.change_tol = f.number("change_tol", c.change_tol);
  c.initial_value = f.number("initial_value", c.initial_value);
  c.divergence_factor = f.number("divergence_factor", c.divergence_factor);
  f.finish();
  c.validate();
  return c;
}

json to_json(const SolverConfig& c) {
  json j = {{"mode", to_string(c.mode)},
            {"outer_iterations", c.outer_iterations},
            {"alternating_sweeps", c.alternating_sweeps},
            {"gd_steps", c.gd_steps},
            {"coupling_weight", c.coupling_weight},
            {"sparsity_weight", c.sparsity_weight},
            {"weights", {{"diagonal", c.weights.diagonal}, {"off_diagonal", c.weights.off_diagonal}}},
            {"residual_tol", c.residual_tol},
            {"change_tol", c.change_tol},
            {"initial_value", c.initial_value},
            {"divergence_factor", c.divergence_factor}};
  if (c.optimal_step)
    j["step"] = "optimal";
  else
    j["step"] = c.fixed_step;
  return j;
}

PostprocessConfig parse_postprocess_config(const json& j, const std::string& path) {
  Fields f(j, path);
  PostprocessConfig c;
  if (const json* k = f.find("k")) {
    if (k->is_string() && k->get<std::string>() == "auto")
      c.k.reset();
    else if (k->is_number_integer() && k->get<std::int64_t>() >= 1)
      c.k = static_cast<std::size_t>(k->get<std::int64_t>());
    else
      throw ConfigError(f.where("k") + ": expected a positive integer or \"auto\"");
  }
  c.threshold = f.number("threshold", c.threshold);
  c.k_max = f.count("k_max", c.k_max);
  c.seed = f.count("seed", c.seed);
  c.weighted_centroids = f.flag("weighted_centroids", c.weighted_centroids);
  c.merge_radius = f.number("merge_radius", c.merge_radius);
  f.finish();
  if (c.threshold < 0.0)
    throw ConfigError(f.where("threshold") + ": must be >= 0");
  if (c.k_max < 2)
    throw ConfigError(f.where("k_max") + ": must be >= 2");
  return c;
}

json to_json(const PostprocessConfig& c) {
  json j = {{"threshold", c.threshold},
            {"k_max", c.k_max},
            {"seed", c.seed},
            {"weighted_centroids", c.weighted_centroids},
            {"merge_radius", c.merge_radius}};
  if (c.k)
    j["k"] = *c.k;
  else
    j["k"] = "auto";
  return j;
}

Experiment parse_experiment(const json& doc) {
  Fields f(doc, "scenario");
  Experiment e;
  Scenario& s = e.scenario;
  s.name = f.text("name", "");
  e.seed = f.count("seed", e.seed);
  s.c0 = f.number("c0", s.c0);
  s.sampling_rate = f.number("sampling_rate", s.sampling_rate);
  s.fft_block = f.count("fft_block", s.fft_block);
  s.overlap = f.number("overlap", s.overlap);
  s.measurement_time = f.number("measurement_time", s.measurement_time);
  s.band_index = f.count("band_index", s.band_index);
  s.geometry = parse_array(f.need("array"));
  s.grid = parse_grid(f.need("grid"));

  const json& sources = f.need("sources");
  if (!sources.is_array())
    throw ConfigError("scenario.sources: expected an array");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    Fields sf(sources[i], "scenario.sources[" + std::to_string(i) + "]");
    SourceSpec src;
    src.position = sf.vec3("position");
    src.rms_at_1m = sf.number("rms_at_1m");
    sf.finish();
    s.sources.push_back(src);
  }

  if (const json* n = f.find("noise")) {
    Fields nf(*n, "scenario.noise");
    NoiseSpec noise;
    noise.seed = nf.count("seed");
    const json* rms = nf.find("rms");
    const json* rel = nf.find("relative_to_strongest");
    if ((rms == nullptr) == (rel == nullptr))
      throw ConfigError("scenario.noise: give exactly one of rms or relative_to_strongest");
    if (rms) {
      noise.rms = nf.number("rms");
    } else {
      // Relative to the strongest source's RMS at the reference point.
      const double factor = nf.number("relative_to_strongest");
      const Vec3 ref = s.geometry.centroid();
      double strongest = 0.0;
      for (const auto& src : s.sources) {
        const double r0 = (s.grid.point(s.grid.nearest(src.position).index) - ref).norm();
        if (r0 > 0.0)
          strongest = std::max(strongest, src.rms_at_1m / r0);
      }
      noise.rms = factor * strongest;
    }
    nf.finish();
    s.noise = noise;
  }
  if (const json* p = f.find("mic_position_error")) {
    Fields pf(*p, "scenario.mic_position_error");
    MicPositionError err;
    err.avg_deviation = pf.number("avg_deviation");
    err.seed = pf.count("seed");
    pf.finish();
    s.mic_position_error = err;
  }
  if (const json* sol = f.find("solver"))
    e.solver = parse_solver_config(*sol, "scenario.solver");
  if (const json* post = f.find("postprocess"))
    e.postprocess = parse_postprocess_config(*post, "scenario.postprocess");
  f.finish();
  s.validate();
  return e;
}

Experiment load_experiment(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    const auto upto = std::min<std::size_t>(err.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ConfigError(path.string() + ":" + std::to_string(line) + ": JSON syntax error: " + err.what());
  }
  try {
    return parse_experiment(doc);
  } catch (const ConfigError& err) {
    throw ConfigError(path.string() + ": " + err.what());
  }
}

json to_json(const Experiment& e) {
  const Scenario& s = e.scenario;
  json mics = json::array();
  for (const auto& p : s.geometry.mic_positions)
    mics.push_back(vec_json(p));
  json sources = json::array();
  for (const auto& src : s.sources)
    sources.push_back({{"position", vec_json(src.position)}, {"rms_at_1m", src.rms_at_1m}});
  json j = {{"name", s.name},
            {"seed", e.seed},
            {"c0", s.c0},
            {"sampling_rate", s.sampling_rate},
            {"fft_block", s.fft_block},
            {"overlap", s.overlap},
            {"measurement_time", s.measurement_time},
            {"band_index", s.band_index},
            {"array", {{"mic_positions", mics}}},
            {"grid", to_json(s.grid)},
            {"sources", sources},
            {"solver", to_json(e.solver)},
            {"postprocess", to_json(e.postprocess)}};
  if (s.noise)
    j["noise"] = {{"rms", s.noise->rms}, {"seed", s.noise->seed}};
  if (s.mic_position_error)
    j["mic_position_error"] = {{"avg_deviation", s.mic_position_error->avg_deviation},
                               {"seed", s.mic_position_error->seed}};
  return j;
}

json csm_sidecar(const CrossSpectralMatrix& csm, std::size_t band_index, const std::string& matrix_file) {
  return {{"matrix", matrix_file},
          {"band_index", band_index},
          {"band_centre", csm.band_centre},
          {"block_count", csm.block_count},
          {"seed", csm.seed}};
}

json report_to_json(const SolveReport& r, const std::string& x_file, const std::string& d_file, bool include_timing) {
  json j = {{"mode", to_string(r.config.mode)},
            {"diagonal", std::holds_alternative<DiagonalMatrix>(r.d)},
            {"x_file", x_file},
            {"d_file", d_file},
            {"config", to_json(r.config)},
            {"outer_iterations_run", r.outer_iterations_run},
            {"gradient_steps_run", r.gradient_steps_run},
            {"energy", r.energy},
            {"objective", r.objective},
            {"residual", r.residual}};
  if (r.seed)
    j["seed"] = *r.seed;
  if (include_timing)
    j["wall_time_s"] = r.wall_time_s;
  return j;
}

json estimates_to_json(const std::vector<SourceEstimate>& estimates) {
  json arr = json::array();
  for (const auto& e : estimates)
    arr.push_back({{"x", e.centroid.x()},
                   {"y", e.centroid.y()},
                   {"z", e.centroid.z()},
                   {"strength", e.total_strength},
                   {"n_members", e.member_indices.size()},
                   {"members", e.member_indices}});
  return arr;
}

std::vector<SourceEstimate> estimates_from_json(const json& j) {
  if (!j.is_array())
    throw ConfigError("estimates: expected an array");
  std::vector<SourceEstimate> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Fields f(j[i], "estimates[" + std::to_string(i) + "]");
    SourceEstimate e;
    e.centroid = {f.number("x"), f.number("y"), f.number("z")};
    e.total_strength = f.number("strength");
    const auto n = f.count("n_members");
    if (const json* m = f.find("members"))
      for (const auto& v : *m)
        e.member_indices.push_back(v.get<std::size_t>());
    if (!e.member_indices.empty() && e.member_indices.size() != n)
      throw ConfigError(f.where("members") + ": length differs from n_members");
    f.finish();
    out.push_back(std::move(e));
  }
  return out;
}

std::string estimates_to_csv(const std::vector<SourceEstimate>& estimates) {
  std::string out = "x,y,z,strength,n_members\n";
  for (const auto& e : estimates)
    out += format_double(e.centroid.x()) + "," + format_double(e.centroid.y()) + "," + format_double(e.centroid.z()) +
           "," + format_double(e.total_strength) + "," + std::to_string(e.member_indices.size()) + "\n";
  return out;
}

json truth_to_json(const std::vector<TruthSource>& truth) {
  json arr = json::array();
  for (const auto& t : truth)
    arr.push_back({{"grid_index", t.grid_index},
                   {"x", t.position.x()},
                   {"y", t.position.y()},
                   {"z", t.position.z()},
                   {"strength", t.strength}});
  return arr;
}

std::vector<TruthSource> truth_from_json(const json& j) {
  if (!j.is_array())
    throw ConfigError("truth: expected an array");
  std::vector<TruthSource> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Fields f(j[i], "truth[" + std::to_string(i) + "]");
    TruthSource t;
    t.grid_index = f.count("grid_index", 0);
    t.position = {f.number("x"), f.number("y"), f.number("z")};
    t.strength = f.number("strength");
    f.finish();
    out.push_back(t);
  }
  return out;
}

json evaluation_to_json(const Evaluation& ev) {
  json pairs = json::array();
  for (const auto& p : ev.pairs)
    pairs.push_back({{"estimate", p.estimate},
                     {"truth", p.truth},
                     {"position_error", p.position_error},
                     {"strength_ratio", p.strength_ratio}});
  return {{"pairs", pairs},
          {"unmatched_estimates", ev.unmatched_estimates},
          {"unmatched_truths", ev.unmatched_truths},
          {"detected_sources", ev.pairs.size() + ev.unmatched_estimates},
          {"max_position_error", ev.max_position_error}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(path.string() + ": JSON syntax error: " + err.what());
  }
}

} // namespace sbloc
