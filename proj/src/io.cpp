// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The spectramap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "io.hpp"

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "error.hpp"

namespace spectramap::io {

namespace {

constexpr char kDictMagic[8] = {'S', 'P', 'M', 'D', 'I', 'C', 'T', '1'};
constexpr std::uint32_t kDictVersion = 1;

[[noreturn]] void schema(const std::string& what) { fail(ErrorKind::InvalidArgument, what); }

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) schema(where + ": expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key)) schema(where + ": unknown key '" + key + "'");
}

const json& need(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) schema(where + ": missing key '" + std::string(key) + "'");
  return obj.at(key);
}

double get_number(const json& v, const std::string& what) {
  if (!v.is_number()) schema(what + ": expected a number");
  return v.get<double>();
}

template <typename Int>
Int get_integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) schema(what + ": expected an integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (v.is_number_unsigned()) return static_cast<Int>(v.get<std::uint64_t>());
    const auto s = v.get<std::int64_t>();
    if (s < 0) schema(what + ": expected a nonnegative integer");
    return static_cast<Int>(s);
  } else {
    return static_cast<Int>(v.get<std::int64_t>());
  }
}

bool get_bool(const json& v, const std::string& what) {
  if (!v.is_boolean()) schema(what + ": expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& what) {
  if (!v.is_string()) schema(what + ": expected a string");
  return v.get<std::string>();
}

Vec3 get_vec3(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3) schema(what + ": expected [x, y, z]");
  return {get_number(v[0], what), get_number(v[1], what), get_number(v[2], what)};
}

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::vector<double> get_number_list(const json& v, const std::string& what) {
  if (!v.is_array()) schema(what + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(get_number(e, what));
  return out;
}

json complex_json(std::complex<double> z) { return {{"magnitude", std::abs(z)}, {"phase_rad", std::arg(z)}}; }

std::complex<double> get_complex(const json& v, const std::string& what) {
  allow_keys(v, what, {"magnitude", "phase_rad"});
  return std::polar(get_number(need(v, what, "magnitude"), what + ".magnitude"),
                    get_number(need(v, what, "phase_rad"), what + ".phase_rad"));
}

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd get_vector(const json& v, const std::string& what) {
  const auto list = get_number_list(v, what);
  return Eigen::Map<const Eigen::VectorXd>(list.data(), static_cast<Eigen::Index>(list.size()));
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

const char* kind_name(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::FullRt: return "full_rt";
    case DictionaryKind::SparseRtIdw: return "sparse_rt_idw";
    case DictionaryKind::FreeSpace: return "free_space";
  }
  return "?";
}

const char* method_name(SamplingMethod m) { return m == SamplingMethod::Mmi ? "mmi" : "random"; }

template <typename T>
void put(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::istream& in, const fs::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) schema("'" + path.string() + "': truncated dictionary file");
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    schema("'" + path.string() + "': " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

// ---- scenario --------------------------------------------------------------

json to_json(const RtParams& rt) {
  return {{"reflection_coeff", complex_json(rt.reflection_coeff)},
          {"diffraction_coeff", complex_json(rt.diffraction_coeff)},
          {"max_reflections", rt.max_reflections},
          {"max_diffractions", rt.max_diffractions},
          {"reference_distance_m", rt.reference_distance},
          {"ground_reflection", rt.ground_reflection}};
}

RtParams rt_from_json(const json& doc) {
  const std::string w = "raytrace";
  allow_keys(doc, w, {"reflection_coeff", "diffraction_coeff", "max_reflections", "max_diffractions",
                      "reference_distance_m", "ground_reflection"});
  RtParams rt;
  if (doc.contains("reflection_coeff")) rt.reflection_coeff = get_complex(doc["reflection_coeff"], w + ".reflection_coeff");
  if (doc.contains("diffraction_coeff"))
    rt.diffraction_coeff = get_complex(doc["diffraction_coeff"], w + ".diffraction_coeff");
  if (doc.contains("max_reflections")) rt.max_reflections = get_integer<int>(doc["max_reflections"], w + ".max_reflections");
  if (doc.contains("max_diffractions"))
    rt.max_diffractions = get_integer<int>(doc["max_diffractions"], w + ".max_diffractions");
  if (doc.contains("reference_distance_m"))
    rt.reference_distance = get_number(doc["reference_distance_m"], w + ".reference_distance_m");
  if (doc.contains("ground_reflection")) rt.ground_reflection = get_bool(doc["ground_reflection"], w + ".ground_reflection");
  validate(rt);
  return rt;
}

json to_json(const ScenarioConfig& cfg, const RtParams& rt) {
  json buildings = json::array();
  for (const auto& b : cfg.buildings) buildings.push_back({{"min_m", vec3_json(b.min_corner)}, {"max_m", vec3_json(b.max_corner)}});
  json transmitters = json::array();
  for (const auto& t : cfg.transmitters)
    transmitters.push_back({{"position_m", vec3_json(t.position)}, {"power_w", t.power_watts}});
  return {{"roi_extent_m", vec3_json(cfg.roi_extent)},
          {"grid", {cfg.grid.nx, cfg.grid.ny, cfg.grid.nz}},
          {"frequency_hz", cfg.frequency_hz},
          {"noise_variance_w2", cfg.noise_variance},
          {"antenna_gain_tx", cfg.antenna_gain_tx},
          {"antenna_gain_rx", cfg.antenna_gain_rx},
          {"path_loss_exponent", cfg.path_loss_exponent},
          {"buildings", buildings},
          {"transmitters", transmitters},
          {"raytrace", to_json(rt)}};
}

ScenarioFile scenario_from_json(const json& doc) {
  const std::string w = "scenario";
  allow_keys(doc, w, {"roi_extent_m", "grid", "frequency_hz", "noise_variance_w2", "antenna_gain_tx",
                      "antenna_gain_rx", "path_loss_exponent", "buildings", "transmitters", "raytrace"});
  ScenarioFile file;
  ScenarioConfig& cfg = file.scenario;
  cfg.roi_extent = get_vec3(need(doc, w, "roi_extent_m"), w + ".roi_extent_m");
  const json& grid = need(doc, w, "grid");
  if (!grid.is_array() || grid.size() != 3) schema(w + ".grid: expected [nx, ny, nz]");
  cfg.grid = {get_integer<int>(grid[0], w + ".grid"), get_integer<int>(grid[1], w + ".grid"),
              get_integer<int>(grid[2], w + ".grid")};
  cfg.frequency_hz = get_number(need(doc, w, "frequency_hz"), w + ".frequency_hz");
  if (doc.contains("noise_variance_w2")) cfg.noise_variance = get_number(doc["noise_variance_w2"], w + ".noise_variance_w2");
  if (doc.contains("antenna_gain_tx")) cfg.antenna_gain_tx = get_number(doc["antenna_gain_tx"], w + ".antenna_gain_tx");
  if (doc.contains("antenna_gain_rx")) cfg.antenna_gain_rx = get_number(doc["antenna_gain_rx"], w + ".antenna_gain_rx");
  if (doc.contains("path_loss_exponent"))
    cfg.path_loss_exponent = get_number(doc["path_loss_exponent"], w + ".path_loss_exponent");
  if (doc.contains("buildings")) {
    const json& list = doc["buildings"];
    if (!list.is_array()) schema(w + ".buildings: expected an array");
    for (const auto& b : list) {
      allow_keys(b, w + ".buildings[]", {"min_m", "max_m"});
      cfg.buildings.push_back({get_vec3(need(b, w + ".buildings[]", "min_m"), w + ".buildings[].min_m"),
                               get_vec3(need(b, w + ".buildings[]", "max_m"), w + ".buildings[].max_m")});
    }
  }
  if (doc.contains("transmitters")) {
    const json& list = doc["transmitters"];
    if (!list.is_array()) schema(w + ".transmitters: expected an array");
    for (const auto& t : list) {
      allow_keys(t, w + ".transmitters[]", {"position_m", "power_w"});
      cfg.transmitters.push_back({get_vec3(need(t, w + ".transmitters[]", "position_m"), w + ".transmitters[].position_m"),
                                  get_number(need(t, w + ".transmitters[]", "power_w"), w + ".transmitters[].power_w")});
    }
  }
  if (doc.contains("raytrace")) file.rt = rt_from_json(doc["raytrace"]);
  validate(cfg);
  return file;
}

ScenarioFile load_scenario(const fs::path& path) { return scenario_from_json(read_json(path)); }

void save_scenario(const fs::path& path, const ScenarioConfig& cfg, const RtParams& rt) {
  write_text(path, to_json(cfg, rt).dump(2) + "\n");
}

json to_json(const DictionaryMode& mode) {
  return {{"kind", kind_name(mode.kind)},
          {"fraction", mode.fraction},
          {"idw_exponent", mode.idw_exponent},
          {"seed", mode.seed},
          {"metric", mode.metric == IdwMetric::IndexSpace ? "index" : "cube_distance"},
          {"idw_neighbors", mode.idw_neighbors}};
}

DictionaryMode dictionary_mode_from_json(const json& doc) {
  const std::string w = "dictionary";
  allow_keys(doc, w, {"kind", "fraction", "idw_exponent", "seed", "metric", "idw_neighbors"});
  DictionaryMode mode;
  if (doc.contains("kind")) {
    const auto kind = get_string(doc["kind"], w + ".kind");
    if (kind == "full_rt") mode.kind = DictionaryKind::FullRt;
    else if (kind == "sparse_rt_idw") mode.kind = DictionaryKind::SparseRtIdw;
    else if (kind == "free_space") mode.kind = DictionaryKind::FreeSpace;
    else schema(w + ".kind: expected full_rt, sparse_rt_idw or free_space");
  }
  if (doc.contains("fraction")) mode.fraction = get_number(doc["fraction"], w + ".fraction");
  if (doc.contains("idw_exponent")) mode.idw_exponent = get_number(doc["idw_exponent"], w + ".idw_exponent");
  if (doc.contains("seed")) mode.seed = get_integer<std::uint64_t>(doc["seed"], w + ".seed");
  if (doc.contains("metric")) {
    const auto metric = get_string(doc["metric"], w + ".metric");
    if (metric == "index") mode.metric = IdwMetric::IndexSpace;
    else if (metric == "cube_distance") mode.metric = IdwMetric::CubeDistance;
    else schema(w + ".metric: expected index or cube_distance");
  }
  if (doc.contains("idw_neighbors")) mode.idw_neighbors = get_integer<int>(doc["idw_neighbors"], w + ".idw_neighbors");
  return mode;
}

// ---- dictionary ------------------------------------------------------------

void save_dictionary(const fs::path& path, const GainDictionary& dict) {
  const std::uint64_t n = dict.size();
  require(dict.grid.count() == n, "save_dictionary: grid does not match the gain matrix");
  auto out = open_out(path, std::ios::binary);
  out.write(kDictMagic, sizeof kDictMagic);
  put(out, kDictVersion);
  put(out, static_cast<std::uint32_t>(dict.mode.kind));
  put(out, static_cast<std::int32_t>(dict.grid.nx));
  put(out, static_cast<std::int32_t>(dict.grid.ny));
  put(out, static_cast<std::int32_t>(dict.grid.nz));
  put(out, n);
  put(out, dict.mode.fraction);
  put(out, dict.mode.idw_exponent);
  put(out, dict.mode.seed);
  put(out, static_cast<std::uint32_t>(dict.mode.metric));
  put(out, static_cast<std::int32_t>(dict.mode.idw_neighbors));
  put(out, dict.diag_convention);

  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = dict.gains;
  out.write(reinterpret_cast<const char*>(rows.data()), static_cast<std::streamsize>(n * n * sizeof(double)));

  std::vector<std::uint8_t> bits((n * n + 7) / 8, 0);
  for (std::size_t k = 0; k < dict.interpolated.size(); ++k)
    if (dict.interpolated[k]) bits[k / 8] |= static_cast<std::uint8_t>(1u << (k % 8));
  out.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
  finish(out, path);
}

GainDictionary load_dictionary(const fs::path& path) {
  auto in = open_in(path, std::ios::binary);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kDictMagic, sizeof magic) != 0) schema("'" + path.string() + "': not a dictionary file");
  if (take<std::uint32_t>(in, path) != kDictVersion) schema("'" + path.string() + "': unsupported dictionary version");

  GainDictionary dict;
  const auto kind = take<std::uint32_t>(in, path);
  if (kind > 2) schema("'" + path.string() + "': bad dictionary kind");
  dict.mode.kind = static_cast<DictionaryKind>(kind);
  dict.grid.nx = take<std::int32_t>(in, path);
  dict.grid.ny = take<std::int32_t>(in, path);
  dict.grid.nz = take<std::int32_t>(in, path);
  const auto n = take<std::uint64_t>(in, path);
  if (dict.grid.nx < 1 || dict.grid.ny < 1 || dict.grid.nz < 1 || dict.grid.count() != n)
    schema("'" + path.string() + "': grid does not match N");
  dict.mode.fraction = take<double>(in, path);
  dict.mode.idw_exponent = take<double>(in, path);
  dict.mode.seed = take<std::uint64_t>(in, path);
  const auto metric = take<std::uint32_t>(in, path);
  if (metric > 1) schema("'" + path.string() + "': bad IDW metric");
  dict.mode.metric = static_cast<IdwMetric>(metric);
  dict.mode.idw_neighbors = take<std::int32_t>(in, path);
  dict.diag_convention = take<double>(in, path);

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(n, n);
  in.read(reinterpret_cast<char*>(rows.data()), static_cast<std::streamsize>(n * n * sizeof(double)));
  if (!in) schema("'" + path.string() + "': truncated gain matrix");
  dict.gains = rows;

  std::vector<std::uint8_t> bits((n * n + 7) / 8);
  in.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
  if (!in) schema("'" + path.string() + "': truncated provenance mask");
  dict.interpolated.assign(n * n, 0);
  for (std::size_t k = 0; k < n * n; ++k) dict.interpolated[k] = (bits[k / 8] >> (k % 8)) & 1u;
  if (in.peek() != std::char_traits<char>::eof()) schema("'" + path.string() + "': trailing bytes");
  return dict;
}

void export_dictionary_csv(const fs::path& path, const GainDictionary& dict) {
  auto out = open_out(path);
  out << "i,j,gain_db\n";
  const auto n = static_cast<Eigen::Index>(dict.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out << i << ',' << j << ',' << format_double(gain_to_db(dict.gains(i, j))) << '\n';
  finish(out, path);
}

// ---- plans and measurements ------------------------------------------------

json to_json(const SamplingPlan& plan) {
  return {{"method", method_name(plan.method)}, {"seed", plan.seed},
          {"M", plan.size()},                   {"N", plan.cube_count},
          {"indices", plan.indices},            {"log_det_trace", plan.log_det_trace}};
}

SamplingPlan plan_from_json(const json& doc) {
  const std::string w = "plan";
  allow_keys(doc, w, {"method", "seed", "M", "N", "indices", "log_det_trace"});
  SamplingPlan plan;
  const auto method = get_string(need(doc, w, "method"), w + ".method");
  if (method == "mmi") plan.method = SamplingMethod::Mmi;
  else if (method == "random") plan.method = SamplingMethod::Random;
  else schema(w + ".method: expected random or mmi");
  if (doc.contains("seed")) plan.seed = get_integer<std::uint64_t>(doc["seed"], w + ".seed");
  plan.cube_count = get_integer<std::size_t>(need(doc, w, "N"), w + ".N");
  const json& idx = need(doc, w, "indices");
  if (!idx.is_array()) schema(w + ".indices: expected an array");
  for (const auto& v : idx) plan.indices.push_back(get_integer<std::size_t>(v, w + ".indices"));
  if (doc.contains("M") && get_integer<std::size_t>(doc["M"], w + ".M") != plan.indices.size())
    schema(w + ".M: does not match the index count");
  if (doc.contains("log_det_trace")) plan.log_det_trace = get_number_list(doc["log_det_trace"], w + ".log_det_trace");
  validate(plan);
  return plan;
}

void save_plan(const fs::path& path, const SamplingPlan& plan) { write_text(path, to_json(plan).dump(2) + "\n"); }
SamplingPlan load_plan(const fs::path& path) { return plan_from_json(read_json(path)); }

json to_json(const MeasurementVector& meas, const SamplingPlan& plan) {
  return {{"noise_variance_w2", meas.noise_variance}, {"indices", plan.indices}, {"values_w", vector_json(meas.values)}};
}

MeasurementVector measurements_from_json(const json& doc) {
  const std::string w = "measurements";
  allow_keys(doc, w, {"noise_variance_w2", "indices", "values_w"});
  MeasurementVector meas;
  if (doc.contains("noise_variance_w2")) meas.noise_variance = get_number(doc["noise_variance_w2"], w + ".noise_variance_w2");
  meas.values = get_vector(need(doc, w, "values_w"), w + ".values_w");
  if (doc.contains("indices") && (!doc["indices"].is_array() || doc["indices"].size() != static_cast<std::size_t>(meas.values.size())))
    schema(w + ".indices: length does not match values_w");
  if (!meas.values.allFinite()) schema(w + ".values_w: non-finite value");
  return meas;
}

void save_measurements(const fs::path& path, const MeasurementVector& meas, const SamplingPlan& plan) {
  write_text(path, to_json(meas, plan).dump(2) + "\n");
}

MeasurementVector load_measurements(const fs::path& path) { return measurements_from_json(read_json(path)); }

// ---- recovery results ------------------------------------------------------

json to_json(const ScenarioConfig& cfg, const RecoveredMap& result, const RecoveryOptions& options) {
  json doc;
  doc["method"] = result.method;
  doc["roi_extent_m"] = vec3_json(cfg.roi_extent);
  doc["grid"] = {cfg.grid.nx, cfg.grid.ny, cfg.grid.nz};

  json hyper;
  hyper["solver"] = options.solver == Solver::Sbl ? "sbl" : "swomp";
  if (options.solver == Solver::Sbl) {
    const auto& h = options.hyper;
    hyper["a"] = h.a;
    hyper["b"] = h.b;
    hyper["c"] = h.c;
    hyper["d"] = h.d;
    hyper["max_iters"] = h.max_iters;
    hyper["convergence_tol"] = h.convergence_tol;
    hyper["prune"] = h.prune.kind == PruneMode::Kind::Adaptive ? json{{"kind", "adaptive"}}
                                                               : json{{"kind", "fixed"}, {"threshold", h.prune.threshold}};
  } else {
    hyper["weak_param"] = options.swomp.weak_param;
    hyper["max_stages"] = options.swomp.max_stages;
    hyper["residual_tol"] = options.swomp.residual_tol;
  }
  hyper["clustering"] = options.clustering;
  hyper["delta_db"] = options.delta_db;
  hyper["theta"] = options.theta;
  doc["hyperparameters"] = hyper;

  if (result.posterior) {
    const auto& p = *result.posterior;
    doc["sbl"] = {{"beta", p.beta},
                  {"iterations", p.iterations},
                  {"converged", p.converged},
                  {"active_set", p.active_set},
                  {"objective_trace", p.objective_trace},
                  {"warnings", p.warnings}};
  }
  if (result.swomp)
    doc["swomp"] = {{"stages", result.swomp->stages},
                    {"support", result.swomp->support},
                    {"residual_norms", result.swomp->residual_norms}};

  json omega = json::array();
  for (Eigen::Index i = 0; i < result.omega_star.size(); ++i) {
    if (result.omega_star[i] == 0.0) continue;
    const Vec3 c = cube_center(cfg, static_cast<std::size_t>(i));
    omega.push_back({{"index", i}, {"x_m", c.x()}, {"y_m", c.y()}, {"z_m", c.z()}, {"watts", result.omega_star[i]}});
  }
  doc["omega_star"] = omega;

  if (result.clusters) {
    json clusters = json::array();
    const auto& r = *result.clusters;
    for (std::size_t k = 0; k < r.clusters.size(); ++k)
      clusters.push_back({{"members", r.clusters[k]},
                          {"center_m", vec3_json(r.centers[k])},
                          {"center_cube", r.center_cubes[k]},
                          {"power_w", r.powers[k]}});
    doc["clusters"] = clusters;
  }
  doc["x_hat_w"] = vector_json(result.x_hat);
  return doc;
}

void save_result(const fs::path& path, const ScenarioConfig& cfg, const RecoveredMap& result,
                 const RecoveryOptions& options) {
  write_text(path, to_json(cfg, result, options).dump(2) + "\n");
}

ResultFile load_result(const fs::path& path) {
  const json doc = read_json(path);
  const std::string w = "result";
  if (!doc.is_object()) schema(w + ": expected an object");
  ResultFile r;
  r.method = get_string(need(doc, w, "method"), w + ".method");
  r.roi_extent = get_vec3(need(doc, w, "roi_extent_m"), w + ".roi_extent_m");
  const json& grid = need(doc, w, "grid");
  if (!grid.is_array() || grid.size() != 3) schema(w + ".grid: expected [nx, ny, nz]");
  r.grid = {get_integer<int>(grid[0], w + ".grid"), get_integer<int>(grid[1], w + ".grid"),
            get_integer<int>(grid[2], w + ".grid")};
  r.x_hat = get_vector(need(doc, w, "x_hat_w"), w + ".x_hat_w");
  if (r.x_hat.size() != static_cast<Eigen::Index>(r.grid.count())) schema(w + ".x_hat_w: length does not match the grid");
  r.omega_star = Eigen::VectorXd::Zero(r.x_hat.size());
  if (doc.contains("omega_star")) {
    for (const auto& row : doc["omega_star"]) {
      const auto i = get_integer<std::size_t>(need(row, w + ".omega_star[]", "index"), w + ".omega_star[].index");
      if (i >= r.grid.count()) schema(w + ".omega_star[].index: out of range");
      r.omega_star[static_cast<Eigen::Index>(i)] = get_number(need(row, w + ".omega_star[]", "watts"), w + ".omega_star[].watts");
    }
  }
  return r;
}

// ---- experiments -----------------------------------------------------------

ExperimentSpec experiment_from_json(const json& doc) {
  const std::string w = "experiment";
  allow_keys(doc, w, {"scenario", "scenario_preset", "dictionary", "rates", "sparsities", "algorithms", "seeds",
                      "power_w", "grid_transmitters", "free_space_truth", "record_runtime", "squared_mse"});
  ExperimentSpec spec;
  if (doc.contains("scenario") && doc.contains("scenario_preset")) schema(w + ": give scenario or scenario_preset, not both");
  if (doc.contains("scenario")) {
    auto file = scenario_from_json(doc["scenario"]);
    spec.scenario = std::move(file.scenario);
    spec.rt = file.rt;
  } else {
    const auto preset = doc.contains("scenario_preset") ? get_string(doc["scenario_preset"], w + ".scenario_preset") : "box";
    if (preset == "box") spec.scenario = box_scenario();
    else if (preset == "default") spec.scenario = default_scenario();
    else schema(w + ".scenario_preset: expected box or default");
  }
  if (doc.contains("dictionary")) spec.rt_dictionary = dictionary_mode_from_json(doc["dictionary"]);
  if (doc.contains("rates")) spec.rates = get_number_list(doc["rates"], w + ".rates");
  if (doc.contains("sparsities")) {
    spec.sparsities.clear();
    if (!doc["sparsities"].is_array()) schema(w + ".sparsities: expected an array");
    for (const auto& k : doc["sparsities"]) spec.sparsities.push_back(get_integer<int>(k, w + ".sparsities"));
  }
  if (doc.contains("algorithms")) {
    if (!doc["algorithms"].is_array()) schema(w + ".algorithms: expected an array");
    for (const auto& a : doc["algorithms"]) spec.algorithms.push_back(get_string(a, w + ".algorithms"));
  } else {
    spec.algorithms = known_algorithms();
  }
  if (doc.contains("seeds")) {
    spec.seeds.clear();
    if (!doc["seeds"].is_array()) schema(w + ".seeds: expected an array");
    for (const auto& s : doc["seeds"]) spec.seeds.push_back(get_integer<std::uint64_t>(s, w + ".seeds"));
  }
  if (doc.contains("power_w")) spec.power_watts = get_number(doc["power_w"], w + ".power_w");
  if (doc.contains("grid_transmitters")) spec.grid_transmitters = get_bool(doc["grid_transmitters"], w + ".grid_transmitters");
  if (doc.contains("free_space_truth")) spec.free_space_truth = get_bool(doc["free_space_truth"], w + ".free_space_truth");
  if (doc.contains("record_runtime")) spec.record_runtime = get_bool(doc["record_runtime"], w + ".record_runtime");
  if (doc.contains("squared_mse")) spec.squared_mse = get_bool(doc["squared_mse"], w + ".squared_mse");
  validate(spec);
  return spec;
}

json to_json(const ExperimentSpec& spec) {
  return {{"scenario", to_json(spec.scenario, spec.rt)},
          {"dictionary", to_json(spec.rt_dictionary)},
          {"rates", spec.rates},
          {"sparsities", spec.sparsities},
          {"algorithms", spec.algorithms},
          {"seeds", spec.seeds},
          {"power_w", spec.power_watts},
          {"grid_transmitters", spec.grid_transmitters},
          {"free_space_truth", spec.free_space_truth},
          {"record_runtime", spec.record_runtime},
          {"squared_mse", spec.squared_mse}};
}

ExperimentSpec load_experiment(const fs::path& path) { return experiment_from_json(read_json(path)); }

void write_records_csv(std::ostream& out, const std::vector<MetricRecord>& records) {
  out << "algorithm,rate,K,seed,M,mse_db,rmse_db,rmse_linear_w,runtime_seconds,support_distortion_m,error\n";
  for (const auto& r : records) {
    std::string err = r.error;
    for (char& c : err)
      if (c == ',' || c == '\n' || c == '"') c = ' ';
    out << r.algorithm << ',' << format_double(r.rate) << ',' << r.sparsity << ',' << r.seed << ',' << r.samples << ','
        << format_double(r.mse_db) << ',' << format_double(r.rmse) << ',' << format_double(r.rmse_linear) << ','
        << format_double(r.runtime_seconds) << ',' << format_double(r.support_distortion) << ',' << err << '\n';
  }
}

json to_json(const std::vector<SummaryRow>& rows) {
  json arr = json::array();
  for (const auto& s : rows)
    arr.push_back({{"algorithm", s.algorithm},
                   {"rate", s.rate},
                   {"K", s.sparsity},
                   {"count", s.count},
                   {"mse_db", {{"mean", s.mse_db_mean}, {"std", s.mse_db_std}}},
                   {"rmse_db", {{"mean", s.rmse_mean}, {"std", s.rmse_std}}},
                   {"support_distortion_m", {{"mean", s.distortion_mean}, {"std", s.distortion_std}}},
                   {"runtime_seconds_mean", s.runtime_mean}});
  return arr;
}

void save_experiment_outputs(const fs::path& dir, const std::vector<MetricRecord>& records) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create '" + dir.string() + "': " + ec.message());

  {
    auto out = open_out(dir / "records.csv");
    write_records_csv(out, records);
    finish(out, dir / "records.csv");
  }
  auto rows = summarize(records);
  write_text(dir / "summary.json", to_json(rows).dump(2) + "\n");

  auto curve = [&](const fs::path& path, auto key) {
    std::sort(rows.begin(), rows.end(), [&](const SummaryRow& a, const SummaryRow& b) { return key(a) < key(b); });
    auto out = open_out(path);
    out << "algorithm,K,rate,count,rmse_db_mean,rmse_db_std,mse_db_mean,mse_db_std\n";
    for (const auto& s : rows)
      out << s.algorithm << ',' << s.sparsity << ',' << format_double(s.rate) << ',' << s.count << ','
          << format_double(s.rmse_mean) << ',' << format_double(s.rmse_std) << ',' << format_double(s.mse_db_mean) << ','
          << format_double(s.mse_db_std) << '\n';
    finish(out, path);
  };
  curve(dir / "curves_vs_rate.csv", [](const SummaryRow& s) { return std::tie(s.algorithm, s.sparsity, s.rate); });
  curve(dir / "curves_vs_k.csv", [](const SummaryRow& s) { return std::tie(s.algorithm, s.rate, s.sparsity); });
}

// ---- map export ------------------------------------------------------------

MapFormat map_format_from_name(const std::string& name) {
  if (name == "long") return MapFormat::Long;
  if (name == "slices") return MapFormat::Slices;
  schema("map format must be 'long' or 'slices'");
}

void export_map(std::ostream& out, const ResultFile& result, MapFormat format) {
  ScenarioConfig cfg;
  cfg.roi_extent = result.roi_extent;
  cfg.grid = result.grid;
  require(result.x_hat.size() == static_cast<Eigen::Index>(cfg.cube_count()), "export_map: map does not match the grid");
  const auto& g = cfg.grid;
  if (format == MapFormat::Long) {
    out << "ix,iy,iz,x_m,y_m,z_m,rss_dbm\n";
    for (std::size_t n = 0; n < cfg.cube_count(); ++n) {
      const GridIndex idx = delinearize(g, n);
      const Vec3 c = cube_center(cfg, n);
      out << idx.ix << ',' << idx.iy << ',' << idx.iz << ',' << format_double(c.x()) << ',' << format_double(c.y())
          << ',' << format_double(c.z()) << ',' << format_double(watts_to_dbm(result.x_hat[static_cast<Eigen::Index>(n)]))
          << '\n';
    }
    return;
  }
  for (int iz = 0; iz < g.nz; ++iz) {
    const Vec3 c0 = cube_center(cfg, linearize(g, {0, 0, iz}));
    out << "# iz=" << iz << " z_m=" << format_double(c0.z()) << '\n';
    out << "iy\\ix";
    for (int ix = 0; ix < g.nx; ++ix) out << ',' << ix;
    out << '\n';
    for (int iy = 0; iy < g.ny; ++iy) {
      out << iy;
      for (int ix = 0; ix < g.nx; ++ix)
        out << ',' << format_double(watts_to_dbm(result.x_hat[static_cast<Eigen::Index>(linearize(g, {ix, iy, iz}))]));
      out << '\n';
    }
    if (iz + 1 < g.nz) out << '\n';
  }
}

}  // namespace spectramap::io
