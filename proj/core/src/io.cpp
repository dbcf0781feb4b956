// Copyright 2026 The opws Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "opws/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace opws {

namespace {

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing key '" + key + "'");
  if (!j.at(key).is_number()) throw SchemaError(where + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

long long integer(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing key '" + key + "'");
  if (!j.at(key).is_number_integer()) throw SchemaError(where + ": '" + key + "' must be an integer");
  return j.at(key).get<long long>();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json rect_to_json(const Rect& r) {
  return {{"t", {to_json(r.t0), to_json(r.t1)}}, {"nu", {to_json(r.nu0), to_json(r.nu1)}}};
}

Rect rect_from_json(const json& j) {
  require_keys(j, {"t", "nu"}, "rectangle");
  for (const char* k : {"t", "nu"}) {
    if (!j.contains(k) || !j.at(k).is_array() || j.at(k).size() != 2) {
      throw SchemaError(std::string("rectangle: '") + k + "' must be a pair");
    }
  }
  return {rational_from_json(j["t"][0]), rational_from_json(j["t"][1]), rational_from_json(j["nu"][0]),
          rational_from_json(j["nu"][1])};
}

void put_f64(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.append(buf, 8);
}

double get_f64(const char* p) {
  std::uint64_t bits;
  std::memcpy(&bits, p, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  return std::bit_cast<double>(bits);
}

std::filesystem::path with_ext(const std::filesystem::path& stem, const char* ext) {
  return std::filesystem::path(stem.string() + ext);
}

CVector read_complex_payload(const std::filesystem::path& path, std::size_t n) {
  const std::string raw = read_file(path);
  if (raw.size() != n * 16) throw SchemaError(path.string() + ": payload size does not match sidecar");
  CVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {get_f64(raw.data() + 16 * i), get_f64(raw.data() + 16 * i + 8)};
  return out;
}

}  // namespace

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError(where + ": unknown key '" + key + "'");
  }
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw SchemaError("complex value must be a number or [re, im]");
}

json to_json(std::span<const cplx> v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

CVector cvector_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("complex vector must be a list");
  CVector out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

json to_json(const Rational& r) { return r.to_string(); }

Rational rational_from_json(const json& j) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number()) return Rational::from_double(j.get<double>());
  } catch (const DomainError& e) {
    throw SchemaError(std::string("bad coordinate: ") + e.what());
  } catch (const std::logic_error& e) {
    throw SchemaError("bad coordinate: " + j.dump());
  }
  throw SchemaError("coordinate must be a number or a \"p/q\" string");
}

json to_json(const SupportSet& s) {
  if (!s.is_raster()) {
    json rects = json::array();
    for (const auto& r : s.rects()) rects.push_back(rect_to_json(r));
    return {{"rectangles", rects}};
  }
  const auto& m = s.mask();
  json rows = json::array();
  for (int i = 0; i < m.nt; ++i) {
    std::string row(static_cast<std::size_t>(m.nnu), '0');
    for (int j = 0; j < m.nnu; ++j) {
      if (m.at(i, j)) row[static_cast<std::size_t>(j)] = '1';
    }
    rows.push_back(row);
  }
  return {{"raster",
           {{"t0", to_json(m.t0)},
            {"dt", to_json(m.dt)},
            {"nu0", to_json(m.nu0)},
            {"dnu", to_json(m.dnu)},
            {"rows", rows}}}};
}

SupportSet support_from_json(const json& j) {
  require_keys(j, {"rectangles", "raster"}, "support");
  if (j.contains("rectangles") == j.contains("raster")) {
    throw SchemaError("support: exactly one of 'rectangles' or 'raster' is required");
  }
  try {
    if (j.contains("rectangles")) {
      if (!j["rectangles"].is_array()) throw SchemaError("support: 'rectangles' must be a list");
      std::vector<Rect> rects;
      for (const auto& r : j["rectangles"]) rects.push_back(rect_from_json(r));
      return SupportSet::rectangles(std::move(rects));
    }
    const json& r = j["raster"];
    require_keys(r, {"t0", "dt", "nu0", "dnu", "rows"}, "raster");
    for (const char* k : {"t0", "dt", "nu0", "dnu", "rows"}) {
      if (!r.contains(k)) throw SchemaError(std::string("raster: missing key '") + k + "'");
    }
    Raster m;
    m.t0 = rational_from_json(r["t0"]);
    m.dt = rational_from_json(r["dt"]);
    m.nu0 = rational_from_json(r["nu0"]);
    m.dnu = rational_from_json(r["dnu"]);
    if (!r["rows"].is_array()) throw SchemaError("raster: 'rows' must be a list of strings");
    m.nt = static_cast<int>(r["rows"].size());
    m.nnu = m.nt > 0 ? static_cast<int>(r["rows"][0].get<std::string>().size()) : 0;
    for (const auto& row : r["rows"]) {
      const auto str = row.get<std::string>();
      if (static_cast<int>(str.size()) != m.nnu) throw SchemaError("raster: ragged rows");
      for (char ch : str) {
        if (ch != '0' && ch != '1') throw SchemaError("raster: rows may only contain 0 and 1");
        m.bits.push_back(ch == '1' ? 1 : 0);
      }
    }
    return SupportSet::raster(std::move(m));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("support: ") + e.what());
  } catch (const json::exception& e) {
    throw SchemaError(std::string("support: ") + e.what());
  }
}

json to_json(const Profile& p) {
  if (p.kind() == Profile::Kind::kRaisedCosine) {
    return {{"kind", "raised-cosine"}, {"center", p.center()}, {"width", p.width()}};
  }
  return {{"kind", "bspline"}, {"order", p.order()}, {"center", p.center()}, {"width", p.width()}};
}

Profile profile_from_json(const json& j) {
  require_keys(j, {"kind", "order", "center", "width"}, "profile");
  if (!j.contains("kind") || !j["kind"].is_string()) throw SchemaError("profile: 'kind' is required");
  const auto kind = j["kind"].get<std::string>();
  const double center = number(j, "center", "profile");
  const double width = number(j, "width", "profile");
  try {
    if (kind == "raised-cosine") {
      if (j.contains("order")) throw SchemaError("profile: raised-cosine takes no 'order'");
      return Profile::raised_cosine(center, width);
    }
    if (kind == "bspline") {
      return Profile::bspline(static_cast<int>(integer(j, "order", "profile")), center, width);
    }
  } catch (const DomainError& e) {
    throw SchemaError(std::string("profile: ") + e.what());
  }
  throw SchemaError("profile: unknown kind '" + kind + "'");
}

json to_json(const GroundTruthOperator& op) {
  json atoms = json::array();
  for (const auto& a : op.atoms()) {
    atoms.push_back({{"coeff", to_json(a.coeff)}, {"t", to_json(a.t_profile)}, {"nu", to_json(a.nu_profile)}});
  }
  return {{"atoms", atoms}, {"support", to_json(op.declared_support())}};
}

GroundTruthOperator operator_from_json(const json& j) {
  require_keys(j, {"atoms", "support"}, "operator");
  if (!j.contains("atoms") || !j["atoms"].is_array()) throw SchemaError("operator: 'atoms' list required");
  std::vector<SpreadingAtom> atoms;
  for (const auto& a : j["atoms"]) {
    require_keys(a, {"coeff", "t", "nu"}, "atom");
    if (!a.contains("t") || !a.contains("nu")) throw SchemaError("atom: 't' and 'nu' profiles required");
    atoms.push_back({a.contains("coeff") ? complex_from_json(a["coeff"]) : cplx(1.0),
                     profile_from_json(a["t"]), profile_from_json(a["nu"])});
  }
  try {
    if (j.contains("support")) return GroundTruthOperator(std::move(atoms), support_from_json(j["support"]));
    return GroundTruthOperator(std::move(atoms));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("operator: ") + e.what());
  }
}

json to_json(const DeltaTrain& g) {
  return {{"spacing", g.spacing},
          {"offset", g.offset},
          {"weights", to_json(g.weights)},
          {"modulation", g.modulation}};
}

DeltaTrain train_from_json(const json& j) {
  require_keys(j, {"spacing", "offset", "weights", "modulation"}, "train");
  try {
    return DeltaTrain(number(j, "spacing", "train"), j.contains("offset") ? number(j, "offset", "train") : 0.0,
                      j.contains("weights") ? cvector_from_json(j["weights"]) : CVector{cplx(1.0)},
                      j.contains("modulation") ? number(j, "modulation", "train") : 0.0);
  } catch (const DomainError& e) {
    throw SchemaError(std::string("train: ") + e.what());
  }
}

json to_json(const CellCover& cover) {
  json cells = json::array();
  for (const auto& [m, n] : cover.cells) cells.push_back({m, n});
  return {{"K", cover.K}, {"L", cover.L}, {"eps", to_json(cover.eps)}, {"cells", cells}, {"area", cover.area()}};
}

CellCover cover_from_json(const json& j) {
  require_keys(j, {"K", "L", "eps", "cells", "area"}, "cover");
  CellCover c;
  c.K = static_cast<int>(integer(j, "K", "cover"));
  c.L = static_cast<int>(integer(j, "L", "cover"));
  if (c.K < 1 || c.L < 1) throw SchemaError("cover: K and L must be positive");
  c.eps = j.contains("eps") ? rational_from_json(j["eps"]) : Rational(0);
  if (!j.contains("cells") || !j["cells"].is_array()) throw SchemaError("cover: 'cells' list required");
  for (const auto& e : j["cells"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw SchemaError("cover: cells must be [m, n] integer pairs");
    }
    c.cells.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return c;
}

json to_json(const CellPattern& p) {
  json out = json::array();
  for (const auto& c : p.cells) out.push_back({c.k, c.l});
  return out;
}

CellPattern pattern_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("pattern must be a list of [k, l] pairs");
  std::vector<Cell> cells;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw SchemaError("pattern cells must be [k, l] integer pairs");
    }
    cells.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  try {
    return CellPattern(std::move(cells));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("pattern: ") + e.what());
  }
}

json to_json(const GlpCertificate& cert) {
  const char* mode = cert.mode == GlpMode::kExhaustive   ? "exhaustive"
                     : cert.mode == GlpMode::kRandomized ? "randomized"
                                                         : "none";
  return {{"mode", mode},
          {"L", cert.L},
          {"holds", cert.holds},
          {"minAbsDet", finite_or_null(cert.min_abs_det)},
          {"worstCond", finite_or_null(cert.worst_cond)},
          {"subsetsChecked", cert.subsets_checked},
          {"argmin", cert.argmin},
          {"tolerance", cert.tolerance}};
}

json to_json(const GaborIdentifier& id) {
  return {{"L", id.L},
          {"c", to_json(id.c)},
          {"certificate", to_json(id.certificate)},
          {"score", finite_or_null(id.score)},
          {"candidateIndex", id.candidate_index}};
}

CVector identifier_from_json(const json& j) {
  if (j.is_array()) return cvector_from_json(j);
  require_keys(j, {"L", "c", "certificate", "score", "candidateIndex"}, "identifier");
  if (!j.contains("c")) throw SchemaError("identifier: 'c' is required");
  CVector c = cvector_from_json(j["c"]);
  if (j.contains("L") && integer(j, "L", "identifier") != static_cast<long long>(c.size())) {
    throw SchemaError("identifier: L does not match len(c)");
  }
  return c;
}

json to_json(const ContentResult& r) {
  return {{"value", r.value}, {"bestK", r.bestK}, {"bestL", r.bestL}};
}

json to_json(const SupportNormalization& nz) {
  return {{"normalized", to_json(nz.normalized)},
          {"a", to_json(nz.a)},
          {"t0", to_json(nz.t0)},
          {"nu0", to_json(nz.nu0)},
          {"K", nz.K}};
}

json to_json(const ReconstructionReport& r, const std::string& array_stem) {
  json out = {{"quantity", r.quantity},
              {"grid",
               {{"t0", r.recovered.grid.origin0},
                {"dt0", r.recovered.grid.step0},
                {"t1", r.recovered.grid.origin1},
                {"dt1", r.recovered.grid.step1},
                {"dims", {r.recovered.values.rows(), r.recovered.values.cols()}}}},
              {"relL2Error", finite_or_null(r.rel_l2_error)},
              {"perCellCondition", r.per_cell_condition},
              {"residual", r.residual},
              {"truncationRadius", r.truncation_radius},
              {"settings", r.settings}};
  if (!array_stem.empty()) {
    out["recovered"] = array_stem + ".bin";
    if (r.eta) out["eta"] = array_stem + "_eta.bin";
  }
  return out;
}

std::string signal_to_csv(const SampledSignal& s) {
  std::string out = "t,re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.time(i), s.samples[i].real(),
                  s.samples[i].imag());
    out += buf;
  }
  return out;
}

std::string array_to_csv(const GriddedArray& a) {
  std::string out = "axis0,axis1,re,im\n";
  char buf[128];
  for (Eigen::Index i = 0; i < a.values.rows(); ++i) {
    const double u = a.grid.origin0 + static_cast<double>(i) * a.grid.step0;
    for (Eigen::Index j = 0; j < a.values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", u,
                    a.grid.origin1 + static_cast<double>(j) * a.grid.step1, a.values(i, j).real(),
                    a.values(i, j).imag());
      out += buf;
    }
  }
  return out;
}

SampledSignal signal_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,re,im", 0) != 0) {
    throw SchemaError("signal CSV must start with the header t,re,im");
  }
  std::vector<double> ts;
  CVector vs;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    double t, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &re, &im) != 3) {
      throw SchemaError("bad signal CSV row: " + line);
    }
    ts.push_back(t);
    vs.emplace_back(re, im);
  }
  if (ts.size() < 2) throw SchemaError("signal CSV needs at least two rows");
  const double dt = ts[1] - ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (std::abs(ts[i] - (ts[0] + static_cast<double>(i) * dt)) > 1e-9 * std::max(1.0, std::abs(ts[i]))) {
      throw SchemaError("signal CSV times are not uniformly spaced");
    }
  }
  try {
    return SampledSignal(ts[0], dt, std::move(vs));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("signal: ") + e.what());
  }
}

void write_signal_binary(const std::filesystem::path& stem, const SampledSignal& s) {
  std::string payload;
  payload.reserve(s.size() * 16);
  for (const auto& v : s.samples) {
    put_f64(payload, v.real());
    put_f64(payload, v.imag());
  }
  write_file_atomic(with_ext(stem, ".bin"), payload);
  write_file_atomic(with_ext(stem, ".json"), dump({{"t0", s.t0}, {"dt", s.dt}, {"n", s.size()}}));
}

SampledSignal read_signal_binary(const std::filesystem::path& stem) {
  const json meta = read_json_file(with_ext(stem, ".json"));
  require_keys(meta, {"t0", "dt", "n"}, "signal sidecar");
  const auto n = static_cast<std::size_t>(integer(meta, "n", "signal sidecar"));
  try {
    return SampledSignal(number(meta, "t0", "signal sidecar"), number(meta, "dt", "signal sidecar"),
                         read_complex_payload(with_ext(stem, ".bin"), n));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("signal: ") + e.what());
  }
}

void write_array_binary(const std::filesystem::path& stem, const GriddedArray& a) {
  std::string payload;
  payload.reserve(static_cast<std::size_t>(a.values.size()) * 16);
  for (Eigen::Index i = 0; i < a.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.values.cols(); ++j) {
      put_f64(payload, a.values(i, j).real());
      put_f64(payload, a.values(i, j).imag());
    }
  }
  write_file_atomic(with_ext(stem, ".bin"), payload);
  write_file_atomic(with_ext(stem, ".json"),
                    dump({{"t0", a.grid.origin0},
                          {"dt0", a.grid.step0},
                          {"t1", a.grid.origin1},
                          {"dt1", a.grid.step1},
                          {"dims", {a.values.rows(), a.values.cols()}}}));
}

GriddedArray read_array_binary(const std::filesystem::path& stem) {
  const json meta = read_json_file(with_ext(stem, ".json"));
  require_keys(meta, {"t0", "dt0", "t1", "dt1", "dims"}, "array sidecar");
  if (!meta.contains("dims") || !meta["dims"].is_array() || meta["dims"].size() != 2) {
    throw SchemaError("array sidecar: 'dims' must be [rows, cols]");
  }
  const auto rows = meta["dims"][0].get<Eigen::Index>();
  const auto cols = meta["dims"][1].get<Eigen::Index>();
  const CVector flat = read_complex_payload(with_ext(stem, ".bin"), static_cast<std::size_t>(rows * cols));
  GriddedArray a{CMatrix(rows, cols),
                 {number(meta, "t0", "array sidecar"), number(meta, "dt0", "array sidecar"),
                  number(meta, "t1", "array sidecar"), number(meta, "dt1", "array sidecar")}};
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) a.values(i, j) = flat[static_cast<std::size_t>(i * cols + j)];
  }
  return a;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    os.flush();
    if (!os) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SchemaError("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace opws
