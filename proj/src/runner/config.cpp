#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "mmt/estimate_bench.hpp"
#include "mmt/mmt_dynamics.hpp"
#include "mmt/picard_probe.hpp"
#include "mmt/runner.hpp"
#include "mmt/thresholds.hpp"

namespace mmt::runner {

using nlohmann::json;

ConfigError::ConfigError(std::string path, std::size_t line, const std::string& what)
    : Error(what), path_(std::move(path)), line_(line) {}

std::size_t ConfigDoc::line_of(const std::string& path) const {
  std::size_t pos = 0;
  bool found = false;
  std::stringstream ss(path);
  std::string key;
  while (std::getline(ss, key, '.')) {
    const std::string quoted = '"' + key + '"';
    std::size_t p = pos;
    bool hit = false;
    while ((p = text.find(quoted, p)) != std::string::npos) {
      std::size_t q = p + quoted.size();
      while (q < text.size() && std::isspace(static_cast<unsigned char>(text[q]))) ++q;
      if (q < text.size() && text[q] == ':') {
        hit = true;
        break;
      }
      p += quoted.size();
    }
    if (!hit) break;
    pos = p;
    found = true;
  }
  if (!found) return 0;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

void ConfigDoc::fail(const std::string& path, const std::string& what) const {
  const std::size_t line = line_of(path);
  std::string msg = source;
  if (line > 0) msg += ":" + std::to_string(line);
  msg += ": " + path + ": " + what;
  throw ConfigError(path, line, msg);
}

ConfigDoc parse_config(const std::string& text, const std::string& source) {
  ConfigDoc doc;
  doc.text = text;
  doc.source = source;
  try {
    doc.value = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line
    const std::size_t off = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(off), '\n'));
    throw ConfigError("", line, source + ":" + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  if (!doc.value.is_object()) throw ConfigError("", 1, source + ":1: config must be a JSON object");
  if (doc.value.contains("config_echo") && doc.value.contains("artifact_version")) {
    json echo = doc.value["config_echo"];
    if (!echo.is_object()) doc.fail("config_echo", "must be an object");
    doc.value = std::move(echo);
    doc.from_manifest = true;
  }
  return doc;
}

ConfigDoc load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

// Message of a library error without its leading "field: ".
std::string detail(const InvalidArgument& e) {
  const std::string w = e.what();
  const std::string prefix = e.field() + ": ";
  return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

// Reads one object section, tracking which keys were consumed.
class Section {
 public:
  Section(const ConfigDoc& doc, const json& obj, std::string path) : doc_(doc), obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) doc_.fail(path_.empty() ? "(root)" : path_, "must be an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return obj_.contains(key); }

  double number(const std::string& key, std::optional<double> dflt) {
    used_.insert(key);
    if (!obj_.contains(key)) {
      if (!dflt) doc_.fail(at(key), "required field is missing");
      return *dflt;
    }
    const json& v = obj_.at(key);
    if (!v.is_number()) doc_.fail(at(key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) doc_.fail(at(key), "must be finite");
    return d;
  }

  long integer(const std::string& key, std::optional<long> dflt) {
    used_.insert(key);
    if (!obj_.contains(key)) {
      if (!dflt) doc_.fail(at(key), "required field is missing");
      return *dflt;
    }
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) doc_.fail(at(key), "must be an integer");
    return v.get<long>();
  }

  std::string string(const std::string& key, std::optional<std::string> dflt) {
    used_.insert(key);
    if (!obj_.contains(key)) {
      if (!dflt) doc_.fail(at(key), "required field is missing");
      return *dflt;
    }
    const json& v = obj_.at(key);
    if (!v.is_string()) doc_.fail(at(key), "must be a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key, bool dflt) {
    used_.insert(key);
    if (!obj_.contains(key)) return dflt;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) doc_.fail(at(key), "must be true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> dflt) {
    used_.insert(key);
    if (!obj_.contains(key)) {
      if (!dflt) doc_.fail(at(key), "required field is missing");
      return *dflt;
    }
    const json& v = obj_.at(key);
    if (!v.is_array()) doc_.fail(at(key), "must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) doc_.fail(at(key), "must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Section child(const std::string& key) {
    used_.insert(key);
    static const json empty = json::object();
    return Section(doc_, obj_.contains(key) ? obj_.at(key) : empty, at(key));
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return obj_.at(key);
  }

  void finish() const {
    for (const auto& [k, v] : obj_.items())
      if (!used_.count(k)) doc_.fail(at(k), "unknown field");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const { doc_.fail(at(key), what); }

 private:
  const ConfigDoc& doc_;
  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

json params_json(Section sec, const ModelParams& d, bool with_sign) {
  ModelParams p;
  p.alpha = sec.number("alpha", d.alpha);
  p.beta = sec.number("beta", d.beta);
  p.s = sec.number("s", d.s);
  json out{{"alpha", p.alpha}, {"beta", p.beta}, {"s", p.s}};
  if (with_sign) {
    const std::string sg = sec.string("sign", std::string(to_string(d.sign)));
    try {
      p.sign = sign_from_string(sg);
    } catch (const InvalidArgument&) {
      sec.fail("sign", "must be \"as_written\" or \"defocusing\"");
    }
    out["sign"] = sg;
  }
  sec.finish();
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    sec.fail(e.field(), detail(e));
  }
  return out;
}

}  // namespace

ModelParams params_from(const json& j) {
  ModelParams p;
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.s = j.at("s").get<double>();
  if (j.contains("sign")) p.sign = sign_from_string(j.at("sign").get<std::string>());
  return p;
}

json resolve_simulate(const ConfigDoc& doc, const Options& opt) {
  Section root(doc, doc.value, "");
  json out;
  out["params"] = params_json(root.child("params"), ModelParams{}, true);

  Section g = root.child("grid");
  const long n = g.integer("num_modes", 256);
  const double box = g.number("box_length", 2.0 * M_PI);
  g.finish();
  if (n < 8 || (n & (n - 1)) != 0) g.fail("num_modes", "must be a power of two >= 8");
  if (!(box > 0.0)) g.fail("box_length", "must be positive");
  out["grid"] = {{"num_modes", n}, {"box_length", box}};
  const GridSpec grid(static_cast<std::size_t>(n), box);

  Section in = root.child("integrator");
  IntegratorConfig cfg;
  cfg.dt = in.number("dt", 1e-3);
  cfg.t_end = in.number("t_end", 1.0);
  cfg.dealias_pad_factor = in.number("dealias_pad_factor", 2.0);
  const std::string scheme = in.string("scheme", std::string(to_string(Scheme::EtdRk4)));
  const long stride = in.integer("record_stride", 10);
  cfg.keep_snapshots = in.boolean("keep_snapshots", false);
  in.finish();
  try {
    cfg.scheme = scheme_from_string(scheme);
  } catch (const InvalidArgument&) {
    in.fail("scheme", "must be \"ETD-RK4\" or \"IF-RK4\"");
  }
  if (stride < 1) in.fail("record_stride", "must be positive");
  cfg.record_stride = static_cast<std::size_t>(stride);
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    in.fail(e.field(), detail(e));
  }
  out["integrator"] = {{"dt", cfg.dt},
                       {"t_end", cfg.t_end},
                       {"dealias_pad_factor", cfg.dealias_pad_factor},
                       {"scheme", to_string(cfg.scheme)},
                       {"record_stride", cfg.record_stride},
                       {"keep_snapshots", cfg.keep_snapshots}};

  if (!root.has("initial_data")) root.fail("initial_data", "required field is missing");
  Section id = root.child("initial_data");
  const std::string kind = id.string("kind", std::nullopt);
  json init{{"kind", kind}};
  const double half = static_cast<double>(n / 2);
  const double k0 = 2.0 * M_PI / box;
  if (kind == "plane_wave") {
    init["A"] = id.number("A", 0.5);
    const double k = id.number("k", 1.0);
    init["k"] = k;
    const double idx = k / k0;
    if (std::abs(idx - std::round(idx)) > 1e-9 * std::max(1.0, std::abs(idx)))
      id.fail("k", "must be a lattice frequency 2 pi m / box_length");
    if (std::round(idx) == 0.0 || std::abs(std::round(idx)) >= half)
      id.fail("k", "must be nonzero and below the Nyquist frequency");
  } else if (kind == "gaussian_packet") {
    init["sigma"] = id.number("sigma", box / 16.0);
    init["k0"] = id.number("k0", 0.0);
    init["A"] = id.number("A", 0.5);
    if (!(init["sigma"].get<double>() > 0.0)) id.fail("sigma", "must be positive");
  } else if (kind == "random_bandlimited") {
    init["band"] = id.integer("band", 16);
    long seed = id.integer("seed", 0);
    if (opt.seed) seed = static_cast<long>(*opt.seed);
    if (seed < 0) id.fail("seed", "must be non-negative");
    init["seed"] = seed;
    init["A"] = id.number("A", 0.5);
    const long band = init["band"].get<long>();
    if (band < 1 || static_cast<double>(band) >= half) id.fail("band", "must satisfy 1 <= band < num_modes/2");
  } else {
    id.fail("kind", "must be one of plane_wave, gaussian_packet, random_bandlimited");
  }
  id.finish();
  if (!(init["A"].get<double>() > 0.0)) id.fail("A", "must be positive");
  out["initial_data"] = init;
  root.finish();
  return out;
}

json resolve_probe(const ConfigDoc& doc, const Options&) {
  Section root(doc, doc.value, "");
  json out;
  const std::string fam = root.string("family", std::string("HHH"));
  Family f;
  try {
    f = family_from_string(fam);
  } catch (const InvalidArgument&) {
    root.fail("family", "must be one of HHH, HLL, LLL");
  }
  out["family"] = to_string(f);
  ModelParams dflt;
  dflt.alpha = 2.0;
  dflt.beta = 0.5;
  out["params"] = params_json(root.child("params"), dflt, false);
  ProbeSpec spec;
  spec.family = f;
  spec.params = params_from(out["params"]);
  spec.t = root.number("t", 0.1);
  spec.eps = root.number("eps", 0.01);
  const auto ex = root.numbers("N_exponents", std::vector<double>{8, 13});
  const long Q = root.integer("Q", 128);
  const long M = root.integer("M", 64);
  root.finish();
  if (ex.size() != 2 || ex[0] != std::floor(ex[0]) || ex[1] != std::floor(ex[1]) || ex[1] < ex[0] + 1)
    root.fail("N_exponents", "must be two integers [lo, hi] with hi > lo");
  if (ex[0] < 6) root.fail("N_exponents", "N must be at least 2^6");
  if (ex[1] > 24) root.fail("N_exponents", "N must be at most 2^24");
  for (double e = ex[0]; e <= ex[1]; e += 1.0) spec.N_list.push_back(std::ldexp(1.0, static_cast<int>(e)));
  if (Q < 0 || M < 0) root.fail(Q < 0 ? "Q" : "M", "must be positive");
  spec.quad_points = static_cast<std::size_t>(Q);
  spec.out_points = static_cast<std::size_t>(M);
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    const std::string& fld = e.field();
    if (fld == "alpha" || fld == "beta" || fld == "s") root.fail("params." + fld, detail(e));
    root.fail(fld == "N_list" ? "N_exponents" : fld, detail(e));
  }
  out["t"] = spec.t;
  out["eps"] = spec.eps;
  out["N_exponents"] = {static_cast<int>(ex[0]), static_cast<int>(ex[1])};
  out["Q"] = Q;
  out["M"] = M;
  return out;
}

json resolve_map(const ConfigDoc& doc, const Options&) {
  Section root(doc, doc.value, "");
  const double alpha = root.number("alpha", 2.0);
  const auto br = root.numbers("beta_range", std::vector<double>{-0.5, 0.75});
  const auto sr = root.numbers("s_range", std::vector<double>{-1.0, 2.0});
  const long res = root.integer("resolution", 200);
  const double delta = root.number("delta", 0.0);
  root.finish();
  if (!(alpha > 1.0 && alpha <= 2.0)) root.fail("alpha", "must lie in (1, 2]");
  if (br.size() != 2 || !(br[0] < br[1])) root.fail("beta_range", "must be [lo, hi] with lo < hi");
  if (sr.size() != 2 || !(sr[0] < sr[1])) root.fail("s_range", "must be [lo, hi] with lo < hi");
  if (res < 2 || res > 4000) root.fail("resolution", "must lie in [2, 4000]");
  if (!(delta >= 0.0)) root.fail("delta", "must be non-negative");
  return {{"alpha", alpha}, {"beta_range", br}, {"s_range", sr}, {"resolution", res}, {"delta", delta}};
}

json resolve_bench(const ConfigDoc& doc, const Options& opt) {
  Section root(doc, doc.value, "");
  json cases = json::array();
  if (root.has("cases")) {
    const json& c = root.raw("cases");
    if (c.is_string() && c.get<std::string>() == "all") {
      for (const auto& t : case_tags()) cases.push_back(t);
    } else if (c.is_array()) {
      for (const auto& t : c) {
        if (!t.is_string()) root.fail("cases", "must be \"all\" or an array of case tags");
        const auto& tags = case_tags();
        if (std::find(tags.begin(), tags.end(), t.get<std::string>()) == tags.end())
          root.fail("cases", "unknown case tag \"" + t.get<std::string>() + "\"");
        cases.push_back(t);
      }
      if (cases.empty()) root.fail("cases", "must not be empty");
    } else {
      root.fail("cases", "must be \"all\" or an array of case tags");
    }
  } else {
    for (const auto& t : case_tags()) cases.push_back(t);
  }
  const auto alphas = root.numbers("alphas", std::vector<double>{1.5, 2.0});
  if (alphas.empty()) root.fail("alphas", "must not be empty");
  for (double a : alphas)
    if (!(a > 1.0 && a <= 2.0)) root.fail("alphas", "every alpha must lie in (1, 2]");
  json out{{"cases", cases}, {"alphas", alphas}};
  if (root.has("N_exponents")) {
    const auto ex = root.numbers("N_exponents", std::nullopt);
    if (ex.size() != 2 || ex[0] != std::floor(ex[0]) || ex[1] != std::floor(ex[1]) || ex[1] < ex[0] + 1 || ex[0] < 4 ||
        ex[1] > 20)
      root.fail("N_exponents", "must be two integers [lo, hi] with 4 <= lo < hi <= 20");
    out["N_exponents"] = {static_cast<int>(ex[0]), static_cast<int>(ex[1])};
  }
  if (root.has("L")) {
    const double L = root.number("L", std::nullopt);
    int e = 0;
    if (!(L > 0.0) || std::frexp(L, &e) != 0.5) root.fail("L", "must be a power of two");
    out["L"] = L;
  }
  const long res = root.integer("resolution", 64);
  if (res < 8 || res > 4096) root.fail("resolution", "must lie in [8, 4096]");
  out["resolution"] = res;
  long seed = root.integer("seed", 0);
  if (opt.seed) seed = static_cast<long>(*opt.seed);
  if (seed < 0) root.fail("seed", "must be non-negative");
  out["seed"] = seed;

  json hr = json::array();
  if (root.has("h_range")) {
    const json& arr = root.raw("h_range");
    if (!arr.is_array()) root.fail("h_range", "must be an array of {N, samples}");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Section s(doc, arr[i], "h_range");
      const auto N = s.numbers("N", std::nullopt);
      const long samples = s.integer("samples", 20000);
      s.finish();
      if (N.size() != 3) s.fail("N", "must list three dyadic sizes");
      DyadicConfig dc{N[0], N[1], N[2], std::nullopt, {}, alphas[0]};
      try {
        dc.validate();
      } catch (const InvalidArgument& e) {
        s.fail("N", detail(e));
      }
      if (samples < 1) s.fail("samples", "must be positive");
      hr.push_back({{"N", N}, {"samples", samples}});
    }
  } else {
    hr.push_back({{"N", {64, 64, 1}}, {"samples", 20000}});
  }
  out["h_range"] = hr;
  root.finish();
  return out;
}

SpectralField make_initial_data(const json& spec, const GridSpec& grid) {
  const std::string kind = spec.at("kind").get<std::string>();
  const double A = spec.at("A").get<double>();
  const std::size_t n = grid.num_modes();
  SpectralField u(grid);
  if (kind == "plane_wave") {
    u.mode(grid.lattice_index_of(spec.at("k").get<double>())) = A;
    return u;
  }
  if (kind == "gaussian_packet") {
    const double sigma = spec.at("sigma").get<double>(), k0 = spec.at("k0").get<double>();
    const double xc = 0.5 * grid.box_length();
    std::vector<cplx> v(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.x(j) - xc;
      v[j] = A * std::exp(-x * x / (2.0 * sigma * sigma)) * std::polar(1.0, k0 * x);
    }
    u = SpectralField::from_samples(grid, v);
    u.mode(0) = 0.0;
    return u;
  }
  // random_bandlimited
  const long band = spec.at("band").get<long>();
  std::mt19937_64 rng(spec.at("seed").get<std::uint64_t>());
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (long k = 1; k <= band; ++k)
    for (long sgn : {1L, -1L}) {
      const double re = gauss(rng), im = gauss(rng);
      u.mode(sgn * k) = cplx(re, im);
    }
  double peak = 0.0;
  for (const auto& z : u.samples()) peak = std::max(peak, std::abs(z));
  for (auto& c : u.modes()) c *= A / peak;
  return u;
}

}  // namespace mmt::runner
