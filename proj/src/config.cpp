#include "kpo/config.hpp"

#include <set>

#include "kpo/errors.hpp"
#include "kpo/output.hpp"

namespace kpo {

using nlohmann::json;

namespace {

// View of one JSON object that records which keys were consumed so that
// leftovers can be rejected (strict) or reported (lenient).
class Section {
 public:
  Section(const json& node, std::string path, ConfigMode mode,
          std::vector<std::string>& warnings)
      : node_(node), path_(std::move(path)), mode_(mode), warnings_(warnings) {
    if (!node_.is_object())
      throw ConfigError(label() + ": expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  std::optional<double> number(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ConfigError(field(key) + ": expected a number");
    return v->get<double>();
  }

  std::optional<long long> integer(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer())
      throw ConfigError(field(key) + ": expected an integer");
    return v->get<long long>();
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number_unsigned())
      throw ConfigError(field(key) + ": expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(field(key) + ": expected a string");
    return v->get<std::string>();
  }

  // Either an explicit list of numbers or {"start", "stop", "count"}.
  std::optional<std::vector<double>> axis(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (v->is_array()) {
      std::vector<double> out;
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number())
          throw ConfigError(field(key) + "[" + std::to_string(i) +
                            "]: expected a number");
        out.push_back((*v)[i].get<double>());
      }
      return out;
    }
    if (v->is_object()) {
      Section range(*v, field(key), mode_, warnings_);
      const auto start = range.number("start");
      const auto stop = range.number("stop");
      const auto count = range.integer("count");
      range.finish();
      if (!start || !stop || !count)
        throw ConfigError(field(key) + ": range needs start, stop and count");
      if (*count < 1 || *count > 1000000)
        throw ConfigError(field(key) + ".count: must be in [1, 1000000]");
      return linspace(*start, *stop, static_cast<int>(*count));
    }
    throw ConfigError(field(key) +
                      ": expected a list or a {start, stop, count} range");
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    return Section(*v, field(key), mode_, warnings_);
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (used_.count(key)) continue;
      const std::string msg = field(key) + ": unknown key";
      if (mode_ == ConfigMode::kStrict) throw ConfigError(msg);
      warnings_.push_back(msg + " (ignored)");
    }
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string label() const { return path_.empty() ? "config" : path_; }

  const json* take(const std::string& key) {
    if (!node_.contains(key)) return nullptr;
    used_.insert(key);
    return &node_.at(key);
  }

  const json& node_;
  std::string path_;
  ConfigMode mode_;
  std::vector<std::string>& warnings_;
  std::set<std::string> used_;
};

template <typename F>
void checked(F&& validate) {
  try {
    validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

GraphSource parse_graph(Section s, const std::filesystem::path& base_dir) {
  GraphSource out;
  if (auto csv = s.string("csv")) {
    s.finish();
    std::filesystem::path p(*csv);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    out.csv_path = p.lexically_normal().string();
    if (!std::filesystem::exists(out.csv_path))
      throw ConfigError("graph.csv: file not found: " + out.csv_path);
    return out;
  }
  GraphSpec spec;
  const auto kind = s.string("kind");
  if (!kind) throw ConfigError("graph.kind: required (chain or random_binary)");
  checked([&] { spec.kind = graph_kind_from_string(*kind); });
  if (auto n = s.integer("n")) {
    if (*n < 2 || *n > 4096) throw ConfigError("graph.n must be in [2, 4096]");
    spec.n = static_cast<int>(*n);
  }
  if (auto j = s.number("J")) spec.coupling = *j;
  if (spec.kind == GraphKind::kRandomBinary) {
    if (auto d = s.number("density")) spec.density = *d;
    if (auto seed = s.unsigned_integer("seed")) spec.seed = *seed;
  }
  s.finish();
  checked([&] { spec.validate(); });
  out.spec = spec;
  return out;
}

KpoParams parse_params(Section s) {
  KpoParams p;
  if (auto v = s.number("delta")) p.delta = *v;
  if (auto v = s.number("g")) p.g = *v;
  if (auto v = s.number("u")) p.u = *v;
  if (auto v = s.number("gamma")) p.gamma = *v;
  s.finish();
  checked([&] { p.validate(); });
  return p;
}

SweepGrid parse_grid(Section s) {
  SweepGrid g;
  const SweepGrid defaults = default_sweep_grid();
  g.deltas = s.axis("deltas").value_or(defaults.deltas);
  if (auto v = s.axis("g")) g.gs = *v;
  if (auto v = s.axis("g_relative")) g.g_relative = *v;
  if (g.gs.empty() && g.g_relative.empty()) g.gs = defaults.gs;
  s.finish();
  checked([&] { g.validate(); });
  return g;
}

SdeConfig parse_sde(Section s) {
  SdeConfig c;
  if (auto v = s.number("dt")) c.dt = *v;
  if (auto v = s.number("t_final")) c.t_final = *v;
  if (auto v = s.number("sample_interval")) c.sample_interval = *v;
  if (auto v = s.integer("n_repeats")) {
    if (*v < 1 || *v > 1000000)
      throw ConfigError("sde.n_repeats must be in [1, 1000000]");
    c.n_repeats = static_cast<int>(*v);
  }
  if (auto v = s.number("burn_in")) c.burn_in = *v;
  if (auto v = s.number("noise_scale")) c.noise_scale = *v;
  if (auto v = s.number("initial_scale")) c.initial_scale = *v;
  s.finish();
  checked([&] { c.validate(); });
  return c;
}

IntegratorConfig parse_integrator(Section s) {
  IntegratorConfig c;
  if (auto v = s.number("dt")) c.dt = *v;
  if (auto v = s.number("t_max")) c.t_max = *v;
  if (auto v = s.number("convergence_tol")) c.convergence_tol = *v;
  if (auto v = s.integer("record_stride")) {
    if (*v < 1 || *v > (1LL << 30))
      throw ConfigError("integrator.record_stride must be in [1, 2^30]");
    c.record_stride = static_cast<int>(*v);
  }
  s.finish();
  checked([&] { c.validate(); });
  return c;
}

}  // namespace

SweepGrid default_sweep_grid() {
  SweepGrid g;
  g.deltas = linspace(-0.3, 0.3, 61);
  g.gs = linspace(0.4, 0.8, 61);
  return g;
}

std::vector<double> default_curve_deltas() { return linspace(-0.3, 0.3, 121); }

ParsedConfig parse_config_text(const std::string& text,
                               const std::filesystem::path& base_dir,
                               ConfigMode mode) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  ParsedConfig parsed;
  Section top(root, "", mode, parsed.warnings);
  RunConfig& c = parsed.config;

  auto graph = top.child("graph");
  if (!graph) throw ConfigError("graph: required section missing");
  c.graph = parse_graph(*graph, base_dir);
  if (auto s = top.child("params")) c.params = parse_params(*s);
  if (auto s = top.child("grid")) c.grid = parse_grid(*s);
  if (auto s = top.child("sde")) c.sde = parse_sde(*s);
  if (auto s = top.child("integrator")) c.integrator = parse_integrator(*s);
  if (auto v = top.integer("meanfield_repeats")) {
    if (*v < 1 || *v > 1000000)
      throw ConfigError("meanfield_repeats must be in [1, 1000000]");
    c.meanfield_repeats = static_cast<int>(*v);
  }
  if (auto s = top.child("histograms")) {
    if (auto d = s->axis("deltas")) {
      if (d->empty()) throw ConfigError("histograms.deltas must be non-empty");
      c.hist_deltas = *d;
    }
    if (auto f = s->number("g_factor")) {
      if (!(*f > 0.0)) throw ConfigError("histograms.g_factor must be > 0");
      c.hist_g_factor = *f;
    }
    s->finish();
  }
  if (auto v = top.unsigned_integer("master_seed")) c.master_seed = *v;
  if (auto v = top.string("output_dir")) c.output_dir = *v;
  top.finish();
  return parsed;
}

ParsedConfig parse_config(const std::filesystem::path& path, ConfigMode mode) {
  if (!std::filesystem::exists(path))
    throw ConfigError("config file not found: " + path.string());
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_config_text(text, path.parent_path(), mode);
}

json config_to_json(const RunConfig& c) {
  json j;
  if (c.graph.spec) {
    const GraphSpec& g = *c.graph.spec;
    j["graph"] = {{"kind", to_string(g.kind)}, {"n", g.n}, {"J", g.coupling}};
    if (g.kind == GraphKind::kRandomBinary) {
      j["graph"]["density"] = g.density;
      j["graph"]["seed"] = g.seed;
    }
  } else {
    j["graph"] = {{"csv", c.graph.csv_path}};
  }
  j["params"] = {{"delta", c.params.delta},
                 {"g", c.params.g},
                 {"u", c.params.u},
                 {"gamma", c.params.gamma}};
  if (c.grid) {
    j["grid"] = {{"deltas", c.grid->deltas}};
    if (c.grid->relative())
      j["grid"]["g_relative"] = c.grid->g_relative;
    else
      j["grid"]["g"] = c.grid->gs;
  }
  j["sde"] = {{"dt", c.sde.dt},
              {"t_final", c.sde.t_final},
              {"sample_interval", c.sde.sample_interval},
              {"n_repeats", c.sde.n_repeats},
              {"burn_in", c.sde.burn_in},
              {"noise_scale", c.sde.noise_scale},
              {"initial_scale", c.sde.initial_scale}};
  j["integrator"] = {{"dt", c.integrator.dt},
                     {"t_max", c.integrator.t_max},
                     {"convergence_tol", c.integrator.convergence_tol},
                     {"record_stride", c.integrator.record_stride}};
  j["meanfield_repeats"] = c.meanfield_repeats;
  j["histograms"] = {{"deltas", c.hist_deltas}, {"g_factor", c.hist_g_factor}};
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  return j;
}

std::string write_config(const RunConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

CouplingMatrix load_graph(const RunConfig& config) {
  if (config.graph.spec) return build_graph(*config.graph.spec);
  try {
    return load_coupling_csv(config.graph.csv_path);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("graph.csv: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string("graph.csv: ") + e.what());
  }
}

}  // namespace kpo
