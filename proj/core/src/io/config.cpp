#include "hyperpinn/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "hyperpinn/error.hpp"
#include "hyperpinn/io/text.hpp"
#include "hyperpinn/oracle/oracle.hpp"

namespace hyperpinn::io {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            std::string_view expected) {
  std::ostringstream msg;
  msg << "config key '" << key << "': cannot use '" << value << "' (expected " << expected << ")";
  throw ConfigError(msg.str());
}

double to_double(const std::string& key, const std::string& v) {
  double d = 0.0;
  if (!parse_double(v, d) || !std::isfinite(d)) bad_value(key, v, "a finite number");
  return d;
}

long to_long(const std::string& key, const std::string& v) {
  long n = 0;
  if (!parse_int(v, n)) bad_value(key, v, "an integer");
  return n;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split(v, ',')) out.push_back(static_cast<int>(to_long(key, item)));
  return out;
}

template <std::size_t N, class T>
std::array<T, N> fixed(const std::string& key, const std::string& v, const std::vector<T>& items) {
  if (items.size() != N) {
    std::ostringstream expected;
    expected << N << " comma-separated values";
    bad_value(key, v, expected.str());
  }
  std::array<T, N> a{};
  std::copy(items.begin(), items.end(), a.begin());
  return a;
}

template <class C>
std::string join(const C& items) {
  std::string s;
  for (const auto& x : items) {
    if (!s.empty()) s += ",";
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(x)>>) {
      s += format_double(x);
    } else {
      s += std::to_string(x);
    }
  }
  return s;
}

struct KeySpec {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    auto real = [&t](std::string key, double RunConfig::*field) {
      t.push_back({key, [key, field](RunConfig& r, const std::string& v) { r.*field = to_double(key, v); },
                   [field](const RunConfig& r) { return format_double(r.*field); }});
    };
    auto integer = [&t](std::string key, int RunConfig::*field, long lo) {
      t.push_back({key,
                   [key, field, lo](RunConfig& r, const std::string& v) {
                     const long n = to_long(key, v);
                     if (n < lo) bad_value(key, v, "an integer >= " + std::to_string(lo));
                     r.*field = static_cast<int>(n);
                   },
                   [field](const RunConfig& r) { return std::to_string(r.*field); }});
    };

    t.push_back({"problem.preset", [](RunConfig& r, const std::string& v) { r.preset = v; },
                 [](const RunConfig& r) { return r.preset; }});
    t.push_back({"problem.grid",
                 [](RunConfig& r, const std::string& v) {
                   r.grid = fixed<3>("problem.grid", v, to_ints("problem.grid", v));
                 },
                 [](const RunConfig& r) { return join(r.grid); }});
    t.push_back({"problem.lengths",
                 [](RunConfig& r, const std::string& v) {
                   r.lengths = fixed<3>("problem.lengths", v, to_doubles("problem.lengths", v));
                 },
                 [](const RunConfig& r) { return join(r.lengths); }});
    real("problem.shear", &RunConfig::shear);
    real("problem.load", &RunConfig::load);
    t.push_back({"problem.affine_F",
                 [](RunConfig& r, const std::string& v) {
                   r.affine_F = fixed<9>("problem.affine_F", v, to_doubles("problem.affine_F", v));
                 },
                 [](const RunConfig& r) { return join(r.affine_F); }});
    t.push_back({"problem.loss_mask",
                 [](RunConfig& r, const std::string& v) {
                   if (!bvp::parse_mask(v, r.mask)) bad_value("problem.loss_mask", v, "full, dem or dcm");
                 },
                 [](const RunConfig& r) { return std::string(bvp::mask_name(r.mask)); }});
    t.push_back({"problem.body_force",
                 [](RunConfig& r, const std::string& v) {
                   r.body_force = fixed<3>("problem.body_force", v, to_doubles("problem.body_force", v));
                 },
                 [](const RunConfig& r) { return join(r.body_force); }});

    t.push_back({"material.model",
                 [](RunConfig& r, const std::string& v) {
                   if (v != "neo_hookean" && v != "lopez_pamies") {
                     bad_value("material.model", v, "neo_hookean or lopez_pamies");
                   }
                   r.model = v;
                 },
                 [](const RunConfig& r) { return r.model; }});
    real("material.lambda", &RunConfig::lambda);
    real("material.mu", &RunConfig::mu);
    t.push_back({"material.alpha",
                 [](RunConfig& r, const std::string& v) { r.alpha = to_doubles("material.alpha", v); },
                 [](const RunConfig& r) { return join(r.alpha); }});
    t.push_back({"material.mu_r",
                 [](RunConfig& r, const std::string& v) { r.mu_r = to_doubles("material.mu_r", v); },
                 [](const RunConfig& r) { return join(r.mu_r); }});

    t.push_back({"network.hidden",
                 [](RunConfig& r, const std::string& v) {
                   r.hidden = to_ints("network.hidden", v);
                   for (int w : r.hidden)
                     if (w < 1) bad_value("network.hidden", v, "positive layer widths");
                 },
                 [](const RunConfig& r) { return join(r.hidden); }});
    integer("network.features", &RunConfig::features, 1);
    real("network.sigma", &RunConfig::sigma);
    t.push_back({"network.seed",
                 [](RunConfig& r, const std::string& v) {
                   const long n = to_long("network.seed", v);
                   if (n < 0) bad_value("network.seed", v, "a non-negative integer");
                   r.seed = static_cast<std::uint64_t>(n);
                 },
                 [](const RunConfig& r) { return std::to_string(r.seed); }});
    real("network.stress_scale", &RunConfig::stress_scale);
    real("network.output_init_scale", &RunConfig::output_init_scale);
    real("network.stress_init_scale", &RunConfig::stress_init_scale);

    t.push_back({"optimizer.method",
                 [](RunConfig& r, const std::string& v) {
                   if (v != "lbfgs" && v != "gd") bad_value("optimizer.method", v, "lbfgs or gd");
                   r.method = v;
                 },
                 [](const RunConfig& r) { return r.method; }});
    integer("optimizer.max_iterations", &RunConfig::max_iterations, 0);
    integer("optimizer.history", &RunConfig::history, 1);
    real("optimizer.gradient_tolerance", &RunConfig::gradient_tolerance);
    real("optimizer.c1", &RunConfig::c1);
    real("optimizer.c2", &RunConfig::c2);
    integer("optimizer.max_probes", &RunConfig::max_probes, 1);
    real("optimizer.initial_step", &RunConfig::initial_step);
    real("optimizer.gd_step", &RunConfig::gd_step);

    t.push_back({"curriculum.schedule",
                 [](RunConfig& r, const std::string& v) {
                   r.schedule = to_doubles("curriculum.schedule", v);
                 },
                 [](const RunConfig& r) { return join(r.schedule); }});

    t.push_back({"eval.chunk_size",
                 [](RunConfig& r, const std::string& v) {
                   r.chunk_size = to_long("eval.chunk_size", v);
                   if (r.chunk_size < 1) bad_value("eval.chunk_size", v, "a positive integer");
                 },
                 [](const RunConfig& r) { return std::to_string(r.chunk_size); }});
    integer("eval.threads", &RunConfig::threads, 1);

    t.push_back({"output.dir", [](RunConfig& r, const std::string& v) { r.output_dir = v; },
                 [](const RunConfig& r) { return r.output_dir; }});
    t.push_back({"output.wall_time",
                 [](RunConfig& r, const std::string& v) { r.wall_time = to_bool("output.wall_time", v); },
                 [](const RunConfig& r) { return std::string(r.wall_time ? "true" : "false"); }});
    t.push_back({"output.export_grid",
                 [](RunConfig& r, const std::string& v) {
                   r.export_grid = fixed<3>("output.export_grid", v, to_ints("output.export_grid", v));
                 },
                 [](const RunConfig& r) { return join(r.export_grid); }});
    return t;
  }();
  return table;
}

const KeySpec* find_key(const std::string& key) {
  for (const auto& k : key_table())
    if (k.key == key) return &k;
  return nullptr;
}

// Preset-dependent defaults.
void apply_preset_defaults(RunConfig& r) {
  bvp::ProblemSpec p;
  if (r.preset == "affine") {
    p = oracle::affine_dirichlet_problem(r.affine_F, mat::NeoHookean{577.0, 385.0});
  } else {
    p = bvp::preset(r.preset);
  }
  r.grid = p.domain.counts;
  r.lengths = p.domain.box.lengths;
  r.export_grid = p.domain.counts;
  if (r.preset == "nh_cantilever_traction") r.load = -5.0;
  if (r.preset == "lp_cantilever_displacement") r.load = -1.0;
  if (r.preset == "nh_localized_traction") r.load = 300.0;
  r.schedule = r.preset == "nh_localized_traction" ? std::vector<double>{0.25, 0.5, 0.75, 1.0}
                                                   : std::vector<double>{1.0};
  if (const auto* nh = std::get_if<mat::NeoHookean>(&p.material)) {
    r.model = "neo_hookean";
    r.lambda = nh->lambda;
    r.mu = nh->mu;
  } else {
    const auto& lp = std::get<mat::LopezPamies>(p.material);
    r.model = "lopez_pamies";
    r.lambda = lp.lambda;
    r.alpha.clear();
    r.mu_r.clear();
    for (const auto& term : lp.terms) {
      r.alpha.push_back(term.alpha);
      r.mu_r.push_back(term.mu);
    }
  }
  r.output_dir = "runs/" + r.preset;
}

mat::Material build_material(const RunConfig& r) {
  if (r.model == "neo_hookean") return mat::NeoHookean{r.lambda, r.mu};
  if (r.alpha.size() != r.mu_r.size() || r.alpha.empty()) {
    throw ConfigError("config keys 'material.alpha' and 'material.mu_r' must have equal, nonzero length");
  }
  mat::LopezPamies lp;
  lp.lambda = r.lambda;
  for (std::size_t i = 0; i < r.alpha.size(); ++i) lp.terms.push_back({r.alpha[i], r.mu_r[i]});
  return lp;
}

}  // namespace

Config Config::parse(std::string_view text, std::string_view origin) {
  Config c;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      std::ostringstream msg;
      msg << origin << ":" << line_no << ": expected 'section.key = value', got '" << line << "'";
      throw ConfigError(msg.str());
    }
    c.set(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse(text, path.string());
}

void Config::set(const std::string& key, const std::string& value) {
  if (find_key(key) == nullptr) throw ConfigError("unknown config key '" + key + "'");
  values_[key] = value;
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form section.key=value");
  }
  set(std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1))));
}

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config key '" + key + "' is not set");
  return it->second;
}

std::string Config::canonical() const {
  std::string s;
  for (const auto& [k, v] : values_) s += k + " = " + v + "\n";
  return s;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& spec : key_table()) k.push_back(spec.key);
    return k;
  }();
  return keys;
}

RunConfig resolve(const Config& config) {
  RunConfig r;
  if (config.has("problem.preset")) r.preset = config.get("problem.preset");
  if (r.preset != "affine") {
    const auto names = bvp::preset_names();
    if (std::find(names.begin(), names.end(), r.preset) == names.end()) {
      throw ConfigError("config key 'problem.preset': unknown preset '" + r.preset + "'");
    }
  }
  if (config.has("problem.affine_F")) find_key("problem.affine_F")->set(r, config.get("problem.affine_F"));
  try {
    apply_preset_defaults(r);
  } catch (const InvertedState& e) {
    throw ConfigError(std::string("config key 'problem.affine_F': ") + e.what());
  }
  if (config.has("problem.grid") && !config.has("output.export_grid")) {
    find_key("problem.grid")->set(r, config.get("problem.grid"));
    r.export_grid = r.grid;
  }
  for (const auto& [key, value] : config.entries()) find_key(key)->set(r, value);
  if (!config.has("network.stress_scale")) r.stress_scale = mat::shear_modulus(build_material(r));

  // cross-field checks that the key setters cannot make
  try {
    mat::validate(build_material(r));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config section 'material': ") + e.what());
  }
  if (!(r.sigma > 0.0)) throw ConfigError("config key 'network.sigma' must be positive");
  if (!(r.stress_scale > 0.0)) throw ConfigError("config key 'network.stress_scale' must be positive");
  for (int k = 0; k < 3; ++k) {
    if (r.grid[k] < 3 || r.grid[k] % 2 == 0) {
      throw ConfigError("config key 'problem.grid' needs odd counts >= 3");
    }
    if (r.export_grid[k] < 2) throw ConfigError("config key 'output.export_grid' needs counts >= 2");
    if (!(r.lengths[k] > 0.0)) throw ConfigError("config key 'problem.lengths' must be positive");
  }
  try {
    trainer_config(r).lbfgs.validate();
    trainer_config(r).schedule.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config section 'optimizer'/'curriculum': ") + e.what());
  }
  return r;
}

Config to_config(const RunConfig& run) {
  Config c;
  for (const auto& spec : key_table()) c.set(spec.key, spec.get(run));
  return c;
}

std::uint64_t config_hash(const RunConfig& run) { return fnv1a64(to_config(run).canonical()); }

bvp::ProblemSpec build_problem(const RunConfig& r) {
  bvp::ProblemSpec p;
  const mat::Material material = build_material(r);
  if (r.preset == "affine") {
    p = oracle::affine_dirichlet_problem(r.affine_F, material);
    p.domain.box.lengths = r.lengths;
  } else if (r.preset == "nh_cantilever_traction") {
    p = bvp::nh_cantilever_traction(r.load, r.lengths);
  } else if (r.preset == "lp_cantilever_displacement") {
    p = bvp::lp_cantilever_displacement(r.load, r.lengths);
  } else if (r.preset == "nh_simple_shear") {
    p = bvp::nh_simple_shear(r.shear, r.lengths);
  } else if (r.preset == "nh_localized_traction") {
    p = bvp::nh_localized_traction(r.load, r.lengths);
  } else {
    throw UnknownPreset("unknown preset '" + r.preset + "'");
  }
  p.material = material;
  p.domain.counts = r.grid;
  p.mask = r.mask;
  p.body_force = r.body_force;
  p.validate();
  return p;
}

net::FieldNetwork build_network(const RunConfig& r) {
  return net::FieldNetwork(net::RffMap::sample(r.features, r.sigma, r.seed), r.hidden,
                           r.stress_scale);
}

ad::ParamVector initial_parameters(const RunConfig& r, const net::FieldNetwork& network) {
  ad::ParamVector phi = network.initialize(r.seed ^ 0x9e3779b97f4a7c15ULL);
  const std::size_t last = network.layout().layers().size() - 1;
  const std::size_t off = network.layout().weight_offset(last);
  const std::size_t fan_in = static_cast<std::size_t>(network.layout().layers()[last].fan_in);
  const std::size_t count = network.layout().layers()[last].weight_count();
  // rows 0-2 feed the displacement head, rows 3-11 the stress head
  for (std::size_t k = 0; k < count; ++k) {
    phi.values[off + k] *= k < 3 * fan_in ? r.output_init_scale : r.stress_init_scale;
  }
  return phi;
}

train::TrainerConfig trainer_config(const RunConfig& r) {
  train::TrainerConfig t;
  t.optimizer = r.method == "gd" ? train::Optimizer::GradientDescent : train::Optimizer::Lbfgs;
  t.lbfgs.history = r.history;
  t.lbfgs.max_iterations = r.max_iterations;
  t.lbfgs.gradient_tolerance = r.gradient_tolerance;
  t.lbfgs.initial_step = r.initial_step;
  t.lbfgs.line_search.c1 = r.c1;
  t.lbfgs.line_search.c2 = r.c2;
  t.lbfgs.line_search.max_probes = r.max_probes;
  t.gd.step = r.gd_step;
  t.gd.max_iterations = r.max_iterations;
  t.gd.gradient_tolerance = r.gradient_tolerance;
  t.schedule.fractions = r.schedule;
  t.evaluation.chunk_size = r.chunk_size;
  t.evaluation.threads = r.threads;
  t.record_wall_time = r.wall_time;
  return t;
}

std::filesystem::path output_directory(const RunConfig& r) {
  std::filesystem::path dir(r.output_dir);
  if (dir.is_absolute()) return dir;
  if (const char* root = std::getenv("HYPERPINN_OUTPUT_ROOT"); root != nullptr && *root != '\0') {
    return std::filesystem::path(root) / dir;
  }
  return dir;
}

}  // namespace hyperpinn::io
