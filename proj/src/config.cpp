#include "oim/config.hpp"

#include <filesystem>
#include <set>

#include "oim/error.hpp"
#include "oim/io.hpp"

namespace oim {

using nlohmann::json;

MaxCutInstance InstanceSource::load() const {
  if (graph_path) return read_graph_file(*graph_path);
  return random_instance(n, density, weights, seed);
}

std::vector<std::uint64_t> RunConfig::seeds() const {
  std::vector<std::uint64_t> out(seed_count);
  for (std::size_t k = 0; k < seed_count; ++k) out[k] = seed_base + k;
  return out;
}

DynamicsConfig RunConfig::resolved_dynamics(std::size_t n, double default_noise) const {
  DynamicsConfig d = dynamics;
  if (natural_freq_spread > 0.0) {
    d.natural_freqs = centered_normal_frequencies(n, natural_freq_spread, natural_freq_seed);
  }
  d.noise_amplitude = noise_amplitude.value_or(default_noise);
  return d;
}

void RunConfig::validate() const {
  dynamics.validate(dynamics.natural_freqs.empty() ? 1 : dynamics.natural_freqs.size());
  if (!std::isfinite(natural_freq_spread) || natural_freq_spread < 0.0) {
    throw ParameterError("natural_freq_spread must be finite and >= 0");
  }
  if (noise_amplitude && (!std::isfinite(*noise_amplitude) || *noise_amplitude < 0.0)) {
    throw ParameterError("noise_amplitude must be finite and >= 0");
  }
  integrator.validate();
  lock.validate();
  if (seed_count == 0) throw ParameterError("seeds.count must be positive");
  if (attempts == 0) throw ParameterError("solve.attempts must be positive");
  if (!instance.graph_path) {
    if (instance.n < 2) throw ParameterError("instance.n must be >= 2");
    if (!(instance.density > 0.0 && instance.density <= 1.0)) {
      throw ParameterError("instance.density must lie in (0, 1]");
    }
  }
}

namespace {

// Rejects keys outside `allowed`; `where` names the section in messages.
void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ParseError(0, "config: '" + where + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ParseError(0, "config: unknown key '" + where + "." + key + "'");
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ParseError(0, "");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0)) {
        throw ParseError(0, "");
      }
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ParseError(0, "");
    }
    out = v.get<T>();
  } catch (const std::exception&) {
    throw ParseError(0, "config: '" + where + "." + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig parse_run_config(const json& doc, const std::string& base_dir) {
  RunConfig cfg;
  check_keys(doc, {"instance", "dynamics", "integrator", "lock", "seeds", "sweep", "solve"},
             "<root>");

  try {
    if (doc.contains("instance")) {
      const auto& s = doc["instance"];
      check_keys(s, {"graph", "n", "density", "weights", "seed"}, "instance");
      if (s.contains("graph")) {
        std::string path;
        read(s, "graph", path, "instance");
        std::filesystem::path p(path);
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        cfg.instance.graph_path = p.lexically_normal().string();
      }
      read(s, "n", cfg.instance.n, "instance");
      read(s, "density", cfg.instance.density, "instance");
      read(s, "seed", cfg.instance.seed, "instance");
      if (s.contains("weights")) {
        std::string w;
        read(s, "weights", w, "instance");
        cfg.instance.weights = parse_weight_set(w);
      }
    }

    if (doc.contains("dynamics")) {
      const auto& s = doc["dynamics"];
      check_keys(s,
                 {"sigma", "kappa_s", "mode", "variant", "natural_freqs", "natural_freq_spread",
                  "natural_freq_seed", "injection_phase", "injection_detuning",
                  "noise_amplitude"},
                 "dynamics");
      auto& d = cfg.dynamics;
      read(s, "sigma", d.sigma, "dynamics");
      read(s, "kappa_s", d.kappa_s, "dynamics");
      if (s.contains("mode")) {
        std::string m;
        read(s, "mode", m, "dynamics");
        d.mode = parse_mode(m);
      }
      if (s.contains("variant")) {
        std::string v;
        read(s, "variant", v, "dynamics");
        d.variant = parse_variant(v);
      }
      if (s.contains("natural_freqs")) {
        const auto& arr = s["natural_freqs"];
        if (!arr.is_array()) throw ParseError(0, "config: 'dynamics.natural_freqs' must be an array");
        for (const auto& x : arr) {
          if (!x.is_number()) throw ParseError(0, "config: natural_freqs entries must be numbers");
          d.natural_freqs.push_back(x.get<double>());
        }
      }
      read(s, "natural_freq_spread", cfg.natural_freq_spread, "dynamics");
      read(s, "natural_freq_seed", cfg.natural_freq_seed, "dynamics");
      read(s, "injection_phase", d.injection_phase, "dynamics");
      read(s, "injection_detuning", d.injection_detuning, "dynamics");
      if (s.contains("noise_amplitude")) {
        double noise = 0.0;
        read(s, "noise_amplitude", noise, "dynamics");
        cfg.noise_amplitude = noise;
      }
    }

    if (doc.contains("integrator")) {
      const auto& s = doc["integrator"];
      check_keys(s, {"dt", "t_end", "record_every"}, "integrator");
      read(s, "dt", cfg.integrator.dt, "integrator");
      read(s, "t_end", cfg.integrator.t_end, "integrator");
      read(s, "record_every", cfg.integrator.record_every, "integrator");
    }

    if (doc.contains("lock")) {
      const auto& s = doc["lock"];
      check_keys(s, {"threshold", "hold_samples"}, "lock");
      read(s, "threshold", cfg.lock.threshold, "lock");
      read(s, "hold_samples", cfg.lock.hold_samples, "lock");
    }

    if (doc.contains("seeds")) {
      const auto& s = doc["seeds"];
      check_keys(s, {"base", "count"}, "seeds");
      read(s, "base", cfg.seed_base, "seeds");
      read(s, "count", cfg.seed_count, "seeds");
    }

    if (doc.contains("sweep")) {
      const auto& s = doc["sweep"];
      check_keys(s, {"parameter", "values", "modes"}, "sweep");
      if (s.contains("parameter")) {
        std::string p;
        read(s, "parameter", p, "sweep");
        cfg.sweep_parameter = parse_sweep_parameter(p);
      }
      if (s.contains("values")) {
        const auto& arr = s["values"];
        if (!arr.is_array()) throw ParseError(0, "config: 'sweep.values' must be an array");
        cfg.sweep_values.clear();
        for (const auto& x : arr) {
          if (!x.is_number()) throw ParseError(0, "config: sweep values must be numbers");
          cfg.sweep_values.push_back(x.get<double>());
        }
      }
      if (s.contains("modes")) {
        const auto& arr = s["modes"];
        if (!arr.is_array()) throw ParseError(0, "config: 'sweep.modes' must be an array");
        cfg.sweep_modes.clear();
        for (const auto& x : arr) {
          if (!x.is_string()) throw ParseError(0, "config: sweep modes must be strings");
          cfg.sweep_modes.push_back(parse_mode(x.get<std::string>()));
        }
      }
    }

    if (doc.contains("solve")) {
      const auto& s = doc["solve"];
      check_keys(s, {"attempts"}, "solve");
      read(s, "attempts", cfg.attempts, "solve");
    }

    cfg.validate();
  } catch (const ParameterError& e) {
    throw ParseError(0, std::string("config: ") + e.what());
  } catch (const DimensionError& e) {
    throw ParseError(0, std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError&) {
    throw ParseError(0, "cannot read config file " + path);
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, "config " + path + ": " + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_run_config(doc, dir);
}

json to_json(const RunConfig& cfg) {
  json instance;
  if (cfg.instance.graph_path) {
    instance = {{"graph", *cfg.instance.graph_path}};
  } else {
    instance = {{"n", cfg.instance.n},
                {"density", cfg.instance.density},
                {"weights", to_string(cfg.instance.weights)},
                {"seed", cfg.instance.seed}};
  }
  const auto& d = cfg.dynamics;
  json dynamics = {{"sigma", d.sigma},
                   {"kappa_s", d.kappa_s},
                   {"mode", to_string(d.mode)},
                   {"variant", to_string(d.variant)},
                   {"natural_freqs", d.natural_freqs},
                   {"natural_freq_spread", cfg.natural_freq_spread},
                   {"natural_freq_seed", cfg.natural_freq_seed},
                   {"injection_phase", d.injection_phase},
                   {"injection_detuning", d.injection_detuning}};
  if (cfg.noise_amplitude) dynamics["noise_amplitude"] = *cfg.noise_amplitude;

  json modes = json::array();
  for (auto m : cfg.sweep_modes) modes.push_back(to_string(m));

  return {{"instance", instance},
          {"dynamics", dynamics},
          {"integrator",
           {{"dt", cfg.integrator.dt},
            {"t_end", cfg.integrator.t_end},
            {"record_every", cfg.integrator.record_every}}},
          {"lock", {{"threshold", cfg.lock.threshold}, {"hold_samples", cfg.lock.hold_samples}}},
          {"seeds", {{"base", cfg.seed_base}, {"count", cfg.seed_count}}},
          {"sweep",
           {{"parameter", to_string(cfg.sweep_parameter)},
            {"values", cfg.sweep_values},
            {"modes", modes}}},
          {"solve", {{"attempts", cfg.attempts}}}};
}

}  // namespace oim
