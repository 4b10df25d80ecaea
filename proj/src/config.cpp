#include "abcomm/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "abcomm/units.hpp"

namespace abcomm {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
  return s;
}

// Reads optional typed fields, collecting type errors instead of throwing.
class Reader {
 public:
  Reader(const json& j, std::string prefix, std::vector<std::string>& issues)
      : j_(j), prefix_(std::move(prefix)), issues_(issues) {}

  template <typename T>
  T get(const char* key, T fallback) {
    if (!j_.is_object() || !j_.contains(key) || j_.at(key).is_null()) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      issues_.push_back(field(key) + ": wrong type");
      return fallback;
    }
  }

  const json& sub(const char* key) const {
    static const json empty = json::object();
    if (j_.is_object() && j_.contains(key) && j_.at(key).is_object()) return j_.at(key);
    return empty;
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key) && !j_.at(key).is_null(); }
  std::string field(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string>& issues_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : ValidationError("invalid configuration: " + join(issues)), issues_(std::move(issues)) {}

const char* to_string(Classifier c) {
  switch (c) {
    case Classifier::oracle: return "oracle";
    case Classifier::gibbs: return "gibbs";
    case Classifier::mean_shift: return "mean_shift";
  }
  return "?";
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::path_loss: return "path_loss";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::pattern_density: return "pattern_density";
  }
  return "?";
}

ExperimentConfig validate_config(const json& raw) {
  std::vector<std::string> issues;
  ExperimentConfig c;
  if (!raw.is_object()) throw ConfigError({"<root>: expected a JSON object"});
  Reader top(raw, "", issues);

  c.name = top.get<std::string>("name", c.name);
  c.seed = top.get<std::uint64_t>("seed", c.seed);
  c.trials = top.get<long long>("trials", c.trials);
  c.threads = top.get<int>("threads", c.threads);
  c.output_dir = top.get<std::string>("output_dir", c.output_dir.string());
  if (c.trials < 1) issues.push_back("trials: must be >= 1");
  if (c.threads < 1) issues.push_back("threads: must be >= 1");

  // traffic
  Reader tr(top.sub("traffic"), "traffic", issues);
  const auto source = tr.get<std::string>("source", "synthetic");
  if (source == "synthetic") {
    c.source = TraceSource::synthetic;
  } else if (source == "file") {
    c.source = TraceSource::file;
    c.trace_path = tr.get<std::string>("path", "");
    if (c.trace_path.empty()) issues.push_back("traffic.path: required when traffic.source is \"file\"");
  } else {
    issues.push_back("traffic.source: expected \"synthetic\" or \"file\"");
  }
  c.num_pus = tr.get<int>("num_pus", c.num_pus);
  c.observations = tr.get<int>("observations", c.observations);
  if (c.source == TraceSource::synthetic && c.num_pus < 1) issues.push_back("traffic.num_pus: must be >= 1");
  if (c.observations < 2) issues.push_back("traffic.observations: must be >= 2");
  if (tr.has("patterns")) {
    const auto& arr = top.sub("traffic").at("patterns");
    if (!arr.is_array()) {
      issues.push_back("traffic.patterns: expected an array");
    } else {
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Reader p(arr[i], "traffic.patterns[" + std::to_string(i) + "]", issues);
        traffic::PatternSpec s;
        s.name = p.get<std::string>("name", "class" + std::to_string(i + 1));
        s.mean_length = p.get<double>("mean_length_bytes", -1.0);
        s.mean_interarrival = p.get<double>("mean_interarrival_us", -1.0) * 1e-6;
        s.length_variance = p.get<double>("length_variance_bytes2", 0.0);
        s.portion = p.get<double>("portion", -1.0);
        if (p.has("density_per_m2")) s.portion = p.get<double>("density_per_m2", 0.0);
        if (!(s.mean_length > 0)) issues.push_back(p.field("mean_length_bytes") + ": must be > 0");
        if (!(s.mean_interarrival > 0)) issues.push_back(p.field("mean_interarrival_us") + ": must be > 0");
        if (!(s.length_variance >= 0)) issues.push_back(p.field("length_variance_bytes2") + ": must be >= 0");
        if (!(s.portion >= 0)) issues.push_back(p.field("portion") + ": must be >= 0");
        c.patterns.push_back(s);
      }
    }
  } else {
    c.patterns = traffic::reference_patterns();
  }

  // network
  Reader nw(top.sub("network"), "network", issues);
  c.network.density = nw.get<double>("density_per_m2", c.network.density);
  c.network.link_rate = nw.get<double>("link_rate_bps", c.network.link_rate);
  if (nw.has("slot_s")) c.network.slot = nw.get<double>("slot_s", 0.0);
  if (!(c.network.density > 0)) issues.push_back("network.density_per_m2: must be > 0");
  if (!(c.network.link_rate > 0)) issues.push_back("network.link_rate_bps: must be > 0");
  if (c.network.slot && !(*c.network.slot > 0)) issues.push_back("network.slot_s: must be > 0");

  // portions may be given as densities; normalize to l_k
  if (c.source == TraceSource::synthetic) {
    double total = 0.0;
    for (const auto& s : c.patterns) total += std::max(s.portion, 0.0);
    if (c.patterns.empty()) issues.push_back("traffic.patterns: at least one pattern required");
    else if (!(total > 0)) issues.push_back("traffic.patterns: portions must not all be zero");
    else
      for (auto& s : c.patterns) s.portion /= total;
  }

  // classification
  if (top.has("classifier")) {
    std::vector<std::string> names;
    const auto& v = raw.at("classifier");
    if (v.is_string()) names.push_back(v.get<std::string>());
    else if (v.is_array()) for (const auto& x : v) names.push_back(x.is_string() ? x.get<std::string>() : "");
    else issues.push_back("classifier: expected a string or an array of strings");
    c.classifiers.clear();
    for (const auto& n : names) {
      if (n == "oracle") c.classifiers.push_back(Classifier::oracle);
      else if (n == "gibbs") c.classifiers.push_back(Classifier::gibbs);
      else if (n == "mean_shift") c.classifiers.push_back(Classifier::mean_shift);
      else issues.push_back("classifier: unknown value \"" + n + "\" (oracle, gibbs, mean_shift)");
    }
    if (c.classifiers.empty() && names.empty()) issues.push_back("classifier: at least one required");
  }
  Reader gb(top.sub("gibbs"), "gibbs", issues);
  c.gibbs.sweeps = gb.get<int>("sweeps", c.gibbs.sweeps);
  c.gibbs.burn_in = gb.get<int>("burn_in", c.gibbs.burn_in);
  c.gibbs.alpha = gb.get<double>("concentration", c.gibbs.alpha);
  c.gibbs.resample_alpha = gb.get<bool>("resample_concentration", c.gibbs.resample_alpha);
  c.standardize = gb.get<bool>("standardize", c.standardize);
  if (!(c.gibbs.burn_in >= 0 && c.gibbs.sweeps > c.gibbs.burn_in)) {
    issues.push_back("gibbs.sweeps: must exceed gibbs.burn_in >= 0");
  }
  if (!(c.gibbs.alpha > 0)) issues.push_back("gibbs.concentration: must be > 0");
  Reader ms(top.sub("mean_shift"), "mean_shift", issues);
  c.mean_shift_bandwidth = ms.get<double>("bandwidth", c.mean_shift_bandwidth);
  if (!(c.mean_shift_bandwidth > 0)) issues.push_back("mean_shift.bandwidth: must be > 0");

  // link budget
  Reader lb(top.sub("link_budget"), "link_budget", issues);
  auto& b = c.budget;
  const double ghz = lb.get<double>("frequency_ghz", 1.8);
  if (!(ghz > 0)) issues.push_back("link_budget.frequency_ghz: must be > 0");
  else b.wavelength = units::wavelength_from_ghz(ghz);
  b.pu_power = lb.get<double>("pu_power_w", 0.2);
  b.pu_gain = units::db_to_linear(lb.get<double>("pu_gain_dbi", 6.0));
  b.st_gain = units::db_to_linear(lb.get<double>("st_gain_dbi", 1.8));
  b.sr_gain = units::db_to_linear(lb.get<double>("sr_gain_dbi", 1.8));
  b.max_reflected = lb.get<double>("max_reflected_w", 0.2);
  b.activation = units::dbm_to_watt(lb.get<double>("rho_b_dbm", -36.0));
  b.snr_threshold = units::db_to_linear(lb.get<double>("tau_b_db", 3.0));
  b.link_distance = lb.get<double>("d_tr_m", 3.0);
  b.reference_distance = lb.get<double>("d0_m", 1.0);
  const double bandwidth = lb.get<double>("bandwidth_hz", 1.0);
  b.noise_power = units::dbm_to_watt(lb.get<double>("noise_psd_dbm_per_hz", -130.0)) * bandwidth;
  b.efficiency = lb.get<double>("efficiency", 0.6);
  b.path_loss = top.get<double>("path_loss", 4.0);
  if (!(bandwidth > 0)) issues.push_back("link_budget.bandwidth_hz: must be > 0");
  if (!(b.pu_power > 0)) issues.push_back("link_budget.pu_power_w: must be > 0");
  if (!(b.max_reflected > 0)) issues.push_back("link_budget.max_reflected_w: must be > 0");
  if (!(b.link_distance > 0)) issues.push_back("link_budget.d_tr_m: must be > 0");
  if (!(b.reference_distance > 0)) issues.push_back("link_budget.d0_m: must be > 0");
  if (!(b.efficiency > 0 && b.efficiency <= 1)) issues.push_back("link_budget.efficiency: must lie in (0, 1]");
  if (!(b.path_loss > 2)) issues.push_back("path_loss: must exceed 2 (the shot-noise integral diverges for mu <= 2)");

  Reader geo(top.sub("geometry"), "geometry", issues);
  c.window_radius = geo.get<double>("window_radius_m", c.window_radius);
  if (!(c.window_radius > 0)) issues.push_back("geometry.window_radius_m: must be > 0");
  c.alpha = top.get<double>("alpha", c.alpha);

  auto check_alpha = [&](double a, const std::string& where) {
    if (!(a >= -1.0 && a <= 0.0)) {
      issues.push_back(where + ": must lie in [-1, 0]");
      return;
    }
    if (a != 0.0) {
      const double m = -1.0 / a;
      if (std::abs(m - std::round(m)) > 1e-9 * m) {
        issues.push_back(where + ": Monte Carlo needs alpha = 0 or -1/m for a positive integer m");
      }
    }
  };

  // sweep
  if (!top.has("sweep")) {
    issues.push_back("sweep: exactly one sweep axis is required");
  } else {
    const auto& sw = raw.at("sweep");
    if (sw.is_array()) {
      issues.push_back("sweep: exactly one sweep axis is allowed");
    } else {
      Reader s(sw, "sweep", issues);
      const auto axis = s.get<std::string>("axis", "");
      if (axis == "path_loss") c.axis = SweepAxis::path_loss;
      else if (axis == "alpha") c.axis = SweepAxis::alpha;
      else if (axis == "pattern_density") c.axis = SweepAxis::pattern_density;
      else issues.push_back("sweep.axis: expected path_loss, alpha or pattern_density");
      c.values = s.get<std::vector<double>>("values", {});
      if (c.values.empty()) issues.push_back("sweep.values: at least one value required");
      c.sweep_pattern = s.get<std::string>("pattern", "");
      for (std::size_t i = 0; i < c.values.size(); ++i) {
        const std::string where = "sweep.values[" + std::to_string(i) + "]";
        const double v = c.values[i];
        if (c.axis == SweepAxis::path_loss && !(v > 2)) {
          issues.push_back(where + ": path loss exponent must exceed 2 (the shot-noise integral diverges for mu <= 2)");
        }
        if (c.axis == SweepAxis::alpha) check_alpha(v, where);
        if (c.axis == SweepAxis::pattern_density && !(v >= 0 && v <= c.network.density)) {
          issues.push_back(where + ": class density must lie in [0, network.density_per_m2]");
        }
      }
      if (c.axis == SweepAxis::pattern_density) {
        if (c.source != TraceSource::synthetic) issues.push_back("sweep.axis: pattern_density needs synthetic traffic");
        bool found = false;
        for (const auto& p : c.patterns) found = found || p.name == c.sweep_pattern;
        if (!found) issues.push_back("sweep.pattern: must name one of traffic.patterns");
      }
    }
  }
  if (c.axis != SweepAxis::alpha) check_alpha(c.alpha, "alpha");
  if (issues.empty()) {
    try {
      c.budget.validate();
    } catch (const DomainError& e) {
      issues.push_back(std::string("link_budget: ") + e.what());
    }
  }
  if (!issues.empty()) throw ConfigError(issues);

  json n;
  n["name"] = c.name;
  n["seed"] = c.seed;
  n["trials"] = c.trials;
  n["threads"] = c.threads;
  n["output_dir"] = c.output_dir.string();
  json t;
  t["source"] = c.source == TraceSource::synthetic ? "synthetic" : "file";
  if (c.source == TraceSource::file) t["path"] = c.trace_path.string();
  t["num_pus"] = c.num_pus;
  t["observations"] = c.observations;
  for (const auto& p : c.patterns) {
    t["patterns"].push_back({{"name", p.name},
                             {"mean_length_bytes", p.mean_length},
                             {"mean_interarrival_s", p.mean_interarrival},
                             {"length_variance_bytes2", p.length_variance},
                             {"portion", p.portion}});
  }
  n["traffic"] = t;
  for (auto cl : c.classifiers) n["classifier"].push_back(to_string(cl));
  n["gibbs"] = {{"sweeps", c.gibbs.sweeps},
                {"burn_in", c.gibbs.burn_in},
                {"concentration", c.gibbs.alpha},
                {"resample_concentration", c.gibbs.resample_alpha},
                {"standardize", c.standardize}};
  n["mean_shift"] = {{"bandwidth", c.mean_shift_bandwidth}};
  n["network"] = {{"density_per_m2", c.network.density}, {"link_rate_bps", c.network.link_rate}};
  if (c.network.slot) n["network"]["slot_s"] = *c.network.slot;
  n["link_budget"] = {{"wavelength_m", b.wavelength},
                      {"pu_power_w", b.pu_power},
                      {"pu_gain_linear", b.pu_gain},
                      {"st_gain_linear", b.st_gain},
                      {"sr_gain_linear", b.sr_gain},
                      {"max_reflected_w", b.max_reflected},
                      {"rho_b_w", b.activation},
                      {"tau_b_linear", b.snr_threshold},
                      {"d_tr_m", b.link_distance},
                      {"d0_m", b.reference_distance},
                      {"noise_power_w", b.noise_power},
                      {"efficiency", b.efficiency}};
  n["path_loss"] = b.path_loss;
  n["alpha"] = c.alpha;
  n["geometry"] = {{"window_radius_m", c.window_radius}};
  n["sweep"] = {{"axis", to_string(c.axis)}, {"values", c.values}};
  if (c.axis == SweepAxis::pattern_density) n["sweep"]["pattern"] = c.sweep_pattern;
  c.normalized = std::move(n);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open " + path.string()});
  json raw;
  try {
    raw = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config: ") + e.what()});
  }
  return validate_config(raw);
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  const std::string text = config.normalized.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << h;
  return s.str();
}

}  // namespace abcomm
