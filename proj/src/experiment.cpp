#include "abcomm/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "abcomm/analytics/selection.hpp"
#include "abcomm/bnp/mean_shift.hpp"
#include "abcomm/rng.hpp"
#include "abcomm/simcore.hpp"

namespace abcomm {

namespace {

constexpr std::uint64_t kTraceStream = 0x7472616365;
constexpr std::uint64_t kChainStream = 0x636861696e;
constexpr std::uint64_t kMcStream = 0x6d6f6e7465;

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

bool redraws_trace(const ExperimentConfig& c) { return c.axis == SweepAxis::pattern_density; }

std::vector<std::string> names_from_truth(std::span<const traffic::PuSeries> series, std::span<const int> labels,
                                          int clusters, std::span<const traffic::PatternSpec> specs) {
  std::vector<std::string> out;
  std::map<std::string, int> used;
  for (int k = 0; k < clusters; ++k) {
    std::map<int, int> votes;
    for (std::size_t n = 0; n < labels.size(); ++n) {
      if (labels[n] == k && series[n].true_pattern) ++votes[*series[n].true_pattern];
    }
    std::string name = "class" + std::to_string(k + 1);
    if (!votes.empty()) {
      const auto best = std::max_element(votes.begin(), votes.end(),
                                         [](const auto& a, const auto& b) { return a.second < b.second; });
      const int t = best->first - 1;
      name = t >= 0 && static_cast<std::size_t>(t) < specs.size() ? specs[t].name
                                                                   : "pattern" + std::to_string(best->first);
    }
    const int seen = used[name]++;
    if (seen > 0) name += "#" + std::to_string(seen + 1);
    out.push_back(name);
  }
  return out;
}

}  // namespace

std::vector<traffic::PatternSpec> specs_for_density(const ExperimentConfig& config, double value) {
  auto specs = config.patterns;
  const double target = value / config.network.density;
  double others = 0.0;
  for (const auto& s : specs) {
    if (s.name != config.sweep_pattern) others += s.portion;
  }
  for (auto& s : specs) {
    if (s.name == config.sweep_pattern) {
      s.portion = target;
    } else {
      if (!(others > 0.0)) throw DomainError("density sweep: the other classes have zero portion");
      s.portion = s.portion / others * (1.0 - target);
    }
  }
  return specs;
}

std::vector<traffic::TraceRecord> build_trace(const ExperimentConfig& config, std::size_t index) {
  if (config.source == TraceSource::file) return traffic::parse_trace(config.trace_path);
  const auto specs = redraws_trace(config) ? specs_for_density(config, config.values.at(index)) : config.patterns;
  const auto seed = derive_seed(config.seed, kTraceStream, redraws_trace(config) ? index : 0);
  return traffic::synthesize_trace(specs, config.num_pus, config.observations, seed);
}

Classification classify(std::span<const traffic::TraceRecord> records, const ExperimentConfig& config,
                        Classifier method) {
  const auto series = traffic::group_by_pu(records);
  Classification out;
  out.method = method;
  for (const auto& s : series) out.pu_ids.push_back(s.pu_id);
  const int n = static_cast<int>(series.size());

  if (method == Classifier::oracle) {
    std::map<int, int> remap;
    for (const auto& s : series) {
      if (!s.true_pattern) {
        throw ValidationError("oracle classifier needs true_pattern labels (PU " + std::to_string(s.pu_id) + ")");
      }
      remap.emplace(*s.true_pattern, 0);
    }
    int next = 0;
    for (auto& [k, v] : remap) v = next++;
    for (const auto& s : series) out.pu_labels.push_back(remap[*s.true_pattern]);
    out.clusters = next;
    for (const auto& [k, v] : remap) {
      const int t = k - 1;
      out.class_names.push_back(t >= 0 && static_cast<std::size_t>(t) < config.patterns.size()
                                    ? config.patterns[t].name
                                    : "pattern" + std::to_string(k));
    }
    return out;
  }

  const auto obs = traffic::extract_features(records, config.observations);
  Eigen::MatrixXd y = obs.feature_points();
  if (config.standardize) y = traffic::standardize_columns(y);
  std::vector<int> point_labels;
  if (method == Classifier::gibbs) {
    auto opt = config.gibbs;
    opt.seed = derive_seed(config.seed, kChainStream, 0);
    opt.keep_labels = false;
    auto chain = bnp::run_chain(y, bnp::NIWHyperparams::defaults(3), opt);
    point_labels = chain.map_labels;
    out.point_clusters = chain.map_clusters;
    out.chain = std::move(chain);
  } else {
    auto ms = bnp::mean_shift(y, config.mean_shift_bandwidth);
    point_labels = ms.labels;
    out.point_clusters = static_cast<int>(ms.modes.rows());
  }
  out.pu_labels = bnp::majority_labels(point_labels, n, config.observations);
  out.clusters = out.pu_labels.empty() ? 0 : *std::max_element(out.pu_labels.begin(), out.pu_labels.end()) + 1;
  out.class_names = names_from_truth(series, out.pu_labels, out.clusters, config.patterns);
  return out;
}

std::vector<analytics::PatternInput> pattern_inputs(const bnp::NetworkParams& params, const Classification& classes) {
  // estimate_network_params orders classes by label, so ids follow class_names
  std::vector<analytics::PatternInput> out;
  for (const auto& p : params.patterns) {
    const auto idx = static_cast<std::size_t>(p.id - 1);
    const std::string name = idx < classes.class_names.size() ? classes.class_names[idx] : "class" + std::to_string(p.id);
    out.push_back({name, p.busy_probability, p.portion});
  }
  return out;
}

void write_classification(const std::filesystem::path& dir, const Classification& classes,
                          const bnp::NetworkParams& params) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "labels.csv");
    f << "pu_id,label,class\n";
    for (std::size_t n = 0; n < classes.pu_ids.size(); ++n) {
      const int k = classes.pu_labels[n];
      f << classes.pu_ids[n] << ',' << k + 1 << ',' << classes.class_names.at(static_cast<std::size_t>(k)) << '\n';
    }
  }
  if (classes.chain) {
    std::ofstream f(dir / "chain.csv");
    f << "sweep,K,log_score,alpha\n";
    for (const auto& s : classes.chain->sweeps) {
      f << s.sweep << ',' << s.clusters << ',' << num(s.log_score) << ',' << num(s.alpha) << '\n';
    }
  }
  std::ofstream f(dir / "patterns.csv");
  f << "k,class,busy_probability,portion,density,airtime_s,interarrival_s,members\n";
  for (const auto& p : params.patterns) {
    const auto idx = static_cast<std::size_t>(p.id - 1);
    f << p.id << ',' << (idx < classes.class_names.size() ? classes.class_names[idx] : "") << ','
      << num(p.busy_probability) << ',' << num(p.portion) << ',' << num(p.density) << ',' << num(p.airtime) << ','
      << num(p.interarrival) << ',' << p.member_pus.size() << '\n';
  }
}

RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  std::filesystem::create_directories(config.output_dir);
  const auto hash = hash_hex(config_hash(config));
  {
    auto echo = config.normalized;
    echo["config_hash"] = hash;
    std::ofstream f(config.output_dir / "config.normalized.json");
    f << echo.dump(2) << '\n';
  }

  RunSummary summary;
  summary.table = config.output_dir / options.table;
  const auto partial = std::filesystem::path(summary.table.string() + ".partial");
  std::ofstream out(partial, std::ios::trunc);
  if (!out) throw Error("cannot write " + partial.string());
  out << "config_hash,seed,sweep_axis,sweep_value,classifier,clusters,rule,k,pattern,selected,tie,alpha,path_loss,"
         "density,busy_probability,a_mu";
  if (options.analytic) out << ",outage,coverage";
  if (options.monte_carlo) out << ",mc_outage,mc_outage_se,mc_coverage,mc_coverage_se";
  out << '\n';

  std::vector<traffic::TraceRecord> trace;
  std::map<Classifier, std::pair<Classification, bnp::NetworkParams>> cache;

  for (std::size_t i = 0; i < config.values.size(); ++i) {
    const double value = config.values[i];
    try {
      if (i == 0 || redraws_trace(config)) {
        trace = build_trace(config, i);
        cache.clear();
      }
      analytics::AnalyticsConfig ac;
      ac.budget = config.budget;
      ac.density = config.network.density;
      ac.window_radius = config.window_radius;
      double alpha = config.alpha;
      if (config.axis == SweepAxis::path_loss) ac.budget.path_loss = value;
      if (config.axis == SweepAxis::alpha) alpha = value;
      const analytics::Analyzer analyzer(ac);

      for (auto method : config.classifiers) {
        auto it = cache.find(method);
        if (it == cache.end()) {
          auto classes = classify(trace, config, method);
          auto params = bnp::estimate_network_params(classes.pu_labels, trace, config.network);
          for (const auto& w : params.warnings) summary.warnings.push_back(w);
          it = cache.emplace(method, std::make_pair(std::move(classes), std::move(params))).first;
        }
        const auto& [classes, params] = it->second;
        const auto inputs = pattern_inputs(params, classes);

        std::vector<analytics::PatternAnalytics> rows;
        for (std::size_t k = 0; k < inputs.size(); ++k) {
          if (options.analytic) {
            rows.push_back(analyzer.analyze(inputs[k], alpha, k));
          } else {
            analytics::PatternAnalytics a;
            const auto m = analyzer.model(inputs[k]);
            a.index = k;
            a.name = inputs[k].name;
            a.alpha = alpha;
            a.path_loss = m.path_loss;
            a.density = m.class_density();
            a.busy_probability = inputs[k].busy_probability;
            a.power = m.power;
            a.a_mu = analytics::a_mu(m.path_loss, a.density, a.power);
            rows.push_back(a);
          }
        }
        simcore::McResult mc;
        if (options.monte_carlo) {
          simcore::SimulationConfig sc;
          sc.budget = ac.budget;
          sc.density = ac.density;
          sc.alpha = alpha;
          sc.window_radius = ac.window_radius;
          sc.patterns = inputs;
          mc = simcore::mc_metrics(sc, config.trials, derive_seed(config.seed, kMcStream, i), config.threads);
          if (mc.guarded_points > 0) {
            summary.warnings.push_back("sweep value " + num(value) + ": " + std::to_string(mc.guarded_points) +
                                       " points moved to the origin guard radius");
          }
        }

        struct Rule {
          const char* name;
          analytics::Selection pick;
        };
        std::vector<Rule> rules;
        if (options.analytic) {
          rules.push_back({"claim", analytics::select_traffic_claim(rows)});
          rules.push_back({"exhaustive", analytics::select_traffic_exhaustive(rows)});
        } else {
          rules.push_back({"claim", analytics::select_traffic_claim(rows)});
        }
        for (const auto& rule : rules) {
          for (const auto& r : rows) {
            out << hash << ',' << config.seed << ',' << to_string(config.axis) << ',' << num(value) << ','
                << to_string(method) << ',' << classes.clusters << ',' << rule.name << ',' << r.index + 1 << ','
                << r.name << ',' << (r.index == rule.pick.index) << ',' << rule.pick.tie << ',' << num(r.alpha)
                << ',' << num(r.path_loss) << ',' << num(r.density) << ',' << num(r.busy_probability) << ','
                << num(r.a_mu);
            if (options.analytic) out << ',' << num(r.outage) << ',' << num(r.coverage);
            if (options.monte_carlo) {
              const auto& e = mc.patterns[r.index];
              out << ',' << num(e.outage) << ',' << num(e.outage_se) << ',' << num(e.coverage) << ','
                  << num(e.coverage_se);
            }
            out << '\n';
            ++summary.rows;
          }
        }
        out.flush();
      }
    } catch (const NumericalError& e) {
      throw NumericalError("sweep value " + num(value) + ": " + e.what());
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ValidationError("sweep value " + num(value) + ": " + e.what());
    } catch (const DomainError& e) {
      throw DomainError("sweep value " + num(value) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("sweep value " + num(value) + ": " + e.what());
    }
  }
  out.close();
  std::filesystem::rename(partial, summary.table);
  return summary;
}

}  // namespace abcomm
