#include "abcomm/bnp/network_params.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "abcomm/error.hpp"

namespace abcomm::bnp {

NetworkParams estimate_network_params(std::span<const int> labels,
                                      std::span<const traffic::TraceRecord> records,
                                      const NetworkParamOptions& options) {
  if (options.slot && !(*options.slot > 0.0)) throw DomainError("network params: slot must be > 0");
  if (!(options.link_rate > 0.0)) throw DomainError("network params: link rate must be > 0");
  if (!(options.density >= 0.0)) throw DomainError("network params: density must be >= 0");
  const auto series = traffic::group_by_pu(records);
  if (series.size() != labels.size()) {
    throw DomainError("network params: expected " + std::to_string(series.size()) +
                      " PU labels, got " + std::to_string(labels.size()));
  }
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t n = 0; n < labels.size(); ++n) members[labels[n]].push_back(n);

  NetworkParams out;
  const double total = static_cast<double>(series.size());
  int id = 0;
  for (const auto& [label, idx] : members) {
    TrafficPattern p;
    p.id = ++id;
    double gap_sum = 0.0, bytes = 0.0;
    std::size_t gaps = 0, packets = 0;
    for (auto n : idx) {
      const auto& s = series[n];
      p.member_pus.push_back(s.pu_id);
      for (std::size_t j = 1; j < s.timestamps.size(); ++j) gap_sum += s.timestamps[j] - s.timestamps[j - 1];
      gaps += s.timestamps.empty() ? 0 : s.timestamps.size() - 1;
      for (double len : s.lengths) bytes += len;
      packets += s.lengths.size();
    }
    p.interarrival = gaps ? gap_sum / static_cast<double>(gaps) : 0.0;
    if (!(p.interarrival > 0.0)) {
      throw DomainError("network params: degenerate pattern " + std::to_string(p.id) +
                        " (zero mean interarrival)");
    }
    p.airtime = 8.0 * (bytes / static_cast<double>(packets)) / options.link_rate;

    double pb_sum = 0.0;
    for (auto n : idx) {
      const auto& s = series[n];
      const double t0 = s.timestamps.front();
      const double slot = options.slot ? *options.slot : s.timestamps.back() - t0;
      if (!(slot > 0.0)) {
        throw DomainError("network params: PU " + std::to_string(s.pu_id) + " has an empty span");
      }
      double busy_gaps = 0.0;
      for (std::size_t j = 1; j < s.timestamps.size() && s.timestamps[j] - t0 <= slot; ++j) {
        busy_gaps += s.timestamps[j] - s.timestamps[j - 1];
      }
      const double rate = busy_gaps / p.interarrival;
      pb_sum += rate * p.airtime / slot;
    }
    p.busy_probability = pb_sum / static_cast<double>(idx.size());
    if (p.busy_probability > 1.0) {
      std::ostringstream msg;
      msg << "pattern " << p.id << ": busy probability " << p.busy_probability
          << " clamped to 1 (slot shorter than total airtime)";
      out.warnings.push_back(msg.str());
      p.busy_probability = 1.0;
    }
    p.portion = static_cast<double>(idx.size()) / total;
    p.density = p.portion * options.density;
    out.patterns.push_back(std::move(p));
  }
  return out;
}

std::vector<int> majority_labels(std::span<const int> point_labels, int num_pus, int observations) {
  if (num_pus < 0 || observations < 1 ||
      point_labels.size() != static_cast<std::size_t>(num_pus) * static_cast<std::size_t>(observations)) {
    throw DomainError("majority_labels: expected num_pus * observations labels");
  }
  std::vector<int> raw(static_cast<std::size_t>(num_pus));
  for (int n = 0; n < num_pus; ++n) {
    std::map<int, int> votes;
    for (int r = 0; r < observations; ++r) ++votes[point_labels[static_cast<std::size_t>(n * observations + r)]];
    int best = 0, best_count = -1;
    for (auto [label, c] : votes) {
      if (c > best_count) best = label, best_count = c;
    }
    raw[static_cast<std::size_t>(n)] = best;
  }
  std::map<int, int> remap;
  for (auto& z : raw) {
    auto it = remap.try_emplace(z, static_cast<int>(remap.size())).first;
    z = it->second;
  }
  return raw;
}

double matching_accuracy(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw DomainError("matching_accuracy: size mismatch");
  if (truth.empty()) return 1.0;
  std::map<int, int> tmap, pmap;
  for (int t : truth) tmap.try_emplace(t, static_cast<int>(tmap.size()));
  for (int p : predicted) pmap.try_emplace(p, static_cast<int>(pmap.size()));
  const int nt = static_cast<int>(tmap.size());
  const int np = static_cast<int>(pmap.size());
  if (nt > 20) throw DomainError("matching_accuracy: too many true classes");
  std::vector<std::vector<int>> count(static_cast<std::size_t>(np), std::vector<int>(static_cast<std::size_t>(nt), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) ++count[pmap[predicted[i]]][tmap[truth[i]]];

  // best[mask]: max matches using predicted clusters seen so far and true classes in mask
  const std::size_t full = std::size_t{1} << nt;
  std::vector<int> best(full, -1);
  best[0] = 0;
  for (int p = 0; p < np; ++p) {
    auto next = best;
    for (std::size_t mask = 0; mask < full; ++mask) {
      if (best[mask] < 0) continue;
      for (int t = 0; t < nt; ++t) {
        if (mask & (std::size_t{1} << t)) continue;
        const auto m2 = mask | (std::size_t{1} << t);
        next[m2] = std::max(next[m2], best[mask] + count[p][t]);
      }
    }
    best = std::move(next);
  }
  const int top = *std::max_element(best.begin(), best.end());
  return static_cast<double>(top) / static_cast<double>(truth.size());
}

}  // namespace abcomm::bnp
