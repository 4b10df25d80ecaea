#include "abcomm/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "abcomm/error.hpp"
#include "abcomm/rng.hpp"

namespace abcomm::traffic {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* what) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

double population_variance_step(double& mean, double& m2, double x, int count) {
  // Welford update; returns the divide-by-count variance after adding x.
  const double delta = x - mean;
  mean += delta / count;
  m2 += delta * (x - mean);
  return std::max(0.0, m2 / count);
}

}  // namespace

std::vector<PatternSpec> reference_patterns() {
  return {
      {"VoIP", 210.0, 72.4e-6, 0.0, 0.005 / 0.03},
      {"Game", 69.27, 67381e-6, 352.46, 0.010 / 0.03},
      {"UDP", 1512.0, 3034e-6, 0.0, 0.015 / 0.03},
  };
}

std::vector<TraceRecord> parse_trace(std::istream& in) {
  std::vector<TraceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (records.empty() && view.starts_with("pu_id")) continue;

    const auto fields = split(view, ',');
    if (fields.size() != 3 && fields.size() != 4) {
      throw ParseError(line_no, "expected 3 or 4 fields, got " + std::to_string(fields.size()));
    }
    TraceRecord rec;
    rec.pu_id = parse_number<int>(fields[0], line_no, "pu_id");
    rec.timestamp = parse_number<double>(fields[1], line_no, "timestamp");
    rec.length = parse_number<double>(fields[2], line_no, "length");
    if (fields.size() == 4 && !fields[3].empty()) {
      rec.true_pattern = parse_number<int>(fields[3], line_no, "true_pattern");
    }
    if (rec.pu_id < 0) throw ParseError(line_no, "pu_id must be non-negative");
    if (!std::isfinite(rec.timestamp)) throw ParseError(line_no, "timestamp must be finite");
    if (!(rec.length > 0.0) || !std::isfinite(rec.length)) {
      throw ValidationError("line " + std::to_string(line_no) + ": packet length must be > 0, got " +
                            std::string(fields[2]));
    }
    records.push_back(rec);
  }

  // Timestamps must already be non-decreasing per PU in file order.
  std::map<int, double> last_seen;
  for (const auto& rec : records) {
    auto [it, inserted] = last_seen.try_emplace(rec.pu_id, rec.timestamp);
    if (!inserted) {
      if (rec.timestamp < it->second) {
        throw ValidationError("non-monotone timestamps for pu_id " + std::to_string(rec.pu_id) +
                              " at t=" + std::to_string(rec.timestamp));
      }
      it->second = rec.timestamp;
    }
  }
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.pu_id != b.pu_id ? a.pu_id < b.pu_id : a.timestamp < b.timestamp;
  });
  return records;
}

std::vector<TraceRecord> parse_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace file " + path.string());
  return parse_trace(in);
}

void write_trace(std::ostream& out, std::span<const TraceRecord> records) {
  const bool labeled = std::any_of(records.begin(), records.end(),
                                   [](const auto& r) { return r.true_pattern.has_value(); });
  out << (labeled ? "pu_id,timestamp,length,true_pattern\n" : "pu_id,timestamp,length\n");
  char buf[64];
  for (const auto& r : records) {
    out << r.pu_id << ',';
    auto res = std::to_chars(buf, buf + sizeof buf, r.timestamp);
    out.write(buf, res.ptr - buf) << ',';
    res = std::to_chars(buf, buf + sizeof buf, r.length);
    out.write(buf, res.ptr - buf);
    if (labeled) {
      out << ',';
      if (r.true_pattern) out << *r.true_pattern;
    }
    out << '\n';
  }
}

std::vector<PuSeries> group_by_pu(std::span<const TraceRecord> records) {
  std::map<int, PuSeries> by_id;
  for (const auto& rec : records) {
    auto& series = by_id[rec.pu_id];
    series.pu_id = rec.pu_id;
    series.timestamps.push_back(rec.timestamp);
    series.lengths.push_back(rec.length);
    if (rec.true_pattern) series.true_pattern = rec.true_pattern;
  }
  std::vector<PuSeries> out;
  out.reserve(by_id.size());
  for (auto& [id, series] : by_id) {
    // Records may arrive unsorted when built in memory.
    if (!std::is_sorted(series.timestamps.begin(), series.timestamps.end())) {
      std::vector<std::size_t> order(series.timestamps.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return series.timestamps[a] < series.timestamps[b];
      });
      PuSeries sorted{series.pu_id, {}, {}, series.true_pattern};
      for (auto i : order) {
        sorted.timestamps.push_back(series.timestamps[i]);
        sorted.lengths.push_back(series.lengths[i]);
      }
      series = std::move(sorted);
    }
    out.push_back(std::move(series));
  }
  return out;
}

Eigen::MatrixXd ObservationMatrix::feature_points() const {
  const Eigen::Index r_count = observations();
  Eigen::MatrixXd points(pus() * r_count, 3);
  for (Eigen::Index n = 0; n < pus(); ++n) {
    points.middleRows(n * r_count, r_count) = values.middleCols(3 * n, 3);
  }
  return points;
}

ObservationMatrix extract_features(std::span<const TraceRecord> records, int observations) {
  if (observations < 1) throw DomainError("number of observations must be >= 1");
  const auto series = group_by_pu(records);
  ObservationMatrix obs;
  obs.values.resize(observations, 3 * static_cast<Eigen::Index>(series.size()));
  for (std::size_t n = 0; n < series.size(); ++n) {
    const auto& pu = series[n];
    if (pu.lengths.size() < static_cast<std::size_t>(observations) + 1) {
      throw ValidationError("pu_id " + std::to_string(pu.pu_id) + " has " +
                            std::to_string(pu.lengths.size()) + " packets; " +
                            std::to_string(observations + 1) + " required");
    }
    obs.pu_ids.push_back(pu.pu_id);
    double mean = 0.0, m2 = 0.0;
    const auto col = 3 * static_cast<Eigen::Index>(n);
    for (int r = 0; r < observations; ++r) {
      obs.values(r, col) = pu.lengths[r];
      obs.values(r, col + 1) = pu.timestamps[r + 1] - pu.timestamps[r];
      obs.values(r, col + 2) = population_variance_step(mean, m2, pu.lengths[r], r + 1);
    }
  }
  return obs;
}

void write_observations_csv(std::ostream& out, const ObservationMatrix& obs) {
  for (Eigen::Index n = 0; n < obs.pus(); ++n) {
    const auto id = std::to_string(obs.pu_ids[n]);
    out << (n ? "," : "") << "pu" << id << "_len,pu" << id << "_iat,pu" << id << "_var";
  }
  out << '\n';
  char buf[64];
  for (Eigen::Index r = 0; r < obs.observations(); ++r) {
    for (Eigen::Index c = 0; c < obs.values.cols(); ++c) {
      if (c) out << ',';
      auto res = std::to_chars(buf, buf + sizeof buf, obs.values(r, c));
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd z = x;
  const double rows = static_cast<double>(x.rows());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double mean = x.col(c).mean();
    z.col(c).array() -= mean;
    const double sd = std::sqrt(z.col(c).squaredNorm() / rows);
    if (sd > 0.0) z.col(c) /= sd;
  }
  return z;
}

std::vector<TraceRecord> synthesize_trace(std::span<const PatternSpec> specs, int num_pus,
                                          int observations, std::uint64_t seed) {
  if (num_pus < 1) throw DomainError("synthesize_trace: N must be >= 1");
  if (observations < 2) throw DomainError("synthesize_trace: R must be >= 2");
  if (specs.empty()) throw DomainError("synthesize_trace: no pattern specs");
  std::vector<double> weights;
  for (const auto& s : specs) {
    if (s.portion < 0.0 || s.mean_length < 0.0 || s.mean_interarrival < 0.0 ||
        s.length_variance < 0.0) {
      throw DomainError("pattern '" + s.name + "' has a negative field");
    }
    weights.push_back(s.portion);
  }
  if (std::accumulate(weights.begin(), weights.end(), 0.0) <= 0.0) {
    throw DomainError("degenerate pattern specs: all portions are zero");
  }

  std::vector<TraceRecord> records;
  records.reserve(static_cast<std::size_t>(num_pus) * (observations + 1));
  for (int n = 0; n < num_pus; ++n) {
    auto rng = make_rng(seed, 0x7472616365ULL, static_cast<std::uint64_t>(n));
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    const int k = pick(rng);
    const auto& spec = specs[k];
    std::normal_distribution<double> length(spec.mean_length, std::sqrt(spec.length_variance));
    std::exponential_distribution<double> gap(
        spec.mean_interarrival > 0.0 ? 1.0 / spec.mean_interarrival : 1.0);
    double t = 0.0;
    for (int p = 0; p <= observations; ++p) {
      if (p > 0 && spec.mean_interarrival > 0.0) t += gap(rng);
      double len = spec.mean_length;
      if (spec.length_variance > 0.0) {
        do len = length(rng); while (len < 1.0);
      }
      records.push_back({n, t, std::max(len, 1.0), k + 1});
    }
  }
  return records;
}

}  // namespace abcomm::traffic
