#include "srz/fuel_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

namespace srz {

double fuel_rate(double v, double u, const FuelModelConfig& cfg) {
  const auto& w = cfg.w;
  const auto& n = cfg.n;
  const double cruise = w[0] + w[1] * v + w[2] * v * v + w[3] * v * v * v;
  const double accel = u * (n[0] + n[1] * v + n[2] * v * v);
  return std::max(0.0, cruise + accel);
}

double trip_fuel(std::span<const TraceSample> samples, const FuelModelConfig& cfg) {
  if (samples.size() < 2) {
    throw EmptyTrace("trip_fuel: need at least 2 samples, got " +
                     std::to_string(samples.size()));
  }
  double total = 0.0;
  double prev_rate = fuel_rate(samples[0].v, samples[0].u, cfg);
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double rate = fuel_rate(samples[k].v, samples[k].u, cfg);
    total += 0.5 * (prev_rate + rate) * (samples[k].t - samples[k - 1].t);
    prev_rate = rate;
  }
  return total;
}

namespace {

struct MeanCi {
  double mean;
  std::optional<double> half_width;
};

MeanCi mean_ci95(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, std::nullopt};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double s = std::sqrt(ss / (n - 1.0));
  boost::math::students_t dist(n - 1.0);
  const double tq = boost::math::quantile(dist, 0.975);
  return {mean, tq * s / std::sqrt(n)};
}

}  // namespace

MetricsReport summarize(const std::vector<MetricsReport>& replication_reports) {
  MetricsReport out;
  std::vector<double> tt, fuel, thr;
  for (const auto& r : replication_reports) {
    tt.push_back(r.mean_travel_time_s);
    fuel.push_back(r.mean_fuel_per_vehicle);
    thr.push_back(r.throughput_vph);
  }
  const MeanCi a = mean_ci95(tt);
  const MeanCi b = mean_ci95(fuel);
  const MeanCi c = mean_ci95(thr);
  out.mean_travel_time_s = a.mean;
  out.mean_fuel_per_vehicle = b.mean;
  out.throughput_vph = c.mean;
  out.ci95_travel_time_s = a.half_width;
  out.ci95_fuel_per_vehicle = b.half_width;
  out.ci95_throughput_vph = c.half_width;
  return out;
}

std::string per_vehicle_csv(const MetricsReport& report) {
  std::ostringstream os;
  os.precision(10);
  os << "id,t_entry,t_exit,travel_time_s,fuel,min_gap_m,distance_m\n";
  for (const auto& r : report.rows) {
    os << r.id << ',' << r.t_entry << ',' << r.t_exit << ',' << r.travel_time_s
       << ',' << r.fuel << ',' << r.min_gap_m << ',' << r.distance_m << '\n';
  }
  return os.str();
}

std::string aggregate_json(const MetricsReport& report) {
  nlohmann::json j;
  j["mean_travel_time_s"] = report.mean_travel_time_s;
  j["mean_fuel_per_vehicle"] = report.mean_fuel_per_vehicle;
  j["throughput_vph"] = report.throughput_vph;
  auto put_ci = [&j](const char* key, const std::optional<double>& v) {
    if (v.has_value()) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  };
  put_ci("ci95_travel_time_s", report.ci95_travel_time_s);
  put_ci("ci95_fuel_per_vehicle", report.ci95_fuel_per_vehicle);
  put_ci("ci95_throughput_vph", report.ci95_throughput_vph);
  return j.dump(2) + "\n";
}

}  // namespace srz
