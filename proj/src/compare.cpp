#include "srz/compare.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace srz {

const ComparisonCell* ComparisonTable::find(ControllerKind controller,
                                            double volume) const {
  for (const auto& cell : cells) {
    if (cell.controller == controller && cell.volume == volume) return &cell;
  }
  return nullptr;
}

ComparisonTable run_comparison(const SimConfig& base,
                               const std::vector<double>& volumes) {
  ComparisonTable table;
  table.volumes = volumes;
  const ControllerKind controllers[] = {ControllerKind::Baseline,
                                        ControllerKind::SpdHarm,
                                        ControllerKind::Optimal};
  for (double volume : volumes) {
    for (ControllerKind controller : controllers) {
      SimConfig config = base;
      config.volume = volume;
      config.controller = controller;
      ComparisonCell cell;
      cell.controller = controller;
      cell.volume = volume;
      for (int rep = 0; rep < config.replications; ++rep) {
        const ScenarioResult run = run_scenario(config, config.seed + rep);
        cell.replications.push_back(run.report);
      }
      cell.aggregate = summarize(cell.replications);
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

double improvement(double alternative, double optimal) {
  if (alternative == 0.0) return 0.0;
  return (alternative - optimal) / alternative;
}

namespace {

std::string ci_str(const std::optional<double>& ci) {
  if (!ci.has_value()) return "unavailable";
  std::ostringstream os;
  os.precision(10);
  os << *ci;
  return os.str();
}

}  // namespace

std::string comparison_csv(const ComparisonTable& table) {
  std::ostringstream os;
  os.precision(10);
  os << "controller,volume_vph,mean_fuel_per_vehicle,ci95_fuel,"
        "mean_travel_time_s,ci95_travel_time,throughput_vph,ci95_throughput\n";
  for (const auto& cell : table.cells) {
    const MetricsReport& r = cell.aggregate;
    os << to_string(cell.controller) << ',' << cell.volume << ','
       << r.mean_fuel_per_vehicle << ',' << ci_str(r.ci95_fuel_per_vehicle) << ','
       << r.mean_travel_time_s << ',' << ci_str(r.ci95_travel_time_s) << ','
       << r.throughput_vph << ',' << ci_str(r.ci95_throughput_vph) << '\n';
  }
  // The paper's VSL column is out of scope; keep the table shape explicit.
  for (double volume : table.volumes) {
    os << "Vsl," << volume << ",not implemented,,not implemented,,not implemented,\n";
  }
  return os.str();
}

std::string comparison_json(const ComparisonTable& table) {
  nlohmann::json j;
  j["cells"] = nlohmann::json::array();
  for (const auto& cell : table.cells) {
    const MetricsReport& r = cell.aggregate;
    nlohmann::json c;
    c["controller"] = to_string(cell.controller);
    c["volume_vph"] = cell.volume;
    c["mean_fuel_per_vehicle"] = r.mean_fuel_per_vehicle;
    c["mean_travel_time_s"] = r.mean_travel_time_s;
    c["throughput_vph"] = r.throughput_vph;
    auto ci = [](const std::optional<double>& v) {
      return v.has_value() ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    c["ci95_fuel_per_vehicle"] = ci(r.ci95_fuel_per_vehicle);
    c["ci95_travel_time_s"] = ci(r.ci95_travel_time_s);
    c["ci95_throughput_vph"] = ci(r.ci95_throughput_vph);
    j["cells"].push_back(c);
  }
  j["vsl"] = "not implemented";
  nlohmann::json improvements = nlohmann::json::array();
  for (double volume : table.volumes) {
    const ComparisonCell* opt = table.find(ControllerKind::Optimal, volume);
    if (opt == nullptr) continue;
    for (ControllerKind alt :
         {ControllerKind::Baseline, ControllerKind::SpdHarm}) {
      const ComparisonCell* a = table.find(alt, volume);
      if (a == nullptr) continue;
      nlohmann::json row;
      row["volume_vph"] = volume;
      row["vs"] = to_string(alt);
      row["fuel_improvement"] = improvement(a->aggregate.mean_fuel_per_vehicle,
                                            opt->aggregate.mean_fuel_per_vehicle);
      row["travel_time_improvement"] =
          improvement(a->aggregate.mean_travel_time_s,
                      opt->aggregate.mean_travel_time_s);
      improvements.push_back(row);
    }
  }
  j["optimal_improvements"] = improvements;
  return j.dump(2) + "\n";
}

std::string comparison_summary(const ComparisonTable& table) {
  std::ostringstream os;
  os.precision(4);
  os << "Controller comparison (VSL column: not implemented)\n";
  for (double volume : table.volumes) {
    os << "\nvolume " << volume << " veh/h\n";
    for (ControllerKind kind :
         {ControllerKind::Baseline, ControllerKind::SpdHarm, ControllerKind::Optimal}) {
      const ComparisonCell* cell = table.find(kind, volume);
      if (cell == nullptr) continue;
      const MetricsReport& r = cell->aggregate;
      os << "  " << to_string(kind) << ": fuel/veh " << r.mean_fuel_per_vehicle
         << ", travel time " << r.mean_travel_time_s << " s, throughput "
         << r.throughput_vph << " veh/h\n";
    }
    const ComparisonCell* opt = table.find(ControllerKind::Optimal, volume);
    const ComparisonCell* base = table.find(ControllerKind::Baseline, volume);
    const ComparisonCell* sh = table.find(ControllerKind::SpdHarm, volume);
    if (opt != nullptr && base != nullptr) {
      os << "  Optimal vs Baseline: fuel -"
         << 100.0 * improvement(base->aggregate.mean_fuel_per_vehicle,
                                opt->aggregate.mean_fuel_per_vehicle)
         << "%, travel time -"
         << 100.0 * improvement(base->aggregate.mean_travel_time_s,
                                opt->aggregate.mean_travel_time_s)
         << "% (reference bands vs human baseline: fuel 19-22%, travel time 26-30%)\n";
    }
    if (opt != nullptr && sh != nullptr) {
      os << "  Optimal vs SpdHarm: fuel -"
         << 100.0 * improvement(sh->aggregate.mean_fuel_per_vehicle,
                                opt->aggregate.mean_fuel_per_vehicle)
         << "%, travel time -"
         << 100.0 * improvement(sh->aggregate.mean_travel_time_s,
                                opt->aggregate.mean_travel_time_s)
         << "%\n";
    }
  }
  return os.str();
}

}  // namespace srz
