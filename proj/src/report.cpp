#include "regulens/report.hpp"

#include <sstream>

namespace regulens {

namespace {

std::string frac(const Rational& r) { return to_fraction_string(r); }

Json atoms_json(const AtomSet& a) { return Json(a.indices()); }

Json rate_json(const RateFunction& f) {
  Json j;
  j["formula"] = f.describe();
  j["k"] = f.arity();
  j["eps"] = frac(f.eps());
  return j;
}

}  // namespace

Json cell_json(const SemiRing& s, const Cell& c) {
  Json coords = Json::array();
  for (std::size_t i = 0; i < c.arity(); ++i) {
    if (s.factor(i).kind == BaseKind::interval) {
      auto [lo, hi] = interval_bounds(c.coord(i));
      coords.push_back(Json::array({lo, hi}));
    } else {
      coords.push_back(atoms_json(c.coord(i)));
    }
  }
  return coords;
}

Json bound_json(const BoundValue& b) {
  Json j;
  j["saturated"] = b.saturated;
  j["value"] = b.saturated ? Json(nullptr) : Json(b.value.str());
  j["max_bits"] = b.max_bits;
  return j;
}

Json witness_json(const SemiRing& s, const Witness& w) {
  Json j;
  j["cell"] = cell_json(s, w.cell);
  j["sub"] = cell_json(s, w.sub);
  j["d_cell"] = frac(w.d_cell);
  j["d_sub"] = frac(w.d_sub);
  j["deviation"] = frac(w.deviation);
  return j;
}

Json report_json(const DriverReport& rep, const Json& instance_summary) {
  const auto& e = rep.engine;
  const SemiRing& s = e.partition.semiring();
  Json out;

  Json config;
  config["eps"] = frac(rep.eps);
  config["engine_eps"] = frac(e.config.eps);
  config["mode"] = to_string(e.config.mode);
  config["sample_count"] = e.config.sample_count;
  config["seed"] = e.config.seed;
  config["max_iterations"] = e.config.max_iterations ? Json(*e.config.max_iterations) : Json(nullptr);
  config["coordinate_subset_cap"] = e.config.coordinate_subset_cap;
  config["bounding"] = to_string(e.bounding.kind);
  config["strict_blocks"] = e.bounding.strict_blocks;
  out["config"] = std::move(config);

  out["instance_summary"] = instance_summary;

  Json partition;
  partition["semiring"] = e.semiring;
  partition["declared_r"] = e.declared_r;
  partition["size"] = e.partition.size();
  Json cells = Json::array();
  for (std::size_t i = 0; i < e.partition.size(); ++i) {
    Json c;
    c["coords"] = cell_json(s, e.partition.cell(i));
    c["exceptional"] = e.partition.is_exceptional(i);
    cells.push_back(std::move(c));
  }
  partition["cells"] = std::move(cells);
  out["partition"] = std::move(partition);

  Json per_set = Json::array();
  for (std::size_t j = 0; j < e.per_set.size(); ++j) {
    const auto& r = e.per_set[j];
    Json item;
    item["id"] = r.id;
    item["measure"] = j < rep.set_measures.size() ? Json(frac(rep.set_measures[j])) : Json(nullptr);
    item["regular"] = r.regular;
    item["certified"] = r.certified;
    item["irregular_mass"] = frac(r.irregular_mass);
    item["regular_cell_count"] = r.regular_cell_count;
    item["cell_regular"] = r.cell_regular;
    Json log = Json::array();
    for (const auto& w : r.witness_log) log.push_back(witness_json(s, w));
    item["witness_log"] = std::move(log);
    per_set.push_back(std::move(item));
  }
  out["per_set"] = std::move(per_set);

  Json trace = Json::array();
  for (const auto& t : e.trace) {
    Json item;
    item["step"] = t.step;
    item["offending_set"] = t.offending_set;
    item["index_before"] = frac(t.index_before);
    item["index_refined"] = frac(t.index_refined);
    item["index_after"] = frac(t.index_after);
    item["gain"] = frac(t.index_after - t.index_before);
    item["irregular_mass"] = frac(t.irregular_mass);
    item["refined_size"] = t.refined_size;
    item["partition_size"] = t.partition_size;
    trace.push_back(std::move(item));
  }
  out["trace"] = std::move(trace);

  Json bounds;
  bounds["psi_conservative"] = bound_json(e.bounds.conservative);
  bounds["psi_paper"] = bound_json(e.bounds.plain);
  bounds["achieved_size"] = e.partition.size();
  bounds["achieved_bound"] = bound_json(e.achieved_bound);
  bounds["initial_size"] = e.initial_size;
  bounds["iterations"] = e.trace.size();
  bounds["iteration_limit"] = e.iteration_limit;
  bounds["rate"] = rate_json(e.rate);
  bounds["refines_initial"] = e.refines_initial;
  out["bounds"] = std::move(bounds);

  Json theorem;
  theorem["name"] = rep.theorem;
  theorem["eps"] = frac(rep.eps);
  Json schedule = Json::array();
  for (const auto& x : rep.eps_schedule) schedule.push_back(frac(x));
  theorem["eps_schedule"] = std::move(schedule);
  Json coords = Json::array();
  for (const auto& c : rep.coordinates) {
    Json item;
    item["universe"] = c.universe;
    item["q"] = c.parts.size();
    item["exceptional"] = atoms_json(c.exceptional);
    Json parts = Json::array();
    for (const auto& p : c.parts) parts.push_back(atoms_json(p));
    item["parts"] = std::move(parts);
    coords.push_back(std::move(item));
  }
  theorem["coordinates"] = std::move(coords);
  Json counts = Json::array();
  for (const auto& cc : rep.counts) {
    Json item;
    item["set"] = cc.set_id;
    item["good"] = cc.good;
    item["candidates"] = cc.candidates;
    item["required"] = frac(cc.required);
    item["holds"] = cc.holds;
    Json cells_json = Json::array();
    for (std::size_t i = 0; i < cc.cells.size(); ++i) {
      Json c;
      c["index"] = cc.cells[i];
      c["regular"] = static_cast<bool>(cc.regular[i]);
      cells_json.push_back(std::move(c));
    }
    item["cells"] = std::move(cells_json);
    counts.push_back(std::move(item));
  }
  theorem["counts"] = std::move(counts);
  Json conditions = Json::array();
  for (const auto& c : rep.conditions) {
    Json item;
    item["name"] = c.name;
    item["holds"] = c.holds;
    item["detail"] = c.detail;
    conditions.push_back(std::move(item));
  }
  theorem["conditions"] = std::move(conditions);
  theorem["holds"] = rep.holds();
  theorem["certified"] = e.certified() && e.config.mode == SearchMode::exact;
  out["theorem"] = std::move(theorem);
  return out;
}

std::string report_text(const DriverReport& rep, const Json& instance_summary) {
  const auto& e = rep.engine;
  std::ostringstream os;
  os << "instance      " << instance_summary.dump() << '\n';
  os << "eps           " << frac(rep.eps) << " (engine " << frac(e.config.eps) << ", " << to_string(e.config.mode)
     << " search)\n";
  os << "semiring      " << e.semiring << ", r = " << e.declared_r << '\n';
  os << "bounding      " << to_string(e.bounding.kind) << ", rate " << e.rate.describe() << '\n';
  os << "iterations    " << e.trace.size() << " of at most " << e.iteration_limit << '\n';
  os << "partition     " << e.partition.size() << " cells (psi' bound " << e.bounds.conservative.str() << ")\n";
  for (const auto& r : e.per_set) {
    os << "set " << r.id << "         " << (r.regular ? "regular" : "NOT regular")
       << (r.certified ? "" : " (sampled)") << ", irregular mass " << frac(r.irregular_mass) << ", "
       << r.regular_cell_count << " regular cells\n";
  }
  for (std::size_t i = 0; i < rep.coordinates.size(); ++i) {
    const auto& c = rep.coordinates[i];
    os << "coordinate " << i << "  q = " << c.parts.size() << ", part size "
       << (c.parts.empty() ? 0 : c.parts.front().count()) << ", |Q0| = " << c.exceptional.count() << '\n';
  }
  for (const auto& c : rep.conditions) {
    os << (c.holds ? "[ok]   " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
  }
  os << "result        " << (rep.holds() ? "all conditions hold" : "conditions FAILED") << '\n';
  return os.str();
}

}  // namespace regulens
