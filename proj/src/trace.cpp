#include "isac/trace.hpp"

#include <ostream>

#include "isac/csv.hpp"

namespace isac {

void RunTrace::write_csv(std::ostream& os) const {
  os << "iteration,surrogate,obj_p1,min_sinr_db,min_scnr_db,elapsed_ms\n";
  for (const auto& e : entries) {
    os << e.iteration << ',' << csv_num(e.surrogate) << ','
       << csv_num(e.objective_p1) << ',' << csv_num(to_db(e.sinr.minCoeff()))
       << ',' << csv_num(to_db(e.scnr.minCoeff())) << ','
       << csv_num(e.elapsed_ms) << '\n';
  }
}

TraceEntry make_entry(const Scene& scene, const Beamformers& bf, double delta,
                      int iteration, double surrogate, double elapsed_ms) {
  const MetricsReport r = evaluate(scene, bf, delta);
  TraceEntry e;
  e.iteration = iteration;
  e.surrogate = surrogate;
  e.objective_p1 = r.objective_p1;
  e.objective_p2 = r.objective_p2;
  e.sinr = r.sinr;
  e.scnr = r.scnr;
  e.elapsed_ms = elapsed_ms;
  return e;
}

}  // namespace isac
