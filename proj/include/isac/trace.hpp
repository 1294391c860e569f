#pragma once

#include <iosfwd>
#include <vector>

#include "isac/metrics.hpp"

namespace isac {

struct TraceEntry {
  int iteration = 0;
  double surrogate = 0.0;  // the solver's own objective after this iteration
  double objective_p1 = 0.0;
  double objective_p2 = 0.0;
  RVector sinr;
  RVector scnr;
  double elapsed_ms = 0.0;  // wall clock since the solve started
};

struct RunTrace {
  std::vector<TraceEntry> entries;
  bool converged = false;
  bool degenerate = false;
  /// Iteration index (1-based) of the returned beamformers; 0 is the start.
  int best_iteration = 0;

  /// iteration,surrogate,obj_p1,min_sinr_db,min_scnr_db,elapsed_ms
  void write_csv(std::ostream& os) const;
};

struct SolveResult {
  Beamformers beamformers;
  RunTrace trace;
};

TraceEntry make_entry(const Scene& scene, const Beamformers& bf, double delta,
                      int iteration, double surrogate, double elapsed_ms);

}  // namespace isac
