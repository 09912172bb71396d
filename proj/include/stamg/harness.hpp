#pragma once
// Experiment runner: config parsing, problem assembly, preconditioned solves,
// and CSV outputs for single runs and reduced-order studies.

#include <iosfwd>
#include <string>

#include "stamg/angular_disc.hpp"
#include "stamg/transport.hpp"

namespace stamg {

struct RunConfig {
  int nx = 0, ny = 0, nz = 0;  // required
  double box_cm = 0;           // required
  BasisKind basis = BasisKind::Const;
  std::string angular_kind = "uniform";  // uniform | banded
  int angular_level = 2;                 // refinement level, or banded l_max
  int N = 0;                             // required, scatter order
  int nr = -1;  // scatter order inside the mg cycle, -1 = full
  double alpha = 1.0;
  double sigma_a = 0.0;
  SourceSpec source;
  std::string preconditioner = "mg";  // sweep | mg
  std::string cycle = "v11";          // v10 | v11
  int coarse_sweeps = 10;
  double coarse_tol = 0;  // study mode only; > 0 replaces coarse_sweeps
  double tol = 1e-8;
  int max_iter = 1000;
  int threads = 1;
  bool large_ok = false;  // allow runs estimated above the 4 GiB guard

  // the spatial order is tied to the angular basis: const -> p0, lin -> p1
  int spatial_p() const { return basis == BasisKind::Lin ? 1 : 0; }
};

// `key = value` lines with # comments; errors cite the offending line
RunConfig parse_config(const std::string& text);

struct RunOptions {
  std::string out_dir = ".";
  bool study = false;      // sweep nr over 0..N, one summary row per value
  bool dump_mesh = false;  // write mesh.txt
  bool dump_flux = false;  // write scalar_flux.txt (element averages)
};

// Echoes every effective parameter to `log`, writes convergence.csv (or
// convergence_nr<k>.csv per study point) and appends to summary.csv.
// Returns 0 when every solve converged, 2 otherwise; throws on config errors.
int run_harness(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);

}  // namespace stamg
