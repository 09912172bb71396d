#include "stamg/harness.hpp"

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "stamg/krylov.hpp"
#include "stamg/multigrid.hpp"
#include "stamg/sweeps.hpp"

namespace stamg {
namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

// shortest decimal form that parses back to the same double
std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
  throw std::invalid_argument("line " + std::to_string(line) + ": " + msg);
}

int to_int(const std::string& v, int line) {
  std::size_t pos = 0;
  int out = 0;
  try {
    out = std::stoi(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size()) fail_at(line, "expected an integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& v, int line) {
  std::size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size()) fail_at(line, "expected a number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail_at(line, "expected true or false, got '" + v + "'");
}

std::string basis_name(const RunConfig& cfg) {
  return cfg.basis == BasisKind::Lin ? "lin" : "const";
}

std::string source_name(const RunConfig& cfg) {
  return cfg.source.kind == SourceSpec::Kind::Beam ? "beam" : "uniform";
}

std::string footprint_text(const SourceSpec& s) {
  return format_double(s.x0) + " " + format_double(s.x1) + " " +
         format_double(s.y0) + " " + format_double(s.y1);
}

double estimate_mib(const HexMesh& hex, const AngularMesh& ang,
                    const RunConfig& cfg) {
  const int D = cfg.basis == BasisKind::Lin ? 3 : 1;
  const int S = cfg.spatial_p() == 1 ? 8 : 1;
  const double bs = double(D) * S;
  const double harmonics = double(cfg.N + 1) * (cfg.N + 1);
  const double fine = double(hex.n_el) * ang.n_leaves() * bs;
  double bytes = 10 * fine * 8;  // Krylov workspace
  const int l_min = cfg.preconditioner == "mg" ? 0 : ang.max_level;
  for (int l = l_min; l <= ang.max_level; ++l) {
    const double patches = coarsen_to_level(ang, l).n_leaves();
    const double size_l = double(hex.n_el) * patches * bs;
    bytes += 6 * size_l * 8;            // cycle vectors
    bytes += patches * bs * bs * 8 * 5; // diagonal blocks, inflow, LU
    bytes += patches * D * harmonics * 8;
  }
  return bytes / (1024.0 * 1024.0);
}

void echo_header(std::ostream& log, const RunConfig& cfg,
                 const RunOptions& opt, const HexMesh& hex,
                 const AngularMesh& ang, double est_mib) {
  log << "# stamg " << (opt.study ? "study" : "solve") << "\n";
  log << "# nx = " << cfg.nx << "\n";
  log << "# ny = " << cfg.ny << "\n";
  log << "# nz = " << cfg.nz << "\n";
  log << "# box_cm = " << format_double(cfg.box_cm) << "\n";
  log << "# basis = " << basis_name(cfg) << "\n";
  log << "# angular = " << cfg.angular_kind << " " << cfg.angular_level
      << "\n";
  log << "# N = " << cfg.N << "\n";
  log << "# nr = " << cfg.nr << "\n";
  log << "# alpha = " << format_double(cfg.alpha) << "\n";
  log << "# sigma_a = " << format_double(cfg.sigma_a) << "\n";
  log << "# source = " << source_name(cfg) << "\n";
  log << "# beam_footprint_cm = " << footprint_text(cfg.source) << "\n";
  log << "# preconditioner = " << cfg.preconditioner << "\n";
  log << "# cycle = " << cfg.cycle << "\n";
  log << "# coarse_sweeps = " << cfg.coarse_sweeps << "\n";
  log << "# coarse_tol = " << format_double(cfg.coarse_tol) << "\n";
  log << "# tol = " << format_double(cfg.tol) << "\n";
  log << "# max_iter = " << cfg.max_iter << "\n";
  log << "# threads = " << cfg.threads << "\n";
  log << "# large_ok = " << (cfg.large_ok ? "true" : "false") << "\n";
  log << "# out_dir = " << opt.out_dir << "\n";
  const int D = cfg.basis == BasisKind::Lin ? 3 : 1;
  const int S = cfg.spatial_p() == 1 ? 8 : 1;
  log << "# elements = " << hex.n_el << ", patches = " << ang.n_leaves()
      << ", block size = " << D * S << ", unknowns = "
      << std::int64_t(hex.n_el) * ang.n_leaves() * D * S << "\n";
  log << "# memory estimate = " << format_double(est_mib) << " MiB\n";
}

void write_convergence(const fs::path& path, const SolveReport& rep) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "iter,rel_residual,cumulative_seconds\n";
  for (std::size_t i = 0; i < rep.residual_history.size(); ++i)
    os << i + 1 << ',' << format_double(rep.residual_history[i]) << ','
       << format_double(rep.iter_seconds[i]) << '\n';
}

void append_summary(const fs::path& path, const RunConfig& cfg,
                    const RunOptions& opt, int nr, const SolveReport& rep) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream os(path, std::ios::app);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  if (fresh)
    os << "mode,nx,ny,nz,box_cm,basis,angular,N,nr,alpha,sigma_a,source,"
          "beam_footprint_cm,preconditioner,cycle,coarse_sweeps,coarse_tol,"
          "tol,max_iter,threads,iterations,precond_applications,"
          "final_residual,wall_seconds,converged\n";
  os << (opt.study ? "study" : "solve") << ',' << cfg.nx << ',' << cfg.ny
     << ',' << cfg.nz << ',' << format_double(cfg.box_cm) << ','
     << basis_name(cfg) << ',' << cfg.angular_kind << ' ' << cfg.angular_level
     << ',' << cfg.N << ',' << nr << ',' << format_double(cfg.alpha) << ','
     << format_double(cfg.sigma_a) << ',' << source_name(cfg) << ','
     << footprint_text(cfg.source) << ',' << cfg.preconditioner << ','
     << cfg.cycle << ',' << cfg.coarse_sweeps << ','
     << format_double(cfg.coarse_tol) << ',' << format_double(cfg.tol) << ','
     << cfg.max_iter << ',' << cfg.threads << ',' << rep.iterations << ','
     << rep.preconditioner_applications << ','
     << format_double(rep.final_residual) << ','
     << format_double(rep.wall_time) << ',' << (rep.converged ? 1 : 0)
     << '\n';
}

void dump_scalar_flux(const fs::path& path, const ProblemOperators& ops,
                      const FluxVector& phi) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  const Layout& lay = ops.layout;
  // basis functions sum to one, so mass row sums integrate each dof
  std::vector<Eigen::VectorXd> msum(lay.n_patch);
  for (int q = 0; q < lay.n_patch; ++q)
    msum[q] = ops.pops[q].M.rowwise().sum();
  const Eigen::VectorXd nsum = ops.em.N.rowwise().sum();
  const double vol = ops.mesh.volume();
  os << "ix iy iz scalar_flux\n";
  for (int el = 0; el < lay.n_el; ++el) {
    double integral = 0;
    for (int q = 0; q < lay.n_patch; ++q) {
      MapConstRow blk(phi.data() + lay.block(el, q), lay.D, lay.S);
      integral += msum[q].dot(blk * nsum);
    }
    const auto c = ops.mesh.coords(el);
    os << c[0] << ' ' << c[1] << ' ' << c[2] << ' '
       << format_double(integral / vol) << '\n';
  }
}

std::pair<FluxVector, SolveReport> do_solve(const ProblemOperators& ops,
                                            const FluxVector& b,
                                            const RunConfig& cfg, int nr,
                                            double coarse_tol) {
  const LinearOp apply = [&ops](const FluxVector& v) {
    return apply_A(ops, v, ops.kernel.N);
  };
  SweepPlan plan;
  MgHierarchy hier;
  LinearOp precond;
  if (cfg.preconditioner == "sweep") {
    plan = build_sweep_plan(ops);
    precond = [&plan, &ops](const FluxVector& v) {
      return standard_sweep(plan, ops, v);
    };
  } else {
    CycleSpec spec;
    spec.nu_pre = 1;
    spec.nu_post = cfg.cycle == "v11" ? 1 : 0;
    spec.nr = nr;
    spec.coarse_sweeps = cfg.coarse_sweeps;
    spec.coarse_tol = coarse_tol;
    hier = build_hierarchy(ops, spec);
    precond = [&hier](const FluxVector& v) { return mg_apply(hier, v); };
  }
  return bicgstab(apply, precond, b, cfg.tol, cfg.max_iter);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> seen;  // key -> line number
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_at(line_no, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail_at(line_no, "empty key");
    if (value.empty()) fail_at(line_no, "empty value for '" + key + "'");
    if (!seen.emplace(key, line_no).second)
      fail_at(line_no, "duplicate key '" + key + "'");

    if (key == "nx") cfg.nx = to_int(value, line_no);
    else if (key == "ny") cfg.ny = to_int(value, line_no);
    else if (key == "nz") cfg.nz = to_int(value, line_no);
    else if (key == "box_cm") cfg.box_cm = to_double(value, line_no);
    else if (key == "basis") {
      if (value == "const") cfg.basis = BasisKind::Const;
      else if (value == "lin") cfg.basis = BasisKind::Lin;
      else fail_at(line_no, "basis must be const or lin");
    } else if (key == "angular") {
      const auto tok = split_ws(value);
      if (tok.size() != 2 || (tok[0] != "uniform" && tok[0] != "banded"))
        fail_at(line_no,
                "angular expects 'uniform <level>' or 'banded <l_max>'");
      cfg.angular_kind = tok[0];
      cfg.angular_level = to_int(tok[1], line_no);
    } else if (key == "N") cfg.N = to_int(value, line_no);
    else if (key == "nr") cfg.nr = to_int(value, line_no);
    else if (key == "alpha") cfg.alpha = to_double(value, line_no);
    else if (key == "sigma_a") cfg.sigma_a = to_double(value, line_no);
    else if (key == "source") {
      if (value == "uniform") cfg.source.kind = SourceSpec::Kind::Uniform;
      else if (value == "beam") cfg.source.kind = SourceSpec::Kind::Beam;
      else fail_at(line_no, "source must be uniform or beam");
    } else if (key == "beam_footprint_cm") {
      const auto tok = split_ws(value);
      if (tok.size() != 4)
        fail_at(line_no, "beam_footprint_cm expects 'x0 x1 y0 y1'");
      cfg.source.x0 = to_double(tok[0], line_no);
      cfg.source.x1 = to_double(tok[1], line_no);
      cfg.source.y0 = to_double(tok[2], line_no);
      cfg.source.y1 = to_double(tok[3], line_no);
    } else if (key == "preconditioner") {
      if (value != "sweep" && value != "mg")
        fail_at(line_no, "preconditioner must be sweep or mg");
      cfg.preconditioner = value;
    } else if (key == "cycle") {
      if (value != "v10" && value != "v11")
        fail_at(line_no, "cycle must be v10 or v11");
      cfg.cycle = value;
    } else if (key == "coarse_sweeps") cfg.coarse_sweeps = to_int(value, line_no);
    else if (key == "coarse_tol") cfg.coarse_tol = to_double(value, line_no);
    else if (key == "tol") cfg.tol = to_double(value, line_no);
    else if (key == "max_iter") cfg.max_iter = to_int(value, line_no);
    else if (key == "threads") cfg.threads = to_int(value, line_no);
    else if (key == "large_ok") cfg.large_ok = to_bool(value, line_no);
    else fail_at(line_no, "unknown key '" + key + "'");
  }

  for (const char* k : {"nx", "ny", "nz", "box_cm", "N"})
    if (!seen.count(k))
      throw std::invalid_argument(std::string("missing required key '") + k +
                                  "'");

  const auto check = [&seen](bool ok, const char* key,
                             const std::string& msg) {
    if (ok) return;
    const auto it = seen.find(key);
    if (it != seen.end()) fail_at(it->second, msg);
    throw std::invalid_argument(msg);
  };
  check(cfg.nx >= 1, "nx", "nx must be at least 1");
  check(cfg.ny >= 1, "ny", "ny must be at least 1");
  check(cfg.nz >= 1, "nz", "nz must be at least 1");
  check(cfg.box_cm > 0, "box_cm", "box_cm must be positive");
  check(cfg.N >= 1, "N", "N must be at least 1");
  check(cfg.angular_level >= 0, "angular", "angular level must be nonnegative");
  if (cfg.angular_kind == "banded")
    check(cfg.angular_level >= 1, "angular", "banded l_max must be at least 1");
  check(cfg.nr >= -1, "nr", "nr must be -1 (full order) or nonnegative");
  check(cfg.nr <= cfg.N, "nr", "nr exceeds N");
  check(cfg.alpha > 0, "alpha", "alpha must be positive");
  check(cfg.sigma_a >= 0, "sigma_a", "sigma_a must be nonnegative");
  check(cfg.coarse_sweeps >= 0, "coarse_sweeps",
        "coarse_sweeps must be nonnegative");
  check(cfg.coarse_tol >= 0, "coarse_tol", "coarse_tol must be nonnegative");
  check(cfg.tol > 0, "tol", "tol must be positive");
  check(cfg.max_iter >= 1, "max_iter", "max_iter must be at least 1");
  check(cfg.threads >= 1, "threads", "threads must be at least 1");
  if (cfg.source.kind == SourceSpec::Kind::Beam) {
    const auto& s = cfg.source;
    check(0 <= s.x0 && s.x0 < s.x1 && s.x1 <= cfg.box_cm && 0 <= s.y0 &&
              s.y0 < s.y1 && s.y1 <= cfg.box_cm,
          "beam_footprint_cm",
          "beam footprint must satisfy 0 <= x0 < x1 <= box_cm and likewise "
          "in y");
  }
  return cfg;
}

int run_harness(const RunConfig& cfg, const RunOptions& opt,
                std::ostream& log) {
  if (opt.study && cfg.preconditioner != "mg")
    throw std::invalid_argument("study mode requires preconditioner = mg");
  omp_set_num_threads(cfg.threads);

  const AngularMesh ang = cfg.angular_kind == "uniform"
                              ? build_uniform_mesh(cfg.angular_level)
                              : build_banded_mesh(cfg.angular_level);
  const HexMesh hex = build_hex_mesh(cfg.nx, cfg.ny, cfg.nz, cfg.box_cm);
  const double est = estimate_mib(hex, ang, cfg);
  echo_header(log, cfg, opt, hex, ang, est);
  if (est > 4096.0 && !cfg.large_ok)
    throw std::invalid_argument("estimated memory " + format_double(est) +
                                " MiB exceeds the 4096 MiB guard; set "
                                "large_ok = true to proceed");

  const fs::path out = opt.out_dir;
  fs::create_directories(out);
  const ScatterKernel kernel =
      fp_equivalent_moments(cfg.N, cfg.alpha, cfg.sigma_a);
  const ProblemOperators ops =
      build_operators(hex, ang, cfg.basis, cfg.spatial_p(), kernel);
  const FluxVector b = assemble_rhs(ops, cfg.source);

  if (opt.dump_mesh) {
    std::ofstream os(out / "mesh.txt");
    if (!os) throw std::runtime_error("cannot write mesh.txt");
    dump_mesh(ang, os);
  }

  bool all_converged = true;
  FluxVector phi;
  const auto report = [&](int nr, const SolveReport& rep) {
    log << "# nr = " << nr << ": " << rep.iterations << " iterations, final "
        << "residual " << format_double(rep.final_residual) << ", "
        << format_double(rep.wall_time) << " s, "
        << (rep.converged ? "converged" : "NOT converged")
        << (rep.breakdown ? " (breakdown)" : "") << "\n";
  };
  if (!opt.study) {
    SolveReport rep;
    std::tie(phi, rep) = do_solve(ops, b, cfg, cfg.nr, 0);
    report(cfg.nr, rep);
    write_convergence(out / "convergence.csv", rep);
    append_summary(out / "summary.csv", cfg, opt, cfg.nr, rep);
    all_converged = rep.converged;
  } else {
    for (int nr = 0; nr <= cfg.N; ++nr) {
      SolveReport rep;
      std::tie(phi, rep) = do_solve(ops, b, cfg, nr, cfg.coarse_tol);
      report(nr, rep);
      write_convergence(out / ("convergence_nr" + std::to_string(nr) + ".csv"),
                        rep);
      append_summary(out / "summary.csv", cfg, opt, nr, rep);
      all_converged = all_converged && rep.converged;
    }
  }
  const BalanceReport bal = balance_report(ops, phi, b);
  log << "# balance: source = " << format_double(bal.source)
      << ", absorption = " << format_double(bal.absorption)
      << ", leakage = " << format_double(bal.leakage)
      << ", defect = " << format_double(bal.defect()) << "\n";
  if (opt.dump_flux) dump_scalar_flux(out / "scalar_flux.txt", ops, phi);
  return all_converged ? 0 : 2;
}

}  // namespace stamg
