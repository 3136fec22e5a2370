#include "commands.hpp"

#include "sphdesign/bounds.hpp"
#include "sphdesign/error.hpp"
#include "sphdesign/geometry.hpp"
#include "sphdesign/optimizer.hpp"
#include "sphdesign/parallel.hpp"
#include "sphdesign/polytopes.hpp"
#include "sphdesign/quadrature.hpp"
#include "sphdesign/report_json.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>

namespace sphdesign::cli {

namespace {

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

std::string sci(double v) { return std::isnan(v) ? std::string() : format("%.1e", v); }

struct BoundsArgs {
  int d = 2;
  int t_min = 1;
  int t_max = 0;
  bool symmetric = false;
};

struct GenArgs {
  int d = 2;
  int t = 1;
  std::optional<int> n;
  bool symmetric = false;
  std::uint64_t seed = 1;
  int restarts = 5;
  std::string psi = "psi3";
  std::string method = "auto";
  std::string output;
};

struct VerifyArgs {
  std::string file;
  int t = 1;
  std::optional<int> t_max;
  std::optional<int> d;
  double tol = kDesignTolerance;
  bool json = false;
};

struct GeomArgs {
  std::string file;
  double accuracy = 1e-6;
};

struct TableArgs {
  int d = 2;
  int t_min = 1;
  int t_max = 0;
  bool symmetric = false;
  std::string dir = "data/designs";
  double accuracy = 1e-6;
};

struct ConvertArgs {
  std::string input;
  std::string builtin;
  std::string output;
  bool expand = false;
  bool normalize = false;
  std::optional<int> t;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out, std::ostream& err) {
  if (a.t_min < 1 || a.t_max < a.t_min) {
    err << "error: need 1 <= --t-min <= --t-max\n";
    return kExitInput;
  }
  out << "t,N_star,N_plus,N_hat,N_bar,dim_poly,efficiency\n";
  for (int t = a.t_min; t <= a.t_max; ++t) {
    if (a.symmetric && t % 2 == 0) continue;
    const BoundsRow row = bounds_row(a.d, t);
    const std::uint64_t n = a.symmetric ? *row.n_bar : row.n_hat;
    out << t << ',' << row.n_star << ',' << row.n_plus << ',' << row.n_hat << ','
        << (row.n_bar ? std::to_string(*row.n_bar) : std::string()) << ',' << row.dim_poly << ','
        << format("%.4f", row.efficiency(n)) << '\n';
  }
  return kExitOk;
}

Method parse_method(const std::string& m) {
  if (m == "auto") return Method::automatic;
  if (m == "lm") return Method::lm;
  if (m == "grad") return Method::grad;
  throw Error(ErrorCode::invalid_parameter, "unknown method '" + m + "'");
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  GenerateRequest req;
  req.d = a.d;
  req.t = a.t;
  req.n = a.n;
  req.symmetric = a.symmetric;
  req.method = parse_method(a.method);
  req.psi = parse_psi_kind(a.psi);
  req.opts.seed = a.seed;
  req.opts.restarts = a.restarts;
  const SolveResult r = generate_design(req);
  write_pointset(r.points, a.output, a.t);
  out << format("N=%d t=%d rTr=%s V1=%.1e V2=%.1e V3=%.1e iterations=%d restart=%d", r.points.size(), a.t,
                sci(r.rTr).c_str(), r.v_psi1, r.v_psi2, r.v_psi3, r.iterations, r.restart);
  if (r.geometry) out << format(" delta=%.4f h=%.4f rho=%.2f", r.geometry->delta, r.geometry->h, r.geometry->rho);
  out << ' ' << to_string(r.classification) << '\n';
  return r.converged ? kExitOk : kExitFail;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const LoadedPointSet in = read_pointset_file(a.file, a.d);
  const DesignReport rep = verify_design(in.points, a.t, a.tol, a.t_max ? *a.t_max : a.t);
  if (a.json) {
    out << to_json(rep).dump(2) << '\n';
  } else {
    out << (rep.is_design ? "PASS" : "FAIL")
        << format(" t=%d N=%d d=%d exactness=%d", rep.t_claimed, rep.n_points, rep.d, rep.exactness_degree);
    if (!std::isnan(rep.max_abs_weyl)) out << format(" max_weyl=%.3e rTr=%.3e", rep.max_abs_weyl, rep.rTr);
    out << format(" V1=%.3e V2=%.3e V3=%.3e\n", rep.v_psi1, rep.v_psi2, rep.v_psi3);
  }
  return rep.is_design ? kExitOk : kExitFail;
}

int cmd_geom(const GeomArgs& a, std::ostream& out, std::ostream& err) {
  const LoadedPointSet in = read_pointset_file(a.file);
  for (const auto& w : in.warnings) err << "warning: " << w << '\n';
  const GeometryReport g = mesh_ratio(in.points, a.accuracy);
  out << format("delta=%.4f h=%.4f rho=%.2f\n", g.delta, g.h, g.rho);
  return kExitOk;
}

int cmd_table(const TableArgs& a, std::ostream& out, std::ostream& err) {
  if (a.t_min < 1 || a.t_max < a.t_min) {
    err << "error: need 1 <= --t-min <= --t-max\n";
    return kExitInput;
  }
  out << "t,N_star,N_plus,N,n,m,V_psi1,V_psi2,V_psi3,rTr,delta,h,rho\n";
  for (int t = a.t_min; t <= a.t_max; ++t) {
    if (a.symmetric && t % 2 == 0) continue;
    const std::uint64_t n = reference_n(a.d, t, a.symmetric);
    out << t << ',' << n_star(a.d, t) << ',' << n_plus(a.d, t) << ',' << n << ','
        << variable_count(a.d, n, a.symmetric) << ',' << condition_count(a.d, t, a.symmetric) << ',';
    const std::string name = format("%s%03d.%05llu", a.symmetric ? "ss" : "sf", t, static_cast<unsigned long long>(n));
    const std::filesystem::path path = std::filesystem::path(a.dir) / name;
    if (!std::filesystem::exists(path)) {
      err << "warning: missing design file " << path.string() << '\n';
      out << ",,,,,,\n";
      continue;
    }
    const PointSet x = read_pointset(path.string(), a.d);
    const DesignReport rep = verify_design(x, t);
    const GeometryReport g = mesh_ratio(x, a.accuracy);
    out << sci(rep.v_psi1) << ',' << sci(rep.v_psi2) << ',' << sci(rep.v_psi3) << ',' << sci(rep.rTr) << ','
        << format("%.4f,%.4f,%.2f", g.delta, g.h, g.rho) << '\n';
  }
  return kExitOk;
}

int cmd_convert(const ConvertArgs& a, std::ostream& out) {
  PointSet x;
  std::optional<int> t = a.t;
  if (!a.builtin.empty()) {
    const BuiltinDesign b = builtin_design(a.builtin);
    x = b.points;
    if (!t) t = b.strength;
  } else if (!a.input.empty()) {
    const LoadedPointSet in = read_pointset_file(a.input);
    x = in.points;
    if (!t) t = in.header.t;
  } else {
    throw Error(ErrorCode::invalid_parameter, "convert needs an input file or --builtin");
  }
  if (a.expand) x = x.expanded();
  if (a.normalize) x = normalize_pointset(x).points;
  write_pointset(x, a.output, t);
  out << format("wrote %d points (d=%d) to %s\n", x.size(), x.dim(), a.output.c_str());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spherical t-design generation, verification and scoring", "sphdesign"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: SPHDESIGN_THREADS or hardware)");

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Point-count bounds per degree as CSV");
  bounds->add_option("--d", ba.d, "Sphere dimension")->check(CLI::PositiveNumber);
  bounds->add_option("--t-min", ba.t_min, "First degree");
  bounds->add_option("--t-max", ba.t_max, "Last degree")->required();
  bounds->add_flag("--symmetric", ba.symmetric, "Odd degrees only, efficiency at N_bar");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate a design and write it to a file");
  gen->add_option("--d", ga.d, "Sphere dimension")->check(CLI::Range(2, 8));
  gen->add_option("--t", ga.t, "Degree")->required()->check(CLI::PositiveNumber);
  gen->add_option("--n", ga.n, "Point count (default: reference count)");
  gen->add_flag("--symmetric", ga.symmetric, "Antipodal design");
  gen->add_option("--seed", ga.seed, "Random seed");
  gen->add_option("--restarts", ga.restarts, "Independent starts")->check(CLI::PositiveNumber);
  gen->add_option("--psi", ga.psi, "Variational function for the gradient method: psi1|psi2|psi3");
  gen->add_option("--method", ga.method, "auto|lm|grad");
  gen->add_option("-o,--output", ga.output, "Output point-set file")->required();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check polynomial exactness of a point set");
  verify->add_option("file", va.file, "Point-set file")->required();
  verify->add_option("--t", va.t, "Claimed degree")->required()->check(CLI::PositiveNumber);
  verify->add_option("--t-max", va.t_max, "Highest degree examined");
  verify->add_option("--d", va.d, "Expected sphere dimension");
  verify->add_option("--tol", va.tol, "Design threshold");
  verify->add_flag("--json", va.json, "Machine-readable report");

  GeomArgs ma;
  auto* geom = app.add_subcommand("geom", "Separation, mesh norm and mesh ratio");
  geom->add_option("file", ma.file, "Point-set file")->required();
  geom->add_option("--accuracy", ma.accuracy, "Mesh-norm accuracy in radians");

  TableArgs ta;
  auto* table = app.add_subcommand("table", "Quality table over stored designs as CSV");
  table->add_option("--d", ta.d, "Sphere dimension")->check(CLI::Range(2, 8));
  table->add_option("--t-min", ta.t_min, "First degree");
  table->add_option("--t-max", ta.t_max, "Last degree")->required();
  table->add_flag("--symmetric", ta.symmetric, "Symmetric designs (ss files)");
  table->add_option("--designs-dir", ta.dir, "Directory of sfTTT.NNNNN / ssTTT.NNNNN files");
  table->add_option("--accuracy", ta.accuracy, "Mesh-norm accuracy in radians");

  ConvertArgs ca;
  auto* convert = app.add_subcommand("convert", "Rewrite a point set, optionally expanded or normalized");
  convert->add_option("input", ca.input, "Input point-set file");
  convert->add_option("--builtin", ca.builtin, "Built-in configuration instead of a file");
  convert->add_option("-o,--output", ca.output, "Output file")->required();
  convert->add_flag("--expand", ca.expand, "Write antipodal sets in full with sym=0");
  convert->add_flag("--normalize", ca.normalize, "Rotate into the normalized form");
  convert->add_option("--t", ca.t, "Degree recorded in the header");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (bounds->parsed()) return cmd_bounds(ba, out, err);
    if (gen->parsed()) return cmd_gen(ga, out);
    if (verify->parsed()) return cmd_verify(va, out);
    if (geom->parsed()) return cmd_geom(ma, out, err);
    if (table->parsed()) return cmd_table(ta, out, err);
    if (convert->parsed()) return cmd_convert(ca, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace sphdesign::cli
