#ifndef TWODISK_EXPERIMENTS_HPP
#define TWODISK_EXPERIMENTS_HPP

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "twodisk/contour.hpp"
#include "twodisk/images.hpp"
#include "twodisk/solver.hpp"

namespace twodisk {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal representation.
inline std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
inline std::string fmt(int v) { return std::to_string(v); }

enum class SolveMethod { standard, augmented, oracle };
enum class QuadratureChoice { nystrom, spectral, automatic };

// automatic: the literal Nystrom blocks for the standard method (the
// discretization under study) and the converged spectral blocks for the
// augmented method and diagnostics.
inline Quadrature resolve_quadrature(QuadratureChoice qc, Method m) {
  if (qc == QuadratureChoice::nystrom) return Quadrature::nystrom;
  if (qc == QuadratureChoice::spectral) return Quadrature::spectral;
  return m == Method::standard ? Quadrature::nystrom : Quadrature::spectral;
}

struct ExperimentConfig {
  double r1 = 1.0, r2 = 1.0;
  std::vector<double> eps_list;  // single eps stored as a one-element list
  bool eps_was_list = false;
  std::vector<int> M_list = {256};
  bool M_was_list = false;
  Conductivity conductivity = Conductivity::perfect;
  SolveMethod method = SolveMethod::augmented;
  QuadratureChoice quadrature = QuadratureChoice::automatic;
  HarmonicPolynomial H;
  double tol_rel = 1e-12;
  int m_max = 10000;
  double box_x0 = 0, box_y0 = 0, box_x1 = 0, box_y1 = 0;
  bool box_set = false;
  int resolution = 300;
  int contours = 30;
  int count = 20;

  double eps() const {
    if (eps_list.size() != 1)
      throw ConfigError("experiment needs a single eps; got " + std::to_string(eps_list.size()));
    return eps_list[0];
  }
  int M() const {
    if (M_list.size() != 1) throw ConfigError("experiment needs a single M");
    return M_list[0];
  }
  TwoDiskConfig geometry(double e) const { return symmetric_config(r1, r2, e); }

  // default bounding box: the disks inflated by 60% of the larger radius
  void resolve_box() {
    if (box_set) return;
    double e = eps_list.empty() ? 0.1 : eps_list[0];
    double pad = 0.6 * std::max(r1, r2);
    box_x0 = -2 * r1 - e / 2 - pad;
    box_x1 = 2 * r2 + e / 2 + pad;
    double half = std::max(r1, r2) + pad;
    box_y0 = -half;
    box_y1 = half;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

inline double to_double(const std::string& s, int line) {
  try {
    size_t pos;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ParseError("line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

inline int to_int(const std::string& s, int line) {
  double v = to_double(s, line);
  int i = static_cast<int>(v);
  if (i != v) throw ParseError("line " + std::to_string(line) + ": not an integer: '" + s + "'");
  return i;
}

inline HarmonicPolynomial parse_H(const std::string& value, int line) {
  HarmonicPolynomial H;
  if (trim(value).empty()) return H;
  for (const auto& tok : split(value, ',')) {
    auto parts = split(tok, ':');
    if (parts[0] == "const" && parts.size() == 2) {
      H.constant += to_double(parts[1], line);
    } else if ((parts[0] == "re" || parts[0] == "im") && parts.size() == 3) {
      int k = to_int(parts[1], line);
      if (k < 1) throw ParseError("line " + std::to_string(line) + ": degree must be >= 1");
      double c = to_double(parts[2], line);
      H.terms.push_back(parts[0] == "re" ? HarmonicTerm{k, c, 0.0} : HarmonicTerm{k, 0.0, c});
    } else {
      throw ParseError("line " + std::to_string(line) + ": bad H term '" + tok +
                       "' (expected const:<v>, re:<k>:<coef> or im:<k>:<coef>)");
    }
  }
  return H;
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
  using namespace detail;
  ExperimentConfig cfg;
  cfg.eps_list.clear();
  bool saw_eps = false, saw_eps_list = false, saw_M = false, saw_M_list = false;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line) + ": expected 'key = value'");
    std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (key == "r1") cfg.r1 = to_double(value, line);
    else if (key == "r2") cfg.r2 = to_double(value, line);
    else if (key == "eps") { cfg.eps_list = {to_double(value, line)}; saw_eps = true; }
    else if (key == "eps_list") {
      cfg.eps_list.clear();
      for (const auto& t : split(value, ',')) cfg.eps_list.push_back(to_double(t, line));
      cfg.eps_was_list = true;
      saw_eps_list = true;
    } else if (key == "M") { cfg.M_list = {to_int(value, line)}; saw_M = true; }
    else if (key == "M_list") {
      cfg.M_list.clear();
      for (const auto& t : split(value, ',')) cfg.M_list.push_back(to_int(t, line));
      cfg.M_was_list = true;
      saw_M_list = true;
    } else if (key == "conductivity") {
      if (value == "perfect") cfg.conductivity = Conductivity::perfect;
      else if (value == "insulated") cfg.conductivity = Conductivity::insulated;
      else throw ParseError("line " + std::to_string(line) + ": conductivity must be perfect|insulated");
    } else if (key == "method") {
      if (value == "standard") cfg.method = SolveMethod::standard;
      else if (value == "augmented") cfg.method = SolveMethod::augmented;
      else if (value == "oracle") cfg.method = SolveMethod::oracle;
      else throw ParseError("line " + std::to_string(line) + ": method must be standard|augmented|oracle");
    } else if (key == "quadrature") {
      if (value == "nystrom") cfg.quadrature = QuadratureChoice::nystrom;
      else if (value == "spectral") cfg.quadrature = QuadratureChoice::spectral;
      else if (value == "auto") cfg.quadrature = QuadratureChoice::automatic;
      else throw ParseError("line " + std::to_string(line) + ": quadrature must be nystrom|spectral|auto");
    } else if (key == "H") cfg.H = parse_H(value, line);
    else if (key == "tol_rel") cfg.tol_rel = to_double(value, line);
    else if (key == "m_max") cfg.m_max = to_int(value, line);
    else if (key == "box") {
      auto parts = split(value, ',');
      if (parts.size() != 4)
        throw ParseError("line " + std::to_string(line) + ": box = xmin,ymin,xmax,ymax");
      cfg.box_x0 = to_double(parts[0], line);
      cfg.box_y0 = to_double(parts[1], line);
      cfg.box_x1 = to_double(parts[2], line);
      cfg.box_y1 = to_double(parts[3], line);
      cfg.box_set = true;
    } else if (key == "resolution") cfg.resolution = to_int(value, line);
    else if (key == "contours") cfg.contours = to_int(value, line);
    else if (key == "count") cfg.count = to_int(value, line);
    else throw ParseError("line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  if (saw_eps && saw_eps_list) throw ParseError("both eps and eps_list given");
  if (saw_M && saw_M_list) throw ParseError("both M and M_list given");
  for (double e : cfg.eps_list)
    if (e <= 0) throw ParseError("eps must be positive");
  for (int m : cfg.M_list)
    if (m < 8 || m % 2) throw ParseError("M must be even and >= 8");
  if (cfg.box_set) {
    double e = cfg.eps_list.empty() ? 0.1 : cfg.eps_list[0];
    if (cfg.box_x0 > -2 * cfg.r1 - e / 2 || cfg.box_x1 < 2 * cfg.r2 + e / 2 ||
        cfg.box_y0 > -std::max(cfg.r1, cfg.r2) || cfg.box_y1 < std::max(cfg.r1, cfg.r2))
      throw ParseError("bounding box does not enclose both disks");
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// Flat key-value run record; serialized as the same `key = value` text format
// the configs use, so it round-trips exactly.
struct RunRecord {
  std::vector<std::pair<std::string, std::string>> entries;
  bool ok = true;

  void put(const std::string& k, const std::string& v) { entries.emplace_back(k, v); }
  void put(const std::string& k, double v) { put(k, fmt(v)); }
  void put(const std::string& k, int v) { put(k, fmt(v)); }

  std::string to_text() const {
    std::string out;
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    return out;
  }
  static RunRecord from_text(const std::string& text) {
    RunRecord r;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      r.put(line.substr(0, eq), line.substr(eq + 3));
    }
    return r;
  }
  void save(const std::filesystem::path& p) const {
    std::ofstream out(p);
    out << to_text();
  }
};

namespace detail {

inline void echo_inputs(RunRecord& rec, const ExperimentConfig& cfg) {
  rec.put("r1", cfg.r1);
  rec.put("r2", cfg.r2);
  rec.put("conductivity", cfg.conductivity == Conductivity::perfect ? "perfect" : "insulated");
  std::string h;
  if (cfg.H.constant != 0) h += "const:" + fmt(cfg.H.constant);
  for (const auto& t : cfg.H.terms) {
    if (!h.empty()) h += ",";
    if (t.re_coef != 0) h += "re:" + fmt(t.degree) + ":" + fmt(t.re_coef);
    if (t.im_coef != 0) h += (t.re_coef != 0 ? "," : "") + std::string("im:") + fmt(t.degree) + ":" + fmt(t.im_coef);
  }
  rec.put("H", h);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
};

// Flux errors of both methods against the images-series reference for one
// (eps, M) pair on the symmetric axis-aligned geometry.
struct FluxErrors {
  double std_l2, aug_l2, std_inf, aug_inf;
  int std_argmax, aug_argmax;
};

inline FluxErrors flux_errors(const ExperimentConfig& cfg, double eps, int M) {
  TwoDiskConfig geo = cfg.geometry(eps);
  FieldSolution fs_std = solve_field(geo, cfg.H, M, Method::standard, Conductivity::perfect,
                                     resolve_quadrature(cfg.quadrature, Method::standard));
  FieldSolution fs_aug = solve_field(geo, cfg.H, M, Method::augmented, Conductivity::perfect,
                                     resolve_quadrature(cfg.quadrature, Method::augmented));
  double a = stress_intensity(geo, cfg.H).a_perfect;
  ReferenceFlux ref = reference_flux(geo, cfg.H, a, cfg.tol_rel, cfg.m_max, M);
  if (!ref.report.converged)
    throw DomainError("images series did not converge (tail ratio " +
                      std::to_string(ref.report.tail_ratio) + ")");
  FluxErrors e;
  auto linf = [&](const SolutionField& f, int& argmax) {
    Eigen::VectorXd d(2 * M);
    d.head(M) = boundary_flux(f, 1) - ref.flux1;
    d.tail(M) = boundary_flux(f, 2) - ref.flux2;
    Eigen::VectorXd r(2 * M);
    r.head(M) = ref.flux1;
    r.tail(M) = ref.flux2;
    Eigen::Index idx;
    double m = d.cwiseAbs().maxCoeff(&idx);
    argmax = static_cast<int>(idx);
    return m / r.cwiseAbs().maxCoeff();
  };
  double w1 = fs_std.field.dens1.grid.weight, w2 = fs_std.field.dens2.grid.weight;
  e.std_l2 = relative_L2_error(boundary_flux(fs_std.field, 1), boundary_flux(fs_std.field, 2),
                               ref.flux1, ref.flux2, w1, w2);
  e.aug_l2 = relative_L2_error(boundary_flux(fs_aug.field, 1), boundary_flux(fs_aug.field, 2),
                               ref.flux1, ref.flux2, w1, w2);
  e.std_inf = linf(fs_std.field, e.std_argmax);
  e.aug_inf = linf(fs_aug.field, e.aug_argmax);
  return e;
}

}  // namespace detail

// ---- benchmark experiments ----------------------------------------------

inline RunRecord run_eps_error_sweep(ExperimentConfig cfg, const std::filesystem::path& out) {
  if (cfg.eps_list.empty())
    for (int i = 0; i < 7; ++i) cfg.eps_list.push_back(std::pow(10.0, -1.0 - i / 3.0));
  detail::Timer timer;
  RunRecord rec;
  detail::echo_inputs(rec, cfg);
  std::ofstream csv(out / "eps_sweep.csv");
  csv << "eps,M,rel_err_standard,rel_err_augmented\n";
  int M = cfg.M();
  for (double eps : cfg.eps_list) {
    try {
      auto e = detail::flux_errors(cfg, eps, M);
      csv << fmt(eps) << "," << M << "," << fmt(e.std_l2) << "," << fmt(e.aug_l2) << "\n";
      rec.put("rel_err_standard@" + fmt(eps), e.std_l2);
      rec.put("rel_err_augmented@" + fmt(eps), e.aug_l2);
    } catch (const std::exception& ex) {
      csv << fmt(eps) << "," << M << ",nan,nan\n";
      rec.put("error@" + fmt(eps), ex.what());
      rec.ok = false;
    }
  }
  rec.put("elapsed_ms", timer.ms());
  rec.save(out / "record.txt");
  return rec;
}

inline RunRecord run_grid_error_sweep(ExperimentConfig cfg, const std::filesystem::path& out) {
  if (!cfg.M_was_list && cfg.M_list.size() == 1) cfg.M_list = {16, 32, 64, 128, 256};
  if (cfg.eps_list.empty()) cfg.eps_list = {0.0156};
  detail::Timer timer;
  RunRecord rec;
  detail::echo_inputs(rec, cfg);
  rec.put("eps", cfg.eps());
  std::ofstream csv(out / "grid_sweep.csv");
  csv << "M,rel_l2_std,rel_l2_aug,rel_inf_std,rel_inf_aug,argmax_node_std,argmax_node_aug\n";
  for (int M : cfg.M_list) {
    try {
      auto e = detail::flux_errors(cfg, cfg.eps(), M);
      csv << M << "," << fmt(e.std_l2) << "," << fmt(e.aug_l2) << "," << fmt(e.std_inf) << ","
          << fmt(e.aug_inf) << "," << e.std_argmax << "," << e.aug_argmax << "\n";
    } catch (const std::exception& ex) {
      csv << M << ",nan,nan,nan,nan,-1,-1\n";
      rec.put("error@M=" + fmt(M), ex.what());
      rec.ok = false;
    }
  }
  rec.put("elapsed_ms", timer.ms());
  rec.save(out / "record.txt");
  return rec;
}

inline RunRecord run_condition_sweep(ExperimentConfig cfg, const std::filesystem::path& out) {
  if (cfg.eps_list.empty())
    for (int i = 0; i < 8; ++i)
      cfg.eps_list.push_back(1e-1 * std::pow(2e-3 / 1e-1, i / 7.0));
  detail::Timer timer;
  RunRecord rec;
  detail::echo_inputs(rec, cfg);
  int M = cfg.M();
  Quadrature quad = resolve_quadrature(cfg.quadrature, Method::augmented);
  std::ofstream csv(out / "condition.csv");
  csv << "eps,sigma_min,sigma_max,cond\n";
  for (double eps : cfg.eps_list) {
    AssembledSystem sys = assemble(cfg.geometry(eps), M, cfg.conductivity, quad);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.A);
    const auto& S = svd.singularValues();
    double smin = S[S.size() - 1], smax = S[0];
    csv << fmt(eps) << "," << fmt(smin) << "," << fmt(smax) << "," << fmt(smax / smin) << "\n";
    rec.put("cond@" + fmt(eps), smax / smin);
  }
  {  // full spectrum snapshot at eps = 0.002
    AssembledSystem sys = assemble(cfg.geometry(0.002), M, cfg.conductivity, quad);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.A);
    std::ofstream sv(out / "singular_values.csv");
    sv << "rank,sigma\n";
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      sv << (i + 1) << "," << fmt(svd.singularValues()[i]) << "\n";
  }
  rec.put("elapsed_ms", timer.ms());
  rec.save(out / "record.txt");
  return rec;
}

inline RunRecord run_projection_study(ExperimentConfig cfg, const std::filesystem::path& out) {
  if (cfg.eps_list.empty()) cfg.eps_list = {0.002};
  detail::Timer timer;
  RunRecord rec;
  detail::echo_inputs(rec, cfg);
  double eps = cfg.eps();
  int M = cfg.M();
  rec.put("eps", eps);
  TwoDiskConfig geo = cfg.geometry(eps);
  AssembledSystem sys = assemble(geo, M, Conductivity::perfect,
                                 resolve_quadrature(cfg.quadrature, Method::augmented));
  StressIntensity si = stress_intensity(geo, cfg.H);
  Eigen::VectorXd y_std = rhs_standard(sys, cfg.H);
  Eigen::VectorXd y_aug = rhs_augmented(sys, cfg.H, si);
  // oracle densities: psi from the series for the augmented system, and
  // phi = psi + a*chi (chi the single-layer density of h~) for the standard one
  SeriesResult sr = series_densities(geo, cfg.H, si.a_perfect, cfg.tol_rel, cfg.m_max, M);
  if (!sr.report.converged) {
    rec.ok = false;
    rec.put("series", "not converged");
  }
  Eigen::VectorXd x_aug(2 * M), x_std(2 * M);
  x_aug.head(M) = sr.psi1.values;
  x_aug.tail(M) = sr.psi2.values;
  x_std = x_aug;
  x_std.head(M) += si.a_perfect * h_tilde_density(geo, sys.grid1, 1);
  x_std.tail(M) += si.a_perfect * h_tilde_density(geo, sys.grid2, 2);
  auto proj_std = svd_projections(sys, y_std, sys.A * x_std - y_std, cfg.count);
  auto proj_aug = svd_projections(sys, y_aug, sys.A * x_aug - y_aug, cfg.count);
  std::ofstream csv(out / "projections.csv");
  csv << "rank_from_smallest,sigma,proj_rhs_std,proj_rhs_aug,proj_res_std,proj_res_aug\n";
  for (size_t i = 0; i < proj_std.size(); ++i)
    csv << (i + 1) << "," << fmt(proj_std[i].sigma) << "," << fmt(proj_std[i].proj_rhs) << ","
        << fmt(proj_aug[i].proj_rhs) << "," << fmt(proj_std[i].proj_residual) << ","
        << fmt(proj_aug[i].proj_residual) << "\n";
  rec.put("elapsed_ms", timer.ms());
  rec.save(out / "record.txt");
  return rec;
}

inline RunRecord run_level_curves(ExperimentConfig cfg, const std::filesystem::path& out,
                                  int threads = 0) {
  if (cfg.eps_list.empty()) cfg.eps_list = {0.0156};
  cfg.resolve_box();
  detail::Timer timer;
  RunRecord rec;
  detail::echo_inputs(rec, cfg);
  double eps = cfg.eps();
  int M = cfg.M();
  rec.put("eps", eps);
  TwoDiskConfig geo = cfg.geometry(eps);
  Method method = cfg.method == SolveMethod::standard ? Method::standard : Method::augmented;
  FieldSolution fs = solve_field(geo, cfg.H, M, method, cfg.conductivity,
                                 resolve_quadrature(cfg.quadrature, method));

  FieldGrid grid;
  grid.x0 = cfg.box_x0; grid.y0 = cfg.box_y0; grid.x1 = cfg.box_x1; grid.y1 = cfg.box_y1;
  grid.nx = grid.ny = cfg.resolution;
  grid.values.assign(grid.nx * grid.ny, 0.0);
  grid.masked.assign(grid.nx * grid.ny, 0);
  double margin1 = 2.0 * two_pi * geo.disk1.radius / M;
  double margin2 = 2.0 * two_pi * geo.disk2.radius / M;
  auto eval_rows = [&](int j_begin, int j_end) {
    for (int j = j_begin; j < j_end; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        Vec2 x(grid.x_at(i), grid.y_at(j));
        double d1 = (x - geo.disk1.center).norm() - geo.disk1.radius;
        double d2 = (x - geo.disk2.center).norm() - geo.disk2.radius;
        size_t idx = static_cast<size_t>(j) * grid.nx + i;
        if (d1 < margin1 || d2 < margin2) {
          grid.masked[idx] = 1;
          grid.values[idx] = std::numeric_limits<double>::quiet_NaN();
        } else {
          grid.values[idx] = eval_u(fs.field, x, EvalBackend::modal);
        }
      }
  };
  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, grid.ny));
  std::vector<std::thread> pool;
  int chunk = (grid.ny + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back(eval_rows, t * chunk, std::min(grid.ny, (t + 1) * chunk));
  for (auto& t : pool) t.join();

  {
    std::ofstream csv(out / "field.csv");
    csv << "x1,x2,u,masked\n";
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        csv << fmt(grid.x_at(i)) << "," << fmt(grid.y_at(j)) << ","
            << fmt(grid.at(i, j)) << "," << int(grid.is_masked(i, j)) << "\n";
  }
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (!grid.is_masked(i, j)) {
        vmin = std::min(vmin, grid.at(i, j));
        vmax = std::max(vmax, grid.at(i, j));
      }
  std::vector<std::vector<Segment>> levels;
  for (int l = 0; l < cfg.contours; ++l) {
    double c = vmin + (vmax - vmin) * (l + 0.5) / cfg.contours;
    levels.push_back(contour_level(grid, c));
  }
  write_contour_svg((out / "contours.svg").string(), grid, levels, geo.disk1, geo.disk2);
  rec.put("field_min", vmin);
  rec.put("field_max", vmax);
  rec.put("elapsed_ms", timer.ms());
  rec.save(out / "record.txt");
  return rec;
}

inline RunRecord run_single_solve(ExperimentConfig cfg, const std::filesystem::path& out) {
  if (cfg.eps_list.empty()) cfg.eps_list = {0.1};
  detail::Timer timer;
  RunRecord rec;
  detail::echo_inputs(rec, cfg);
  double eps = cfg.eps();
  int M = cfg.M();
  rec.put("eps", eps);
  rec.put("M", M);
  TwoDiskConfig geo = cfg.geometry(eps);
  Eigen::VectorXd d1, d2, f1, f2;
  if (cfg.method == SolveMethod::oracle) {
    double a = stress_intensity(geo, cfg.H).a_perfect;
    SeriesResult sr = series_densities(geo, cfg.H, a, cfg.tol_rel, cfg.m_max, M);
    SolutionField f = field_from_series(geo, cfg.H, a, sr);
    d1 = sr.psi1.values; d2 = sr.psi2.values;
    f1 = boundary_flux(f, 1); f2 = boundary_flux(f, 2);
    rec.put("intensity", a);
    rec.put("series_depth", sr.report.depth);
    rec.put("series_tail_ratio", sr.report.tail_ratio);
    rec.put("series_converged", sr.report.converged ? "yes" : "no");
    rec.ok = sr.report.converged;
    rec.put("lambda1", boundary_constant(f, 1));
    rec.put("lambda2", boundary_constant(f, 2));
  } else {
    Method method = cfg.method == SolveMethod::standard ? Method::standard : Method::augmented;
    FieldSolution fs = solve_field(geo, cfg.H, M, method, cfg.conductivity,
                                   resolve_quadrature(cfg.quadrature, method));
    d1 = fs.field.dens1.values; d2 = fs.field.dens2.values;
    f1 = boundary_flux(fs.field, 1); f2 = boundary_flux(fs.field, 2);
    rec.put("intensity", fs.field.intensity);
    rec.put("residual_rel", fs.report.residual_rel);
    if (cfg.conductivity == Conductivity::perfect) {
      rec.put("lambda1", boundary_constant(fs.field, 1));
      rec.put("lambda2", boundary_constant(fs.field, 2));
    } else {
      rec.put("mean_projection", fs.report.mean_projection);
    }
    rec.put("density_sup1", d1.cwiseAbs().maxCoeff());
    rec.put("density_sup2", d2.cwiseAbs().maxCoeff());
  }
  std::ofstream csv(out / "densities.csv");
  csv << "node,theta,density1,density2,flux1,flux2\n";
  for (int k = 0; k < M; ++k)
    csv << k << "," << fmt(two_pi * k / M) << "," << fmt(d1[k]) << "," << fmt(d2[k]) << ","
        << fmt(f1[k]) << "," << fmt(f2[k]) << "\n";
  rec.put("elapsed_ms", timer.ms());
  rec.save(out / "record.txt");
  return rec;
}

}  // namespace twodisk

#endif
