#include "gfs/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "gfs/burgers.hpp"
#include "gfs/hydromodes.hpp"
#include "gfs/kernels.hpp"
#include "gfs/nls.hpp"
#include "gfs/parallel.hpp"
#include "gfs/stochastic.hpp"
#include "gfs/vortex.hpp"

namespace gfs::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Column-major CSV builder with fixed 17-digit formatting.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<double>& values) {
    if (values.size() != header_.size()) throw std::logic_error("Csv: row width mismatch");
    rows_.push_back(values);
  }
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
    out += '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

/// Collects outputs of one run.
struct Context {
  std::filesystem::path dir;
  unsigned threads = 0;
  json observables = json::object();
  json files = json::object();
  json warnings = json::array();

  void observe(const std::string& name, double value) {
    observables[name] = json{{"value", value}};
  }
  void observe(const std::string& name, const Estimate& e) {
    observables[name] = json{{"value", e.value}, {"std_error", e.std_error}};
  }
  void warn(const std::string& message) { warnings.push_back(message); }
  void write(const std::string& name, const std::string& contents) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::filesystem::filesystem_error("cannot write", path, std::make_error_code(std::errc::permission_denied));
    out << contents;
    if (!out) throw std::filesystem::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
    files[name] = json{{"bytes", contents.size()}, {"fnv1a64", fnv1a64(contents)}};
  }
};

void reject_unused(const Config& cfg) {
  const auto unused = cfg.unused_keys();
  if (!unused.empty()) {
    throw ConfigError("unknown_key", *unused.begin(),
                      "unknown key '" + *unused.begin() + "' for this experiment");
  }
}

std::size_t get_count(const Config& cfg, const std::string& key, long long fallback,
                      long long minimum = 1) {
  const long long v = cfg.get_int(key, fallback);
  if (v < minimum) {
    throw ConfigError("invalid_value", key, key + " must be >= " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(v);
}

double positive(const Config& cfg, const std::string& key, std::optional<double> fallback = {}) {
  const double v = fallback ? cfg.get_double(key, *fallback) : cfg.get_double(key);
  if (!(v > 0.0)) throw ConfigError("invalid_value", key, key + " must be positive");
  return v;
}

std::string choice(const Config& cfg, const std::string& key, const std::string& fallback,
                   std::initializer_list<const char*> allowed) {
  const std::string v = cfg.get_string(key, fallback);
  for (const char* a : allowed) {
    if (v == a) return v;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw ConfigError("invalid_value", key, key + " must be one of: " + list);
}

StrainModel read_strain_model(const Config& cfg) {
  StrainModel m;
  m.k0 = positive(cfg, "k0");
  const std::string kind = choice(cfg, "fluctuation", "none", {"none", "delta", "exponential"});
  if (kind == "delta") {
    m.fluctuation = DeltaCorrelated{cfg.get_double("k_tilde")};
  } else if (kind == "exponential") {
    m.fluctuation = ExponentialCorrelated{cfg.get_double("variance"), cfg.get_double("tau_c")};
  }
  m.boundary_delta_weight = cfg.get_double("weight", 0.5);
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid_value", "fluctuation", e.what());
  }
  return m;
}

VelocityProfile read_profile(const Config& cfg) {
  const std::string kind = choice(cfg, "profile", "couette", {"couette", "sin"});
  VelocityProfile p;
  const double half = positive(cfg, "profile_half_width", 1e3);
  p.x_min = -half;
  p.x_max = half;
  p.dx = positive(cfg, "profile_dx", 1e-3);
  if (kind == "couette") {
    const double omega0 = cfg.get_double("omega0", 1.0);
    p.v = [omega0](double x) { return omega0 * x; };
  } else {
    const double a = cfg.get_double("amplitude", 1.0);
    const double w = cfg.get_double("wavenumber", 1.0);
    p.v = [a, w](double x) { return a * std::sin(w * x); };
  }
  return p;
}

McParams read_mc(const Config& cfg, unsigned threads, long long default_paths = 100000) {
  McParams mc;
  mc.n_paths = get_count(cfg, "n_paths", default_paths);
  mc.dt = positive(cfg, "dt", 1e-3);
  mc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  mc.threads = threads;
  return mc;
}

std::vector<double> time_points(double t_end, std::size_t n_times) {
  std::vector<double> ts(n_times);
  for (std::size_t i = 0; i < n_times; ++i) {
    ts[i] = n_times == 1 ? t_end : t_end * static_cast<double>(i) / static_cast<double>(n_times - 1);
  }
  return ts;
}

// Four-point Lagrange interpolation of a field at x (interior only).
double interpolate(const Field& f, double x) {
  const Grid1D& g = f.grid;
  const double s = (x - g.x_min()) / g.dx();
  auto i = static_cast<std::ptrdiff_t>(std::floor(s));
  i = std::clamp<std::ptrdiff_t>(i, 1, static_cast<std::ptrdiff_t>(g.size()) - 3);
  const double u = s - static_cast<double>(i);
  auto at = [&](std::ptrdiff_t j) { return f.values[static_cast<std::size_t>(j)]; };
  return -at(i - 1) * u * (u - 1.0) * (u - 2.0) / 6.0 +
         at(i) * (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 -
         at(i + 1) * (u + 1.0) * u * (u - 2.0) / 2.0 + at(i + 2) * (u + 1.0) * u * (u - 1.0) / 6.0;
}

// ---------------------------------------------------------------------------

void run_burgers(const Config& cfg, Context& ctx) {
  const double nu = positive(cfg, "nu");
  const double t_end = positive(cfg, "t_end");
  const std::size_t n = get_count(cfg, "n_points", 2048, 8);
  const double x_min = cfg.get_double("x_min", -1.0);
  const double x_max = cfg.get_double("x_max", 1.0);
  if (!(x_max > x_min)) throw ConfigError("invalid_value", "x_max", "x_max must exceed x_min");
  const std::string boundary_name = choice(cfg, "boundary", "periodic", {"periodic", "zero"});
  const std::string ic = choice(cfg, "ic", "minus_sin_pi", {"minus_sin_pi", "gaussian"});
  const double amplitude = cfg.get_double("amplitude", 1.0);
  const double width = positive(cfg, "width", 0.2);
  const double epsilon = cfg.get_double("epsilon", 0.05);
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("invalid_value", "epsilon", "epsilon must lie in (0, 1)");
  }
  const double dt_scale = positive(cfg, "dt_scale", 1.0);
  const bool oracle = cfg.get_bool("oracle", true);
  reject_unused(cfg);

  const bool periodic = boundary_name == "periodic";
  const Boundary boundary = periodic ? Boundary::kPeriodic : Boundary::kZero;
  const Grid1D grid = periodic ? Grid1D::periodic(x_min, x_max - x_min, n) : Grid1D(x_min, x_max, n);
  const Field u0 = Field::sample(grid, [&](double x) {
    if (ic == "minus_sin_pi") return -amplitude * std::sin(std::numbers::pi * x);
    return amplitude * std::exp(-x * x / (width * width));
  });

  StepOptions opts;
  opts.boundary = boundary;
  opts.threads = ctx.threads;
  opts.epsilon_max = epsilon;
  const SolveReport rep = solve_incremental(BurgersState{u0, 0.0, nu}, t_end, opts, dt_scale);

  Csv u_csv({"x", "value"});
  for (std::size_t i = 0; i < n; ++i) u_csv.row({grid.x(i), rep.state.u[i]});
  ctx.write("u.csv", u_csv.str());
  ctx.observe("steps", static_cast<double>(rep.steps));
  ctx.observe("min_dt", rep.min_dt);
  ctx.observe("max_dt", rep.max_dt);
  ctx.observe("admissibility_warnings", static_cast<double>(rep.warnings));
  ctx.observe("integral_u", trapezoid(rep.state.u.values, grid.dx(), periodic));
  if (rep.warnings) ctx.warn("steps exceeded the admissible dt: " + std::to_string(rep.warnings));

  if (oracle) {
    std::vector<double> exact(n);
    parallel_for(n, ctx.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) exact[i] = cole_hopf_exact(u0, nu, grid.x(i), t_end, boundary);
    });
    Csv ex_csv({"x", "value"});
    double linf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ex_csv.row({grid.x(i), exact[i]});
      linf = std::max(linf, std::abs(exact[i] - rep.state.u[i]));
    }
    ctx.write("exact.csv", ex_csv.str());
    ctx.observe("linf_error_vs_cole_hopf", linf);
  }
}

void run_nls(const Config& cfg, Context& ctx) {
  const std::string ic = choice(cfg, "ic", "soliton", {"soliton", "gaussian", "plane_wave"});
  const double kappa = cfg.get_double("kappa", 1.0);
  const double beta = positive(cfg, "beta", 1.0);
  const double amplitude = cfg.get_double("amplitude", 1.0);
  const long long mode = cfg.get_int("mode", 1);
  const double width = positive(cfg, "width", 1.0);
  const std::size_t n = get_count(cfg, "n_points", 1024, 8);
  const double period =
      positive(cfg, "period", ic == "soliton" ? 40.0 / std::sqrt(beta) : 40.0);
  const double t_end = positive(cfg, "t_end", 1.0);
  const double dt = positive(cfg, "dt", 1e-3);
  const double speed = cfg.get_double("frame_speed", 0.0);
  reject_unused(cfg);
  if (ic == "soliton" && !(kappa > 0.0)) {
    throw ConfigError("invalid_value", "kappa", "the soliton needs kappa > 0");
  }

  const Grid1D grid = Grid1D::periodic(-0.5 * period, period, n);
  const double k_wave = 2.0 * std::numbers::pi * static_cast<double>(mode) / period;
  ComplexField eta0(grid);
  if (ic == "soliton") {
    eta0 = stationary_soliton(grid, beta, kappa);
  } else if (ic == "gaussian") {
    eta0 = ComplexField::sample(grid, [&](double x) {
      return std::complex<double>(amplitude * std::exp(-x * x / (2.0 * width * width)), 0.0);
    });
  } else {
    eta0 = ComplexField::sample(grid, [&](double x) { return std::polar(amplitude, k_wave * x); });
  }

  const WaveState start{eta0, 0.0, kappa, speed};
  const PropagateResult res = propagate(start, t_end, dt);
  const ComplexField& eta = res.state.eta;
  Csv csv({"x", "re", "im"});
  for (std::size_t i = 0; i < n; ++i) csv.row({grid.x(i), eta[i].real(), eta[i].imag()});
  ctx.write("eta.csv", csv.str());

  const double n0 = wave_norm(eta0), n1 = wave_norm(eta);
  ctx.observe("steps", static_cast<double>(res.steps));
  ctx.observe("norm_initial", n0);
  ctx.observe("norm_final", n1);
  ctx.observe("norm_relative_drift", std::abs(n1 - n0) / n0);
  ctx.observe("momentum_initial", wave_momentum(eta0));
  ctx.observe("momentum_final", wave_momentum(eta));
  ctx.observe("phase_warning", res.phase_warning ? 1.0 : 0.0);
  if (res.phase_warning) ctx.warn("dt does not resolve the fastest phase rotation");
  if (ic == "soliton" && speed == 0.0) {
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(std::abs(eta[i]) - std::abs(eta0[i])));
    ctx.observe("shape_deviation", dev);
  }
  if (ic == "plane_wave" && speed == 0.0) {
    const double omega = k_wave * k_wave - kappa * amplitude * amplitude;
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err = std::max(err, std::abs(eta[i] - std::polar(amplitude, k_wave * grid.x(i) - omega * t_end)));
    }
    ctx.observe("plane_wave_error", err);
  }
}

StrainRealization read_deterministic_strain(const Config& cfg, double k0) {
  const std::string kind = choice(cfg, "strain", "constant", {"constant", "sinusoidal"});
  if (kind == "constant") return ConstantStrain{k0};
  const double a = cfg.get_double("strain_amplitude", 0.5);
  const double w = cfg.get_double("strain_frequency", 1.0);
  return FunctionStrain{[k0, a, w](double t) { return k0 + a * std::sin(w * t); }};
}

void run_vortex_deterministic(const Config& cfg, Context& ctx) {
  const double k0 = positive(cfg, "k0");
  const double nu = positive(cfg, "nu");
  const double x0 = cfg.get_double("x0", 1.0);
  const double strength = cfg.get_double("strength", 1.0);
  const StrainRealization strain = read_deterministic_strain(cfg, k0);
  const double t_end = positive(cfg, "t_end");
  const std::size_t n_times = get_count(cfg, "n_times", 11);
  const McParams mc = read_mc(cfg, ctx.threads);
  reject_unused(cfg);

  Csv closed({"t", "mean_position", "spread", "strength", "std_error_mean_position", "std_error_spread"});
  for (double t : time_points(t_end, n_times)) {
    const SheetStats s = sheet_stats_deterministic(x0, strength, nu, strain, t);
    closed.row({t, s.mean_position, s.spread, s.strength, 0.0, 0.0});
  }
  ctx.write("stats.csv", closed.str());

  SdeSpec spec;
  spec.nu = nu;
  spec.x_start = x0;
  spec.s_end = t_end;
  spec.drift = [&strain](double x, double s) { return -strain_rate(strain, s) * x; };
  const PathEnsemble paths = sample_paths(spec, mc);
  const SampleSummary ms = summarize(paths.terminal_values);
  Csv mcsv({"t", "mean_position", "spread", "strength", "std_error_mean_position", "std_error_spread"});
  mcsv.row({t_end, ms.mean, ms.variance, strength, ms.std_error, ms.variance_std_error});
  ctx.write("mc.csv", mcsv.str());

  const SheetStats s = sheet_stats_deterministic(x0, strength, nu, strain, t_end);
  ctx.observe("closed_mean_position", s.mean_position);
  ctx.observe("closed_spread", s.spread);
  ctx.observe("mc_mean_position", Estimate{ms.mean, ms.std_error});
  ctx.observe("mc_spread", Estimate{ms.variance, ms.variance_std_error});
  if (std::holds_alternative<ConstantStrain>(strain)) ctx.observe("stationary_spread", nu / k0);
}

void run_vortex_random(const Config& cfg, Context& ctx) {
  const StrainModel model = read_strain_model(cfg);
  const double nu = positive(cfg, "nu");
  const double x0 = cfg.get_double("x0", 1.0);
  const double strength = cfg.get_double("strength", 1.0);
  const double t_end = positive(cfg, "t_end");
  const std::size_t n_times = get_count(cfg, "n_times", 11);
  const McParams mc = read_mc(cfg, ctx.threads);
  reject_unused(cfg);
  for (const auto& w : model.warnings()) ctx.warn(w);

  Csv closed({"t", "mean_position", "spread", "spread_exact_closure", "inviscid_spread", "strength"});
  for (double t : time_points(t_end, n_times)) {
    closed.row({t, ensemble_mean_position(x0, model, t),
                ensemble_spread(x0, model, nu, t, SpreadMode::kViscous, SpreadClosure::kIndependence),
                ensemble_spread(x0, model, nu, t, SpreadMode::kViscous, SpreadClosure::kExact),
                ensemble_spread(x0, model, nu, t, SpreadMode::kInviscid), strength});
  }
  ctx.write("closed.csv", closed.str());

  const StrainEnsemble e =
      strain_ensemble(model, x0, nu, t_end, StrainMcParams{mc.n_paths, mc.dt, mc.seed, ctx.threads});
  Csv mcsv({"t", "mean_position", "spread", "inviscid_spread", "strength", "std_error_mean_position",
            "std_error_spread", "std_error_inviscid_spread"});
  mcsv.row({t_end, e.mean_position.value, e.viscous_spread.value, e.inviscid_spread.value, strength,
            e.mean_position.std_error, e.viscous_spread.std_error, e.inviscid_spread.std_error});
  ctx.write("mc.csv", mcsv.str());

  ctx.observe("closed_mean_position", ensemble_mean_position(x0, model, t_end));
  ctx.observe("closed_spread_independence",
              ensemble_spread(x0, model, nu, t_end, SpreadMode::kViscous, SpreadClosure::kIndependence));
  ctx.observe("closed_spread_exact",
              ensemble_spread(x0, model, nu, t_end, SpreadMode::kViscous, SpreadClosure::kExact));
  ctx.observe("closed_inviscid_spread", ensemble_spread(x0, model, nu, t_end, SpreadMode::kInviscid));
  ctx.observe("mc_mean_position", e.mean_position);
  ctx.observe("mc_spread", e.viscous_spread);
  ctx.observe("mc_independence_spread", e.independence_spread);
  ctx.observe("mc_inviscid_spread", e.inviscid_spread);
  ctx.observe("mc_fluctuation_variance", e.fluctuation_variance);
}

void run_vortex_inviscid(const Config& cfg, Context& ctx) {
  const StrainModel model = read_strain_model(cfg);
  const VelocityProfile profile = read_profile(cfg);
  const bool couette = cfg.get_string("profile", "couette") == "couette";
  const double omega0 = cfg.get_double("omega0", 1.0);
  const double x_min = cfg.get_double("x_min", -1.0);
  const double x_max = cfg.get_double("x_max", 1.0);
  if (!(x_max > x_min)) throw ConfigError("invalid_value", "x_max", "x_max must exceed x_min");
  const std::size_t n = get_count(cfg, "n_points", 21, 2);
  const double t_end = positive(cfg, "t_end");
  const McParams mc = read_mc(cfg, ctx.threads, 10000);
  reject_unused(cfg);
  for (const auto& w : model.warnings()) ctx.warn(w);

  const Grid1D grid(x_min, x_max, n);
  const std::size_t n_real = model.is_random() ? std::max<std::size_t>(mc.n_paths, 2) : 1;
  // samples[i * n + j]: realization i at grid point j
  std::vector<double> samples(n_real * n);
  parallel_for(n_real, ctx.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      StrainRealization s = ConstantStrain{model.k0};
      if (model.is_random()) s = strain_path_sample(model, t_end, mc.dt, mc.seed, i);
      for (std::size_t j = 0; j < n; ++j) {
        samples[i * n + j] = inviscid_continuous_vorticity(profile, s, grid.x(j), t_end);
      }
    }
  });

  std::vector<std::string> header{"x", "value", "std_error"};
  if (couette) header.push_back("closed");
  Csv csv(header);
  std::vector<double> column(n_real);
  Estimate center;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n_real; ++i) column[i] = samples[i * n + j];
    const SampleSummary s = summarize(column);
    const double se = n_real > 1 ? s.std_error : 0.0;
    std::vector<double> row{grid.x(j), s.mean, se};
    if (couette) row.push_back(ensemble_couette_vorticity(omega0, model, t_end));
    csv.row(row);
    if (j == n / 2) center = {s.mean, se};
  }
  ctx.write("vorticity.csv", csv.str());
  ctx.observe("vorticity_at_center", center);
  if (couette) ctx.observe("closed_couette_vorticity", ensemble_couette_vorticity(omega0, model, t_end));
}

void run_feynman_kac(const Config& cfg, Context& ctx) {
  const StrainModel model = read_strain_model(cfg);
  const VelocityProfile profile = read_profile(cfg);
  const double nu = cfg.get_double("nu");
  if (!(nu >= 0.0)) throw ConfigError("invalid_value", "nu", "nu must be >= 0");
  const double x = cfg.get_double("x");
  const double t_end = positive(cfg, "t_end");
  FkVortexParams p;
  p.n_strain = get_count(cfg, "n_strain", 200);
  p.n_inner = get_count(cfg, "n_inner", 100000);
  p.dt = positive(cfg, "dt", 1e-3);
  p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  p.threads = ctx.threads;
  const bool pde = cfg.get_bool("pde_reference", !model.is_random());
  const double half = positive(cfg, "pde_half_width", 10.0);
  const std::size_t pde_points = get_count(cfg, "pde_points", 4001, 8);
  const double pde_dt = positive(cfg, "pde_dt", 1e-4);
  reject_unused(cfg);
  if (pde && model.is_random()) {
    throw ConfigError("invalid_value", "pde_reference", "the PDE reference needs non-random strain");
  }
  for (const auto& w : model.warnings()) ctx.warn(w);

  const FkVortexResult fk = feynman_kac_vorticity(profile, model, nu, x, t_end, p);
  ctx.observe("fk_vorticity", fk.value);
  ctx.observe("inner_std_error", fk.inner_std_error);
  std::vector<std::string> header{"x", "value", "std_error"};
  std::vector<double> row{x, fk.value.value, fk.value.std_error};
  if (pde) {
    const Grid1D grid = Grid1D::centered(half, pde_points);
    const Field w0 = Field::sample(grid, [&](double y) { return profile.vorticity(y); });
    const Field w = solve_vorticity_pde(w0, ConstantStrain{model.k0}, nu, t_end, pde_dt);
    const double ref = interpolate(w, x);
    header.push_back("pde_value");
    row.push_back(ref);
    ctx.observe("pde_vorticity", ref);
    ctx.observe("defect_in_std_errors",
                fk.value.std_error > 0.0 ? std::abs(fk.value.value - ref) / fk.value.std_error
                                         : std::abs(fk.value.value - ref));
  }
  Csv csv(header);
  csv.row(row);
  ctx.write("fk.csv", csv.str());
}

void run_bridge(const Config& cfg, Context& ctx) {
  const std::string kind = choice(cfg, "kind", "initial", {"initial", "forcing", "boundary"});
  const std::string fn = choice(cfg, "function", "one", {"one", "x", "x2", "t"});
  const std::string drift = choice(cfg, "drift", "zero", {"zero", "ou"});
  const double k = drift == "ou" ? positive(cfg, "k0") : 0.0;
  const double nu = positive(cfg, "nu");
  const double x_start = cfg.get_double("x_start");
  const double t_end = positive(cfg, "t_end");
  const double x_wall = cfg.get_double("x_wall", 0.0);
  const McParams mc = read_mc(cfg, ctx.threads);
  reject_unused(cfg);
  if (kind == "boundary" && fn != "one" && fn != "t") {
    throw ConfigError("invalid_value", "function", "boundary data must be 'one' or 't'");
  }
  if (kind != "boundary" && fn == "t") {
    throw ConfigError("invalid_value", "function", "function 't' only applies to boundary checks");
  }
  if (kind == "boundary" && drift != "zero") {
    throw ConfigError("unsupported", "drift", "the half-line check supports zero drift only");
  }

  SdeSpec spec;
  spec.nu = nu;
  spec.x_start = x_start;
  spec.s_end = t_end;
  spec.drift = [k](double x, double) { return -k * x; };
  auto kernel = [&](double elapsed) {
    if (drift == "zero") return GaussianDensity{x_start, 2.0 * nu * elapsed};
    return ou_kernel(ConstantStrain{k}, nu, x_start, elapsed);
  };
  ScalarFn phi = [&fn](double x) { return fn == "one" ? 1.0 : (fn == "x" ? x : x * x); };

  BridgeResult r;
  if (kind == "initial") {
    r = bridge_check_initial(phi, kernel(t_end), spec, mc);
  } else if (kind == "forcing") {
    r = bridge_check_forcing([phi](double x, double) { return phi(x); }, kernel, spec, mc);
  } else {
    ScalarFn g = [&fn](double t) { return fn == "t" ? t : 1.0; };
    r = bridge_check_boundary(g, spec, x_wall, mc);
  }
  Csv csv({"mc_value", "mc_std_error", "quadrature", "defect_in_std_errors"});
  csv.row({r.mc_value, r.mc_std_error, r.quadrature, r.defect_in_std_errors()});
  ctx.write("bridge.csv", csv.str());
  ctx.observe("mc_value", Estimate{r.mc_value, r.mc_std_error});
  ctx.observe("quadrature", r.quadrature);
  ctx.observe("defect_in_std_errors", r.defect_in_std_errors());
  ctx.observe("passes_3se", r.passes(3.0) ? 1.0 : 0.0);
}

void run_modes(const Config& cfg, Context& ctx) {
  FluidProps props;
  props.gamma = cfg.get_double("gamma", props.gamma);
  props.alpha_T = cfg.get_double("alpha_T", props.alpha_T);
  props.a0 = cfg.get_double("a0", props.a0);
  props.nu = cfg.get_double("nu", props.nu);
  props.nu_B = cfg.get_double("nu_B", props.nu_B);
  props.rho = cfg.get_double("rho", props.rho);
  props.beta = cfg.get_double("beta", props.beta);
  const double q_min = positive(cfg, "q_min", 1e3);
  const double q_max = positive(cfg, "q_max", 1e7);
  const std::size_t n_q = get_count(cfg, "n_q", 9);
  reject_unused(cfg);
  try {
    props.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid_value", "fluid", e.what());
  }
  if (!(q_max >= q_min)) throw ConfigError("invalid_value", "q_max", "q_max must be >= q_min");

  Csv csv({"q", "re_s1", "re_s2", "re_s3", "re_s4", "im_s1", "im_s2", "im_s3", "im_s4"});
  double residual = 0.0, vieta = 0.0, gap_min = 0.0, gap_max = 0.0;
  for (std::size_t i = 0; i < n_q; ++i) {
    const double frac = n_q == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n_q - 1);
    const double q = q_min * std::pow(q_max / q_min, frac);
    const ModeSolution m = exact_modes(props, q);
    const auto a = asymptotic_modes(props, q);
    double gap = 0.0;
    for (std::size_t j = 0; j < 3; ++j) gap = std::max(gap, std::abs(m.roots[j] - a[j]) / std::abs(a[j]));
    if (i == 0) gap_min = gap;
    if (i + 1 == n_q) gap_max = gap;
    residual = std::max(residual, m.max_relative_residual);
    vieta = std::max(vieta, m.vieta_error);
    const auto& r = m.roots;
    csv.row({q, r[0].real(), r[1].real(), r[2].real(), r[3].real(), r[0].imag(), r[1].imag(),
             r[2].imag(), r[3].imag()});
  }
  ctx.write("modes.csv", csv.str());
  ctx.observe("max_relative_residual", residual);
  ctx.observe("max_vieta_error", vieta);
  ctx.observe("relative_gap_q_min", gap_min);
  ctx.observe("relative_gap_q_max", gap_max);
}

using Runner = std::function<void(const Config&, Context&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"burgers", run_burgers},
      {"nls", run_nls},
      {"vortex_deterministic", run_vortex_deterministic},
      {"vortex_random", run_vortex_random},
      {"vortex_inviscid", run_vortex_inviscid},
      {"feynman_kac", run_feynman_kac},
      {"bridge", run_bridge},
      {"modes", run_modes},
  };
  return table;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("syntax", "", "line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("syntax", "", "line " + std::to_string(number) + ": empty key");
    if (cfg.values_.count(key)) throw ConfigError("duplicate_key", key, "duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("io", "", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Config Config::from_json(const json& object) {
  if (!object.is_object()) throw ConfigError("syntax", "config", "config echo must be an object");
  Config cfg;
  for (const auto& [k, v] : object.items()) {
    if (!v.is_string()) throw ConfigError("syntax", k, "config values must be strings");
    cfg.values_[k] = v.get<std::string>();
  }
  return cfg;
}

const std::string& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing_key", key, "missing required key '" + key + "'");
  used_.insert(key);
  return it->second;
}

std::string Config::get_string(const std::string& key) const { return raw(key); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  const std::string& s = raw(key);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v)) {
    throw ConfigError("invalid_value", key, key + " must be a finite number, got '" + s + "'");
  }
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
  const std::string& s = raw(key);
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') {
    // Accept integral values written in floating notation, e.g. 1e5.
    const double d = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || d != std::floor(d) || std::abs(d) > 9.0e15) {
      throw ConfigError("invalid_value", key, key + " must be an integer, got '" + s + "'");
    }
    return static_cast<long long>(d);
  }
  return v;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& s = raw(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("invalid_value", key, key + " must be true or false");
}

std::set<std::string> Config::unused_keys() const {
  std::set<std::string> out;
  for (const auto& [k, v] : values_) {
    if (!used_.count(k)) out.insert(k);
  }
  return out;
}

json Config::to_json() const {
  json j = json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

// ---------------------------------------------------------------------------

const char* toolkit_version() { return "0.3.0"; }

const std::set<std::string>& experiments() {
  static const std::set<std::string> names = [] {
    std::set<std::string> s;
    for (const auto& [k, v] : runners()) s.insert(k);
    return s;
  }();
  return names;
}

Config load_config(const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    std::ifstream in(path);
    if (!in) throw ConfigError("io", "", "cannot read " + path.string());
    json m;
    try {
      m = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("syntax", "", std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!m.contains("config")) throw ConfigError("missing_key", "config", "manifest has no config echo");
    return Config::from_json(m["config"]);
  }
  return Config::from_file(path);
}

RunResult run(const Config& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::string experiment = config.get_string("experiment");
  const auto it = runners().find(experiment);
  if (it == runners().end()) {
    throw ConfigError("unknown_experiment", "experiment", "unknown experiment '" + experiment + "'");
  }
  const std::string name = config.get_string("name", options.default_name);
  if (name.empty() || name.find('/') != std::string::npos || name == "." || name == "..") {
    throw ConfigError("invalid_value", "name", "name must be a plain folder name");
  }
  const long long cfg_threads = config.get_int("threads", 0);
  if (cfg_threads < 0) throw ConfigError("invalid_value", "threads", "threads must be >= 0");

  std::filesystem::path parent = options.output_dir;
  const std::string cfg_dir = config.get_string("output_dir", "");
  if (parent.empty() && !cfg_dir.empty()) parent = cfg_dir;
  if (parent.empty()) {
    const char* env = std::getenv(kOutputDirEnv);
    parent = (env && *env) ? std::filesystem::path(env) : std::filesystem::path("gfs_runs");
  }

  Context ctx;
  ctx.threads = options.threads ? *options.threads : static_cast<unsigned>(cfg_threads);
  ctx.dir = parent / name;
  // Validate-then-compute happens inside the runner; the folder is created
  // first so unwritable locations fail before any work.
  std::filesystem::create_directories(ctx.dir);
  it->second(config, ctx);

  json manifest;
  manifest["config"] = config.to_json();
  manifest["experiment"] = experiment;
  manifest["files"] = ctx.files;
  manifest["observables"] = ctx.observables;
  manifest["toolkit_version"] = toolkit_version();
  manifest["warnings"] = ctx.warnings;
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunResult result{ctx.dir, ctx.dir / "manifest.json", manifest};
  std::ofstream out(result.manifest_path, std::ios::trunc);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::filesystem::filesystem_error("write failed", result.manifest_path,
                                                    std::make_error_code(std::errc::io_error));
  return result;
}

Tolerance parse_tolerance(const std::string& spec) {
  Tolerance tol;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("syntax", "tol", "expected name=value in --tol");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0' || !(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("invalid_value", key, "tolerance " + key + " must be a nonnegative number");
    }
    if (key == "abs") tol.abs = v;
    else if (key == "rel") tol.rel = v;
    else if (key == "se") tol.se = v;
    else throw ConfigError("unknown_key", key, "unknown tolerance field '" + key + "'");
  }
  return tol;
}

json compare(const json& a, const json& b, const Tolerance& tol) {
  const json& oa = a.at("observables");
  const json& ob = b.at("observables");
  json report;
  json rows = json::object();
  json only_a = json::array(), only_b = json::array();
  bool all = true;
  for (const auto& [name, va] : oa.items()) {
    if (!ob.contains(name)) {
      only_a.push_back(name);
      continue;
    }
    const json& vb = ob.at(name);
    const double x = va.at("value").get<double>();
    const double y = vb.at("value").get<double>();
    const double diff = std::abs(x - y);
    const double se_a = va.value("std_error", 0.0), se_b = vb.value("std_error", 0.0);
    const double combined = std::hypot(se_a, se_b);
    bool pass = diff <= tol.abs + tol.rel * std::max(std::abs(x), std::abs(y));
    if (!pass && tol.se > 0.0 && combined > 0.0) pass = diff <= tol.se * combined;
    json row{{"a", x}, {"b", y}, {"abs_diff", diff}, {"pass", pass}};
    if (x != 0.0) row["ratio_b_over_a"] = y / x;
    if (combined > 0.0) {
      row["combined_std_error"] = combined;
      row["diff_in_std_errors"] = diff / combined;
    }
    rows[name] = row;
    all = all && pass;
  }
  for (const auto& [name, vb] : ob.items()) {
    if (!oa.contains(name)) only_b.push_back(name);
  }
  if (rows.empty()) {
    throw ConfigError("disjoint_observables", "observables", "the manifests share no observable");
  }
  all = all && only_a.empty() && only_b.empty();
  report["all_pass"] = all;
  report["observables"] = rows;
  report["only_in_a"] = only_a;
  report["only_in_b"] = only_b;
  report["tolerance"] = json{{"abs", tol.abs}, {"rel", tol.rel}, {"se", tol.se}};
  return report;
}

json error_record(const std::string& kind, const std::string& key, const std::string& message) {
  return json{{"error", {{"kind", kind}, {"key", key}, {"message", message}}}};
}

}  // namespace gfs::cli
