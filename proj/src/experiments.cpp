// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hamlearn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "hamlearn/dynamics.hpp"
#include "hamlearn/errors.hpp"
#include "hamlearn/hamiltonian.hpp"
#include "hamlearn/operator_basis.hpp"

namespace hamlearn {

namespace {

// Independent random streams under the configured seed.
enum Stream : std::uint64_t {
  kHamiltonianStream = 1,
  kOrderingStream = 2,
  kNoiseStream = 3,
  kQuenchStream = 4,
  kDriveStream = 5,
};

// Dense Gibbs states need a full eigendecomposition.
constexpr std::size_t kMaxGibbsSites = 12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

template <typename T>
std::string join_list(const std::vector<T>& items) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? " " : "") << items[i];
  return out.str();
}

struct Geometry {
  Lattice lattice;
  Region region;
  Region interior;
  OperatorBasis terms;
  OperatorBasis constraints;
  /// Sites carrying every commutator observable, sorted.
  std::vector<std::size_t> support;
};

Geometry make_geometry(ModelFamily model, std::size_t n_sites,
                       std::size_t region_size, std::size_t locality) {
  Lattice lattice = Lattice::chain(n_sites);
  Region region = Region::centered(lattice, region_size);
  Region inner = interior(lattice, region, model);
  if (inner.empty()) {
    throw UsageError("region of " + std::to_string(region_size) +
                     " sites has an empty interior");
  }
  OperatorBasis terms = term_basis_for_model(model, lattice, inner);
  OperatorBasis constraints = enumerate_basis(lattice, inner, locality);
  std::uint64_t mask = 0;
  for (const auto& o : commutator_observables(constraints, terms)) {
    mask |= o.pauli.support_mask();
  }
  std::vector<std::size_t> support;
  for (std::size_t s = 0; s < n_sites; ++s) {
    if ((mask >> s) & 1U) support.push_back(s);
  }
  return Geometry{std::move(lattice), std::move(region), std::move(inner),
                  std::move(terms), std::move(constraints), std::move(support)};
}

// Expectations <P> read from an operator on `sites`.
ExpectationFn from_operator(const Eigen::MatrixXcd& op,
                            const std::vector<std::size_t>& sites) {
  return [&op, &sites](const PauliString& p) {
    return trace_with_pauli(op, restrict_to_sites(p, sites)).real();
  };
}

double safe_error(const Eigen::VectorXd& c_true, const Eigen::VectorXd& c_rec) {
  if (c_true.norm() == 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (c_rec.norm() == 0.0) return std::sqrt(2.0);
  return reconstruction_error(c_true, c_rec);
}

TrialRecord make_record(std::size_t trial, std::uint64_t seed, double coordinate,
                        const ConstraintMatrix& exact, const ConstraintMatrix& noisy,
                        const Eigen::VectorXd& c_true, double epsilon) {
  const RecoveryResult r = recover(noisy);
  const RecoveryResult r0 = recover(exact);
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = seed;
  rec.coordinate = coordinate;
  rec.n_constraints = static_cast<std::size_t>(exact.rows());
  rec.n_columns = static_cast<std::size_t>(exact.cols());
  rec.lambda0 = r.lambdas(0);
  rec.lambda1 = r.lambdas.size() > 1 ? r.lambdas(1) : 0.0;
  rec.degenerate = r.degenerate_kernel;
  rec.delta = reconstruction_error(c_true, r.coeffs);
  rec.lambda0_exact = r0.lambdas(0);
  rec.lambda1_exact = r0.lambdas.size() > 1 ? r0.lambdas(1) : 0.0;
  rec.degenerate_exact = r0.degenerate_kernel;
  rec.delta_exact = reconstruction_error(c_true, r0.coeffs);
  rec.delta_est = r0.lambdas.size() > 1 ? error_estimate(r0.lambdas, epsilon).value : 0.0;
  rec.residual = (exact.entries() * c_true.normalized()).norm();
  return rec;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

// Runs `per_trial` for every trial and concatenates in trial order.
Sweep run_trials(const ExperimentConfig& cfg, std::size_t jobs,
                 const std::function<Sweep(std::size_t)>& per_trial) {
  cfg.validate();
  std::vector<Sweep> parts(cfg.trials);
  parallel_for(cfg.trials, jobs, [&](std::size_t t) { parts[t] = per_trial(t); });
  Sweep out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void require_source(const ExperimentConfig& cfg, SourceKind kind) {
  if (cfg.source != kind) {
    throw UsageError("sweep '" + cfg.name + "' has source " + source_name(cfg.source) +
                     ", expected " + source_name(kind));
  }
}

}  // namespace

std::string source_name(SourceKind kind) {
  switch (kind) {
    case SourceKind::kGround: return "ground";
    case SourceKind::kGibbs: return "gibbs";
    case SourceKind::kMultistate: return "multistate";
    case SourceKind::kQuench: return "quench";
    case SourceKind::kDriven: return "driven";
    case SourceKind::kXYGapScan: return "xy-gap";
  }
  return "unknown";
}

SourceKind parse_source(const std::string& name) {
  for (SourceKind k : all_sources()) {
    if (source_name(k) == name) return k;
  }
  throw UsageError("unknown source '" + name + "'");
}

std::vector<SourceKind> all_sources() {
  return {SourceKind::kGround, SourceKind::kGibbs, SourceKind::kMultistate,
          SourceKind::kQuench, SourceKind::kDriven, SourceKind::kXYGapScan};
}

std::string coordinate_name(SourceKind kind) {
  switch (kind) {
    case SourceKind::kGround: return "N";
    case SourceKind::kGibbs: return "beta";
    case SourceKind::kMultistate: return "n_states";
    case SourceKind::kQuench:
    case SourceKind::kDriven: return "t";
    case SourceKind::kXYGapScan: return "region_size";
  }
  return "coordinate";
}

ExperimentConfig default_config(SourceKind source) {
  ExperimentConfig cfg;
  cfg.source = source;
  cfg.name = source_name(source);
  switch (source) {
    case SourceKind::kGround:
      break;
    case SourceKind::kGibbs:
      cfg.n_sites = 10;
      break;
    case SourceKind::kMultistate:
      cfg.n_sites = 10;
      cfg.locality = 1;
      break;
    case SourceKind::kQuench:
    case SourceKind::kDriven:
      cfg.n_sites = 10;
      cfg.trials = 20;
      break;
    case SourceKind::kXYGapScan:
      cfg.model = ModelFamily::kXYChain;
      cfg.n_sites = 14;
      cfg.trials = 20;
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  auto fail = [this](const std::string& what) {
    throw UsageError("sweep '" + name + "': " + what);
  };
  if (n_sites < 2) fail("n_sites must be at least 2");
  check_site_cap(n_sites, limits);
  if (trials < 1) fail("trials must be at least 1");
  if (locality < 1) fail("locality must be at least 1");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail("epsilon must be >= 0");
  if (source == SourceKind::kXYGapScan) {
    if (model != ModelFamily::kXYChain) fail("the xy-gap source needs model xy-chain");
    if (region_sizes.empty()) fail("region_sizes is empty");
    for (std::size_t s : region_sizes) {
      if (s < 3 || s > n_sites) fail("region sizes must lie in [3, n_sites]");
    }
  } else if (region_size < 3 || region_size > n_sites) {
    fail("region_size must lie in [3, n_sites]");
  }
  if (prefix_stride < 1) fail("prefix_stride must be at least 1");
  if (source == SourceKind::kGibbs || source == SourceKind::kMultistate) {
    if (n_sites > kMaxGibbsSites) {
      throw ResourceError("sweep '" + name + "': Gibbs states are limited to " +
                          std::to_string(kMaxGibbsSites) + " sites");
    }
  }
  if (source == SourceKind::kGibbs) {
    if (betas.empty()) fail("betas is empty");
    for (double b : betas) {
      if (!(b >= 0.0) || !std::isfinite(b)) fail("betas must be finite and >= 0");
    }
  }
  if (source == SourceKind::kMultistate) {
    if (!(temperature_min > 0.0) || !(temperature_max >= temperature_min) ||
        !std::isfinite(temperature_max)) {
      fail("temperatures must satisfy 0 < temperature_min <= temperature_max");
    }
    if (max_states < 1) fail("max_states must be at least 1");
  }
  if (source == SourceKind::kQuench || source == SourceKind::kDriven) {
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
    if (!(t_min > 0.0) || !(t_max >= t_min) || !std::isfinite(t_max)) {
      fail("times must satisfy 0 < t_min <= t_max");
    }
    if (t_max < dt) fail("t_max must be at least dt");
    if (checkpoints < 1) fail("checkpoints must be at least 1");
    if (!std::isfinite(drive_amplitude) || !std::isfinite(drive_omega)) {
      fail("drive parameters must be finite");
    }
  }
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> out;
  out["name"] = name;
  out["source"] = source_name(source);
  out["model"] = model_name(model);
  out["n_sites"] = std::to_string(n_sites);
  out["seed"] = std::to_string(seed);
  out["trials"] = std::to_string(trials);
  out["epsilon"] = format_double(epsilon);
  out["locality"] = std::to_string(locality);
  out["max_sites"] = std::to_string(limits.max_sites);
  switch (source) {
    case SourceKind::kGround:
      out["region_size"] = std::to_string(region_size);
      out["prefix_stride"] = std::to_string(prefix_stride);
      break;
    case SourceKind::kGibbs:
      out["region_size"] = std::to_string(region_size);
      out["betas"] = join_list(betas);
      break;
    case SourceKind::kMultistate:
      out["region_size"] = std::to_string(region_size);
      out["temperature_min"] = format_double(temperature_min);
      out["temperature_max"] = format_double(temperature_max);
      out["max_states"] = std::to_string(max_states);
      break;
    case SourceKind::kDriven:
      out["drive_amplitude"] = format_double(drive_amplitude);
      out["drive_omega"] = format_double(drive_omega);
      [[fallthrough]];
    case SourceKind::kQuench:
      out["region_size"] = std::to_string(region_size);
      out["dt"] = format_double(dt);
      out["t_min"] = format_double(t_min);
      out["t_max"] = format_double(t_max);
      out["checkpoints"] = std::to_string(checkpoints);
      out["time_average"] = time_average_name(time_average);
      out["integrator"] =
          n_sites <= 11 ? "static: eigenbasis propagator; driven: midpoint exponential"
                        : "static: Krylov exponential per step; driven: midpoint exponential";
      break;
    case SourceKind::kXYGapScan:
      out["region_sizes"] = join_list(region_sizes);
      out["disorder"] = "g,gamma~normal(0,1)";
      break;
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream,
                          std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(root) ^ stream) ^ index);
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!stop.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          stop.store(true);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Sweep run_groundstate_sweep(const ExperimentConfig& cfg, std::size_t jobs) {
  require_source(cfg, SourceKind::kGround);
  cfg.validate();
  const Geometry geo = make_geometry(cfg.model, cfg.n_sites, cfg.region_size, cfg.locality);
  const std::size_t n_total = geo.constraints.size();
  const std::size_t m = geo.terms.size();
  std::set<std::size_t> prefixes;
  for (std::size_t n = cfg.prefix_stride; n <= n_total; n += cfg.prefix_stride) {
    prefixes.insert(n);
  }
  for (std::size_t n : {std::size_t{1}, m - 1, m, n_total}) {
    if (n >= 1 && n <= n_total) prefixes.insert(n);
  }
  return run_trials(cfg, jobs, [&](std::size_t trial) {
    const std::uint64_t seed = derive_seed(cfg.seed, kHamiltonianStream, trial);
    const HamiltonianSpec h = sample_chain(cfg.model, cfg.n_sites, seed);
    const GroundState gs = ground_state(h, cfg.limits);
    const OperatorBasis constraints = geo.constraints.shuffled_within_locality(
        derive_seed(cfg.seed, kOrderingStream, trial));
    const ConstraintMatrix k = build_constraint_matrix(
        gs.state, constraints, geo.terms, {{"state", "ground"}});
    const ConstraintMatrix noisy =
        inject_noise(k, cfg.epsilon, derive_seed(cfg.seed, kNoiseStream, trial));
    const Eigen::VectorXd c_true = h.coeffs_on(geo.terms);
    Sweep out;
    for (std::size_t n : prefixes) {
      const auto rows = static_cast<Eigen::Index>(n);
      TrialRecord rec = make_record(trial, seed, static_cast<double>(n), k.top_rows(rows),
                                    noisy.top_rows(rows), c_true, cfg.epsilon);
      rec.energy = gs.energy;
      out.push_back(rec);
    }
    return out;
  });
}

Sweep run_gibbs_sweep(const ExperimentConfig& cfg, std::size_t jobs) {
  require_source(cfg, SourceKind::kGibbs);
  cfg.validate();
  const Geometry geo = make_geometry(cfg.model, cfg.n_sites, cfg.region_size, cfg.locality);
  return run_trials(cfg, jobs, [&](std::size_t trial) {
    const std::uint64_t seed = derive_seed(cfg.seed, kHamiltonianStream, trial);
    const HamiltonianSpec h = sample_chain(cfg.model, cfg.n_sites, seed);
    const Spectrum spectrum = diagonalize(h, cfg.limits);
    const Eigen::VectorXd c_true = h.coeffs_on(geo.terms);
    Sweep out;
    for (std::size_t b = 0; b < cfg.betas.size(); ++b) {
      const double beta = cfg.betas[b];
      const QuantumState rho = gibbs_state(spectrum, beta);
      const ConstraintMatrix k = build_constraint_matrix(
          rho, geo.constraints, geo.terms,
          {{"state", "gibbs"}, {"beta", format_double(beta)}});
      const ConstraintMatrix noisy = inject_noise(
          k, cfg.epsilon,
          derive_seed(derive_seed(cfg.seed, kNoiseStream, trial), kNoiseStream, b));
      TrialRecord rec = make_record(trial, seed, beta, k, noisy, c_true, cfg.epsilon);
      const Eigen::VectorXd w = (-beta * (spectrum.energies.array() -
                                          spectrum.energies.minCoeff()))
                                    .exp();
      rec.energy = w.dot(spectrum.energies) / w.sum();
      out.push_back(rec);
    }
    return out;
  });
}

Sweep run_multistate_recovery(const ExperimentConfig& cfg, std::size_t jobs) {
  require_source(cfg, SourceKind::kMultistate);
  cfg.validate();
  const Geometry geo = make_geometry(cfg.model, cfg.n_sites, cfg.region_size, cfg.locality);
  return run_trials(cfg, jobs, [&](std::size_t trial) {
    const std::uint64_t seed = derive_seed(cfg.seed, kHamiltonianStream, trial);
    const HamiltonianSpec h = sample_chain(cfg.model, cfg.n_sites, seed);
    const Spectrum spectrum = diagonalize(h, cfg.limits);
    const Eigen::VectorXd c_true = h.coeffs_on(geo.terms);
    Sweep out;
    for (std::size_t count = 1; count <= cfg.max_states; ++count) {
      std::vector<ConstraintMatrix> blocks;
      for (double temperature : log_spaced(cfg.temperature_min, cfg.temperature_max, count)) {
        const QuantumState rho = gibbs_state(spectrum, 1.0 / temperature);
        blocks.push_back(build_constraint_matrix(
            rho, geo.constraints, geo.terms,
            {{"state", "gibbs"}, {"temperature", format_double(temperature)}}));
      }
      const ConstraintMatrix k = stack(blocks);
      const ConstraintMatrix noisy = inject_noise(
          k, cfg.epsilon,
          derive_seed(derive_seed(cfg.seed, kNoiseStream, trial), kNoiseStream, count));
      out.push_back(make_record(trial, seed, static_cast<double>(count), k, noisy,
                                c_true, cfg.epsilon));
    }
    return out;
  });
}

std::vector<std::size_t> checkpoint_indices(const ExperimentConfig& cfg) {
  const std::size_t last = TimeGrid::up_to(cfg.t_max, cfg.dt).count - 1;
  std::set<std::size_t> out;
  for (double t : log_spaced(cfg.t_min, cfg.t_max, cfg.checkpoints)) {
    const auto k = static_cast<std::size_t>(std::llround(t / cfg.dt));
    out.insert(std::clamp<std::size_t>(k, 1, last));
  }
  return {out.begin(), out.end()};
}

namespace {

Sweep run_dynamics(const ExperimentConfig& cfg, bool driven, std::size_t jobs) {
  const Geometry geo = make_geometry(cfg.model, cfg.n_sites, cfg.region_size, cfg.locality);
  const std::vector<std::size_t> stops = checkpoint_indices(cfg);
  const Eigen::Index m = static_cast<Eigen::Index>(geo.terms.size());
  return run_trials(cfg, jobs, [&](std::size_t trial) {
    const std::uint64_t seed = derive_seed(cfg.seed, kHamiltonianStream, trial);
    const HamiltonianSpec h0 = sample_chain(cfg.model, cfg.n_sites, seed);
    const HamiltonianSpec h1 = sample_chain(
        cfg.model, cfg.n_sites, derive_seed(cfg.seed, kQuenchStream, trial));
    HamiltonianSpec h = h0;
    if (driven) {
      const HamiltonianSpec v = sample_chain(
          cfg.model, cfg.n_sites, derive_seed(cfg.seed, kDriveStream, trial));
      h = h0.with_drive(Drive{v.coeffs(), DriveFunction{cfg.drive_amplitude, cfg.drive_omega}});
    }
    Eigen::VectorXd c_true(driven ? 2 * m : m);
    c_true.head(m) = h0.coeffs_on(geo.terms);
    if (driven) c_true.tail(m) = h.drive_coeffs_on(geo.terms);

    const QuantumState initial = ground_state(h0 + h1, cfg.limits).state;
    const PauliOperator h0_op = PauliOperator::static_part(h0);
    Trajectory traj(initial, h, cfg.dt, cfg.limits);
    const Eigen::Index dl = Eigen::Index{1} << geo.support.size();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dl, dl);
    Eigen::MatrixXcd fsum = Eigen::MatrixXcd::Zero(dl, dl);
    Eigen::MatrixXcd first;
    double f_first = 0.0;
    Eigen::VectorXcd scratch;

    Sweep out;
    std::size_t next_stop = 0;
    for (std::size_t k = 0; next_stop < stops.size(); ++k) {
      if (k > 0) traj.advance();
      const QuantumState& state = traj.state();
      const Eigen::MatrixXcd rho = state.reduced(geo.support).density();
      const double f = traj.drive_value();
      sum += rho;
      fsum += f * rho;
      if (k == 0) {
        first = rho;
        f_first = f;
      }
      if (k != stops[next_stop]) continue;
      ++next_stop;

      const double kk = static_cast<double>(k);
      Eigen::MatrixXcd mean, fmean;
      if (cfg.time_average == TimeAverage::kTrapezoid) {
        mean = (sum - 0.5 * (first + rho)) / kk;
        fmean = (fsum - 0.5 * (f_first * first + f * rho)) / kk;
      } else {
        mean = sum / (kk + 1.0);
        fmean = fsum / (kk + 1.0);
      }
      Provenance prov{{"state", driven ? "driven" : "quench"},
                      {"t", format_double(traj.time())},
                      {"time_average", time_average_name(cfg.time_average)}};
      const ConstraintMatrix kmat =
          driven ? build_extended_constraint_matrix(from_operator(mean, geo.support),
                                                    from_operator(fmean, geo.support),
                                                    geo.constraints, geo.terms, prov)
                 : build_constraint_matrix(from_operator(mean, geo.support),
                                           geo.constraints, geo.terms, prov);
      const ConstraintMatrix noisy = inject_noise(
          kmat, cfg.epsilon,
          derive_seed(derive_seed(cfg.seed, kNoiseStream, trial), kNoiseStream, k));
      TrialRecord rec =
          make_record(trial, seed, traj.time(), kmat, noisy, c_true, cfg.epsilon);
      if (driven) {
        const RecoveryResult r = recover(noisy);
        rec.delta_static = safe_error(c_true.head(m), r.coeffs.head(m));
        rec.delta_drive = safe_error(c_true.tail(m), r.coeffs.tail(m));
      }
      if (state.is_pure()) {
        h0_op.apply(state.amplitudes(), scratch);
        rec.energy = state.amplitudes().dot(scratch).real();
      }
      out.push_back(rec);
    }
    return out;
  });
}

}  // namespace

Sweep run_quench(const ExperimentConfig& cfg, std::size_t jobs) {
  require_source(cfg, SourceKind::kQuench);
  cfg.validate();
  return run_dynamics(cfg, false, jobs);
}

Sweep run_driven(const ExperimentConfig& cfg, std::size_t jobs) {
  require_source(cfg, SourceKind::kDriven);
  cfg.validate();
  return run_dynamics(cfg, true, jobs);
}

Sweep run_xy_gap_scan(const ExperimentConfig& cfg, std::size_t jobs) {
  require_source(cfg, SourceKind::kXYGapScan);
  cfg.validate();
  std::vector<Geometry> geos;
  for (std::size_t size : cfg.region_sizes) {
    geos.push_back(make_geometry(cfg.model, cfg.n_sites, size, cfg.locality));
  }
  return run_trials(cfg, jobs, [&](std::size_t trial) {
    const std::uint64_t seed = derive_seed(cfg.seed, kHamiltonianStream, trial);
    const HamiltonianSpec h = sample_chain(cfg.model, cfg.n_sites, seed);
    const GroundState gs = ground_state(h, cfg.limits);
    Sweep out;
    for (std::size_t i = 0; i < geos.size(); ++i) {
      const Geometry& geo = geos[i];
      const ConstraintMatrix k = build_constraint_matrix(
          gs.state, geo.constraints, geo.terms, {{"state", "ground"}});
      const ConstraintMatrix noisy = inject_noise(
          k, cfg.epsilon,
          derive_seed(derive_seed(cfg.seed, kNoiseStream, trial), kNoiseStream, i));
      TrialRecord rec =
          make_record(trial, seed, static_cast<double>(cfg.region_sizes[i]), k, noisy,
                      h.coeffs_on(geo.terms), cfg.epsilon);
      rec.energy = gs.energy;
      out.push_back(rec);
    }
    return out;
  });
}

Sweep run_sweep(const ExperimentConfig& cfg, std::size_t jobs) {
  switch (cfg.source) {
    case SourceKind::kGround: return run_groundstate_sweep(cfg, jobs);
    case SourceKind::kGibbs: return run_gibbs_sweep(cfg, jobs);
    case SourceKind::kMultistate: return run_multistate_recovery(cfg, jobs);
    case SourceKind::kQuench: return run_quench(cfg, jobs);
    case SourceKind::kDriven: return run_driven(cfg, jobs);
    case SourceKind::kXYGapScan: return run_xy_gap_scan(cfg, jobs);
  }
  throw UsageError("unknown source");
}

PowerLawFit fit_power_law(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                          double t_lo, double t_hi) {
  if (times.size() != values.size()) throw UsageError("times and values differ in length");
  std::vector<double> x, y;
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    if (times(i) < t_lo || times(i) > t_hi) continue;
    if (!(times(i) > 0.0) || !(values(i) > 0.0)) {
      throw UsageError("power-law fit needs positive times and values");
    }
    x.push_back(std::log(times(i)));
    y.push_back(std::log(values(i)));
  }
  const std::size_t n = x.size();
  if (n < 3) throw UsageError("power-law fit needs at least 3 points in the window");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw UsageError("power-law fit needs distinct times");
  PowerLawFit fit;
  fit.alpha = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - my - fit.alpha * (x[i] - mx);
    ssr += r * r;
  }
  fit.std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return fit;
}

LogStats log_stats(const std::vector<double>& values) {
  if (values.empty()) throw UsageError("log statistics of an empty sample");
  double s = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw UsageError("log statistics need positive samples");
    s += std::log(v);
  }
  const double n = static_cast<double>(values.size());
  const double mean = s / n;
  double var = 0.0;
  for (double v : values) var += (std::log(v) - mean) * (std::log(v) - mean);
  return LogStats{std::exp(mean), values.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0};
}

double median(std::vector<double> values) {
  if (values.empty()) throw UsageError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::map<double, std::vector<TrialRecord>> by_coordinate(const Sweep& sweep) {
  std::map<double, std::vector<TrialRecord>> out;
  for (const auto& r : sweep) out[r.coordinate].push_back(r);
  return out;
}

void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg,
                     const Sweep& sweep, const std::string& code_version) {
  const bool driven = cfg.source == SourceKind::kDriven;
  out << std::setprecision(17);
  out << "# schema=1\n# kind=sweep\n";
  out << "# code_version=" << code_version << "\n";
  out << "# coordinate=" << coordinate_name(cfg.source) << "\n";
  for (const auto& [key, value] : cfg.echo()) out << "# config." << key << "=" << value << "\n";
  out << "sweep,source,trial,seed,coordinate,n_constraints,n_columns,"
         "lambda0,lambda1,degenerate,delta,lambda0_exact,lambda1_exact,"
         "degenerate_exact,delta_exact,delta_est,residual,energy";
  if (driven) out << ",delta_static,delta_drive";
  out << "\n";
  for (const auto& r : sweep) {
    out << cfg.name << "," << source_name(cfg.source) << "," << r.trial << "," << r.seed
        << "," << r.coordinate << "," << r.n_constraints << "," << r.n_columns << ","
        << r.lambda0 << "," << r.lambda1 << "," << (r.degenerate ? 1 : 0) << ","
        << r.delta << "," << r.lambda0_exact << "," << r.lambda1_exact << ","
        << (r.degenerate_exact ? 1 : 0) << "," << r.delta_exact << "," << r.delta_est
        << "," << r.residual << "," << r.energy;
    if (driven) out << "," << r.delta_static << "," << r.delta_drive;
    out << "\n";
  }
}

}  // namespace hamlearn
