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

#include "hamlearn/recovery.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include <Eigen/SVD>

#include "hamlearn/errors.hpp"

namespace hamlearn {

namespace {

using ObservableCache =
    std::unordered_map<PauliString, double, PauliStringHash, PauliLettersEqual>;

void check_same_lattice(const OperatorBasis& constraints,
                        const OperatorBasis& terms) {
  if (constraints.n_sites() != terms.n_sites()) {
    throw UsageError("constraint basis has " +
                     std::to_string(constraints.n_sites()) +
                     " sites but the term basis " +
                     std::to_string(terms.n_sites()));
  }
}

std::vector<std::size_t> sites_of(std::uint64_t mask) {
  std::vector<std::size_t> sites;
  for (; mask != 0; mask &= mask - 1) {
    sites.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
  }
  return sites;
}

Eigen::MatrixXd fill_entries(const OperatorBasis& constraints,
                             const OperatorBasis& terms,
                             const ExpectationFn& expect) {
  check_same_lattice(constraints, terms);
  const auto n = static_cast<Eigen::Index>(constraints.size());
  const auto m = static_cast<Eigen::Index>(terms.size());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, m);
  ObservableCache cache;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      const auto term = commutator_observable(
          constraints[static_cast<std::size_t>(r)],
          terms[static_cast<std::size_t>(c)]);
      if (!term) continue;
      auto it = cache.find(term->observable);
      if (it == cache.end()) {
        const double value = expect(term->observable);
        if (!std::isfinite(value)) {
          throw NumericalError("non-finite expectation value of " +
                               term->observable.letters());
        }
        it = cache.emplace(term->observable, value).first;
      }
      k(r, c) = term->coeff * it->second;
    }
  }
  return k;
}

}  // namespace

ConstraintMatrix::ConstraintMatrix(Eigen::MatrixXd entries,
                                   OperatorBasis constraints,
                                   OperatorBasis terms, bool extended,
                                   Provenance provenance)
    : ConstraintMatrix(std::move(entries), std::vector<OperatorBasis>{std::move(constraints)},
                       std::move(terms), extended,
                       std::vector<Provenance>{std::move(provenance)}) {}

ConstraintMatrix::ConstraintMatrix(Eigen::MatrixXd entries,
                                   std::vector<OperatorBasis> blocks,
                                   OperatorBasis terms, bool extended,
                                   std::vector<Provenance> provenance)
    : entries_(std::move(entries)),
      constraints_(std::move(blocks)),
      terms_(std::move(terms)),
      extended_(extended),
      provenance_(std::move(provenance)) {
  if (constraints_.empty()) throw UsageError("constraint matrix needs a block");
  if (provenance_.size() != constraints_.size()) {
    throw UsageError("one provenance record is needed per block");
  }
  std::size_t rows = 0;
  for (const auto& b : constraints_) {
    check_same_lattice(b, terms_);
    rows += b.size();
  }
  const std::size_t cols = terms_.size() * (extended_ ? 2 : 1);
  if (static_cast<std::size_t>(entries_.rows()) != rows ||
      static_cast<std::size_t>(entries_.cols()) != cols) {
    throw UsageError("constraint matrix is " + std::to_string(entries_.rows()) +
                     "x" + std::to_string(entries_.cols()) + " but the bases need " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!entries_.allFinite()) {
    throw NumericalError("constraint matrix has non-finite entries");
  }
}

std::vector<PauliString> ConstraintMatrix::constraint_rows() const {
  std::vector<PauliString> rows;
  for (const auto& b : constraints_) {
    rows.insert(rows.end(), b.elements().begin(), b.elements().end());
  }
  return rows;
}

ConstraintMatrix ConstraintMatrix::top_rows(Eigen::Index count) const {
  if (count < 1 || count > rows()) {
    throw UsageError("row count " + std::to_string(count) + " out of range");
  }
  std::vector<OperatorBasis> blocks;
  std::vector<Provenance> provenance;
  std::size_t left = static_cast<std::size_t>(count);
  for (std::size_t i = 0; i < constraints_.size() && left > 0; ++i) {
    const std::size_t take = std::min(left, constraints_[i].size());
    blocks.push_back(constraints_[i].prefix(take));
    provenance.push_back(provenance_[i]);
    left -= take;
  }
  return ConstraintMatrix(entries_.topRows(count), std::move(blocks), terms_,
                          extended_, std::move(provenance));
}

ConstraintMatrix ConstraintMatrix::with_entries(Eigen::MatrixXd entries) const {
  return ConstraintMatrix(std::move(entries), constraints_, terms_, extended_,
                          provenance_);
}

std::vector<std::string> ConstraintMatrix::column_labels() const {
  std::vector<std::string> labels = terms_.labels();
  if (extended_) {
    for (const auto& l : terms_.labels()) labels.push_back("drive:" + l);
  }
  return labels;
}

std::vector<Observable> commutator_observables(const OperatorBasis& constraints,
                                               const OperatorBasis& terms) {
  check_same_lattice(constraints, terms);
  std::vector<Observable> out;
  ObservableCache seen;
  for (const auto& a : constraints.elements()) {
    for (const auto& s : terms.elements()) {
      const auto term = commutator_observable(a, s);
      if (!term) continue;
      if (seen.emplace(term->observable, 0.0).second) {
        out.push_back(Observable{1.0, term->observable});
      }
    }
  }
  return out;
}

ConstraintMatrix build_constraint_matrix(const ExpectationFn& expect,
                                         const OperatorBasis& constraints,
                                         const OperatorBasis& terms,
                                         Provenance provenance) {
  return ConstraintMatrix(fill_entries(constraints, terms, expect), constraints,
                          terms, false, std::move(provenance));
}

ConstraintMatrix build_constraint_matrix(const QuantumState& state,
                                         const OperatorBasis& constraints,
                                         const OperatorBasis& terms,
                                         Provenance provenance) {
  check_same_lattice(constraints, terms);
  if (state.n_sites() != terms.n_sites()) {
    throw UsageError("state has " + std::to_string(state.n_sites()) +
                     " sites but the bases " + std::to_string(terms.n_sites()));
  }
  std::uint64_t mask = 0;
  for (const auto& o : commutator_observables(constraints, terms)) {
    mask |= o.pauli.support_mask();
  }
  if (!provenance.count("state")) {
    provenance["state"] = state.is_pure() ? "pure" : "mixed";
  }
  const auto sites = sites_of(mask);
  if (sites.size() == state.n_sites() || sites.empty()) {
    return build_constraint_matrix(
        [&](const PauliString& p) { return expectation(state, 1.0, p); },
        constraints, terms, std::move(provenance));
  }
  const QuantumState local = state.reduced(sites);
  return build_constraint_matrix(
      [&](const PauliString& p) {
        return expectation(local, 1.0, restrict_to_sites(p, sites));
      },
      constraints, terms, std::move(provenance));
}

Eigen::VectorXd time_average_weights(std::size_t count, TimeAverage rule) {
  if (count == 0) throw UsageError("time average over an empty grid");
  const auto n = static_cast<Eigen::Index>(count);
  if (rule == TimeAverage::kGridMean || count == 1) {
    return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(count));
  }
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(count - 1));
  w(0) *= 0.5;
  w(n - 1) *= 0.5;
  return w;
}

std::string time_average_name(TimeAverage rule) {
  return rule == TimeAverage::kGridMean ? "grid-mean" : "trapezoid";
}

ConstraintMatrix build_extended_constraint_matrix(
    const TimeSeriesRecord& record, const OperatorBasis& constraints,
    const OperatorBasis& terms, TimeAverage rule, Provenance provenance) {
  ObservableCache row_of;
  const auto& observables = record.observables();
  for (std::size_t i = 0; i < observables.size(); ++i) {
    row_of.emplace(observables[i].pauli, static_cast<double>(i));
  }
  const Eigen::VectorXd w = time_average_weights(record.n_times(), rule);
  const Eigen::VectorXd wf = w.cwiseProduct(record.drive_samples());
  auto lookup = [&](const PauliString& p) -> std::pair<Eigen::Index, double> {
    const auto it = row_of.find(p);
    if (it == row_of.end()) {
      throw UsageError("time series lacks observable " + p.letters());
    }
    const auto row = static_cast<Eigen::Index>(it->second);
    const auto& o = observables[static_cast<std::size_t>(row)];
    const double scale = o.coeff * o.pauli.sign();
    if (scale == 0.0) throw UsageError("observable with zero coefficient");
    return {row, 1.0 / scale};
  };
  provenance["source"] = "time-series";
  provenance["t_max"] = std::to_string(record.grid().t_max());
  provenance["dt"] = std::to_string(record.grid().dt);
  provenance["time_average"] = time_average_name(rule);
  return build_extended_constraint_matrix(
      [&](const PauliString& p) {
        const auto [row, s] = lookup(p);
        return s * record.values().row(row).dot(w);
      },
      [&](const PauliString& p) {
        const auto [row, s] = lookup(p);
        return s * record.values().row(row).dot(wf);
      },
      constraints, terms, std::move(provenance));
}

ConstraintMatrix build_extended_constraint_matrix(
    const ExpectationFn& mean, const ExpectationFn& drive_weighted_mean,
    const OperatorBasis& constraints, const OperatorBasis& terms,
    Provenance provenance) {
  const Eigen::MatrixXd left = fill_entries(constraints, terms, mean);
  const Eigen::MatrixXd right = fill_entries(constraints, terms, drive_weighted_mean);
  Eigen::MatrixXd k(left.rows(), 2 * left.cols());
  k << left, right;
  return ConstraintMatrix(std::move(k), constraints, terms, true,
                          std::move(provenance));
}

ConstraintMatrix stack(const std::vector<ConstraintMatrix>& parts) {
  if (parts.empty()) throw UsageError("nothing to stack");
  const auto& first = parts.front();
  Eigen::Index rows = 0;
  for (const auto& p : parts) {
    if (!(p.term_basis() == first.term_basis())) {
      throw UsageError("stacked blocks must share the term basis");
    }
    if (p.extended() != first.extended()) {
      throw UsageError("cannot stack extended and plain constraint matrices");
    }
    rows += p.rows();
  }
  Eigen::MatrixXd k(rows, first.cols());
  std::vector<OperatorBasis> blocks;
  std::vector<Provenance> provenance;
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    k.middleRows(at, p.rows()) = p.entries();
    at += p.rows();
    blocks.insert(blocks.end(), p.constraint_blocks().begin(),
                  p.constraint_blocks().end());
    provenance.insert(provenance.end(), p.provenance().begin(),
                      p.provenance().end());
  }
  return ConstraintMatrix(std::move(k), std::move(blocks), first.term_basis(),
                          first.extended(), std::move(provenance));
}

ConstraintMatrix inject_noise(const ConstraintMatrix& k, double epsilon,
                              std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw UsageError("noise epsilon must be non-negative");
  Eigen::MatrixXd noisy = k.entries();
  if (epsilon > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, epsilon);
    for (Eigen::Index r = 0; r < noisy.rows(); ++r) {
      for (Eigen::Index c = 0; c < noisy.cols(); ++c) noisy(r, c) += normal(rng);
    }
  }
  std::vector<Provenance> provenance = k.provenance();
  std::ostringstream eps;
  eps << std::setprecision(17) << epsilon;
  for (auto& p : provenance) {
    p["noise_epsilon"] = eps.str();
    p["noise_seed"] = std::to_string(seed);
  }
  return ConstraintMatrix(std::move(noisy), k.constraint_blocks(), k.term_basis(),
                          k.extended(), std::move(provenance));
}

double lambda_floor(const Eigen::VectorXd& lambdas) {
  const double max = lambdas.size() == 0 ? 0.0 : lambdas.maxCoeff();
  return 1e3 * std::numeric_limits<double>::epsilon() * std::max(max, 0.0);
}

RecoveryResult recover(const Eigen::MatrixXd& k) {
  if (k.rows() == 0 || k.cols() == 0) throw UsageError("empty constraint matrix");
  if (!k.allFinite()) throw NumericalError("constraint matrix has non-finite entries");
  const Eigen::Index m = k.cols();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const Eigen::Index r = sigma.size();
  // Column j of V belongs to lambda_of_column(j); columns past r span the
  // directions K does not see at all.
  Eigen::VectorXd column_lambda = Eigen::VectorXd::Zero(m);
  column_lambda.head(r) = sigma.array().square();

  RecoveryResult out;
  out.lambdas = column_lambda.reverse();
  std::sort(out.lambdas.data(), out.lambdas.data() + m);

  const Eigen::MatrixXd& v = svd.matrixV();
  out.coeffs = v.col(m - 1);
  Eigen::Index big = 0;
  out.coeffs.cwiseAbs().maxCoeff(&big);
  if (out.coeffs(big) < 0) out.coeffs = -out.coeffs;

  const double floor = lambda_floor(out.lambdas);
  if (m == 1) {
    out.gap = std::numeric_limits<double>::infinity();
    out.degenerate_kernel = false;
  } else {
    out.gap = out.lambdas(1) - out.lambdas(0);
    out.degenerate_kernel = out.gap <= floor;
  }
  std::vector<Eigen::Index> kernel{m - 1};
  for (Eigen::Index j = m - 2; j >= 0; --j) {
    if (column_lambda(j) <= floor) kernel.push_back(j);
  }
  out.kernel_basis.resize(m, static_cast<Eigen::Index>(kernel.size()));
  out.kernel_basis.col(0) = out.coeffs;
  for (std::size_t i = 1; i < kernel.size(); ++i) {
    out.kernel_basis.col(static_cast<Eigen::Index>(i)) = v.col(kernel[i]);
  }
  return out;
}

RecoveryResult recover(const ConstraintMatrix& k) { return recover(k.entries()); }

double reconstruction_error(const Eigen::VectorXd& c_true,
                            const Eigen::VectorXd& c_rec) {
  if (c_true.size() != c_rec.size()) {
    throw UsageError("coefficient vectors differ in length");
  }
  const double nt = c_true.norm();
  const double nr = c_rec.norm();
  if (!(nt > 0.0) || !(nr > 0.0)) {
    throw UsageError("reconstruction error needs non-zero vectors");
  }
  const Eigen::VectorXd a = c_true / nt;
  const Eigen::VectorXd b = c_rec / nr;
  return std::min((a - b).norm(), (a + b).norm());
}

ErrorEstimate error_estimate(const Eigen::VectorXd& lambdas, double epsilon) {
  if (lambdas.size() < 2) throw UsageError("error estimate needs two eigenvalues");
  if (!(epsilon >= 0.0)) throw UsageError("noise epsilon must be non-negative");
  const double floor = lambda_floor(lambdas);
  ErrorEstimate out;
  double sum = 0.0;
  for (Eigen::Index i = 1; i < lambdas.size(); ++i) {
    if (lambdas(i) <= floor) {
      out.degenerate_spectrum = true;
      continue;
    }
    sum += 1.0 / lambdas(i);
  }
  out.value = epsilon * std::sqrt(sum);
  return out;
}

Eigen::MatrixXd full_system_correlation_matrix(const QuantumState& state,
                                               const OperatorBasis& terms) {
  constexpr std::size_t kMaxSites = 6;
  if (state.n_sites() > kMaxSites) {
    throw ResourceError("full-system correlation matrix is limited to " +
                        std::to_string(kMaxSites) + " sites");
  }
  if (terms.n_sites() != state.n_sites()) {
    throw UsageError("term basis and state differ in size");
  }
  const Eigen::MatrixXcd rho = state.density_matrix();
  const Eigen::Index dim = rho.rows();
  std::vector<Eigen::MatrixXcd> comm;
  comm.reserve(terms.size());
  for (const auto& s : terms.elements()) {
    Eigen::MatrixXcd sm = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
      const auto col = static_cast<std::uint64_t>(a);
      sm(static_cast<Eigen::Index>(col ^ s.x_bits()), a) = pauli_phase(s, col);
    }
    comm.push_back(sm * rho - rho * sm);
  }
  const auto m = static_cast<Eigen::Index>(terms.size());
  const double scale = std::ldexp(1.0, static_cast<int>(state.n_sites()));
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const auto& ci = comm[static_cast<std::size_t>(i)];
      const auto& cj = comm[static_cast<std::size_t>(j)];
      out(i, j) = out(j, i) = scale * (ci.conjugate().cwiseProduct(cj)).sum().real();
    }
  }
  return out;
}

OperatorBasis complete_constraint_basis(std::size_t n_sites) {
  const Lattice lattice = Lattice::chain(n_sites);
  return enumerate_basis(lattice, Region::whole(lattice), n_sites);
}

namespace {

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) cells.push_back(cell);
  if (!line.empty() && line.back() == sep) cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  std::istringstream in(t);
  in >> out;
  return !in.fail() && in.eof();
}

}  // namespace

void write_csv(std::ostream& out, const ConstraintMatrix& k) {
  out << std::setprecision(17);
  out << "# schema=1\n# kind=constraint_matrix\n";
  out << "# extended=" << (k.extended() ? 1 : 0) << "\n";
  out << "# n_sites=" << k.term_basis().n_sites() << "\n";
  for (std::size_t b = 0; b < k.provenance().size(); ++b) {
    for (const auto& [key, value] : k.provenance()[b]) {
      out << "# block" << b << "." << key << "=" << value << "\n";
    }
    out << "# block" << b << ".constraints="
        << join(k.constraint_blocks()[b].labels(), ';') << "\n";
  }
  out << join(k.column_labels(), ',') << "\n";
  for (Eigen::Index r = 0; r < k.rows(); ++r) {
    for (Eigen::Index c = 0; c < k.cols(); ++c) {
      if (c) out << ',';
      out << k.entries()(r, c);
    }
    out << "\n";
  }
}

KTable read_k_table(std::istream& in) {
  KTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        table.metadata[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      }
      continue;
    }
    const auto cells = split(t, ',');
    std::vector<double> values(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      numeric = numeric && parse_double(cells[i], values[i]);
    }
    if (first_data && !numeric) {
      for (const auto& c : cells) table.labels.push_back(trim(c));
      first_data = false;
      continue;
    }
    first_data = false;
    if (!numeric) {
      throw UsageError("line " + std::to_string(line_no) +
                       ": non-numeric entry in constraint matrix");
    }
    const std::size_t want = table.labels.empty()
                                 ? (rows.empty() ? values.size() : rows[0].size())
                                 : table.labels.size();
    if (values.size() != want) {
      throw UsageError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(want) + " columns, found " +
                       std::to_string(values.size()));
    }
    for (double v : values) {
      if (!std::isfinite(v)) {
        throw UsageError("line " + std::to_string(line_no) + ": non-finite entry");
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw UsageError("constraint matrix file has no data rows");
  table.entries.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      table.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  return table;
}

std::vector<std::string> read_term_list(std::istream& in) {
  std::vector<std::string> labels;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (first && t == "term") {
      first = false;
      continue;
    }
    first = false;
    for (const auto& cell : split(t, ',')) {
      if (!trim(cell).empty()) labels.push_back(trim(cell));
    }
  }
  if (labels.empty()) throw UsageError("term list is empty");
  return labels;
}

void write_csv(std::ostream& out, const RecoveryResult& result,
               const std::vector<std::string>& labels,
               const std::map<std::string, std::string>& metadata) {
  if (labels.size() != static_cast<std::size_t>(result.coeffs.size())) {
    throw UsageError("one label is needed per recovered coefficient");
  }
  out << std::setprecision(17);
  out << "# schema=1\n# kind=recovery\n";
  out << "# gap=" << result.gap << "\n";
  out << "# degenerate_kernel=" << (result.degenerate_kernel ? 1 : 0) << "\n";
  out << "# kernel_dimension=" << result.kernel_basis.cols() << "\n";
  for (const auto& [key, value] : metadata) out << "# " << key << "=" << value << "\n";
  out << "index,term,coeff,lambda\n";
  for (Eigen::Index i = 0; i < result.coeffs.size(); ++i) {
    out << i << "," << labels[static_cast<std::size_t>(i)] << ","
        << result.coeffs(i) << "," << result.lambdas(i) << "\n";
  }
}

}  // namespace hamlearn
