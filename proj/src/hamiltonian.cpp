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

#include "hamlearn/hamiltonian.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "hamlearn/errors.hpp"

namespace hamlearn {

double DriveFunction::operator()(double t) const {
  return amplitude * std::cos(omega * t);
}

std::string DriveFunction::str() const {
  std::ostringstream os;
  os << std::setprecision(17) << "cos(amplitude=" << amplitude
     << ",omega=" << omega << ")";
  return os.str();
}

HamiltonianSpec::HamiltonianSpec(OperatorBasis basis, Eigen::VectorXd coeffs,
                                 std::optional<Drive> drive)
    : basis_(std::move(basis)),
      coeffs_(std::move(coeffs)),
      drive_(std::move(drive)) {
  if (static_cast<std::size_t>(coeffs_.size()) != basis_.size()) {
    throw UsageError("coefficient vector length " +
                     std::to_string(coeffs_.size()) + " does not match " +
                     std::to_string(basis_.size()) + " basis terms");
  }
  if (!coeffs_.allFinite()) throw UsageError("non-finite Hamiltonian coefficient");
  if (drive_) {
    if (static_cast<std::size_t>(drive_->coeffs.size()) != basis_.size()) {
      throw UsageError("drive coefficient vector does not match the basis");
    }
    if (!drive_->coeffs.allFinite()) {
      throw UsageError("non-finite drive coefficient");
    }
  }
}

HamiltonianSpec& HamiltonianSpec::set_metadata(const std::string& key,
                                               std::string value) {
  metadata_[key] = std::move(value);
  return *this;
}

HamiltonianSpec HamiltonianSpec::static_part() const {
  HamiltonianSpec out(basis_, coeffs_);
  out.metadata_ = metadata_;
  return out;
}

HamiltonianSpec HamiltonianSpec::with_drive(Drive drive) const {
  HamiltonianSpec out(basis_, coeffs_, std::move(drive));
  out.metadata_ = metadata_;
  return out;
}

HamiltonianSpec HamiltonianSpec::operator+(const HamiltonianSpec& other) const {
  if (!(basis_ == other.basis_)) {
    throw UsageError("cannot add Hamiltonians over different bases");
  }
  return HamiltonianSpec(basis_, coeffs_ + other.coeffs_);
}

namespace {

Eigen::VectorXd restrict_to(const OperatorBasis& from,
                            const Eigen::VectorXd& values,
                            const OperatorBasis& sub) {
  if (sub.n_sites() != from.n_sites()) {
    throw UsageError("sub-basis lives on a different lattice");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sub.size()));
  for (std::size_t i = 0; i < sub.size(); ++i) {
    if (auto j = from.index_of(sub[i])) {
      out(static_cast<Eigen::Index>(i)) = values(static_cast<Eigen::Index>(*j));
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd HamiltonianSpec::coeffs_on(const OperatorBasis& sub) const {
  return restrict_to(basis_, coeffs_, sub);
}

Eigen::VectorXd HamiltonianSpec::drive_coeffs_on(const OperatorBasis& sub) const {
  if (!drive_) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sub.size()));
  return restrict_to(basis_, drive_->coeffs, sub);
}

HamiltonianSpec sample_generic_chain(std::size_t n_sites, std::uint64_t seed) {
  if (n_sites < 2) throw UsageError("generic chain needs at least 2 sites");
  Lattice lattice = Lattice::chain(n_sites);
  OperatorBasis basis = model_terms(ModelFamily::kGeneric2LocalChain, lattice);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
  HamiltonianSpec spec(std::move(basis), std::move(c));
  spec.set_metadata("model", "generic-2-local-chain")
      .set_metadata("seed", std::to_string(seed))
      .set_metadata("disorder", "c~normal(0,1)");
  return spec;
}

HamiltonianSpec xy_chain(std::span<const double> g,
                         std::span<const double> gamma) {
  const std::size_t n = g.size();
  if (n < 2) throw UsageError("XY chain needs at least 2 sites");
  if (gamma.size() + 1 != n) {
    throw UsageError("XY chain needs n-1 anisotropy parameters");
  }
  Lattice lattice = Lattice::chain(n);
  OperatorBasis basis = model_terms(ModelFamily::kXYChain, lattice);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  auto set = [&](const PauliString& p, double value) {
    c(static_cast<Eigen::Index>(*basis.index_of(p))) = value;
  };
  for (std::size_t l = 0; l < n; ++l) {
    set(PauliString::single(n, l, PauliLetter::Z), g[l]);
  }
  for (std::size_t l = 0; l + 1 < n; ++l) {
    PauliString xx(n), yy(n);
    xx.set_letter(l, PauliLetter::X);
    xx.set_letter(l + 1, PauliLetter::X);
    yy.set_letter(l, PauliLetter::Y);
    yy.set_letter(l + 1, PauliLetter::Y);
    set(xx, 0.5 * (1.0 + gamma[l]));
    set(yy, 0.5 * (1.0 - gamma[l]));
  }
  HamiltonianSpec spec(std::move(basis), std::move(c));
  spec.set_metadata("model", "xy-chain");
  return spec;
}

HamiltonianSpec sample_xy_chain(std::size_t n_sites, std::uint64_t seed) {
  if (n_sites < 2) throw UsageError("XY chain needs at least 2 sites");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> g(n_sites), gamma(n_sites - 1);
  for (double& v : g) v = normal(rng);
  for (double& v : gamma) v = normal(rng);
  HamiltonianSpec spec = xy_chain(g, gamma);
  spec.set_metadata("seed", std::to_string(seed))
      .set_metadata("disorder", "g,gamma~normal(0,1)");
  return spec;
}

HamiltonianSpec sample_chain(ModelFamily model, std::size_t n_sites,
                             std::uint64_t seed) {
  switch (model) {
    case ModelFamily::kGeneric2LocalChain:
      return sample_generic_chain(n_sites, seed);
    case ModelFamily::kXYChain:
      return sample_xy_chain(n_sites, seed);
  }
  throw UsageError("unknown model family");
}

void write_spec(std::ostream& out, const HamiltonianSpec& spec) {
  out << "# hamlearn hamiltonian\n";
  out << "schema=1\n";
  out << "n_sites=" << spec.n_sites() << "\n";
  for (const auto& [key, value] : spec.metadata()) {
    out << key << "=" << value << "\n";
  }
  out << std::setprecision(17);
  if (spec.drive()) {
    out << "drive_amplitude=" << spec.drive()->function.amplitude << "\n";
    out << "drive_omega=" << spec.drive()->function.omega << "\n";
  }
  for (std::size_t i = 0; i < spec.basis().size(); ++i) {
    out << "term " << spec.basis()[i].letters() << " "
        << spec.coeffs()(static_cast<Eigen::Index>(i));
    if (spec.drive()) {
      out << " " << spec.drive()->coeffs(static_cast<Eigen::Index>(i));
    }
    out << "\n";
  }
}

HamiltonianSpec read_spec(std::istream& in) {
  std::map<std::string, std::string> keys;
  std::vector<PauliString> terms;
  std::vector<double> coeffs, drive;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("term ", 0) == 0) {
      std::istringstream ls(line.substr(5));
      std::string letters;
      double c = 0.0, v = 0.0;
      if (!(ls >> letters >> c)) {
        throw UsageError("line " + std::to_string(line_no) + ": malformed term");
      }
      terms.push_back(PauliString::from_letters(letters));
      coeffs.push_back(c);
      if (ls >> v) drive.push_back(v);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("line " + std::to_string(line_no) + ": expected key=value");
    }
    keys[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (keys["schema"] != "1") throw UsageError("unsupported Hamiltonian schema");
  if (terms.empty()) throw UsageError("Hamiltonian file lists no terms");
  const std::size_t n = std::stoul(keys["n_sites"]);
  Lattice lattice = Lattice::chain(n);
  std::size_t locality = 0;
  for (const auto& p : terms) locality = std::max(locality, span(p));
  OperatorBasis basis(std::move(terms), Region::whole(lattice), locality);
  Eigen::VectorXd c = Eigen::Map<Eigen::VectorXd>(coeffs.data(),
                                                  static_cast<Eigen::Index>(coeffs.size()));
  std::optional<Drive> d;
  if (keys.count("drive_amplitude")) {
    if (drive.size() != coeffs.size()) {
      throw UsageError("driven Hamiltonian file is missing drive coefficients");
    }
    d = Drive{Eigen::Map<Eigen::VectorXd>(drive.data(),
                                          static_cast<Eigen::Index>(drive.size())),
              DriveFunction{std::stod(keys["drive_amplitude"]),
                            std::stod(keys["drive_omega"])}};
  }
  HamiltonianSpec spec(std::move(basis), std::move(c), std::move(d));
  for (const auto& [key, value] : keys) {
    if (key == "schema" || key == "n_sites" || key.rfind("drive_", 0) == 0) continue;
    spec.set_metadata(key, value);
  }
  return spec;
}

}  // namespace hamlearn
