#include "postulatelab/kent_devices.hpp"

#include <algorithm>
#include <cmath>

#include "postulatelab/random.hpp"

namespace postulatelab {

ProperMixture::ProperMixture(Index a, Index b, std::vector<Part> parts) : a_(a), b_(b), parts_(std::move(parts)) {
  if (a < 1 || b < 1) throw InvalidInput("proper mixture: dimensions must be positive");
  if (parts_.empty()) throw InvalidInput("proper mixture: no parts");
  double sum = 0;
  for (const auto& part : parts_) {
    if (!(part.weight >= 0)) throw InvalidInput("proper mixture: negative weight");
    if (part.state.dim() != a * b) throw InvalidInput("proper mixture: part dimension does not match a*b");
    sum += part.weight;
  }
  if (std::abs(sum - 1.0) > tol::kWeights) throw InvalidInput("proper mixture: weights do not sum to 1");
}

ProperMixture ProperMixture::pure(Index a, Index b, PureState psi) {
  return ProperMixture(a, b, {{1.0, std::move(psi)}});
}

std::string_view entropy_kind_id(EntropyKind kind) {
  return kind == EntropyKind::VonNeumann ? "von-neumann" : "renyi2";
}

EntropyKind parse_entropy_kind(std::string_view id) {
  if (id == "von-neumann" || id == "vn") return EntropyKind::VonNeumann;
  if (id == "renyi2" || id == "renyi-2") return EntropyKind::Renyi2;
  throw InvalidInput("unknown entropy kind '" + std::string(id) + "'");
}

double entropy(const DensityMatrix& rho, EntropyKind kind) {
  return kind == EntropyKind::VonNeumann ? von_neumann_entropy(rho) : renyi2_entropy(rho);
}

// -----------------------------------------------------------------------------
// EntropyBin

namespace {
// Absorbs round-off when S lands on a grid point.
constexpr double kBinSlack = 1e-9;  // in units of .01
}  // namespace

int EntropyBin::top_hundredths(Index dim) {
  if (dim < 2) throw InvalidInput("entropy bin: dimension must be >= 2");
  return static_cast<int>(std::ceil(100.0 * std::log2(static_cast<double>(dim)) - kBinSlack)) - 1;
}

EntropyBin EntropyBin::from_value(double value, Index dim) {
  const double scaled = value * 100.0;
  const double h = std::round(scaled);
  if (std::abs(value - h / 100.0) > 1e-12) throw InvalidInput("entropy bin: value is not a multiple of 0.01");
  if (h < 0 || h > top_hundredths(dim)) throw InvalidInput("entropy bin: value outside [0, log2(d))");
  return EntropyBin(static_cast<int>(h), dim);
}

EntropyBin EntropyBin::of_entropy(double s, Index dim) {
  const int top = top_hundredths(dim);
  const int h = static_cast<int>(std::floor(s * 100.0 + kBinSlack));
  return EntropyBin(std::clamp(h, 0, top), dim);
}

double total_variation(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  double sum = 0;
  for (const auto& [key, pv] : p) {
    const auto it = q.find(key);
    sum += std::abs(pv - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [key, qv] : q)
    if (!p.count(key)) sum += std::abs(qv);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

// -----------------------------------------------------------------------------
// Remote measurement

ProperMixture remote_projective_measure(const PureState& psi, Index a, const Povm& q) {
  const Index b = q.dim();
  if (psi.dim() != a * b)
    throw InvalidInput("remote measurement: state dimension " + std::to_string(psi.dim()) + " != " +
                       std::to_string(a) + "x" + std::to_string(b));
  if (!q.is_projective()) throw InvalidInput("remote measurement: effects must be orthogonal projectors");
  const MatrixXc ia = MatrixXc::Identity(a, a);
  std::vector<ProperMixture::Part> parts;
  for (const auto& effect : q.effects()) {
    const VectorXc v = kron(ia, effect) * psi.amplitudes();
    const double p = v.squaredNorm();
    if (p < tol::kDropWeight) continue;
    parts.push_back({p, PureState::normalized(v)});
  }
  // Renormalize away the dropped mass and round-off.
  double total = 0;
  for (const auto& part : parts) total += part.weight;
  for (auto& part : parts) part.weight /= total;
  return ProperMixture(a, b, std::move(parts));
}

// -----------------------------------------------------------------------------
// State readout

namespace {

OutcomeKey sr_key(const MatrixXc& rho, double precision) {
  OutcomeKey key;
  key.reserve(static_cast<std::size_t>(1 + 2 * rho.size()));
  key.push_back(rho.rows());
  for (Index i = 0; i < rho.rows(); ++i)
    for (Index j = 0; j < rho.cols(); ++j) {
      key.push_back(std::llround(rho(i, j).real() / precision));
      key.push_back(std::llround(rho(i, j).imag() / precision));
    }
  return key;
}

MatrixXc sr_matrix(const OutcomeKey& key, double precision) {
  const Index d = key.at(0);
  MatrixXc m(d, d);
  std::size_t pos = 1;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      m(i, j) = cplx(static_cast<double>(key.at(pos)) * precision, static_cast<double>(key.at(pos + 1)) * precision);
      pos += 2;
    }
  return m;
}

nlohmann::ordered_json matrix_json(const MatrixXc& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

StateReadoutDevice::StateReadoutDevice(double precision) : precision_(precision) {
  if (!(precision > 0)) throw InvalidInput("state readout: precision must be positive");
}

OutcomeDistribution StateReadoutDevice::distribution(const ProperMixture& input) const {
  OutcomeDistribution out;
  for (const auto& part : input.parts()) {
    const DensityMatrix rho = partial_trace(part.state, input.a(), input.b(), Side::A);
    out[sr_key(rho.matrix(), precision_)] += part.weight;
  }
  return out;
}

nlohmann::ordered_json StateReadoutDevice::describe(const OutcomeKey& key) const {
  return {{"reduced_state", matrix_json(sr_matrix(key, precision_))}};
}

std::vector<SrOutcome> m_sr(const ProperMixture& input, double precision) {
  const StateReadoutDevice device(precision);
  std::vector<SrOutcome> out;
  for (const auto& [key, p] : device.distribution(input)) out.push_back({sr_matrix(key, precision), p});
  return out;
}

// -----------------------------------------------------------------------------
// Entropy meter

std::vector<BinOutcome> m_fpem(const ProperMixture& input, Side side, EntropyKind kind) {
  const Index d = side == Side::A ? input.a() : input.b();
  std::map<int, double> bins;
  for (const auto& part : input.parts()) {
    const DensityMatrix rho = partial_trace(part.state, input.a(), input.b(), side);
    bins[EntropyBin::of_entropy(entropy(rho, kind), d).hundredths()] += part.weight;
  }
  std::vector<BinOutcome> out;
  for (const auto& [h, p] : bins) out.push_back({EntropyBin::from_value(h / 100.0, d), p});
  return out;
}

OutcomeDistribution EntropyMeterDevice::distribution(const ProperMixture& input) const {
  OutcomeDistribution out;
  for (const auto& [bin, p] : m_fpem(input, side_, kind_)) out[{bin.hundredths()}] += p;
  return out;
}

nlohmann::ordered_json EntropyMeterDevice::describe(const OutcomeKey& key) const {
  return {{"bin", static_cast<double>(key.at(0)) / 100.0}, {"entropy", std::string(entropy_kind_id(kind_))}};
}

// -----------------------------------------------------------------------------
// Born marginal

OutcomeDistribution BornMarginalDevice::distribution(const ProperMixture& input) const {
  if (povm_.dim() != input.a()) throw InvalidInput("born device: POVM dimension does not match system A");
  const MatrixXc ib = MatrixXc::Identity(input.b(), input.b());
  OutcomeDistribution out;
  for (std::size_t i = 0; i < povm_.size(); ++i) {
    const MatrixXc lifted = kron(povm_.effect(i), ib);
    double p = 0;
    for (const auto& part : input.parts()) p += part.weight * part.state.expectation(lifted).real();
    out[{static_cast<std::int64_t>(i)}] = std::clamp(p, 0.0, 1.0);
  }
  return out;
}

nlohmann::ordered_json BornMarginalDevice::describe(const OutcomeKey& key) const { return {{"outcome", key.at(0)}}; }

// -----------------------------------------------------------------------------
// Signalling

SignallingReport detect_signalling(const PureState& psi, Index a, const Povm& remote, const ReadoutDevice& device,
                                   double tol) {
  SignallingReport report;
  report.device = device.name();
  report.baseline = device.distribution(ProperMixture::pure(a, remote.dim(), psi));
  report.after_remote = device.distribution(remote_projective_measure(psi, a, remote));
  report.tv = total_variation(report.baseline, report.after_remote);
  report.signalling = report.tv > tol;
  return report;
}

nlohmann::ordered_json to_json(const SignallingReport& report, const ReadoutDevice& device) {
  auto dist = [&](const OutcomeDistribution& d) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& [key, p] : d) {
      nlohmann::ordered_json entry = device.describe(key);
      entry["probability"] = p;
      out.push_back(std::move(entry));
    }
    return out;
  };
  return {{"device", report.device},
          {"baseline", dist(report.baseline)},
          {"after_remote", dist(report.after_remote)},
          {"tv_distance", report.tv},
          {"signalling", report.signalling}};
}

// -----------------------------------------------------------------------------
// Sequential measurement and quadratic fit

MatrixXd sequential_spo_then_povm(const PureState& psi, const Povm& x, const Povm& y) {
  if (x.dim() != psi.dim() || y.dim() != psi.dim()) throw InvalidInput("sequential measurement: dimension mismatch");
  // The first device leaves psi unchanged, so the second sees the same state.
  VectorXd px(static_cast<Index>(x.size())), py(static_cast<Index>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) px(static_cast<Index>(i)) = x.probability(i, psi);
  for (std::size_t j = 0; j < y.size(); ++j) py(static_cast<Index>(j)) = y.probability(j, psi);
  return py * px.transpose();
}

namespace {

// Real basis of the a x a Hermitian matrices.
std::vector<MatrixXc> hermitian_basis(Index a) {
  std::vector<MatrixXc> basis;
  const cplx i(0, 1);
  for (Index r = 0; r < a; ++r) {
    MatrixXc e = MatrixXc::Zero(a, a);
    e(r, r) = 1;
    basis.push_back(std::move(e));
  }
  for (Index r = 0; r < a; ++r)
    for (Index c = r + 1; c < a; ++c) {
      MatrixXc sym = MatrixXc::Zero(a, a), asym = MatrixXc::Zero(a, a);
      sym(r, c) = sym(c, r) = 1;
      asym(r, c) = -i;
      asym(c, r) = i;
      basis.push_back(std::move(sym));
      basis.push_back(std::move(asym));
    }
  return basis;
}

}  // namespace

QuadraticFit quadratic_fit_residual(const ProbabilityFunction& f, std::span<const PureState> samples) {
  if (samples.empty()) throw InvalidInput("quadratic fit: no samples");
  const Index a = samples.front().dim();
  const Index n = static_cast<Index>(samples.size());
  if (n < 4 * a * a)
    throw InvalidInput("quadratic fit: underdetermined, need at least " + std::to_string(4 * a * a) + " samples");
  const auto basis = hermitian_basis(a);
  MatrixXd design(n, static_cast<Index>(basis.size()));
  VectorXd target(n);
  for (Index s = 0; s < n; ++s) {
    const PureState& psi = samples[static_cast<std::size_t>(s)];
    if (psi.dim() != a) throw InvalidInput("quadratic fit: samples have mixed dimensions");
    for (std::size_t b = 0; b < basis.size(); ++b) design(s, static_cast<Index>(b)) = psi.expectation(basis[b]).real();
    target(s) = f(psi);
  }
  const VectorXd coeffs = design.colPivHouseholderQr().solve(target);
  QuadraticFit fit;
  fit.z = MatrixXc::Zero(a, a);
  for (std::size_t b = 0; b < basis.size(); ++b) fit.z += coeffs(static_cast<Index>(b)) * basis[b];
  const double norm2 = target.squaredNorm();
  fit.relative_residual = norm2 > 0 ? std::sqrt((design * coeffs - target).squaredNorm() / norm2) : 0.0;
  return fit;
}

QuadraticFit quadratic_fit_residual(const ProbabilityFunction& f, Index dim, Index n_samples, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0xf17});
  std::vector<PureState> samples;
  samples.reserve(static_cast<std::size_t>(std::max<Index>(n_samples, 0)));
  for (Index s = 0; s < n_samples; ++s) samples.push_back(PureState::haar(dim, rng));
  return quadratic_fit_residual(f, samples);
}

// -----------------------------------------------------------------------------
// Entropy-meter outcome functions on a qubit

ProbabilityFunction cnot_entropy_opf(EntropyBin bin, EntropyKind kind) {
  if (bin.dim() != 2) throw InvalidInput("cnot entropy opf: qubit bins only");
  MatrixXc cnot = MatrixXc::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
  return [bin, kind, cnot](const PureState& psi) {
    if (psi.dim() != 2) throw InvalidInput("cnot entropy opf: qubit input required");
    const PureState joint = tensor(psi, PureState::basis(2, 0)).transformed(cnot);
    for (const auto& [reading, p] : m_fpem(ProperMixture::pure(2, 2, joint), Side::A, kind))
      if (reading == bin) return p;
    return 0.0;
  };
}

ProbabilityFunction closed_form_entropy_indicator(EntropyBin bin, EntropyKind kind) {
  if (bin.dim() != 2) throw InvalidInput("entropy indicator: qubit bins only");
  return [bin, kind](const PureState& psi) {
    if (psi.dim() != 2) throw InvalidInput("entropy indicator: qubit input required");
    const double p = std::norm(psi[0]);
    const double q = std::norm(psi[1]);
    double s = 0;
    if (kind == EntropyKind::VonNeumann) {
      if (p > 0) s -= p * std::log2(p);
      if (q > 0) s -= q * std::log2(q);
    } else {
      s = -std::log2(p * p + q * q);
    }
    return EntropyBin::of_entropy(std::max(s, 0.0), 2) == bin ? 1.0 : 0.0;
  };
}

double quantum_outcome_probability(const Opf& f, const ProperMixture& input) {
  if (f.power().value != 1) throw UnsupportedPower("quantum_outcome_probability: k = 1 OPFs only");
  if (f.dim() != input.a()) throw InvalidInput("quantum_outcome_probability: dimension mismatch");
  double p = 0;
  for (const auto& part : input.parts())
    p += part.weight * partial_trace(part.state, input.a(), input.b(), Side::A).expectation(f.matrix());
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace postulatelab
