#include "postulatelab/span_analyzer.hpp"

#include <sstream>

#include "postulatelab/parallel.hpp"
#include "postulatelab/rank.hpp"

namespace postulatelab {

namespace {
constexpr std::uint64_t kFamilyStream = 1;
constexpr std::uint64_t kSampleStream = 2;
}  // namespace

MatrixXc family_unitary(Index dim, std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed, {kFamilyStream, static_cast<std::uint64_t>(n)});
  return haar_unitary<double>(dim, rng);
}

FunctionFamily orbit_family(std::string label, const Opf& f) {
  return {std::move(label), f.dim(), [f](std::size_t n, std::uint64_t seed) -> ProbabilityFunction {
            return [g = compose_unitary(f, family_unitary(f.dim(), n, seed))](const PureState& psi) {
              return eval(g, psi);
            };
          }};
}

FunctionFamily born_family(Index a) {
  MatrixXc e = MatrixXc::Zero(a, a);
  e(0, 0) = 1;
  return orbit_family("born", Opf::from_effect(e));
}

FunctionFamily power2_family(Index a) {
  const Index d = binomial(a + 1, 2);
  MatrixXc f = MatrixXc::Zero(d, d);
  f(0, 0) = 1;  // |00><00|, the first symmetric basis vector
  return orbit_family("power-2", Opf(a, SymPower(2), f));
}

FunctionFamily entropy_bin_family(EntropyBin bin, EntropyKind kind) {
  std::string label = kind == EntropyKind::VonNeumann ? "entropy-bin" : "renyi-bin";
  return {std::move(label), 2, [bin, kind](std::size_t n, std::uint64_t seed) -> ProbabilityFunction {
            return [indicator = cnot_entropy_opf(bin, kind), u = family_unitary(2, n, seed)](const PureState& psi) {
              return indicator(psi.transformed(u));
            };
          }};
}

FunctionFamily renyi_family(EntropyBin bin) { return entropy_bin_family(bin, EntropyKind::Renyi2); }

FunctionFamily constant_family(Index a) {
  return {"constant", a, [](std::size_t, std::uint64_t) -> ProbabilityFunction {
            return [](const PureState&) { return 1.0; };
          }};
}

RankProfile rank_profile(const FunctionFamily& family, Index n_functions, Index n_samples, std::uint64_t seed,
                         double tol, unsigned threads) {
  if (n_functions < 1) throw InvalidInput("rank_profile: N must be >= 1");
  if (n_samples < 4 * n_functions)
    throw InvalidInput("rank_profile: M = " + std::to_string(n_samples) + " is below 4N = " +
                       std::to_string(4 * n_functions) + "; rank estimate would be unreliable");
  if (!(tol > 0)) throw InvalidInput("rank_profile: tolerance must be positive");

  Rng rng = make_rng(seed, {kSampleStream});
  std::vector<PureState> states;
  states.reserve(static_cast<std::size_t>(n_samples));
  for (Index s = 0; s < n_samples; ++s) states.push_back(PureState::haar(family.dim, rng));

  MatrixXd values(n_functions, n_samples);
  parallel_for(static_cast<std::size_t>(n_functions), threads, [&](std::size_t n) {
    const ProbabilityFunction f = family.member(n, seed);
    for (Index s = 0; s < n_samples; ++s) values(static_cast<Index>(n), s) = f(states[static_cast<std::size_t>(s)]);
  });

  RankProfile profile;
  profile.label = family.label;
  profile.n_samples = n_samples;
  profile.tol = tol;
  profile.seed = seed;
  for (Index n = 1; n <= n_functions; ++n) {
    const NumericalRank r = numerical_rank(values.topRows(n), tol);
    profile.ranks.push_back(r.rank);
    profile.singular_values.push_back(r.singular_values);
  }
  return profile;
}

std::string_view span_class_id(SpanClass kind) {
  switch (kind) {
    case SpanClass::Saturating: return "saturating";
    case SpanClass::Growing: return "growing";
    case SpanClass::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Classification classify(const RankProfile& profile) {
  const Index n = profile.size();
  if (n < 8) throw InvalidInput("classify: need N >= 8 steps, got " + std::to_string(n));
  const Index tail = (n + 3) / 4;
  const Index last = profile.rank(n);
  bool flat = true;
  for (Index i = n - tail + 1; i <= n; ++i) flat = flat && profile.rank(i) == last;

  Classification out;
  if (flat) {
    out.kind = SpanClass::Saturating;
    out.dimension = last;
    return out;
  }
  if (last >= n - 2) {
    out.kind = SpanClass::Growing;
    out.dimension = last;
    return out;
  }
  std::ostringstream diag;
  diag << "r(N) = " << last << " with N = " << n << "; ranks over the last " << tail << " steps:";
  for (Index i = n - tail + 1; i <= n; ++i) diag << ' ' << profile.rank(i);
  out.kind = SpanClass::Inconclusive;
  out.dimension = last;
  out.diagnostics = diag.str();
  return out;
}

std::string to_csv(const RankProfile& profile) {
  std::ostringstream out;
  out << "n,rank\n";
  for (Index n = 1; n <= profile.size(); ++n) out << n << ',' << profile.rank(n) << '\n';
  return out.str();
}

nlohmann::ordered_json to_json(const RankProfile& profile, const Classification& classification) {
  nlohmann::ordered_json c = {{"kind", std::string(span_class_id(classification.kind))}};
  if (classification.kind == SpanClass::Saturating) c["dimension"] = classification.dimension;
  if (!classification.diagnostics.empty()) c["diagnostics"] = classification.diagnostics;
  return {{"family", profile.label},  {"N", profile.size()},     {"M", profile.n_samples},
          {"tol", profile.tol},       {"seed", profile.seed},    {"ranks", profile.ranks},
          {"classification", std::move(c)}};
}

}  // namespace postulatelab
