#pragma once

// Numerical rank of the linear span of a family of outcome functions,
// sampled on a fixed set of Haar-random rays. Polynomial (Born-type)
// families saturate at a finite dimension; entropy-bin indicators keep
// growing.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "postulatelab/kent_devices.hpp"
#include "postulatelab/opf.hpp"

namespace postulatelab {

struct FunctionFamily {
  std::string label;
  Index dim;
  // Member n of the family; must be deterministic in (n, seed).
  std::function<ProbabilityFunction(std::size_t n, std::uint64_t seed)> generator;

  ProbabilityFunction member(std::size_t n, std::uint64_t seed) const { return generator(n, seed); }
};

// Haar unitary U_n attached to member n of a family.
MatrixXc family_unitary(Index dim, std::size_t n, std::uint64_t seed);

// psi |-> f(U_n psi) for a fixed OPF f.
FunctionFamily orbit_family(std::string label, const Opf& f);
// psi |-> |<0|U_n|psi>|^2 on C^a.
FunctionFamily born_family(Index a);
// k = 2 orbit of F = |00><00| on Sym^2(C^a).
FunctionFamily power2_family(Index a);
// psi |-> [bin(S(U_n psi)) == bin] via the three-step entropy-meter protocol.
FunctionFamily entropy_bin_family(EntropyBin bin, EntropyKind kind);
FunctionFamily renyi_family(EntropyBin bin);
FunctionFamily constant_family(Index a);

struct RankProfile {
  std::string label;
  std::vector<Index> ranks;                 // ranks[n-1] = r(n)
  std::vector<VectorXd> singular_values;    // per step n
  Index n_samples = 0;
  double tol = 0;
  std::uint64_t seed = 0;

  Index size() const { return static_cast<Index>(ranks.size()); }
  Index rank(Index n) const { return ranks.at(static_cast<std::size_t>(n - 1)); }
};

// Requires M >= 4N. Rows of the N x M value matrix are evaluated on up to
// `threads` workers; the SVDs run serially.
RankProfile rank_profile(const FunctionFamily& family, Index n_functions, Index n_samples, std::uint64_t seed,
                         double tol = 1e-8, unsigned threads = 1);

enum class SpanClass { Saturating, Growing, Inconclusive };

struct Classification {
  SpanClass kind = SpanClass::Inconclusive;
  Index dimension = 0;  // saturation dimension when kind == Saturating
  std::string diagnostics;
};

std::string_view span_class_id(SpanClass kind);

// Saturating(d) if r(n) = d over the last ceil(N/4) steps, Growing if
// r(N) >= N - 2, otherwise Inconclusive. Requires N >= 8.
Classification classify(const RankProfile& profile);

// "n,rank" lines with a header.
std::string to_csv(const RankProfile& profile);
nlohmann::ordered_json to_json(const RankProfile& profile, const Classification& classification);

}  // namespace postulatelab
