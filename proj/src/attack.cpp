#include "opmatch/attack.h"

#include <chrono>
#include <string>

#include "opmatch/errors.h"
#include "opmatch/minconflict.h"
#include "opmatch/monotone.h"
#include "opmatch/oned.h"

namespace opmatch::attack {

namespace {

struct Name {
  Algorithm algo;
  const char* text;
};

constexpr Name kNames[] = {
    {Algorithm::oned, "oned"},
    {Algorithm::minconflict, "minconflict"},
    {Algorithm::minconflict_sampled, "minconflict-sampled"},
    {Algorithm::minconflict_scaled, "minconflict-scaled"},
    {Algorithm::monotone_inc, "monotone-inc"},
    {Algorithm::monotone_dec, "monotone-dec"},
    {Algorithm::monotone_mix, "monotone-mix"},
    {Algorithm::exact, "exact"},
};

Outcome from_matching(Matching m, const Dataset& P, const Dataset& Q, const WeightSpec& w) {
  Outcome out;
  m.sort();
  out.assignment = assignment_from(m, P, Q);
  out.objective = matching_weight(m, P, Q, w);
  out.matching = std::move(m);
  return out;
}

}  // namespace

const char* to_string(Algorithm a) {
  for (const Name& n : kNames) {
    if (n.algo == a) return n.text;
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const Name& n : kNames) {
    if (name == n.text) return n.algo;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

void validate(const Config& c) {
  if (c.algorithm == Algorithm::minconflict_scaled && c.weight.kind != WeightKind::min_freq) {
    throw ConfigError("minconflict-scaled requires --weight min");
  }
  if (c.algorithm == Algorithm::minconflict_scaled && c.eps <= 0) {
    throw ConfigError("eps must be positive");
  }
  if (c.algorithm == Algorithm::minconflict_sampled && c.k == 0) {
    throw ConfigError("minconflict-sampled requires k >= 1");
  }
  if (c.oned_kappa <= 0) throw ConfigError("1-D kappa must be positive");
  if (c.threads == 0) throw ConfigError("threads must be at least 1");
}

Outcome run(const Dataset& P, const Dataset& Q, const Config& c) {
  validate(c);
  if (P.dim() != Q.dim()) throw StructuralError("P and Q dimensions differ");
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  switch (c.algorithm) {
    case Algorithm::oned: {
      oned::Extended1d r = oned::extended_1d_attack(P, Q, c.oned_kappa);
      out.assignment = std::move(r.assignment);
      const WeightSpec spec = resolve(c.weight, P, Q);
      out.objective = 0;
      for (std::size_t j = 0; j < Q.size(); ++j) {
        if (!out.assignment[j]) continue;
        if (auto i = P.find(*out.assignment[j])) out.objective += edge_weight(P[*i], Q[j], spec);
      }
      break;
    }
    case Algorithm::minconflict:
      out = from_matching(minconflict::greedy_min_conflict(P, Q, c.weight, minconflict::Mode::exact(), c.threads),
                          P, Q, c.weight);
      break;
    case Algorithm::minconflict_sampled:
      out = from_matching(minconflict::greedy_min_conflict(
                              P, Q, c.weight, minconflict::Mode::sampled(c.k, c.seed), c.threads),
                          P, Q, c.weight);
      break;
    case Algorithm::minconflict_scaled:
      out = from_matching(minconflict::greedy_min_conflict(P, Q, c.weight, minconflict::Mode::scaled(c.eps),
                                                           c.threads),
                          P, Q, c.weight);
      break;
    case Algorithm::monotone_inc:
    case Algorithm::monotone_dec:
    case Algorithm::monotone_mix: {
      const monotone::Mode mode = c.algorithm == Algorithm::monotone_inc   ? monotone::Mode::inc
                                  : c.algorithm == Algorithm::monotone_dec ? monotone::Mode::dec
                                                                           : monotone::Mode::mix;
      out = from_matching(monotone::greedy_monotone(P, Q, c.weight, mode, c.index).matching, P, Q, c.weight);
      break;
    }
    case Algorithm::exact: {
      exact::ExactResult r = exact::exact_max_matching(P, Q, c.weight, c.budget);
      const bool proof = r.proof_of_optimality;
      const std::uint64_t nodes = r.nodes;
      out = from_matching(std::move(r.matching), P, Q, c.weight);
      out.proof_of_optimality = proof;
      out.nodes = nodes;
      break;
    }
  }
  out.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace opmatch::attack
