#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <boost/math/special_functions/gamma.hpp>

#include <random>
#include <span>

#include "arbor/graph.hpp"
#include "arbor/walk.hpp"

namespace arbor::test {

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s / 2;
}

inline std::vector<double> normalize(const std::vector<std::uint64_t>& counts) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  std::vector<double> out;
  for (auto c : counts) out.push_back(static_cast<double>(c) / total);
  return out;
}

/// Pearson goodness-of-fit p-value of counts against expected probabilities.
inline double chi_square_p(const std::vector<std::uint64_t>& counts, const std::vector<double>& probs) {
  double n = 0;
  for (auto c : counts) n += static_cast<double>(c);
  double stat = 0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probs[i] <= 0) continue;
    const double e = n * probs[i];
    stat += (static_cast<double>(counts[i]) - e) * (static_cast<double>(counts[i]) - e) / e;
    ++cells;
  }
  if (cells < 2) return 1.0;
  return boost::math::gamma_q(static_cast<double>(cells - 1) / 2, stat / 2);
}

/// Runs a shell command, returning its stdout and exit status.
struct CommandResult {
  std::string out;
  int status = -1;
};

inline CommandResult run_command(const std::string& command) {
  CommandResult r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t k;
  while ((k = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, k);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

/// Rejection-sampling check of a conditioned exit table. Each trial starts
/// the plain walk at a uniform member of s and runs it until it leaves s; a
/// trial is kept when the exit edge is e_end. Returns the TV distance between
/// the kept (start, first child-exit edge) pairs and the law implied by the
/// table, P(v, f) proportional to h(v) * row_v(f).
struct RejectionCheck {
  double tv = 0.0;
  std::uint64_t accepted = 0;
};

inline RejectionCheck rejection_check(const WeightedDigraph& g, const VertexSubset& s, std::span<const int> child_of,
                                      EdgeId e_end, const ExitTable& table, std::size_t trials, std::uint64_t seed) {
  TransitionSampler sampler(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
  std::map<std::pair<VertexId, EdgeId>, double> empirical;
  RejectionCheck out;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const VertexId v = s.members()[pick(rng)];
    const int label = child_of[s.index_of(v)];
    VertexId x = v;
    EdgeId first = kNoEdge;
    for (;;) {
      const EdgeId e = sampler.step(x, uniform(rng));
      const VertexId y = g.edge(e).dst;
      const bool inside = s.contains(y);
      if (first == kNoEdge && (!inside || child_of[s.index_of(y)] != label)) first = e;
      if (!inside) {
        if (e == e_end || e_end == kNoEdge) {
          empirical[{v, first}] += 1;
          ++out.accepted;
        }
        break;
      }
      x = y;
    }
  }
  std::map<std::pair<VertexId, EdgeId>, double> predicted;
  double mass = 0;
  for (std::size_t i = 0; i < table.members.size(); ++i) {
    for (const auto& [f, p] : table.rows[i]) {
      predicted[{table.members[i], f}] += table.harmonic[i] * p;
      mass += table.harmonic[i] * p;
    }
  }
  for (auto& [k, p] : predicted) p /= mass;
  for (auto& [k, c] : empirical) c /= static_cast<double>(out.accepted);
  double tv = 0;
  for (const auto& [k, p] : predicted) {
    auto it = empirical.find(k);
    tv += std::abs(p - (it == empirical.end() ? 0.0 : it->second));
  }
  for (const auto& [k, c] : empirical) {
    if (!predicted.count(k)) tv += c;
  }
  out.tv = tv / 2;
  return out;
}

}  // namespace arbor::test
