#include "cinf/compressed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cinf/errors.hpp"
#include "cinf/logspace.hpp"

namespace cinf {

namespace {

void check_input(const ChainModel& model, std::span<const SymbolId> obs) {
  if (obs.empty()) throw std::invalid_argument("observation sequence must be non-empty");
  model.check_observations(obs);
}

void check_height(std::size_t height, std::size_t T, const char* what) {
  if (height == 0 || height > T)
    throw std::invalid_argument(std::string(what) + " must lie in [1, T]; got " +
                                std::to_string(height) + " with T = " + std::to_string(T));
}

double row_mass(std::span<const double> slice, std::size_t row, std::size_t M) {
  return log_sum_exp(slice.subspan(row * M, M));
}

}  // namespace

LatticeTable::LatticeTable(std::size_t length, std::size_t height, std::size_t num_states)
    : length_(length),
      height_(height),
      num_states_(num_states),
      cells_(length * height * num_states, kLogZero) {}

double LatticeTable::row_log_mass(std::size_t t, std::size_t row) const {
  return row_mass(slice(t), row, num_states_);
}

double LengthDistribution::probability(std::size_t length) const {
  if (length == 0 || length > sequence_length) return 0.0;
  if (length > probs.size())
    throw std::out_of_range("length " + std::to_string(length) + " exceeds c_max");
  return probs[length - 1];
}

std::size_t CompressedDecode::adjacent_duplicates() const {
  std::size_t n = 0;
  for (std::size_t i = 1; i < states.size(); ++i)
    if (states[i] == states[i - 1]) ++n;
  return n;
}

double compressed_sequence_log_lattice(const ChainModel& model, std::span<const SymbolId> obs,
                                       const CompressedSequence& s0) {
  check_input(model, obs);
  const std::size_t c = s0.size();
  for (std::size_t i = 0; i < c; ++i)
    if (s0[i] >= model.num_states()) throw std::invalid_argument("state index out of range");
  if (c > obs.size()) return kLogZero;

  // fwd[i]: paths that have visited exactly s0[0..i] so far.
  std::vector<double> fwd(c, kLogZero);
  std::vector<double> next(c, kLogZero);
  fwd[0] = model.init(s0[0]) + model.emit(s0[0], obs[0]);
  for (std::size_t t = 1; t < obs.size(); ++t) {
    const std::size_t live = std::min(t + 1, c);
    for (std::size_t i = 0; i < live; ++i) {
      const StateId s = s0[i];
      double stay = fwd[i] + model.trans(s, s);
      double enter = i > 0 ? fwd[i - 1] + model.trans(s0[i - 1], s) : kLogZero;
      next[i] = log_add(stay, enter) + model.emit(s, obs[t]);
    }
    std::swap(fwd, next);
  }
  return fwd[c - 1];
}

LatticeTable table_forward(const ChainModel& model, std::span<const SymbolId> obs,
                           const ConstraintSet& q, Execution exec) {
  check_input(model, obs);
  check_height(q.height(), obs.size(), "constraint set height");
  const LatticeKernel kernel(model, q);
  LatticeTable table(obs.size(), q.height(), model.num_states());
  kernel.init(obs[0], table.slice(0));
  for (std::size_t t = 1; t < obs.size(); ++t)
    kernel.step(exec, t, obs[t], table.slice(t - 1), table.slice(t));
  return table;
}

std::vector<double> row_log_masses(const ChainModel& model, std::span<const SymbolId> obs,
                                   const ConstraintSet& q, Execution exec) {
  check_input(model, obs);
  check_height(q.height(), obs.size(), "constraint set height");
  const LatticeKernel kernel(model, q);
  const auto last = kernel.run_final(obs, exec);
  std::vector<double> out(q.height());
  for (std::size_t r = 0; r < q.height(); ++r) out[r] = row_mass(last, r, model.num_states());
  return out;
}

double constraint_log_Z(const ChainModel& model, std::span<const SymbolId> obs,
                        const ConstraintSet& q, std::size_t target_height, Execution exec) {
  if (target_height == 0 || target_height > q.height())
    throw std::invalid_argument("target height must lie in [1, constraint set height]");
  return row_log_masses(model, obs, q, exec)[target_height - 1];
}

double log_partition_via_table(const ChainModel& model, std::span<const SymbolId> obs,
                               Execution exec) {
  check_input(model, obs);
  const auto masses =
      row_log_masses(model, obs, ConstraintSet::full_table(obs.size(), model.num_states()), exec);
  return log_sum_exp(masses);
}

LengthDistribution length_distribution(const ChainModel& model, std::span<const SymbolId> obs,
                                       std::size_t c_max, Normalization norm, Execution exec) {
  check_input(model, obs);
  check_height(c_max, obs.size(), "c_max");

  LengthDistribution dist;
  dist.sequence_length = obs.size();
  dist.log_mass =
      row_log_masses(model, obs, ConstraintSet::full_table(c_max, model.num_states()), exec);
  if (norm == Normalization::kTruncated || c_max == obs.size())
    dist.log_Z = log_sum_exp(dist.log_mass);
  else
    dist.log_Z = log_partition_via_table(model, obs, exec);
  if (dist.log_Z == kLogZero)
    throw UndefinedConditionalError("observation sequence has zero probability under the model");

  dist.probs.resize(c_max);
  for (std::size_t k = 0; k < c_max; ++k) dist.probs[k] = std::exp(dist.log_mass[k] - dist.log_Z);
  return dist;
}

std::vector<double> position_log_masses(const ChainModel& model, std::span<const SymbolId> obs,
                                        std::size_t length, std::size_t position) {
  check_input(model, obs);
  check_height(length, obs.size(), "compressed length");
  if (position >= length)
    throw std::invalid_argument("position " + std::to_string(position) +
                                " outside a compressed sequence of length " +
                                std::to_string(length));
  const auto M = static_cast<std::ptrdiff_t>(model.num_states());
  std::vector<double> out(model.num_states(), kLogZero);

  // Independent lattice runs, one per candidate state.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < M; ++j) {
    const auto q =
        ConstraintSet::fixed_cell(length, model.num_states(), position, static_cast<StateId>(j));
    const LatticeKernel kernel(model, q);
    const auto last = kernel.run_final(obs, Execution::kSerial);
    out[static_cast<std::size_t>(j)] = row_mass(last, length - 1, model.num_states());
  }
  return out;
}

std::vector<double> compressed_marginal_row(const ChainModel& model,
                                            std::span<const SymbolId> obs, std::size_t length,
                                            std::size_t position) {
  auto masses = position_log_masses(model, obs, length, position);
  const double total = log_sum_exp(masses);
  if (total == kLogZero)
    throw UndefinedConditionalError("no compressed sequence of length " + std::to_string(length) +
                                    " has positive probability");
  for (double& m : masses) m = std::exp(m - total);
  return masses;
}

double compressed_marginal(const ChainModel& model, std::span<const SymbolId> obs,
                           std::size_t length, std::size_t position, StateId j) {
  if (j >= model.num_states()) throw std::invalid_argument("state index out of range");
  return compressed_marginal_row(model, obs, length, position)[j];
}

CompressedDecode compressed_decode(const ChainModel& model, std::span<const SymbolId> obs,
                                   std::size_t c_max, Normalization norm) {
  CompressedDecode out;
  out.length_dist = length_distribution(model, obs, c_max, norm);

  const auto& mass = out.length_dist.log_mass;
  std::size_t best = 0;
  for (std::size_t k = 1; k < mass.size(); ++k)
    if (mass[k] > mass[best]) best = k;
  out.length = best + 1;

  out.states.resize(out.length);
  for (std::size_t i = 0; i < out.length; ++i) {
    const auto row = position_log_masses(model, obs, out.length, i);
    out.states[i] = static_cast<StateId>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

std::size_t default_c_max(std::size_t sequence_length) {
  return std::min<std::size_t>(sequence_length, 128);
}

}  // namespace cinf
