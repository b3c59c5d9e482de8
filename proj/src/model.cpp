#include "cinf/model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "cinf/logspace.hpp"

namespace cinf {

LabelSet::LabelSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("label set must not be empty");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, inserted] = index_.emplace(labels_[i], static_cast<std::uint32_t>(i));
    if (!inserted) throw std::invalid_argument("duplicate label '" + labels_[i] + "'");
  }
}

std::optional<std::uint32_t> LabelSet::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t LabelSet::index_of(const std::string& label) const {
  auto found = find(label);
  if (!found) throw std::invalid_argument("unknown label '" + label + "'");
  return *found;
}

namespace {

void check_entries(std::span<const double> values, const char* table) {
  for (double v : values) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw std::invalid_argument(std::string(table) + " contains NaN or +inf");
  }
}

}  // namespace

ChainModel::ChainModel(StateSpace states, ObservationAlphabet alphabet,
                       std::vector<double> init_logw, Matrix trans_logw, Matrix emit_logw)
    : states_(std::move(states)),
      alphabet_(std::move(alphabet)),
      init_logw_(std::move(init_logw)),
      trans_logw_(std::move(trans_logw)),
      emit_logw_(std::move(emit_logw)) {
  const std::size_t m = states_.size();
  const std::size_t v = alphabet_.size();
  if (m == 0 || v == 0) throw std::invalid_argument("state space and alphabet must be non-empty");
  if (init_logw_.size() != m) throw std::invalid_argument("init_logw must have M entries");
  if (trans_logw_.rows() != m || trans_logw_.cols() != m)
    throw std::invalid_argument("trans_logw must be M x M");
  if (emit_logw_.rows() != m || emit_logw_.cols() != v)
    throw std::invalid_argument("emit_logw must be M x V");
  check_entries(init_logw_, "init_logw");
  check_entries(trans_logw_.data(), "trans_logw");
  check_entries(emit_logw_.data(), "emit_logw");
}

ChainModel ChainModel::uniform(StateSpace states, ObservationAlphabet alphabet) {
  const std::size_t m = states.size();
  const std::size_t v = alphabet.size();
  return ChainModel(std::move(states), std::move(alphabet), std::vector<double>(m, 0.0),
                    Matrix(m, m), Matrix(m, v));
}

void ChainModel::check_observations(std::span<const SymbolId> obs) const {
  for (SymbolId x : obs) {
    if (x >= num_symbols())
      throw std::invalid_argument("observation index " + std::to_string(x) + " out of range");
  }
}

void validate_sequence(const ChainModel& model, const LabeledSequence& seq) {
  if (seq.obs.empty()) throw std::invalid_argument("sequence must be non-empty");
  model.check_observations(seq.obs);
  if (!seq.states) return;
  if (seq.states->size() != seq.obs.size())
    throw std::invalid_argument("state and observation lengths differ");
  for (StateId s : *seq.states) {
    if (s >= model.num_states())
      throw std::invalid_argument("state index " + std::to_string(s) + " out of range");
  }
}

CompressedSequence::CompressedSequence(StateString entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("compressed sequence must be non-empty");
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i] == entries_[i - 1])
      throw std::invalid_argument("compressed sequence has adjacent duplicate at position " +
                                  std::to_string(i));
  }
}

double log_potential(const ChainModel& model, std::size_t t, StateId j,
                     std::optional<StateId> prev, SymbolId x) {
  if (j >= model.num_states()) throw std::invalid_argument("state index out of range");
  if (x >= model.num_symbols()) throw std::invalid_argument("observation index out of range");
  if (t == 0) {
    if (prev) throw std::invalid_argument("first step takes the START context");
    return model.init(j) + model.emit(j, x);
  }
  if (!prev) throw std::invalid_argument("START context is only valid at the first step");
  if (*prev >= model.num_states()) throw std::invalid_argument("state index out of range");
  return model.trans(*prev, j) + model.emit(j, x);
}

double sequence_log_score(const ChainModel& model, std::span<const SymbolId> obs,
                          std::span<const StateId> states) {
  if (obs.empty() || obs.size() != states.size())
    throw std::invalid_argument("sequence_log_score needs equal, non-empty lengths");
  double score = log_potential(model, 0, states[0], std::nullopt, obs[0]);
  for (std::size_t t = 1; t < obs.size(); ++t)
    score += log_potential(model, t, states[t], states[t - 1], obs[t]);
  return score;
}

double sequence_log_score(const ChainModel& model, const LabeledSequence& seq) {
  if (!seq.states) throw std::invalid_argument("sequence has no state labels");
  return sequence_log_score(model, seq.obs, *seq.states);
}

CompressedSequence compress(std::span<const StateId> states) {
  if (states.empty()) throw std::invalid_argument("cannot compress an empty sequence");
  StateString out;
  out.push_back(states[0]);
  for (StateId s : states.subspan(1)) {
    if (s != out.back()) out.push_back(s);
  }
  return CompressedSequence(std::move(out));
}

namespace {

void normalize_log_row(std::span<double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  for (double& c : counts) c = total > 0.0 ? std::log(c / total) : kLogZero;
}

}  // namespace

ChainModel estimate_counts(const StateSpace& states, const ObservationAlphabet& alphabet,
                           std::span<const LabeledSequence> dataset, double smoothing) {
  if (dataset.empty()) throw std::invalid_argument("cannot estimate from an empty dataset");
  if (!(smoothing >= 0.0) || std::isinf(smoothing))
    throw std::invalid_argument("smoothing must be a finite non-negative number");

  const std::size_t m = states.size();
  const std::size_t v = alphabet.size();
  std::vector<double> init(m, smoothing);
  Matrix trans(m, m, smoothing);
  Matrix emit(m, v, smoothing);

  for (const auto& seq : dataset) {
    if (!seq.states) throw std::invalid_argument("estimate_counts requires labeled sequences");
    const auto& y = *seq.states;
    if (y.empty() || y.size() != seq.obs.size())
      throw std::invalid_argument("labeled sequence lengths must match and be non-empty");
    for (std::size_t t = 0; t < y.size(); ++t) {
      if (y[t] >= m || seq.obs[t] >= v) throw std::invalid_argument("index out of range");
      emit(y[t], seq.obs[t]) += 1.0;
      if (t == 0)
        init[y[t]] += 1.0;
      else
        trans(y[t - 1], y[t]) += 1.0;
    }
  }

  normalize_log_row(init);
  for (std::size_t i = 0; i < m; ++i) {
    normalize_log_row(trans.row(i));
    normalize_log_row(emit.row(i));
  }
  return ChainModel(states, alphabet, std::move(init), std::move(trans), std::move(emit));
}

}  // namespace cinf
