#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cinf/model.hpp"

// On-disk formats.
//
// Model file: one JSON document
//   {"format_version": 1, "states": [...], "symbols": [...],
//    "init_logw": [...], "trans_logw": [[...]], "emit_logw": [[...]]}
// with -infinity written as the string "-inf".
//
// Dataset file: JSON Lines, one {"obs": [...], "states": [...]} record per
// line; "states" is optional. Labels are strings resolved against a model's
// state space and alphabet.

namespace cinf {

inline constexpr int kModelFormatVersion = 1;

/// A dataset record before label resolution.
struct RawSequence {
  std::vector<std::string> obs;
  std::optional<std::vector<std::string>> states;
};

std::string model_to_json(const ChainModel& model);
ChainModel model_from_json(const std::string& text);

void save_model(const ChainModel& model, const std::filesystem::path& path);
ChainModel load_model(const std::filesystem::path& path);

/// One compact JSON line per record, each terminated by '\n'.
void write_dataset(std::ostream& out, std::span<const RawSequence> records);
std::vector<RawSequence> read_dataset(std::istream& in);

void save_dataset(std::span<const RawSequence> records, const std::filesystem::path& path);
std::vector<RawSequence> load_dataset(const std::filesystem::path& path);

/// Resolves labels; throws std::invalid_argument naming the first unknown label.
LabeledSequence resolve(const RawSequence& raw, const StateSpace& states,
                        const ObservationAlphabet& alphabet);
std::vector<LabeledSequence> resolve(std::span<const RawSequence> raw, const StateSpace& states,
                                     const ObservationAlphabet& alphabet);

RawSequence to_raw(const LabeledSequence& seq, const StateSpace& states,
                   const ObservationAlphabet& alphabet);

std::vector<std::string> state_labels(std::span<const StateId> states, const StateSpace& space);

}  // namespace cinf
