#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cinf/model.hpp"

// Synthetic data: a grid-world robot with a noisy color sensor, and ancestral
// sampling from an arbitrary stochastic chain model.

namespace cinf {

enum class Color : std::uint8_t { kBlue = 0, kGreen = 1, kYellow = 2, kRed = 3 };
inline constexpr std::size_t kNumColors = 4;

struct Cell {
  std::size_t x = 0;  // column
  std::size_t y = 0;  // row

  bool operator==(const Cell&) const = default;
};

/// Rectangular map of colored free cells and obstacles. Text form: one row
/// per line, one character per cell from {b, g, y, r, #}.
class GridWorld {
 public:
  static GridWorld parse(std::string_view text);
  static GridWorld load(const std::filesystem::path& path);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t num_free() const { return free_.size(); }

  bool is_free(std::ptrdiff_t x, std::ptrdiff_t y) const;
  Color color(const Cell& cell) const;

  /// Free cells in row-major order; a cell's position here is its state id.
  const std::vector<Cell>& free_cells() const { return free_; }
  StateId state_of(const Cell& cell) const;

  /// Labels "x:y" for every free cell, in state order.
  StateSpace state_space() const;
  std::string to_text() const;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::optional<Color>> cells_;
  std::vector<Cell> free_;
  std::vector<std::ptrdiff_t> state_index_;
};

/// {"blue", "green", "yellow", "red"}, indexed by Color.
ObservationAlphabet color_alphabet();

/// Map text of the world shipped with the library.
std::string_view default_world_text();
GridWorld default_world();

enum class BlockedMove {
  kStay,      // a blocked attempt uses up the time step
  kResample,  // redraw the direction within the same step
};

/// Per-step chance that the robot attempts a move at all. Chosen so that the
/// default world yields compressed lengths of roughly 5-15 for T = 100-300.
inline constexpr double kDefaultMoveProbability = 0.12;

struct RobotOptions {
  double move_probability = kDefaultMoveProbability;
  BlockedMove blocked = BlockedMove::kStay;
};

struct RobotTrace {
  std::vector<Cell> positions;
  std::vector<Color> colors;
  double accuracy = 100.0;
};

/// Random walk with a color sensor that reads the true color with
/// probability accuracy/100 and otherwise one of the other three uniformly.
RobotTrace simulate_robot(const GridWorld& world, std::size_t length, double accuracy,
                          std::uint64_t seed, const RobotOptions& options = {});

/// States are free-cell ids; observations are color ids. Sequence k draws
/// from its own stream derived from (seed, k).
std::vector<LabeledSequence> robot_dataset(const GridWorld& world, std::size_t n_sequences,
                                           std::size_t min_length, std::size_t max_length,
                                           double accuracy, std::uint64_t seed,
                                           const RobotOptions& options = {});

LabeledSequence to_sequence(const GridWorld& world, const RobotTrace& trace);

/// Ancestral sampling. Throws std::invalid_argument naming the first row of
/// the model that is not a probability distribution (tolerance 1e-9).
LabeledSequence sample_chain(const ChainModel& model, std::size_t length, std::uint64_t seed);

}  // namespace cinf
