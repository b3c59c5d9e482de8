#include "cinf/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cinf/errors.hpp"

namespace cinf {

namespace {

constexpr std::string_view kDefaultWorld =
    "#######\n"
    "###r###\n"
    "###g###\n"
    "#gybry#\n"
    "#######\n";

constexpr std::array<char, kNumColors> kColorChars = {'b', 'g', 'y', 'r'};
constexpr std::array<std::ptrdiff_t, 4> kDx = {0, 0, -1, 1};  // up, down, left, right
constexpr std::array<std::ptrdiff_t, 4> kDy = {-1, 1, 0, 0};

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Color read_color(std::mt19937_64& rng, Color truth, double accuracy) {
  std::bernoulli_distribution correct(accuracy / 100.0);
  if (correct(rng)) return truth;
  std::uniform_int_distribution<int> other(0, static_cast<int>(kNumColors) - 2);
  int c = other(rng);
  if (c >= static_cast<int>(truth)) ++c;
  return static_cast<Color>(c);
}

}  // namespace

GridWorld GridWorld::parse(std::string_view text) {
  GridWorld w;
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw std::invalid_argument("world map is empty");
  w.height_ = rows.size();
  w.width_ = rows[0].size();
  for (const auto& row : rows) {
    if (row.size() != w.width_) throw std::invalid_argument("world map rows differ in width");
    for (char ch : row) {
      if (ch == '#') {
        w.cells_.emplace_back(std::nullopt);
        continue;
      }
      auto it = std::find(kColorChars.begin(), kColorChars.end(), ch);
      if (it == kColorChars.end())
        throw std::invalid_argument(std::string("unknown world map character '") + ch + "'");
      w.cells_.emplace_back(static_cast<Color>(it - kColorChars.begin()));
    }
  }
  w.state_index_.assign(w.cells_.size(), -1);
  for (std::size_t y = 0; y < w.height_; ++y) {
    for (std::size_t x = 0; x < w.width_; ++x) {
      if (w.cells_[y * w.width_ + x]) {
        w.state_index_[y * w.width_ + x] = static_cast<std::ptrdiff_t>(w.free_.size());
        w.free_.push_back({x, y});
      }
    }
  }
  if (w.free_.empty()) throw std::invalid_argument("world map has no free cell");
  return w;
}

GridWorld GridWorld::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open world map '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool GridWorld::is_free(std::ptrdiff_t x, std::ptrdiff_t y) const {
  if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(width_) ||
      y >= static_cast<std::ptrdiff_t>(height_))
    return false;
  return cells_[static_cast<std::size_t>(y) * width_ + static_cast<std::size_t>(x)].has_value();
}

Color GridWorld::color(const Cell& cell) const {
  const auto& c = cells_.at(cell.y * width_ + cell.x);
  if (!c) throw std::invalid_argument("cell is an obstacle");
  return *c;
}

StateId GridWorld::state_of(const Cell& cell) const {
  const auto idx = state_index_.at(cell.y * width_ + cell.x);
  if (idx < 0) throw std::invalid_argument("cell is an obstacle");
  return static_cast<StateId>(idx);
}

StateSpace GridWorld::state_space() const {
  std::vector<std::string> labels;
  for (const auto& c : free_) labels.push_back(std::to_string(c.x) + ":" + std::to_string(c.y));
  return StateSpace(std::move(labels));
}

std::string GridWorld::to_text() const {
  std::string out;
  for (std::size_t y = 0; y < height_; ++y) {
    for (std::size_t x = 0; x < width_; ++x) {
      const auto& c = cells_[y * width_ + x];
      out += c ? kColorChars[static_cast<std::size_t>(*c)] : '#';
    }
    out += '\n';
  }
  return out;
}

ObservationAlphabet color_alphabet() {
  return ObservationAlphabet({"blue", "green", "yellow", "red"});
}

std::string_view default_world_text() { return kDefaultWorld; }

GridWorld default_world() { return GridWorld::parse(kDefaultWorld); }

RobotTrace simulate_robot(const GridWorld& world, std::size_t length, double accuracy,
                          std::uint64_t seed, const RobotOptions& options) {
  if (length < 1) throw std::invalid_argument("trace length must be at least 1");
  if (!(accuracy >= 0.0 && accuracy <= 100.0))
    throw std::invalid_argument("accuracy must lie in [0, 100]");
  if (!(options.move_probability >= 0.0 && options.move_probability <= 1.0))
    throw std::invalid_argument("move probability must lie in [0, 1]");

  auto rng = make_engine(seed, 0);
  std::uniform_int_distribution<std::size_t> start(0, world.num_free() - 1);
  std::bernoulli_distribution attempt(options.move_probability);
  std::uniform_int_distribution<std::size_t> direction(0, 3);

  RobotTrace trace;
  trace.accuracy = accuracy;
  trace.positions.reserve(length);
  trace.colors.reserve(length);

  Cell pos = world.free_cells()[start(rng)];
  for (std::size_t t = 0; t < length; ++t) {
    if (t > 0 && attempt(rng)) {
      const auto x = static_cast<std::ptrdiff_t>(pos.x);
      const auto y = static_cast<std::ptrdiff_t>(pos.y);
      bool any_open = false;
      for (std::size_t d = 0; d < 4; ++d) any_open = any_open || world.is_free(x + kDx[d], y + kDy[d]);
      std::size_t d = direction(rng);
      if (options.blocked == BlockedMove::kResample && any_open) {
        while (!world.is_free(x + kDx[d], y + kDy[d])) d = direction(rng);
      }
      if (world.is_free(x + kDx[d], y + kDy[d]))
        pos = {static_cast<std::size_t>(x + kDx[d]), static_cast<std::size_t>(y + kDy[d])};
    }
    trace.positions.push_back(pos);
    trace.colors.push_back(read_color(rng, world.color(pos), accuracy));
  }
  return trace;
}

LabeledSequence to_sequence(const GridWorld& world, const RobotTrace& trace) {
  LabeledSequence seq;
  std::vector<StateId> states;
  for (std::size_t t = 0; t < trace.positions.size(); ++t) {
    seq.obs.push_back(static_cast<SymbolId>(trace.colors[t]));
    states.push_back(world.state_of(trace.positions[t]));
  }
  seq.states = std::move(states);
  return seq;
}

std::vector<LabeledSequence> robot_dataset(const GridWorld& world, std::size_t n_sequences,
                                           std::size_t min_length, std::size_t max_length,
                                           double accuracy, std::uint64_t seed,
                                           const RobotOptions& options) {
  if (min_length < 1 || min_length > max_length)
    throw std::invalid_argument("length range must satisfy 1 <= lo <= hi");
  std::vector<LabeledSequence> out;
  out.reserve(n_sequences);
  for (std::size_t k = 0; k < n_sequences; ++k) {
    auto rng = make_engine(seed, k + 1);
    std::uniform_int_distribution<std::size_t> length(min_length, max_length);
    const std::size_t T = length(rng);
    const std::uint64_t trace_seed = rng();
    out.push_back(to_sequence(world, simulate_robot(world, T, accuracy, trace_seed, options)));
  }
  return out;
}

namespace {

std::vector<double> checked_row(std::span<const double> log_row, const std::string& name) {
  std::vector<double> w;
  double total = 0.0;
  for (double v : log_row) {
    w.push_back(std::exp(v));
    total += w.back();
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument(name + " is not a probability distribution (sums to " +
                                std::to_string(total) + ")");
  return w;
}

}  // namespace

LabeledSequence sample_chain(const ChainModel& model, std::size_t length, std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("sample length must be at least 1");
  const std::size_t M = model.num_states();
  std::discrete_distribution<StateId> init;
  std::vector<std::discrete_distribution<StateId>> trans;
  std::vector<std::discrete_distribution<SymbolId>> emit;
  {
    auto w = checked_row(model.init_logw(), "init_logw");
    init = std::discrete_distribution<StateId>(w.begin(), w.end());
  }
  for (std::size_t i = 0; i < M; ++i) {
    auto w = checked_row(model.trans_logw().row(i), "trans_logw row " + std::to_string(i));
    trans.emplace_back(w.begin(), w.end());
    auto e = checked_row(model.emit_logw().row(i), "emit_logw row " + std::to_string(i));
    emit.emplace_back(e.begin(), e.end());
  }

  auto rng = make_engine(seed, 0);
  LabeledSequence seq;
  std::vector<StateId> states;
  StateId s = init(rng);
  for (std::size_t t = 0; t < length; ++t) {
    if (t > 0) s = trans[s](rng);
    states.push_back(s);
    seq.obs.push_back(emit[s](rng));
  }
  seq.states = std::move(states);
  return seq;
}

}  // namespace cinf
