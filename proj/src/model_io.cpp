#include "cinf/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cinf/errors.hpp"
#include "cinf/logspace.hpp"
#include "json.hpp"

namespace cinf {

using nlohmann::json;

namespace {

json encode_weight(double w) {
  if (w == kLogZero) return "-inf";
  return w;
}

double decode_weight(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return kLogZero;
    throw std::invalid_argument("unexpected weight string '" + j.get<std::string>() + "'");
  }
  if (!j.is_number()) throw std::invalid_argument("weight must be a number or \"-inf\"");
  return j.get<double>();
}

json encode_row(std::span<const double> row) {
  json out = json::array();
  for (double w : row) out.push_back(encode_weight(w));
  return out;
}

std::vector<double> decode_row(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of weights");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& w : j) out.push_back(decode_weight(w));
  return out;
}

Matrix decode_matrix(const json& j, std::size_t rows, std::size_t cols, const char* name) {
  if (!j.is_array() || j.size() != rows)
    throw std::invalid_argument(std::string(name) + " has the wrong number of rows");
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = decode_row(j[r]);
    if (row.size() != cols)
      throw std::invalid_argument(std::string(name) + " has a row of the wrong width");
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = row[c];
  }
  return out;
}

std::vector<std::string> string_list(const json& j, const char* name) {
  if (!j.is_array()) throw std::invalid_argument(std::string(name) + " must be a list of strings");
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string())
      throw std::invalid_argument(std::string(name) + " must be a list of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string model_to_json(const ChainModel& model) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["states"] = model.states().labels();
  doc["symbols"] = model.alphabet().labels();
  doc["init_logw"] = encode_row(model.init_logw());
  json trans = json::array();
  for (std::size_t i = 0; i < model.num_states(); ++i)
    trans.push_back(encode_row(model.trans_logw().row(i)));
  doc["trans_logw"] = std::move(trans);
  json emit = json::array();
  for (std::size_t i = 0; i < model.num_states(); ++i)
    emit.push_back(encode_row(model.emit_logw().row(i)));
  doc["emit_logw"] = std::move(emit);
  return doc.dump(1) + "\n";
}

ChainModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed model file: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("model file must be a JSON object");
  for (const char* key : {"format_version", "states", "symbols", "init_logw", "trans_logw", "emit_logw"}) {
    if (!doc.contains(key)) throw std::invalid_argument(std::string("model file lacks '") + key + "'");
  }
  if (doc["format_version"] != kModelFormatVersion)
    throw std::invalid_argument("unsupported model format_version");

  StateSpace states(string_list(doc["states"], "states"));
  ObservationAlphabet alphabet(string_list(doc["symbols"], "symbols"));
  auto init = decode_row(doc["init_logw"]);
  auto trans = decode_matrix(doc["trans_logw"], states.size(), states.size(), "trans_logw");
  auto emit = decode_matrix(doc["emit_logw"], states.size(), alphabet.size(), "emit_logw");
  return ChainModel(std::move(states), std::move(alphabet), std::move(init), std::move(trans),
                    std::move(emit));
}

void save_model(const ChainModel& model, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << model_to_json(model);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

ChainModel load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

void write_dataset(std::ostream& out, std::span<const RawSequence> records) {
  for (const auto& rec : records) {
    json line;
    line["obs"] = rec.obs;
    if (rec.states) line["states"] = *rec.states;
    out << line.dump() << '\n';
  }
}

std::vector<RawSequence> read_dataset(std::istream& in) {
  std::vector<RawSequence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!rec.is_object() || !rec.contains("obs"))
      throw std::invalid_argument("dataset line " + std::to_string(line_no) + " lacks 'obs'");
    RawSequence raw;
    raw.obs = string_list(rec["obs"], "obs");
    if (rec.contains("states")) raw.states = string_list(rec["states"], "states");
    out.push_back(std::move(raw));
  }
  return out;
}

void save_dataset(std::span<const RawSequence> records, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_dataset(out, records);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<RawSequence> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_dataset(in);
}

LabeledSequence resolve(const RawSequence& raw, const StateSpace& states,
                        const ObservationAlphabet& alphabet) {
  LabeledSequence seq;
  seq.obs.reserve(raw.obs.size());
  for (const auto& o : raw.obs) seq.obs.push_back(alphabet.index_of(o));
  if (raw.states) {
    if (raw.states->size() != raw.obs.size())
      throw std::invalid_argument("record has different numbers of states and observations");
    std::vector<StateId> y;
    y.reserve(raw.states->size());
    for (const auto& s : *raw.states) y.push_back(states.index_of(s));
    seq.states = std::move(y);
  }
  return seq;
}

std::vector<LabeledSequence> resolve(std::span<const RawSequence> raw, const StateSpace& states,
                                     const ObservationAlphabet& alphabet) {
  std::vector<LabeledSequence> out;
  out.reserve(raw.size());
  for (const auto& r : raw) out.push_back(resolve(r, states, alphabet));
  return out;
}

RawSequence to_raw(const LabeledSequence& seq, const StateSpace& states,
                   const ObservationAlphabet& alphabet) {
  RawSequence raw;
  for (SymbolId x : seq.obs) raw.obs.push_back(alphabet.label(x));
  if (seq.states) raw.states = state_labels(*seq.states, states);
  return raw;
}

std::vector<std::string> state_labels(std::span<const StateId> states, const StateSpace& space) {
  std::vector<std::string> out;
  out.reserve(states.size());
  for (StateId s : states) out.push_back(space.label(s));
  return out;
}

}  // namespace cinf
