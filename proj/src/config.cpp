#include "bifree/config.hpp"

#include <fstream>
#include <sstream>

namespace bifree {

using nlohmann::json;

Mode mode_from_string(const std::string& s) {
  if (s == "exact") return Mode::exact;
  if (s == "cumulants") return Mode::cumulants;
  if (s == "simulate") return Mode::simulate;
  if (s == "sweep") return Mode::sweep;
  if (s == "selftest") return Mode::selftest;
  throw ParseError("unknown mode '" + s + "'");
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::exact: return "exact";
    case Mode::cumulants: return "cumulants";
    case Mode::simulate: return "simulate";
    case Mode::sweep: return "sweep";
    case Mode::selftest: return "selftest";
  }
  return "?";
}

OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ParseError("unknown output format '" + s + "' (csv or json)");
}

const char* to_string(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

Side side_from_json(const json& j, const std::string& where) {
  const std::string s = j.get<std::string>();
  if (s == "l" || s == "left") return Side::left;
  if (s == "r" || s == "right") return Side::right;
  throw ParseError(where + ": bad side '" + s + "' (use l/r)");
}

std::string side_to_json(Side s) { return s == Side::left ? "l" : "r"; }

CovSpec cov_from_json(const json& j, const std::string& where) {
  CovSpec cov;
  if (j.contains("left_indices"))
    cov.left = j.at("left_indices").get<std::vector<std::string>>();
  if (j.contains("right_indices"))
    cov.right = j.at("right_indices").get<std::vector<std::string>>();
  const json& rows = j.at("cov");
  if (!rows.is_array()) throw ParseError(where + ".cov: expected array of rows");
  for (const json& row : rows) {
    if (!row.is_array() || row.size() != rows.size())
      throw ParseError(where + ".cov: expected a " +
                       std::to_string(rows.size()) + "x" +
                       std::to_string(rows.size()) + " matrix");
    for (const json& v : row) cov.entries.push_back(v.get<double>());
  }
  return cov;
}

json cov_to_json(const CovSpec& cov) {
  json j;
  j["left_indices"] = cov.left;
  j["right_indices"] = cov.right;
  json rows = json::array();
  for (int i = 0; i < cov.dim(); ++i) {
    json row = json::array();
    for (int k = 0; k < cov.dim(); ++k) row.push_back(cov.c(i, k));
    rows.push_back(std::move(row));
  }
  j["cov"] = std::move(rows);
  return j;
}

Letter letter_from_json(const json& j, const std::string& where) {
  const std::string kind = j.at("kind").get<std::string>();
  const Side side = side_from_json(j.at("side"), where);
  if (kind == "var") {
    VarLetter v;
    v.side = side;
    v.family = j.at("family").get<std::string>();
    v.index = j.at("index").get<std::string>();
    return v;
  }
  if (kind == "diag") {
    DiagLetter d;
    d.side = side;
    d.symbol = j.at("symbol").get<std::string>();
    return d;
  }
  throw ParseError(where + ": bad letter kind '" + kind + "' (var or diag)");
}

json letter_to_json(const Letter& letter) {
  json j;
  if (const auto* v = std::get_if<VarLetter>(&letter)) {
    j["kind"] = "var";
    j["side"] = side_to_json(v->side);
    j["family"] = v->family;
    j["index"] = v->index;
  } else {
    const auto& d = std::get<DiagLetter>(letter);
    j["kind"] = "diag";
    j["side"] = side_to_json(d.side);
    j["symbol"] = d.symbol;
  }
  return j;
}

DiagonalLimit diagonal_from_json(const json& j) {
  DiagonalLimit diag;
  diag.symbols = j.at("symbols").get<std::vector<std::string>>();
  for (const json& ja : j.at("atoms")) {
    DiagonalAtom atom;
    atom.weight = ja.at("weight").get<double>();
    for (const auto& [sym, v] : ja.at("values").items())
      atom.values[sym] = v.get<double>();
    diag.atoms.push_back(std::move(atom));
  }
  return diag;
}

json diagonal_to_json(const DiagonalLimit& diag) {
  json j;
  j["symbols"] = diag.symbols;
  json atoms = json::array();
  for (const auto& atom : diag.atoms) {
    json ja;
    ja["weight"] = atom.weight;
    ja["values"] = atom.values;
    atoms.push_back(std::move(ja));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

MomentTableConfig moment_table_from_json(const json& j) {
  MomentTableConfig table;
  for (const json& js : j.at("alphabet")) {
    Symbol sym;
    sym.name = js.at("name").get<std::string>();
    sym.side = side_from_json(js.at("side"), "moment_table.alphabet");
    table.alphabet.push_back(std::move(sym));
  }
  table.max_order = j.at("max_order").get<int>();
  for (const auto& [word, v] : j.at("moments").items())
    table.moments.emplace_back(word, v.get<double>());
  return table;
}

json moment_table_to_json(const MomentTableConfig& table) {
  json j;
  json alphabet = json::array();
  for (const auto& sym : table.alphabet) {
    json js;
    js["name"] = sym.name;
    js["side"] = side_to_json(sym.side);
    alphabet.push_back(std::move(js));
  }
  j["alphabet"] = std::move(alphabet);
  j["max_order"] = table.max_order;
  json moments = json::object();
  for (const auto& [word, v] : table.moments) moments[word] = v;
  j["moments"] = std::move(moments);
  return j;
}

}  // namespace

MomentOracle MomentTableConfig::build_oracle() const {
  for (size_t i = 0; i < alphabet.size(); ++i)
    for (size_t k = i + 1; k < alphabet.size(); ++k)
      if (alphabet[i].name == alphabet[k].name)
        throw ValidationError("moment_table.alphabet",
                              "duplicate name '" + alphabet[i].name +
                                  "' (names must be unique so word keys are "
                                  "unambiguous)");
  if (max_order < 1)
    throw ValidationError("moment_table.max_order", "must be >= 1");
  MomentOracle oracle(alphabet, max_order);
  auto id_of = [&](const std::string& name) {
    for (size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i].name == name) return static_cast<int>(i);
    throw ValidationError("moment_table.moments",
                          "unknown symbol '" + name + "'");
  };
  for (const auto& [word, value] : moments) {
    WordIds ids;
    std::istringstream is(word);
    std::string name;
    while (is >> name) ids.push_back(id_of(name));
    if (ids.empty())
      throw ValidationError("moment_table.moments", "empty word key");
    if (static_cast<int>(ids.size()) > max_order)
      throw ValidationError("moment_table.moments",
                            "word '" + word + "' longer than max_order");
    oracle.set(ids, value);
  }
  return oracle;
}

ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig cfg;
    if (j.contains("mode"))
      cfg.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("families")) {
      // Object keyed by family name; nlohmann iterates keys sorted, which
      // fixes the family order deterministically.
      for (const auto& [name, jf] : j.at("families").items())
        cfg.families.emplace_back(name,
                                  cov_from_json(jf, "families." + name));
    }
    if (j.contains("word")) {
      int k = 0;
      for (const json& jl : j.at("word"))
        cfg.word.letters.push_back(
            letter_from_json(jl, "word[" + std::to_string(k++) + "]"));
    }
    if (j.contains("diagonal"))
      cfg.diagonal = diagonal_from_json(j.at("diagonal"));
    if (j.contains("entry_law"))
      cfg.law = entry_law_from_string(j.at("entry_law").get<std::string>());
    if (j.contains("Ns")) cfg.Ns = j.at("Ns").get<std::vector<int>>();
    if (j.contains("N")) cfg.N = j.at("N").get<int>();
    if (j.contains("n_samples"))
      cfg.n_samples = j.at("n_samples").get<long long>();
    if (j.contains("base_seed"))
      cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    if (j.contains("format"))
      cfg.format = format_from_string(j.at("format").get<std::string>());
    if (j.contains("moment_table"))
      cfg.moment_table = moment_table_from_json(j.at("moment_table"));
    return cfg;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.mode) j["mode"] = to_string(*cfg.mode);
  if (!cfg.families.empty()) {
    json families = json::object();
    for (const auto& [name, cov] : cfg.families)
      families[name] = cov_to_json(cov);
    j["families"] = std::move(families);
  }
  if (cfg.word.size() > 0) {
    json word = json::array();
    for (const auto& letter : cfg.word.letters)
      word.push_back(letter_to_json(letter));
    j["word"] = std::move(word);
  }
  if (cfg.diagonal) j["diagonal"] = diagonal_to_json(*cfg.diagonal);
  j["entry_law"] = to_string(cfg.law);
  if (!cfg.Ns.empty()) j["Ns"] = cfg.Ns;
  if (cfg.N > 0) j["N"] = cfg.N;
  if (cfg.n_samples > 0) j["n_samples"] = cfg.n_samples;
  j["base_seed"] = cfg.base_seed;
  if (!cfg.output.empty()) j["output"] = cfg.output;
  j["format"] = to_string(cfg.format);
  if (cfg.moment_table) j["moment_table"] = moment_table_to_json(*cfg.moment_table);
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

EnsembleSpec ensemble_of(const ExperimentConfig& cfg, int N) {
  EnsembleSpec spec;
  spec.families = cfg.families;
  spec.N = N;
  spec.law = cfg.law;
  spec.base_seed = cfg.base_seed;
  return spec;
}

void validate_config(const ExperimentConfig& cfg, Mode mode) {
  if (cfg.mode && *cfg.mode != mode)
    throw ValidationError("mode", std::string("config says '") +
                                      to_string(*cfg.mode) +
                                      "' but the CLI asked for '" +
                                      to_string(mode) + "'");
  if (cfg.diagonal) cfg.diagonal->validate();

  auto need_word_and_families = [&] {
    if (cfg.families.empty())
      throw ValidationError("families", "required for this mode");
    if (cfg.word.size() == 0)
      throw ValidationError("word", "required for this mode");
    EnsembleSpec probe = ensemble_of(cfg, 1);
    probe.validate();
    validate_word(cfg.word, probe, cfg.diagonal);
  };

  switch (mode) {
    case Mode::exact:
      need_word_and_families();
      return;
    case Mode::cumulants:
      if (!cfg.moment_table)
        throw ValidationError("moment_table", "required for cumulants mode");
      cfg.moment_table->build_oracle();  // full structural validation
      return;
    case Mode::simulate:
      need_word_and_families();
      if (cfg.N < 1) throw ValidationError("N", "required (>= 1)");
      if (cfg.n_samples < 1)
        throw ValidationError("n_samples", "required (>= 1)");
      return;
    case Mode::sweep:
      need_word_and_families();
      if (cfg.Ns.empty()) throw ValidationError("Ns", "required (non-empty)");
      for (int n : cfg.Ns)
        if (n < 1) throw ValidationError("Ns", "sizes must be >= 1");
      if (cfg.n_samples < 1)
        throw ValidationError("n_samples", "required (>= 1)");
      return;
    case Mode::selftest:
      return;
  }
}

}  // namespace bifree
