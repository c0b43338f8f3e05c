#include "otbdp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace otbdp {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view field, T& value) {
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

double to_double(std::string_view field) {
  double v = 0.0;
  if (!parse_number(field, v)) throw Error(ErrorCode::ParseError, "not a number: '" + std::string(field) + "'");
  return v;
}

DiscreteMeasure build(PointSet atoms, std::vector<double> weights) {
  if (atoms.size() == 0) throw Error(ErrorCode::ParseError, "no atoms found");
  if (weights.empty()) return DiscreteMeasure::empirical(std::move(atoms));
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

PointSet points_from_json(const json& rows, std::size_t dim) {
  PointSet out(dim);
  for (const auto& row : rows) {
    const auto p = row.get<std::vector<double>>();
    if (p.size() != dim) throw Error(ErrorCode::ParseError, "rows of unequal length");
    out.push_back(p);
  }
  return out;
}

json points_to_json(const PointSet& points) {
  json rows = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points[i];
    rows.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return rows;
}

}  // namespace

std::vector<double> parse_doubles(std::string_view text) {
  std::vector<double> out;
  for (auto f : split(trim(text), ',')) out.push_back(to_double(f));
  return out;
}

std::vector<std::size_t> parse_indices(std::string_view text) {
  std::vector<std::size_t> out;
  for (auto f : split(trim(text), ',')) {
    std::size_t v = 0;
    if (!parse_number(f, v)) throw Error(ErrorCode::ParseError, "not an index: '" + std::string(f) + "'");
    out.push_back(v);
  }
  return out;
}

DiscreteMeasure parse_atoms_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  bool weighted = false;
  bool first = true;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('\n', start);
    const auto line = trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    start = pos == std::string_view::npos ? text.size() + 1 : pos + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    double probe = 0.0;
    if (first && !parse_number(fields.front(), probe)) {
      weighted = fields.back() == "weight" || fields.back() == "w";
      first = false;
      continue;
    }
    first = false;
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      double v = 0.0;
      if (!parse_number(f, v)) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": not a number: '" + std::string(f) + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "no atoms found");
  const std::size_t dim = rows.front().size() - (weighted ? 1 : 0);
  if (dim == 0) throw Error(ErrorCode::ParseError, "atoms need at least one coordinate");
  PointSet atoms(dim);
  std::vector<double> weights;
  for (const auto& r : rows) {
    atoms.push_back(std::span<const double>(r.data(), dim));
    if (weighted) weights.push_back(r.back());
  }
  return build(std::move(atoms), std::move(weights));
}

DiscreteMeasure parse_atoms_json(std::string_view text) {
  try {
    const auto doc = json::parse(text);
    const auto& rows = doc.at("atoms");
    if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::ParseError, "'atoms' must be a nonempty array");
    auto atoms = points_from_json(rows, rows.front().size());
    std::vector<double> weights;
    if (doc.contains("weights")) weights = doc.at("weights").get<std::vector<double>>();
    if (!weights.empty() && weights.size() != atoms.size()) {
      throw Error(ErrorCode::ParseError, "one weight per atom is required");
    }
    return build(std::move(atoms), std::move(weights));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

DiscreteMeasure read_atoms(const std::filesystem::path& path) {
  const auto text = read_text(path);
  if (path.extension() == ".json") return parse_atoms_json(text);
  return parse_atoms_csv(text);
}

std::string map_to_json(const TransportMap& map) {
  const auto& diagram = map.diagram();
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["reference"] = map.reference().spec();
  doc["atoms"] = points_to_json(map.target().atoms());
  doc["lambda"] = map.target().weights();
  doc["weights"] = map.atom_weights();
  doc["shift"] = map.shift();
  doc["site_weights"] = diagram.weights();
  doc["residual"] = map.residual();
  return doc.dump(2);
}

TransportMap map_from_json(std::string_view text) {
  try {
    const auto doc = json::parse(text);
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::ParseError, "unsupported schema_version");
    }
    const auto reference = ReferenceMeasure::parse(doc.at("reference").get<std::string>());
    const auto shift = doc.at("shift").get<std::vector<double>>();
    if (shift.size() != reference.dim()) throw Error(ErrorCode::ParseError, "shift dimension differs from the reference");
    auto atoms = points_from_json(doc.at("atoms"), reference.dim());
    DiscreteMeasure target(atoms, doc.at("lambda").get<std::vector<double>>());
    // Sites are recomputed exactly as the solver does.
    PointSet sites(reference.dim());
    Point s(reference.dim());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) s[j] = atoms[i][j] - shift[j];
      sites.push_back(s);
    }
    PowerDiagram diagram(reference, std::move(sites), doc.at("site_weights").get<std::vector<double>>());
    return TransportMap(std::move(diagram), std::move(target), shift, doc.at("residual").get<double>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace otbdp
