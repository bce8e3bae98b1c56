#include "opmatch/dataio.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "opmatch/errors.h"

namespace opmatch::io {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(std::move(cell));
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

BigInt pow10(int k) {
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= 10;
  return r;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Coord to_coord(const BigInt& v) {
  if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN)) throw ValidationError("coordinate out of range");
  return static_cast<Coord>(v);
}

std::int64_t parse_count(const std::string& text, std::size_t line) {
  if (text.empty()) throw ParseError("missing count", line);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw ParseError("count '" + text + "' is not an integer", line);
  }
  if (used != text.size()) throw ParseError("count '" + text + "' is not an integer", line);
  if (v <= 0) throw ValidationError("line " + std::to_string(line) + ": count must be positive");
  return v;
}

Coord parse_cell(const std::string& text, int scale, std::size_t line) {
  try {
    return parse_coord(text, scale);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line);
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return in;
}

Json rational_json(const Rational& r) {
  return Json{{"exact", format_rational(r)}, {"value", to_double(r)}};
}

Json metrics_json(const metrics::MetricsReport& m) {
  Json j;
  j["point_recovery"] = rational_json(m.point_recovery);
  j["record_recovery"] = rational_json(m.record_recovery);
  auto opt = [](const std::optional<Rational>& r) { return r ? rational_json(*r) : Json(nullptr); };
  j["normalized_point_recovery"] = opt(m.normalized_point_recovery);
  j["normalized_record_recovery"] = opt(m.normalized_record_recovery);
  j["normalized_objective"] = opt(m.normalized_objective);
  j["overlap_ratio_2d"] = rational_json(m.overlap_ratio_2d);
  Json axes = Json::array();
  for (const Rational& r : m.overlap_ratio_per_axis) axes.push_back(rational_json(r));
  j["overlap_ratio_per_axis"] = axes;
  j["hellinger"] = m.hellinger;
  return j;
}

Rational read_rational(const Json& j) { return parse_rational(j.at("exact").get<std::string>()); }

metrics::MetricsReport metrics_from(const Json& j) {
  metrics::MetricsReport m;
  m.point_recovery = read_rational(j.at("point_recovery"));
  m.record_recovery = read_rational(j.at("record_recovery"));
  auto opt = [&](const char* key) -> std::optional<Rational> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return read_rational(j.at(key));
  };
  m.normalized_point_recovery = opt("normalized_point_recovery");
  m.normalized_record_recovery = opt("normalized_record_recovery");
  m.normalized_objective = opt("normalized_objective");
  m.overlap_ratio_2d = read_rational(j.at("overlap_ratio_2d"));
  for (const Json& a : j.at("overlap_ratio_per_axis")) m.overlap_ratio_per_axis.push_back(read_rational(a));
  m.hellinger = j.at("hellinger").get<double>();
  return m;
}

}  // namespace

Coord parse_coord(std::string_view text, int scale) {
  if (scale < 0) throw ConfigError("scale must be nonnegative");
  const Rational v = parse_rational(text) * Rational(pow10(scale));
  return to_coord(floor_div(boost::multiprecision::numerator(v), boost::multiprecision::denominator(v)));
}

std::string format_coord(Coord c, int scale) {
  if (scale <= 0) return std::to_string(c);
  const bool neg = c < 0;
  // Work on the magnitude as unsigned so INT64_MIN is fine.
  const unsigned long long mag = neg ? 0ULL - static_cast<unsigned long long>(c) : static_cast<unsigned long long>(c);
  std::string digits = std::to_string(mag);
  if (digits.size() <= static_cast<std::size_t>(scale)) {
    digits.insert(0, static_cast<std::size_t>(scale) + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(scale), 1, '.');
  return neg ? "-" + digits : digits;
}

Dataset read_dataset(std::istream& in, int scale, bool merge) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    header = split_csv(line);
    break;
  }
  if (header.size() < 2 || header.back() != "count") {
    throw ParseError("header must be c1,...,cd,count", lineno == 0 ? 1 : lineno);
  }
  const std::size_t dim = header.size() - 1;
  for (std::size_t k = 0; k < dim; ++k) {
    if (header[k] != "c" + std::to_string(k + 1)) throw ParseError("header must be c1,...,cd,count", lineno);
  }
  std::vector<Dataset::Row> rows;
  std::map<Coords, std::size_t> first_line;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto cells = split_csv(line);
    if (cells.size() != dim + 1) {
      throw ParseError("expected " + std::to_string(dim + 1) + " fields, got " +
                           std::to_string(cells.size()), lineno);
    }
    Coords c(dim);
    for (std::size_t k = 0; k < dim; ++k) c[k] = parse_cell(cells[k], scale, lineno);
    const std::int64_t n = parse_count(cells[dim], lineno);
    if (!merge) {
      auto [it, fresh] = first_line.emplace(c, lineno);
      if (!fresh) {
        throw ValidationError("line " + std::to_string(lineno) + ": duplicate of line " +
                              std::to_string(it->second));
      }
    }
    rows.push_back(Dataset::Row{std::move(c), n});
  }
  return Dataset::from_rows(dim, std::move(rows), true, scale);
}

Dataset load_dataset(const std::string& path, int scale, bool merge) {
  auto in = open_in(path);
  return read_dataset(in, scale, merge);
}

void write_dataset(std::ostream& out, const Dataset& ds) {
  for (std::size_t k = 0; k < ds.dim(); ++k) out << 'c' << (k + 1) << ',';
  out << "count\n";
  for (const Point& p : ds) {
    for (Coord c : p.coords) out << format_coord(c, ds.scale()) << ',';
    out << p.raw_count << '\n';
  }
}

void save_dataset(const std::string& path, const Dataset& ds) {
  std::ostringstream s;
  write_dataset(s, ds);
  write_file(path, s.str());
}

Dataset discretize(const Dataset& ds, int digits) {
  if (digits < 0) throw ConfigError("digits must be nonnegative");
  if (digits >= ds.scale()) return ds;
  const BigInt step = pow10(ds.scale() - digits);
  std::vector<Dataset::Row> rows = ds.rows();
  for (auto& r : rows) {
    for (Coord& c : r.coords) c = to_coord(floor_div(BigInt(c), step));
  }
  return Dataset::from_rows(ds.dim(), std::move(rows), true, digits);
}

Codebook::Codebook(std::vector<std::string> categories) {
  std::sort(categories.begin(), categories.end());
  categories.erase(std::unique(categories.begin(), categories.end()), categories.end());
  categories_ = std::move(categories);
  for (std::size_t i = 0; i < categories_.size(); ++i) codes_[categories_[i]] = static_cast<Coord>(i);
}

Coord Codebook::code(const std::string& category) const {
  auto it = codes_.find(category);
  if (it == codes_.end()) throw ValidationError("unknown category '" + category + "'");
  return it->second;
}

const std::string& Codebook::category(Coord code) const {
  if (code < 0 || static_cast<std::size_t>(code) >= categories_.size()) {
    throw ValidationError("unknown category code " + std::to_string(code));
  }
  return categories_[static_cast<std::size_t>(code)];
}

void write_codebook(std::ostream& out, const Codebook& cb) {
  out << "category,code\n";
  for (std::size_t i = 0; i < cb.categories().size(); ++i) out << cb.categories()[i] << ',' << i << '\n';
}

Codebook read_codebook(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::pair<Coord, std::string>> entries;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    if (header) {
      if (split_csv(line) != std::vector<std::string>{"category", "code"}) {
        throw ParseError("header must be category,code", lineno);
      }
      header = false;
      continue;
    }
    auto cells = split_csv(line);
    if (cells.size() != 2) throw ParseError("expected 2 fields", lineno);
    entries.emplace_back(parse_cell(cells[1], 0, lineno), cells[0]);
  }
  std::vector<std::string> cats;
  for (auto& [code, name] : entries) cats.push_back(name);
  Codebook cb(cats);
  for (auto& [code, name] : entries) {
    if (cb.code(name) != code) throw ValidationError("codebook is not in sorted order");
  }
  return cb;
}

Ingested ingest_records(std::istream& in, const std::vector<bool>& categorical, int scale) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> table;
  std::size_t width = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto cells = split_csv(line);
    if (header) {
      width = cells.size();
      if (categorical.size() != width) {
        throw ConfigError("categorical flags must cover every column");
      }
      header = false;
      continue;
    }
    if (cells.size() != width) throw ParseError("expected " + std::to_string(width) + " fields", lineno);
    table.emplace_back(lineno, std::move(cells));
  }
  if (header) throw ParseError("missing header", lineno == 0 ? 1 : lineno);

  Ingested out;
  out.codebooks.resize(width);
  for (std::size_t k = 0; k < width; ++k) {
    if (!categorical[k]) continue;
    std::vector<std::string> cats;
    for (auto& [ln, cells] : table) cats.push_back(cells[k]);
    out.codebooks[k] = Codebook(std::move(cats));
  }
  std::vector<Dataset::Row> rows;
  for (auto& [ln, cells] : table) {
    Coords c(width);
    for (std::size_t k = 0; k < width; ++k) {
      c[k] = categorical[k] ? out.codebooks[k]->code(cells[k]) : parse_cell(cells[k], scale, ln);
    }
    rows.push_back(Dataset::Row{std::move(c), 1});
  }
  out.data = Dataset::from_rows(width, std::move(rows), true, scale);
  return out;
}

void write_truth(std::ostream& out, const Dataset& Q, const Truth& truth) {
  if (truth.size() != Q.size()) throw StructuralError("truth must have one entry per Q point");
  for (std::size_t k = 0; k < Q.dim(); ++k) out << 'q' << (k + 1) << ',';
  for (std::size_t k = 0; k < Q.dim(); ++k) out << 't' << (k + 1) << (k + 1 == Q.dim() ? '\n' : ',');
  for (std::size_t j = 0; j < Q.size(); ++j) {
    if (!truth[j]) continue;
    for (Coord c : Q[j].coords) out << format_coord(c, Q.scale()) << ',';
    for (std::size_t k = 0; k < Q.dim(); ++k) {
      out << format_coord((*truth[j])[k], Q.scale()) << (k + 1 == Q.dim() ? '\n' : ',');
    }
  }
}

void save_truth(const std::string& path, const Dataset& Q, const Truth& truth) {
  std::ostringstream s;
  write_truth(s, Q, truth);
  write_file(path, s.str());
}

Truth read_truth(std::istream& in, const Dataset& Q) {
  const std::size_t d = Q.dim();
  Truth truth(Q.size());
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto cells = split_csv(line);
    if (header) {
      if (cells.size() != 2 * d) throw ParseError("truth header must be q1..qd,t1..td", lineno);
      header = false;
      continue;
    }
    if (cells.size() != 2 * d) throw ParseError("expected " + std::to_string(2 * d) + " fields", lineno);
    Coords q(d), t(d);
    for (std::size_t k = 0; k < d; ++k) {
      q[k] = parse_cell(cells[k], Q.scale(), lineno);
      t[k] = parse_cell(cells[d + k], Q.scale(), lineno);
    }
    auto j = Q.find(q);
    if (!j) throw ValidationError("line " + std::to_string(lineno) + ": truth row names a point not in Q");
    truth[*j] = std::move(t);
  }
  return truth;
}

Truth load_truth(const std::string& path, const Dataset& Q) {
  auto in = open_in(path);
  return read_truth(in, Q);
}

std::string result_to_json(const ResultRecord& r) {
  if (r.assignment.size() != r.q_points.size()) {
    throw StructuralError("assignment must have one entry per Q point");
  }
  Json j;
  j["algorithm"] = r.algorithm;
  Json w{{"kind", to_string(r.weight.kind)}};
  w["kappa"] = r.weight.kappa ? Json(format_rational(*r.weight.kappa)) : Json(nullptr);
  j["weight"] = w;
  j["index"] = r.index ? Json(*r.index) : Json(nullptr);
  j["seed"] = r.seed;
  Json params = Json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  j["scale"] = r.scale;
  j["objective"] = rational_json(r.objective);
  j["proof_of_optimality"] = r.proof_of_optimality ? Json(*r.proof_of_optimality) : Json(nullptr);
  Json assign = Json::array();
  for (std::size_t i = 0; i < r.q_points.size(); ++i) {
    assign.push_back(Json{{"q", r.q_points[i]},
                          {"p", r.assignment[i] ? Json(*r.assignment[i]) : Json(nullptr)}});
  }
  j["assignment"] = assign;
  j["metrics"] = r.metrics ? metrics_json(*r.metrics) : Json(nullptr);
  j["runtime_seconds"] = r.runtime_seconds;
  return j.dump(2) + "\n";
}

ResultRecord result_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1);
  }
  try {
    ResultRecord r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.weight.kind = parse_weight_kind(j.at("weight").at("kind").get<std::string>());
    if (!j.at("weight").at("kappa").is_null()) {
      r.weight.kappa = parse_rational(j.at("weight").at("kappa").get<std::string>());
    }
    if (!j.at("index").is_null()) r.index = j.at("index").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("parameters").items()) r.parameters[k] = v.get<std::string>();
    r.scale = j.at("scale").get<int>();
    r.objective = read_rational(j.at("objective"));
    if (!j.at("proof_of_optimality").is_null()) r.proof_of_optimality = j.at("proof_of_optimality").get<bool>();
    for (const Json& a : j.at("assignment")) {
      r.q_points.push_back(a.at("q").get<Coords>());
      if (a.at("p").is_null()) {
        r.assignment.emplace_back();
      } else {
        r.assignment.emplace_back(a.at("p").get<Coords>());
      }
    }
    if (!j.at("metrics").is_null()) r.metrics = metrics_from(j.at("metrics"));
    r.runtime_seconds = j.at("runtime_seconds").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed result document: ") + e.what());
  }
}

std::string metrics_to_json(const metrics::MetricsReport& m) { return metrics_json(m).dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

}  // namespace opmatch::io
