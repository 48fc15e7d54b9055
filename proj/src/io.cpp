#include "loewner/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "loewner/errors.hpp"

namespace loewner::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view field, std::size_t line_no) {
  field = trim(field);
  // strtod handles inf/nan spellings and is locale-independent for "C".
  std::string tmp(field);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw DataError(fmt::format("CSV line {}: '{}' is not a number", line_no, field));
  }
  return v;
}

void require_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  for (const char* k : keys) {
    if (!j.contains(k)) throw DataError(fmt::format("{}: missing key '{}'", what, k));
  }
}

}  // namespace

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError(fmt::format("cannot create directory {}: {}", path.parent_path().string(),
                                ec.message()));
    }
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open {} for writing", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError(fmt::format("write failed for {}", tmp.string()));
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    throw IoError(fmt::format("cannot rename {} to {}: {}", tmp.string(), path.string(),
                              ec.message()));
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(const json& j) { return fmt::format("{:016x}", fnv1a64(j.dump())); }

std::string samples_to_csv(const SampleSet& samples) {
  std::string out = "omega,re_H,im_H,abs_H\n";
  for (const auto& s : samples) {
    if (s.s.real() != 0.0) {
      throw DataError("samples CSV holds imaginary-axis points only");
    }
    out += fmt::format("{},{},{},{}\n", format_double(s.s.imag()), format_double(s.value.real()),
                       format_double(s.value.imag()), format_double(std::abs(s.value)));
  }
  return out;
}

SampleSet samples_from_csv(std::string_view text) {
  SampleSet out;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (!header_seen) {
      if (fields.size() < 3 || trim(fields[0]) != "omega" || trim(fields[1]) != "re_H" ||
          trim(fields[2]) != "im_H") {
        throw DataError("samples CSV: header must start with omega,re_H,im_H");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() < 3) {
      throw DataError(fmt::format("samples CSV line {}: expected at least 3 fields", line_no));
    }
    const double omega = parse_double(fields[0], line_no);
    const double re = parse_double(fields[1], line_no);
    const double im = parse_double(fields[2], line_no);
    out.push_back({{0.0, omega}, {re, im}});
  }
  if (!header_seen) throw DataError("samples CSV is empty");
  return out;
}

std::string singular_values_to_csv(const SingularValueDecay& d) {
  std::string out = "index,sv_row,sv_col,sv_row_normalized,sv_col_normalized\n";
  const std::size_t n = std::max(d.sv_row.size(), d.sv_col.size());
  auto at = [](const std::vector<double>& v, std::size_t k) {
    return k < v.size() ? format_double(v[k]) : std::string{};
  };
  for (std::size_t k = 0; k < n; ++k) {
    out += fmt::format("{},{},{},{},{}\n", k + 1, at(d.sv_row, k), at(d.sv_col, k),
                       at(d.row_normalized, k), at(d.col_normalized, k));
  }
  return out;
}

std::string spectrum_to_csv(const std::vector<SpectrumRow>& rows) {
  std::string out = "kind,re,im,source\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{}\n", r.kind, format_double(r.value.real()),
                       format_double(r.value.imag()), r.source);
  }
  return out;
}

std::string pole_matching_to_csv(const std::vector<analysis::PoleMatch>& matches) {
  std::string out = "k,ref_re,ref_im,matched_re,matched_im,rel_dist\n";
  for (std::size_t k = 0; k < matches.size(); ++k) {
    const auto& m = matches[k];
    out += fmt::format("{},{},{},{},{},{}\n", k + 1, format_double(m.reference.real()),
                       format_double(m.reference.imag()), format_double(m.matched.real()),
                       format_double(m.matched.imag()), format_double(m.rel_dist));
  }
  return out;
}

std::string comparison_to_csv(const SampleSet& reference,
                              const std::vector<NamedProfile>& models) {
  std::string out = "omega,re_ref,im_ref,abs_ref";
  for (const auto& m : models) {
    out += fmt::format(",abs_{0},abs_err_{0},rel_err_{0}", m.name);
  }
  out += '\n';
  for (std::size_t k = 0; k < reference.size(); ++k) {
    const auto& r = reference[k];
    out += fmt::format("{},{},{},{}", format_double(r.s.imag()), format_double(r.value.real()),
                       format_double(r.value.imag()), format_double(std::abs(r.value)));
    for (const auto& m : models) {
      out += fmt::format(",{},{},{}", format_double(std::abs(m.candidate[k].value)),
                         format_double(m.profile.abs_err[k]),
                         format_double(m.profile.rel_err[k]));
    }
    out += '\n';
  }
  return out;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw DataError("complex values must be [re, im] arrays");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

RealMatrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw DataError(fmt::format("{}: expected nested arrays", what));
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  RealMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw DataError(fmt::format("{}: ragged row {}", what, i));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw DataError(fmt::format("{}: non-numeric entry", what));
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

json archive_to_json(const ModelArchive& a) {
  const auto& m = a.model;
  json j;
  j["format"] = kArchiveFormat;
  j["version"] = 1;
  j["order"] = m.order;
  j["E"] = matrix_to_json(m.E);
  j["A"] = matrix_to_json(m.A);
  j["B"] = std::vector<double>(m.B.data(), m.B.data() + m.B.size());
  j["C"] = std::vector<double>(m.C.data(), m.C.data() + m.C.size());
  j["D"] = m.D;
  j["singular_values"] = m.singular_values;
  std::vector<double> decay;
  for (double s : m.singular_values) {
    decay.push_back(m.singular_values.front() > 0.0 ? s / m.singular_values.front() : 0.0);
  }
  j["sv_decay"] = decay;
  j["warnings"] = m.warnings;
  json interp;
  interp["right_points"] = json::array();
  interp["left_points"] = json::array();
  for (const auto& z : a.right_points) interp["right_points"].push_back(complex_to_json(z));
  for (const auto& z : a.left_points) interp["left_points"].push_back(complex_to_json(z));
  j["interpolation"] = interp;
  j["metadata"] = a.metadata;
  return j;
}

ModelArchive archive_from_json(const json& j) {
  if (!j.is_object()) throw DataError("model archive must be a JSON object");
  require_keys(j, {"format", "order", "E", "A", "B", "C", "D"}, "model archive");
  if (j["format"] != kArchiveFormat) {
    throw DataError(fmt::format("not a model archive (format = {})", j["format"].dump()));
  }
  ModelArchive a;
  auto& m = a.model;
  m.order = j["order"].get<int>();
  m.E = matrix_from_json(j["E"], "E");
  m.A = matrix_from_json(j["A"], "A");
  const auto b = j["B"].get<std::vector<double>>();
  const auto c = j["C"].get<std::vector<double>>();
  m.B = Eigen::Map<const RealVector>(b.data(), static_cast<Eigen::Index>(b.size()));
  m.C = Eigen::Map<const RealRowVector>(c.data(), static_cast<Eigen::Index>(c.size()));
  m.D = j["D"].get<double>();
  const auto r = static_cast<Eigen::Index>(m.order);
  if (m.E.rows() != r || m.E.cols() != r || m.A.rows() != r || m.A.cols() != r ||
      m.B.size() != r || m.C.size() != r) {
    throw DataError(fmt::format("model archive: matrix sizes disagree with order {}", r));
  }
  if (j.contains("singular_values")) {
    m.singular_values = j["singular_values"].get<std::vector<double>>();
  }
  if (j.contains("warnings")) m.warnings = j["warnings"].get<std::vector<std::string>>();
  if (j.contains("interpolation")) {
    const auto& ip = j["interpolation"];
    for (const auto& z : ip.value("right_points", json::array())) {
      a.right_points.push_back(complex_from_json(z));
    }
    for (const auto& z : ip.value("left_points", json::array())) {
      a.left_points.push_back(complex_from_json(z));
    }
  }
  if (j.contains("metadata")) a.metadata = j["metadata"];
  return a;
}

void save_archive(const fs::path& path, const ModelArchive& archive) {
  write_file_atomic(path, archive_to_json(archive).dump(1) + "\n");
}

ModelArchive load_archive(const fs::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  try {
    return archive_from_json(j);
  } catch (const json::exception& e) {
    throw DataError(fmt::format("{}: malformed archive: {}", path.string(), e.what()));
  }
}

json fem_to_json(const fem::SecondOrderSystem& sys, const fem::FirstOrderSystem* first) {
  json j;
  j["intervals"] = sys.intervals;
  j["mesh_h"] = sys.mesh_h;
  j["M"] = matrix_to_json(sys.mass);
  j["J"] = matrix_to_json(sys.damping);
  j["K"] = matrix_to_json(sys.stiffness);
  j["f"] = std::vector<double>(sys.input.data(), sys.input.data() + sys.input.size());
  j["c1"] = std::vector<double>(sys.out_position.data(),
                                sys.out_position.data() + sys.out_position.size());
  j["c2"] = std::vector<double>(sys.out_velocity.data(),
                                sys.out_velocity.data() + sys.out_velocity.size());
  j["d"] = sys.feedthrough;
  if (first != nullptr) {
    json fo;
    fo["G"] = matrix_to_json(first->descriptor);
    fo["A"] = matrix_to_json(first->state);
    fo["B"] = std::vector<double>(first->input.data(), first->input.data() + first->input.size());
    fo["C"] = std::vector<double>(first->output.data(),
                                  first->output.data() + first->output.size());
    fo["D"] = first->feedthrough;
    j["first_order"] = fo;
  }
  return j;
}

}  // namespace loewner::io
