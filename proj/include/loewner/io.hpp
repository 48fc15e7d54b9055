#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "loewner/analysis.hpp"
#include "loewner/fem_model.hpp"
#include "loewner/loewner_core.hpp"
#include "loewner/types.hpp"

namespace loewner::io {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kArchiveFormat = "loewner-model-archive";

/// A reduced model plus the interpolation points that produced it.
struct ModelArchive {
  ReducedModel model;
  std::vector<Complex> right_points;
  std::vector<Complex> left_points;
  nlohmann::json metadata = nlohmann::json::object();
};

/// 17 significant digits; round-trips every finite double.
std::string format_double(double x);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(const nlohmann::json& j);

// CSV contracts -------------------------------------------------------------

/// Columns omega,re_H,im_H,abs_H. Points must lie on the positive imaginary axis.
std::string samples_to_csv(const SampleSet& samples);
SampleSet samples_from_csv(std::string_view text);

/// Columns index,sv_row,sv_col,sv_row_normalized,sv_col_normalized (1-based index).
std::string singular_values_to_csv(const SingularValueDecay& decay);

struct SpectrumRow {
  std::string kind;    // pole | zero
  Complex value;
  std::string source;  // analytic | reduced
};
std::string spectrum_to_csv(const std::vector<SpectrumRow>& rows);
std::string pole_matching_to_csv(const std::vector<analysis::PoleMatch>& matches);

struct NamedProfile {
  std::string name;
  SampleSet candidate;
  analysis::ErrorProfile profile;
};
/// Columns omega,re_ref,im_ref,abs_ref then abs_<name>,abs_err_<name>,rel_err_<name>.
std::string comparison_to_csv(const SampleSet& reference,
                              const std::vector<NamedProfile>& models);

// JSON ----------------------------------------------------------------------

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

template <class Derived>
nlohmann::json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(static_cast<double>(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}
RealMatrix matrix_from_json(const nlohmann::json& j, const char* what);

nlohmann::json archive_to_json(const ModelArchive& archive);
ModelArchive archive_from_json(const nlohmann::json& j);
void save_archive(const std::filesystem::path& path, const ModelArchive& archive);
ModelArchive load_archive(const std::filesystem::path& path);

nlohmann::json fem_to_json(const fem::SecondOrderSystem& sys,
                           const fem::FirstOrderSystem* first_order);

}  // namespace loewner::io
