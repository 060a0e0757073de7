#pragma once

// JSON file formats. Every file carries "fmt": "cencov-ncp/1". Groupoid
// references are either built-in ids ("pair:N", "trivial:N", "cyclic:N") or
// paths resolved against the directory of the referencing file.

#include <filesystem>
#include <string>
#include <vector>

#include "cencov/channels.hpp"
#include "cencov/estimation.hpp"
#include "cencov/groupoid.hpp"
#include "json.hpp"

namespace cencov::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr const char* kFormat = "cencov-ncp/1";

/// Io when unreadable, Schema on malformed JSON or a wrong "fmt".
json load_json(const fs::path& path);
void save_json(const json& j, const fs::path& path);
void require_format(const json& j, const std::string& what);

enum class FileKind { Groupoid, State, Element, Kernel, Classical, Kraus, Model, Pipeline };
/// Schema when the keys match no known file type.
FileKind detect_kind(const json& j);
std::string to_string(FileKind k);

struct GroupoidRef {
  GroupoidPtr groupoid;
  std::string ref;  // built-in id or absolute path
};

/// nullptr when id is not a built-in id.
GroupoidPtr builtin_groupoid(const std::string& id);
GroupoidRef resolve_groupoid(const json& ref, const fs::path& base_dir);

GroupoidSpec spec_from_json(const json& j);
json groupoid_to_json(const FiniteGroupoid& g);
GroupoidRef read_groupoid(const fs::path& path);

/// Complex function on a groupoid: a state's phi or an element's coefficients.
struct FunctionFile {
  GroupoidRef groupoid;
  CVector values;
};

FunctionFile function_from_json(const json& j, const fs::path& base_dir, const std::string& prefix);
FunctionFile read_state(const fs::path& path);    // phi_re / phi_im, not validated
FunctionFile read_element(const fs::path& path);  // coeff_re / coeff_im
json function_to_json(const GroupoidRef& g, std::span<const cplx> values, const std::string& prefix);

struct KernelFile {
  GroupoidRef source;
  GroupoidRef target;
  QuantumKernel kernel;
};

KernelFile read_kernel(const fs::path& path);
json kernel_to_json(const GroupoidRef& source, const GroupoidRef& target, const QuantumKernel& k);

std::vector<std::vector<double>> read_classical(const fs::path& path);
json classical_to_json(const std::vector<std::vector<double>>& k);
std::vector<ComplexMatrix> read_kraus(const fs::path& path);
json kraus_to_json(const std::vector<ComplexMatrix>& kraus);

struct ModelFile {
  GroupoidRef groupoid;
  StatisticalModel model;
  std::vector<double> knots;       // s values of the stored states
  std::vector<double> audit_grid;  // "grid"
};

/// Knots come from the keys of "states"; "grid" lists the points used for
/// unbiasedness checks.
ModelFile read_model(const fs::path& path);

struct PipelineFile {
  fs::path state;
  std::vector<fs::path> kernels;
};

PipelineFile read_pipeline(const fs::path& path);

}  // namespace cencov::io
