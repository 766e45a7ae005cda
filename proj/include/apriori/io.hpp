#pragma once
/// @file io.hpp
/// @brief JSON configs and reports, exit codes and atomic file output.

#include "apriori/exponents.hpp"
#include "apriori/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace apriori::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kSchema = 4,
  kAssumption = 5,  ///< failed standing assumption verdict or identity
  kInternal = 6,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads fields of one JSON object and rejects keys that were never read.
class Fields {
 public:
  Fields(const Json& j, std::string where);

  bool has(const std::string& key) const;
  const Json& get(const std::string& key);
  const Json* find(const std::string& key);

  std::string str(const std::string& key, const std::optional<std::string>& def = std::nullopt);
  double num(const std::string& key, const std::optional<double>& def = std::nullopt);
  long integer(const std::string& key, const std::optional<long>& def = std::nullopt);
  bool boolean(const std::string& key, const std::optional<bool>& def = std::nullopt);
  /// Rationals are "a/b" strings or JSON integers.
  Rational rational(const std::string& key, const std::optional<Rational>& def = std::nullopt);

  /// Throws SchemaError naming the first unread key.
  void finish() const;

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> used_;
};

Json read_json_file(const std::filesystem::path& path);

/// Writes to a temporary sibling, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

Json to_json(const Rational& q);
Json to_json(const EquationSpec& spec);
Json to_json(const ExponentReport& rep);
Json to_json(const BoundSpec& spec);
Json to_json(const SweepResult& r);
Json to_json(const ConstantSummary& s);

EquationSpec parse_equation_spec(const Json& j);
BoundSpec parse_bound_spec(const Json& j);

}  // namespace apriori::io
