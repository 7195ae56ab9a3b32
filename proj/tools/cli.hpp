#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsg::cli {

enum ExitStatus : int {
  kOk = 0,
  kVerificationFailed = 1,
  kNumericalFailure = 2,
  kConfigError = 3,
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"verify-weight", "moments", "quadrature", "solve", "eig", "converge"};
  return names;
}

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key/value configuration. Every key has a default; unknown keys are
/// rejected. values() holds the fully resolved text that reports embed.
class RunConfig {
 public:
  explicit RunConfig(const std::string& subcommand);

  static const std::vector<std::string>& known_keys();

  /// "key = value" lines, '#' comments, blank lines ignored.
  void merge_file(const std::string& path);
  void merge_text(const std::string& text, const std::string& origin);
  void set(const std::string& key, const std::string& value);

  const std::string& subcommand() const { return subcommand_; }
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

  long get_int(const std::string& key, long min_value) const;

 private:
  std::string subcommand_;
  std::map<std::string, std::string> values_;
};

/// Runs one subcommand. Reports go to `out` (or to the configured output file);
/// diagnostics go to `err`. Returns an ExitStatus.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// argv front-end: wsg <subcommand> [--config FILE] [--KEY VALUE]...
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wsg::cli
