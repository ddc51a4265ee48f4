#pragma once

#include <stdexcept>
#include <string>

namespace episim {

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  IoError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Input parsed but failed validation. `key` names the offending setting
/// (dotted path such as "intervention.essential_fraction") or CSV field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace episim
