#pragma once

#include <stdexcept>
#include <string>

namespace cmrel {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_discriminant : public error {
 public:
  explicit invalid_discriminant(long long d)
      : error("invalid discriminant " + std::to_string(d)) {}
};

class discriminant_mismatch : public error {
 public:
  using error::error;
};

/* raised when a certified computation cannot reach the requested accuracy */
class precision_error : public error {
 public:
  using error::error;
};

class cache_io_error : public error {
 public:
  using error::error;
};

class missing_table : public error {
 public:
  using error::error;
};

}  // namespace cmrel
