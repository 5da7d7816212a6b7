#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wilks {

// Two error families, chosen so callers (and the CLI exit-code contract) can
// tell malformed input apart from statistical infeasibility on valid data.
class data_error : public std::runtime_error {
public:
  data_error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

class statistical_error : public std::runtime_error {
public:
  statistical_error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

class parse_error : public data_error {
public:
  parse_error(const std::string& message, long line)
      : data_error("parse_error",
                   "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  long line() const noexcept { return line_; }

private:
  long line_;
};

struct self_loop_error : data_error {
  explicit self_loop_error(const std::string& m) : data_error("self_loop", m) {}
};

struct negative_count_error : data_error {
  explicit negative_count_error(const std::string& m)
      : data_error("negative_count", m) {}
};

struct dimension_mismatch : data_error {
  explicit dimension_mismatch(const std::string& m)
      : data_error("dimension_mismatch", m) {}
};

struct invalid_null : data_error {
  explicit invalid_null(const std::string& m) : data_error("invalid_null", m) {}
};

struct invalid_scenario : data_error {
  explicit invalid_scenario(const std::string& m)
      : data_error("invalid_scenario", m) {}
};

struct mle_nonexistent : statistical_error {
  explicit mle_nonexistent(const std::string& m)
      : statistical_error("mle_nonexistent", m) {}
};

struct not_strongly_connected : statistical_error {
  explicit not_strongly_connected(const std::string& m)
      : statistical_error("not_strongly_connected", m) {}
};

struct sparse_design : statistical_error {
  explicit sparse_design(const std::string& m)
      : statistical_error("sparse_design", m) {}
};

struct singular_matrix : statistical_error {
  explicit singular_matrix(const std::string& m)
      : statistical_error("singular_matrix", m) {}
};

struct negative_lrt : statistical_error {
  explicit negative_lrt(const std::string& m)
      : statistical_error("negative_lrt", m) {}
};

struct no_chi_square_approx : statistical_error {
  explicit no_chi_square_approx(const std::string& m)
      : statistical_error("no_chi_square_approx", m) {}
};

}  // namespace wilks
