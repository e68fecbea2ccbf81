#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace venq {

// Error families map onto the CLI exit-code contract:
//   domain errors -> 1, precision/truncation/cost failures -> 2, usage -> 3.

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PoleError : public DomainError {
 public:
  PoleError(const std::string& what, long long factor_index)
      : DomainError(what), factor_index_(factor_index) {}
  long long factorIndex() const noexcept { return factor_index_; }

 private:
  long long factor_index_;
};

class KinematicsError : public DomainError {
 public:
  KinematicsError(const std::string& what, int vector_index)
      : DomainError(what), vector_index_(vector_index) {}
  // 1-based index of the offending momentum vector, 0 when not vector-specific.
  int vectorIndex() const noexcept { return vector_index_; }

 private:
  int vector_index_;
};

class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, int achieved_digits)
      : std::runtime_error(what), achieved_digits_(achieved_digits) {}
  int achievedDigits() const noexcept { return achieved_digits_; }

 private:
  int achieved_digits_;
};

class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double achieved_tolerance,
                  std::size_t terms_used)
      : std::runtime_error(what),
        achieved_tolerance_(achieved_tolerance),
        terms_used_(terms_used) {}
  double achievedTolerance() const noexcept { return achieved_tolerance_; }
  std::size_t termsUsed() const noexcept { return terms_used_; }

 private:
  double achieved_tolerance_;
  std::size_t terms_used_;
};

class CostLimitError : public std::runtime_error {
 public:
  CostLimitError(const std::string& what, std::uint64_t required,
                 std::uint64_t ceiling)
      : std::runtime_error(what), required_(required), ceiling_(ceiling) {}
  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t ceiling() const noexcept { return ceiling_; }

 private:
  std::uint64_t required_;
  std::uint64_t ceiling_;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace venq
