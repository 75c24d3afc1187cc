#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace monotone {

enum class ErrorCode {
  InvalidNumber,
  EmptyDataset,
  DimensionMismatch,
  DuplicatePoint,
  MonotoneViolation,
  NotTotallyOrdered,
  GridTooLarge,
  ActivationMismatch,
  ArchitectureMismatch,
  DimensionTooSmall,
  PreconditionViolated,
  TooLarge,
  InvalidArgument,
  Schema,
  Io,
};

std::string_view to_string(ErrorCode code);

// Thrown by every validating operation in the library. Dataset errors that
// concern a specific pair of points carry the indices (as given on input).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Error(ErrorCode code, const std::string& message, std::size_t first,
        std::size_t second)
      : std::runtime_error(message), code_(code), pair_(std::in_place, first, second) {}

  ErrorCode code() const noexcept { return code_; }

  const std::optional<std::pair<std::size_t, std::size_t>>& pair() const noexcept {
    return pair_;
  }

  bool is_validation() const noexcept { return code_ != ErrorCode::Io; }

 private:
  ErrorCode code_;
  std::optional<std::pair<std::size_t, std::size_t>> pair_;
};

}  // namespace monotone
