#pragma once

#include <stdexcept>
#include <string>

namespace hetkg {

// Error kinds map one-to-one onto CLI exit codes: config -> 2, data -> 3,
// numeric -> 4.
enum class ErrorKind { config, data, numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define HETKG_DEFINE_ERROR(Name, Kind)                                    \
  struct Name : Error {                                                   \
    explicit Name(std::string msg) : Error(ErrorKind::Kind, std::move(msg)) {} \
  }

HETKG_DEFINE_ERROR(ConfigError, config);
HETKG_DEFINE_ERROR(GuardError, config);
HETKG_DEFINE_ERROR(BadRate, config);
HETKG_DEFINE_ERROR(OddDim, config);
HETKG_DEFINE_ERROR(HeadWidthError, config);
HETKG_DEFINE_ERROR(KindMismatch, config);

HETKG_DEFINE_ERROR(UnknownType, data);
HETKG_DEFINE_ERROR(UnknownNode, data);
HETKG_DEFINE_ERROR(SchemaViolation, data);
HETKG_DEFINE_ERROR(MalformedRow, data);
HETKG_DEFINE_ERROR(BadDate, data);
HETKG_DEFINE_ERROR(EmptyGraph, data);
HETKG_DEFINE_ERROR(AlreadyAugmented, data);
HETKG_DEFINE_ERROR(RelationTooSmall, data);
HETKG_DEFINE_ERROR(EmptyTestSet, data);
HETKG_DEFINE_ERROR(InfeasibleCounts, data);
HETKG_DEFINE_ERROR(TypeExhausted, data);
HETKG_DEFINE_ERROR(IoError, data);

HETKG_DEFINE_ERROR(ShapeMismatch, numeric);
HETKG_DEFINE_ERROR(NonFiniteGradient, numeric);
HETKG_DEFINE_ERROR(DivergedLoss, numeric);

#undef HETKG_DEFINE_ERROR

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return 2;
    case ErrorKind::data: return 3;
    case ErrorKind::numeric: return 4;
  }
  return 1;
}

}  // namespace hetkg
