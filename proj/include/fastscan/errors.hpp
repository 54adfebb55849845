#ifndef FASTSCAN_ERRORS_HPP_
#define FASTSCAN_ERRORS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fastscan {

// Predicted timeline ran out before the scan could finish. Carries the last
// chunk/slot reached so callers can size the prediction horizon.
class InsufficientTraceError : public std::runtime_error {
 public:
  InsufficientTraceError(int chunk, std::int64_t slot)
      : std::runtime_error("predicted bandwidth exhausted at chunk " +
                           std::to_string(chunk) + ", slot " +
                           std::to_string(slot)),
        chunk_(chunk),
        slot_(slot) {}
  int chunk() const { return chunk_; }
  std::int64_t slot() const { return slot_; }

 private:
  int chunk_;
  std::int64_t slot_;
};

// Predictor asked for a forecast with no recorded samples.
class NoPredictionError : public std::runtime_error {
 public:
  NoPredictionError() : std::runtime_error("throughput history is empty") {}
};

// Instance exceeds the exhaustive-search guard.
class SizeGuardError : public std::runtime_error {
 public:
  explicit SizeGuardError(const std::string& what)
      : std::runtime_error(what) {}
};

// The actual trace stopped delivering bytes for longer than the configured
// bound while a chunk was still pending.
class ProgressTimeoutError : public std::runtime_error {
 public:
  ProgressTimeoutError(int chunk, std::int64_t slot)
      : std::runtime_error("no download progress for chunk " +
                           std::to_string(chunk) + " by slot " +
                           std::to_string(slot)),
        chunk_(chunk),
        slot_(slot) {}
  int chunk() const { return chunk_; }
  std::int64_t slot() const { return slot_; }

 private:
  int chunk_;
  std::int64_t slot_;
};

// Inputs from different instances were mixed (schedule vs manifest, etc).
class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace fastscan

#endif  // FASTSCAN_ERRORS_HPP_
