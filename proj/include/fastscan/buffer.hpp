#ifndef FASTSCAN_BUFFER_HPP_
#define FASTSCAN_BUFFER_HPP_

#include <cstddef>
#include <deque>

#include "fastscan/types.hpp"

namespace fastscan {

// Playback-buffer occupancy bookkeeping shared by the scans, the replayer
// and the session loop. A chunk occupies the buffer from its first fetched
// byte until its playback deadline passes, so occupancy at integer time t is
// L * |{started chunks with deadline > t}|.
//
// Deadlines must be pushed in non-decreasing order (true for in-order
// fetching, where each chunk's deadline exceeds its predecessor's).
class BufferTracker {
 public:
  void add(Slot deadline) { deadlines_.push_back(deadline); }

  // Number of buffered chunks at integer time t. Pops entries whose
  // deadline has passed, so calls must use non-decreasing t.
  int active(Slot t) {
    while (!deadlines_.empty() && deadlines_.front() <= t)
      deadlines_.pop_front();
    return static_cast<int>(deadlines_.size());
  }

 private:
  std::deque<Slot> deadlines_;
};

}  // namespace fastscan

#endif  // FASTSCAN_BUFFER_HPP_
