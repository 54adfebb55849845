#ifndef FASTSCAN_CLI_HPP_
#define FASTSCAN_CLI_HPP_

namespace fastscan {

// Entry point behind the `fastscan` binary; exposed so tests can drive the
// command surface in-process. Exit codes: 0 success, 2 bad input or
// validation failure, 3 simulation failure.
int cli_main(int argc, const char* const* argv);

}  // namespace fastscan

#endif  // FASTSCAN_CLI_HPP_
