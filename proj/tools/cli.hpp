#pragma once

namespace hts {

/// Entry point of the causal-hts tool. Returns 0 on success, 1 on a usage or
/// configuration error and 2 on a runtime failure.
int cli_main(int argc, char** argv);

}  // namespace hts
