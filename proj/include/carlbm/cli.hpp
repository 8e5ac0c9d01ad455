#pragma once

#include <string>

namespace carlbm::cli {

/// Entry point used by the carlbm binary. Returns a process exit status:
/// 0 on success, 2 on usage/config errors, 1 on run failures.
int run_main(int argc, char** argv);

}  // namespace carlbm::cli
