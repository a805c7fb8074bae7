#pragma once

namespace dbcsp::cli {

/// Entry point of the dbcsp tool. Returns the process exit code:
/// 0 success, 1 runtime or data error, 2 usage error.
int run(int argc, char** argv);

} // namespace dbcsp::cli
