#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scaling {

/// scaling-lab <fit|validate|simulate|plot-data> [options]
/// Returns 0 on success, 1 on data errors, 2 on usage errors. "-" as
/// --input/--out refers to `in`/`out`.
int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err);

}  // namespace scaling
