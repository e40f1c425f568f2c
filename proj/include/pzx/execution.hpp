#pragma once

namespace pzx {

/// Selects the OpenMP kernels or the serial reference loops. Both produce
/// bitwise-identical results; the serial path exists for testing and timing.
enum class Execution { serial, parallel };

} // namespace pzx
