#pragma once

#include <functional>

namespace jetham {

/// Batch kernels run either on the serial reference path or the OpenMP one;
/// both produce identical output (each index is independent and written to a
/// preallocated slot), so results never depend on the thread count.
enum class ExecMode { Serial, Parallel };

/// Honors JETHAM_THREADS when set, otherwise the OpenMP default.
int effective_threads();

void parallel_for(int count, ExecMode mode, const std::function<void(int)>& body);

}  // namespace jetham
