#pragma once

namespace slrecon {

// Caps the data-parallel width at RECON_THREADS when that variable holds a
// positive integer. Returns the width in effect.
int configure_threads_from_env();

} // namespace slrecon
