#ifndef BH_CLI_HPP
#define BH_CLI_HPP

#include <string>

#include "bh/gallery.hpp"
#include "bh/io.hpp"

namespace bh {
namespace cli {

/** Exit codes of the batch front end. */
enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 2,  // bad config or a model violating the standing assumptions
  kQualityFailure = 3,     // residuals or conditioning beyond the configured thresholds
};

struct RunResult {
  int exit_code = kOk;
  io::json summary;
};

/** Execute one resolved configuration.  Artifacts (summary JSON, CSV tables,
 * optional SVG charts) are written under the configured output directory; the
 * summary always embeds the fully resolved configuration. */
RunResult run_config(io::json config);

/** Build the model described by a config model section (either a named
 * gallery entry or an explicit lattice/symbol/Fourier-dictionary triple). */
GalleryEntry entry_from_config(const io::json& model_section);

/** Argument-vector front end (the `main` of the tool). */
int run(int argc, const char* const* argv);

}  // namespace cli
}  // namespace bh

#endif
