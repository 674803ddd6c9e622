#ifndef ONT_CHECKPOINT_HPP
#define ONT_CHECKPOINT_HPP

#include <string>

#include "trainer.hpp"

namespace ont {

// Versioned JSON checkpoint: ball spec, train config, vocabulary, all
// parameter arrays, the candidate pool, and the validated lambda. Doubles
// are written with 17 significant digits so a save/load round trip is
// bit-exact.
std::string checkpoint_to_json(const Model& m);
Model checkpoint_from_json(const std::string& json_text);

void save_checkpoint(const Model& m, const std::string& path);
Model load_checkpoint(const std::string& path);

} // namespace ont

#endif
