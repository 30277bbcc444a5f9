#pragma once

#include "nikstar/measures.hpp"

namespace test_configs {

inline nikstar::StarSystemConfig a() { return nikstar::load_config(NIKSTAR_CONFIG_DIR "/cfg_a.json"); }
inline nikstar::StarSystemConfig b() { return nikstar::load_config(NIKSTAR_CONFIG_DIR "/cfg_b.json"); }
inline nikstar::StarSystemConfig c() { return nikstar::load_config(NIKSTAR_CONFIG_DIR "/cfg_c.json"); }

}  // namespace test_configs
