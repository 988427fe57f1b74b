#pragma once

// Single include point for the vendored json library.
#include "json.hpp"
