#pragma once

/* Convenience include for the whole library. */

#include "cli.hpp"
#include "collision.hpp"
#include "errors.hpp"
#include "flow.hpp"
#include "inverse.hpp"
#include "io.hpp"
#include "lax.hpp"
#include "model.hpp"
#include "poly.hpp"
#include "real.hpp"
#include "roots.hpp"
#include "spectral.hpp"
