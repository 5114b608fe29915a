#pragma once

// Umbrella header: the full public interface.

#include "covpovm/apps.hpp"
#include "covpovm/covariant.hpp"
#include "covpovm/error.hpp"
#include "covpovm/extremal.hpp"
#include "covpovm/group.hpp"
#include "covpovm/io.hpp"
#include "covpovm/rep.hpp"
#include "covpovm/repdec.hpp"
#include "covpovm/stability.hpp"
#include "covpovm/types.hpp"
#include "covpovm/version.hpp"
