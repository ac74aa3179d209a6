#pragma once

// Umbrella header.

#include "hindreg/bitsupport.hpp"
#include "hindreg/errors.hpp"
#include "hindreg/config.hpp"
#include "hindreg/colorings.hpp"
#include "hindreg/basic_colorings.hpp"
#include "hindreg/constructions.hpp"
#include "hindreg/wop.hpp"
#include "hindreg/wop_extract.hpp"
#include "hindreg/solvers.hpp"
#include "hindreg/principles.hpp"
#include "hindreg/reductions.hpp"
#include "hindreg/serialize.hpp"
#include "hindreg/cli.hpp"
