#pragma once

#include "fdeflow/errors.hpp"
#include "fdeflow/history.hpp"
#include "fdeflow/io.hpp"
#include "fdeflow/linalg.hpp"
#include "fdeflow/numerics.hpp"
#include "fdeflow/picard.hpp"
#include "fdeflow/process.hpp"
#include "fdeflow/registry.hpp"
#include "fdeflow/rhs.hpp"
#include "fdeflow/semiflow.hpp"
#include "fdeflow/variational.hpp"
#include "fdeflow/vide.hpp"
