#pragma once

#include "mkdv/abelian.hpp"
#include "mkdv/dynamics.hpp"
#include "mkdv/errors.hpp"
#include "mkdv/involution.hpp"
#include "mkdv/io.hpp"
#include "mkdv/model.hpp"
#include "mkdv/numerics.hpp"
#include "mkdv/roots.hpp"
