#pragma once

#include "f2aut/autos.hpp"
#include "f2aut/chains.hpp"
#include "f2aut/decide.hpp"
#include "f2aut/errors.hpp"
#include "f2aut/oracle.hpp"
#include "f2aut/rational.hpp"
#include "f2aut/subgroups.hpp"
#include "f2aut/words.hpp"
