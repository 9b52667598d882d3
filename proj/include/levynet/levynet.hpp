#pragma once

#include "levynet/config.hpp"
#include "levynet/exact_lst.hpp"
#include "levynet/levy.hpp"
#include "levynet/limit_lst.hpp"
#include "levynet/monomial.hpp"
#include "levynet/network.hpp"
#include "levynet/partition.hpp"
#include "levynet/roots.hpp"
#include "levynet/simulator.hpp"
#include "levynet/types.hpp"
