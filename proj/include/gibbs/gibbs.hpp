#ifndef GIBBS_GIBBS_HPP
#define GIBBS_GIBBS_HPP

#include "gibbs/errors.hpp"
#include "gibbs/specfun.hpp"
#include "gibbs/quadrature.hpp"
#include "gibbs/stabledist.hpp"
#include "gibbs/partition.hpp"
#include "gibbs/eppf.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/samplers.hpp"
#include "gibbs/mass_partition.hpp"
#include "gibbs/partition_samplers.hpp"
#include "gibbs/stats.hpp"
#include "gibbs/verify.hpp"

#endif
