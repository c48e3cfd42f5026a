#ifndef BIVBETA_BIVBETA_HPP
#define BIVBETA_BIVBETA_HPP

#include "bivbeta/closure.hpp"
#include "bivbeta/density.hpp"
#include "bivbeta/diagnostic.hpp"
#include "bivbeta/family.hpp"
#include "bivbeta/rng.hpp"
#include "bivbeta/sampling.hpp"
#include "bivbeta/special_functions.hpp"
#include "bivbeta/survivability.hpp"
#include "bivbeta/synthetic.hpp"

#endif  // BIVBETA_BIVBETA_HPP
