#pragma once

#include "semijulia/cloud.hpp"
#include "semijulia/image.hpp"
#include "semijulia/lemma.hpp"
#include "semijulia/poly.hpp"
#include "semijulia/rng.hpp"
#include "semijulia/semigroup.hpp"
#include "semijulia/single_dynamics.hpp"
#include "semijulia/sphere.hpp"
#include "semijulia/version.hpp"
