#pragma once

#include "relnet/activation.hpp"
#include "relnet/classification.hpp"
#include "relnet/data/csv.hpp"
#include "relnet/data/dataset.hpp"
#include "relnet/data/encode.hpp"
#include "relnet/data/sampling.hpp"
#include "relnet/data/schema.hpp"
#include "relnet/data/synth.hpp"
#include "relnet/errors.hpp"
#include "relnet/eval.hpp"
#include "relnet/matrix.hpp"
#include "relnet/mh_sampler.hpp"
#include "relnet/mlp.hpp"
#include "relnet/relational_network.hpp"
