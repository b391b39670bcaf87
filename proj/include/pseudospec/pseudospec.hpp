#pragma once

#include "pseudospec/errors.hpp"
#include "pseudospec/linalg.hpp"
#include "pseudospec/antilinear.hpp"
#include "pseudospec/blockdiag.hpp"
#include "pseudospec/symmetry.hpp"
#include "pseudospec/certify.hpp"
#include "pseudospec/scattering.hpp"
#include "pseudospec/truncated_model.hpp"
#include "pseudospec/io.hpp"
#include "pseudospec/sweep.hpp"
#include "pseudospec/cli.hpp"
