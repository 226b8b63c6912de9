#pragma once

#include "nfb/phase.hpp"
#include "nfb/sampling.hpp"
#include "nfb/summation.hpp"
#include "nfb/holder.hpp"
#include "nfb/corpus.hpp"
#include "nfb/bounds.hpp"
#include "nfb/experiment.hpp"
