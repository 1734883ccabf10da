#pragma once

// Everything in one include.

#include "bvlab/analysis.hpp"
#include "bvlab/comparators.hpp"
#include "bvlab/conditions.hpp"
#include "bvlab/diagnosis.hpp"
#include "bvlab/embedding.hpp"
#include "bvlab/empirical.hpp"
#include "bvlab/errors.hpp"
#include "bvlab/experiments.hpp"
#include "bvlab/generators.hpp"
#include "bvlab/holder.hpp"
#include "bvlab/numeric.hpp"
#include "bvlab/operators.hpp"
#include "bvlab/pvariation.hpp"
#include "bvlab/report.hpp"
#include "bvlab/rulebook.hpp"
#include "bvlab/sequence.hpp"
#include "bvlab/space.hpp"
#include "bvlab/space_kind.hpp"
