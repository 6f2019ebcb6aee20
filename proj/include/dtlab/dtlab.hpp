#pragma once

#include "dtlab/analysis.hpp"
#include "dtlab/classify.hpp"
#include "dtlab/cover.hpp"
#include "dtlab/errors.hpp"
#include "dtlab/family.hpp"
#include "dtlab/oracle.hpp"
#include "dtlab/parallel.hpp"
#include "dtlab/rowset.hpp"
#include "dtlab/rules.hpp"
#include "dtlab/solve.hpp"
#include "dtlab/table.hpp"
#include "dtlab/tree.hpp"
#include "dtlab/tree_ops.hpp"
