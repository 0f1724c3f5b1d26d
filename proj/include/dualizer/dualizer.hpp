#pragma once

#include "exactla.hpp"
#include "algebra.hpp"
#include "modulecat.hpp"
#include "complex.hpp"
#include "resolve.hpp"
#include "dg.hpp"
#include "corpus.hpp"
#include "harness.hpp"
