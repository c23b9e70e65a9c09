#pragma once

#include "nlie/rational.hpp"
#include "nlie/matrix.hpp"
#include "nlie/linalg.hpp"
#include "nlie/polynomial.hpp"
#include "nlie/algebra.hpp"
#include "nlie/constructions.hpp"
#include "nlie/analysis.hpp"
#include "nlie/io.hpp"
