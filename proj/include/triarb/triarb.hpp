#pragma once

#include "triarb/basis.hpp"
#include "triarb/dynamics.hpp"
#include "triarb/intmat.hpp"
#include "triarb/io.hpp"
#include "triarb/linalg.hpp"
#include "triarb/matrices.hpp"
#include "triarb/metrics.hpp"
#include "triarb/polynomial.hpp"
#include "triarb/polytope.hpp"
#include "triarb/rules.hpp"
#include "triarb/scalar.hpp"
#include "triarb/search.hpp"
#include "triarb/verify.hpp"
